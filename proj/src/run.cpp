#include "openerg/run.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "openerg/stdlib.hpp"

namespace openerg {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Settings {
    IntegratorConfig cfg;
    std::optional<std::string> output;
    OutputFormat format = OutputFormat::Csv;
};

Settings resolve(const Descriptor& d, const RunOptions& o) {
    Settings s;
    s.cfg.method = o.method.value_or(d.simulate.method.value_or(Method::RK4));
    s.cfg.dt = o.dt.value_or(d.simulate.dt.value_or(1e-3));
    s.cfg.steps = o.steps.value_or(d.simulate.steps.value_or(1000));
    s.output = o.output ? o.output : d.simulate.output;
    if (s.output && *s.output == "-") s.output.reset();
    s.format = o.format.value_or(d.simulate.format.value_or(OutputFormat::Csv));
    s.cfg.validate();
    return s;
}

std::vector<std::vector<double>> read_sweep(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open sweep file '" + path + "'");
    std::vector<std::vector<double>> states;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        std::vector<double> v;
        double x = 0.0;
        while (ls >> x) v.push_back(x);
        if (!ls.eof()) throw ConfigError("malformed line in sweep file '" + path + "'");
        if (!v.empty()) states.push_back(std::move(v));
    }
    return states;
}

std::string sweep_path(const std::string& base, std::size_t i) {
    const std::filesystem::path p(base);
    std::filesystem::path out = p.parent_path() / (p.stem().string() + "_" + std::to_string(i) + p.extension().string());
    return out.string();
}

void emit(const Settings& s, const std::optional<std::string>& path, const Trajectory& tr, const Assembly& as,
          const Descriptor& d, bool cartesian) {
    CartesianColumns extra;
    if (cartesian) extra = cartesian_columns(as, d.parameter, tr);
    const CartesianColumns* ex = cartesian ? &extra : nullptr;
    std::ofstream file;
    if (path) {
        file.open(*path, std::ios::binary);
        if (!file) throw std::ios_base::failure("cannot open output file '" + *path + "'");
    }
    std::ostream& out = path ? static_cast<std::ostream&>(file) : std::cout;
    if (s.format == OutputFormat::Csv)
        write_csv(out, tr, as.system.labels(), ex);
    else
        write_json(out, tr, as.system.labels(), serialize(d), s.cfg, ex);
    out.flush();
    if (!out) throw std::ios_base::failure("failed writing output");
}

Trajectory simulate_one(const ClosedSystem& sys, const std::vector<double>& x0, const IntegratorConfig& cfg) {
    return integrate(sys, normalize(sys.state(), x0), cfg);
}

}  // namespace

CartesianColumns cartesian_columns(const Assembly& assembly, std::span<const double> parameter, const Trajectory& tr) {
    CartesianColumns c;
    // a stage ending in the plane exposes the last bob it carries; bobs are
    // numbered by how many (angle, momentum) pairs precede them
    std::vector<const OpenSystem*> stages;
    std::size_t prev_dim = 0;
    for (const auto& p : assembly.prefixes) {
        if (p.state().dim() > prev_dim && p.cod() == pivot_space()) {
            stages.push_back(&p);
            const std::string k = std::to_string(p.state().dim() / 2);
            c.names.push_back("x" + k);
            c.names.push_back("y" + k);
        }
        prev_dim = p.state().dim();
    }
    c.rows.reserve(tr.states.size());
    for (const Point& x : tr.states) {
        std::vector<double> row;
        for (const OpenSystem* s : stages) {
            const std::vector<double> ax = concat(parameter, x.coords().first(s->state().dim()));
            const std::vector<double> b = s->output().values(ax);
            row.push_back(b[0]);
            row.push_back(b[1]);
        }
        c.rows.push_back(std::move(row));
    }
    return c;
}

void write_csv(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& labels,
               const CartesianColumns* extra) {
    std::string line = "t";
    for (const auto& l : labels) line += "," + l;
    line += ",E";
    if (extra)
        for (const auto& n : extra->names) line += "," + n;
    out << line << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        line = fmt17(tr.times[i]);
        for (double v : tr.states[i].coords()) line += "," + fmt17(v);
        line += "," + fmt17(tr.energies[i]);
        if (extra)
            for (double v : extra->rows[i]) line += "," + fmt17(v);
        out << line << '\n';
    }
}

void write_json(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& labels,
                const std::string& descriptor_text, const IntegratorConfig& cfg, const CartesianColumns* extra) {
    using nlohmann::json;
    json states = json::array();
    for (const Point& p : tr.states) states.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
    json j;
    j["times"] = tr.times;
    j["states"] = std::move(states);
    j["energies"] = tr.energies;
    j["metadata"] = {{"descriptor", descriptor_text},
                     {"labels", labels},
                     {"config", {{"method", to_string(cfg.method)}, {"dt", cfg.dt}, {"steps", cfg.steps}}}};
    if (extra) j["cartesian"] = {{"names", extra->names}, {"rows", extra->rows}};
    out << j.dump(1) << '\n';
}

int run(const Descriptor& d, const RunOptions& opts, std::ostream& err) {
    Settings settings;
    try {
        settings = resolve(d, opts);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigFailure;
    }

    std::optional<Assembly> as;
    std::optional<ClosedSystem> closed;
    try {
        as = assemble(d);
        if (d.parameter.size() != as->system.dom().dim())
            throw TypeCheckError("closure needs a parameter point in " + as->system.dom().to_string() + ", got " +
                                 std::to_string(d.parameter.size()) + " values");
        closed = close(as->system, d.parameter);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kTypeFailure;
    }

    std::vector<std::vector<double>> starts;
    try {
        if (opts.sweep) {
            if (!settings.output) throw ConfigError("--sweep needs an output path to derive file names from");
            starts = read_sweep(*opts.sweep);
        } else {
            if (!d.initial) throw ConfigError("descriptor has no initial state");
            starts.push_back(*d.initial);
        }
        for (const auto& x0 : starts)
            if (x0.size() != closed->state().dim())
                throw ConfigError("initial state needs " + std::to_string(closed->state().dim()) + " values for " +
                                  closed->state().to_string() + ", got " + std::to_string(x0.size()));
        if (settings.cfg.method == Method::SymplecticEuler && !closed->reaction().is_canonical())
            throw ConfigError("symplectic integration needs a canonical symplectic reaction");
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    }

    auto job = [&](std::size_t i) -> std::pair<int, std::string> {
        Trajectory tr;
        try {
            tr = simulate_one(*closed, starts[i], settings.cfg);
        } catch (const Error& e) {
            return {kSimulationFailure, e.what()};
        }
        try {
            const auto path = opts.sweep ? std::optional<std::string>(sweep_path(*settings.output, i)) : settings.output;
            emit(settings, path, tr, *as, d, opts.cartesian);
        } catch (const std::exception& e) {
            return {kIoFailure, e.what()};
        }
        return {kOk, {}};
    };

    if (!opts.sweep) {
        const auto [code, msg] = job(0);
        if (code != kOk) err << "error: " << msg << '\n';
        return code;
    }

    std::vector<std::future<std::pair<int, std::string>>> futures;
    futures.reserve(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) futures.push_back(std::async(std::launch::async, job, i));
    int result = kOk;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        const auto [code, msg] = futures[i].get();
        if (code != kOk) {
            err << "error: sweep run " << i << ": " << msg << '\n';
            if (result == kOk) result = code;
        }
    }
    return result;
}

int run_file(const std::string& path, const RunOptions& opts, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot open descriptor '" << path << "'\n";
        return kIoFailure;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Descriptor d;
    try {
        d = parse(buf.str());
    } catch (const ParseError& e) {
        err << path << ":" << e.line() << ":" << e.column() << ": parse error: " << e.what() << '\n';
        return kParseFailure;
    }
    return run(d, opts, err);
}

}  // namespace openerg
