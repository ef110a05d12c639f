#include "openerg/simulate.hpp"

#include <cmath>

namespace openerg {

std::string to_string(Method m) {
    switch (m) {
        case Method::Euler: return "euler";
        case Method::RK4: return "rk4";
        case Method::SymplecticEuler: return "symplectic";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "euler") return Method::Euler;
    if (name == "rk4") return Method::RK4;
    if (name == "symplectic" || name == "symplectic_euler") return Method::SymplecticEuler;
    throw ConfigError("unknown integration method '" + name + "' (expected euler, rk4 or symplectic)");
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be a positive finite number");
    if (steps == 0) throw ConfigError("steps must be positive");
}

namespace {

using Field = std::function<std::vector<double>(double t, std::span<const double> x)>;

void axpy(std::vector<double>& out, std::span<const double> x, double h, std::span<const double> k) {
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h * k[i];
}

void step_euler(const Field& f, double t, std::vector<double>& x, double dt) {
    const std::vector<double> k = f(t, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt * k[i];
}

void step_rk4(const Field& f, double t, std::vector<double>& x, double dt) {
    std::vector<double> tmp;
    const std::vector<double> k1 = f(t, x);
    axpy(tmp, x, dt / 2, k1);
    const std::vector<double> k2 = f(t + dt / 2, tmp);
    axpy(tmp, x, dt / 2, k2);
    const std::vector<double> k3 = f(t + dt / 2, tmp);
    axpy(tmp, x, dt, k3);
    const std::vector<double> k4 = f(t + dt, tmp);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

void step_symplectic(const ClosedSystem& sys, std::vector<double>& x, double dt) {
    const auto& blocks = sys.reaction().blocks();
    std::vector<double> g = gradient(sys.energy(), x);
    for (const auto& b : blocks) {
        const std::size_t n = b.dim / 2;
        for (std::size_t i = 0; i < n; ++i) x[b.offset + i] += dt * g[b.offset + n + i];
    }
    g = gradient(sys.energy(), x);
    for (const auto& b : blocks) {
        const std::size_t n = b.dim / 2;
        for (std::size_t i = 0; i < n; ++i) x[b.offset + n + i] -= dt * g[b.offset + i];
    }
}

void check_symplectic(const ClosedSystem& sys) {
    const Reaction& r = sys.reaction();
    if (!r.is_canonical())
        throw ConfigError("symplectic integration needs a canonical symplectic reaction (or a block sum of them)");
    for (const auto& b : r.blocks())
        for (std::size_t i = b.offset + b.dim / 2; i < b.offset + b.dim; ++i)
            if (sys.state()[i] != Factor::Line)
                throw ConfigError("symplectic integration needs momentum coordinates on line factors");
}

template <class Step, class Energy>
Trajectory run(const Space& space, const Point& x0, const IntegratorConfig& cfg, Step&& step, Energy&& energy) {
    if (x0.size() != space.dim()) throw DimensionError("initial state", space.dim(), x0.size());
    Trajectory tr;
    tr.times.reserve(cfg.steps + 1);
    tr.states.reserve(cfg.steps + 1);
    tr.energies.reserve(cfg.steps + 1);
    std::vector<double> x(x0.coords().begin(), x0.coords().end());
    Point p = normalize(space, x);
    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        x.assign(p.coords().begin(), p.coords().end());
        double e = 0.0;
        try {
            e = energy(t, x);
        } catch (const ScalarDomainError& err) {
            throw SimulationError(err.what(), i);
        }
        tr.times.push_back(t);
        tr.states.push_back(p);
        tr.energies.push_back(e);
        if (i == cfg.steps) break;
        try {
            step(t, x);
        } catch (const ScalarDomainError& err) {
            throw SimulationError(err.what(), i + 1);
        }
        for (double c : x)
            if (!std::isfinite(c)) throw DivergenceError(i + 1);
        p = normalize(space, x);
    }
    return tr;
}

}  // namespace

Trajectory integrate(const ClosedSystem& sys, const Point& x0, const IntegratorConfig& cfg) {
    cfg.validate();
    auto energy = [&sys](double, std::span<const double> x) { return sys.energy_at(x); };
    if (cfg.method == Method::SymplecticEuler) {
        check_symplectic(sys);
        return run(sys.state(), x0, cfg, [&](double, std::vector<double>& x) { step_symplectic(sys, x, cfg.dt); },
                   energy);
    }
    const Field f = [&sys](double, std::span<const double> x) { return sys.velocity(x); };
    if (cfg.method == Method::Euler)
        return run(sys.state(), x0, cfg, [&](double t, std::vector<double>& x) { step_euler(f, t, x, cfg.dt); },
                   energy);
    return run(sys.state(), x0, cfg, [&](double t, std::vector<double>& x) { step_rk4(f, t, x, cfg.dt); }, energy);
}

Trajectory integrate_open(const OpenSystem& sys, const Signal& a, const Signal& alpha_b, const Point& x0,
                          const IntegratorConfig& cfg) {
    cfg.validate();
    if (cfg.method == Method::SymplecticEuler)
        throw ConfigError("symplectic integration is not available for time-dependent (open) systems");
    auto energy = [&](double t, std::span<const double> x) {
        const std::vector<double> at = a(t);
        return sys.energy().values(concat(at, x))[0];
    };
    const Field f = [&](double t, std::span<const double> x) { return state_velocity(sys, a(t), alpha_b(t), x); };
    if (cfg.method == Method::Euler)
        return run(sys.state(), x0, cfg, [&](double t, std::vector<double>& x) { step_euler(f, t, x, cfg.dt); },
                   energy);
    return run(sys.state(), x0, cfg, [&](double t, std::vector<double>& x) { step_rk4(f, t, x, cfg.dt); }, energy);
}

double energy_drift(const Trajectory& tr) {
    if (tr.energies.empty()) throw ConfigError("energy drift of an empty trajectory");
    double d = 0.0;
    for (double e : tr.energies) d = std::max(d, std::abs(e - tr.energies.front()));
    return d;
}

}  // namespace openerg
