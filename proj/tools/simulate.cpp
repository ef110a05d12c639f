// Command-line front end: simulate <descriptor-file> [options]

#include <CLI11.hpp>

#include <iostream>

#include "openerg/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Assemble and simulate a composed energy-driven system"};

    std::string descriptor;
    std::optional<double> dt;
    std::optional<std::size_t> steps;
    std::string method;
    std::string output;
    std::string format;
    std::string sweep;
    bool cartesian = false;

    app.add_option("descriptor", descriptor, "Descriptor file (line syntax or JSON)")->required();
    app.add_option("--dt", dt, "Time step")->check(CLI::PositiveNumber);
    app.add_option("--steps", steps, "Number of steps")->check(CLI::PositiveNumber);
    app.add_option("--method", method, "Integrator")->check(CLI::IsMember({"euler", "rk4", "symplectic"}));
    app.add_option("--output", output, "Output path ('-' for stdout)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--cartesian", cartesian, "Also emit bob positions");
    app.add_option("--sweep", sweep, "File of initial states, one per line; runs in parallel")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // bad flags are configuration errors; --help still exits cleanly
        const int code = app.exit(e);
        return code == 0 ? 0 : openerg::kConfigFailure;
    }

    openerg::RunOptions opts;
    opts.dt = dt;
    opts.steps = steps;
    if (!method.empty()) opts.method = openerg::parse_method(method);
    if (!output.empty()) opts.output = output;
    if (!format.empty()) opts.format = openerg::parse_format(format);
    opts.cartesian = cartesian;
    if (!sweep.empty()) opts.sweep = sweep;

    return openerg::run_file(descriptor, opts, std::cerr);
}
