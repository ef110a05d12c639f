#pragma once

/**
 * @file run.hpp
 * @brief Assemble a descriptor, simulate it and export the trajectory.
 */

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "openerg/descriptor.hpp"
#include "openerg/simulate.hpp"

namespace openerg {

/// Command-line overrides; unset fields fall back to the descriptor.
struct RunOptions {
    std::optional<double> dt;
    std::optional<std::size_t> steps;
    std::optional<Method> method;
    std::optional<std::string> output;
    std::optional<OutputFormat> format;
    bool cartesian = false;
    std::optional<std::string> sweep;  // file of initial states, one per line
};

/// Process exit codes of run().
enum ExitCode : int {
    kOk = 0,
    kParseFailure = 1,
    kTypeFailure = 2,
    kSimulationFailure = 3,
    kIoFailure = 4,
    kConfigFailure = 5,
};

/// Extra per-sample columns (bob positions) for --cartesian output.
struct CartesianColumns {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
};

/// Bob positions for every stage of the top-level sequence that carries state
/// and outputs a point of T R^2.
CartesianColumns cartesian_columns(const Assembly& assembly, std::span<const double> parameter, const Trajectory& tr);

/// Header row then one row per sample: t, state..., E[, cartesian...].
/// Values use 17 significant digits; lines end in '\n'.
void write_csv(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& labels,
               const CartesianColumns* extra = nullptr);

void write_json(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& labels,
                const std::string& descriptor_text, const IntegratorConfig& cfg,
                const CartesianColumns* extra = nullptr);

/// Resolve settings, build, simulate and write output. Diagnostics go to `err`.
int run(const Descriptor& d, const RunOptions& opts, std::ostream& err);

/// Read and parse a descriptor file, then run it.
int run_file(const std::string& path, const RunOptions& opts, std::ostream& err);

}  // namespace openerg
