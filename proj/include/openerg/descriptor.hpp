#pragma once

/**
 * @file descriptor.hpp
 * @brief Textual wiring descriptors: parsing, serialization and assembly.
 *
 * A descriptor names systems from the standard library, wires them with `;`
 * (sequential, loosest) and `|` (parallel), and carries the closure point,
 * initial state and simulation settings:
 *
 *     # double pendulum
 *     system p = pendulum(m=1, l=1, g=9.81)
 *     compose anchor ; p ; p ; discard
 *     initial 5.0123 0 4.5124 0
 *     simulate method=rk4 dt=0.001 steps=10000 output="double.csv" format=csv
 *
 * Atoms in a composition are either defined names or builder ids with
 * optional arguments. A JSON object with the same fields is accepted as an
 * alternative front end.
 */

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openerg/error.hpp"
#include "openerg/simulate.hpp"
#include "openerg/system.hpp"

namespace openerg {

class ParseError : public Error {
  public:
    ParseError(std::size_t line, std::size_t column, std::string message, std::vector<std::string> expected = {});

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

  private:
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
};

/// Composition failed to type-check or referenced something unknown.
class TypeCheckError : public Error {
  public:
    using Error::Error;
};

struct Call {
    std::string builder;
    std::map<std::string, double> args;
    bool parenthesized = false;

    friend bool operator==(const Call&, const Call&) = default;
};

struct Expr {
    enum class Kind { Atom, Seq, Par };
    Kind kind = Kind::Atom;
    Call atom;
    std::vector<Expr> children;

    friend bool operator==(const Expr&, const Expr&) = default;
};

struct SystemDef {
    std::string name;
    Call call;

    friend bool operator==(const SystemDef&, const SystemDef&) = default;
};

enum class OutputFormat { Csv, Json };

struct SimulationBlock {
    std::optional<Method> method;
    std::optional<double> dt;
    std::optional<std::size_t> steps;
    std::optional<std::string> output;
    std::optional<OutputFormat> format;

    friend bool operator==(const SimulationBlock&, const SimulationBlock&) = default;
};

struct Descriptor {
    std::vector<SystemDef> systems;
    std::optional<Expr> composition;
    std::vector<double> parameter;  // closure point a
    std::optional<std::vector<double>> initial;
    SimulationBlock simulate;

    friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

/// Parses the line grammar, or JSON when the first non-blank character is '{'.
Descriptor parse(std::string_view text);
Descriptor parse_text(std::string_view text);
Descriptor parse_json(std::string_view text);

/// Composition expression alone, e.g. "anchor ; p | q ; discard".
Expr parse_expression(std::string_view text);

std::string serialize(const Descriptor& d);
std::string serialize(const Expr& e);

/// Builder ids known to the assembler.
std::vector<std::string> builder_ids();

/// A composed system together with its top-level sequential stages.
struct Assembly {
    OpenSystem system;
    /// Prefix composites stage_1, stage_1 ; stage_2, ... of the top-level sequence.
    std::vector<OpenSystem> prefixes;
};

/// Resolve names, instantiate builders and compose. Throws TypeCheckError.
Assembly assemble(const Descriptor& d);

std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& name);

}  // namespace openerg
