#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace openerg {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A scalar primitive was evaluated outside its domain (ln of a nonpositive
/// value, division by zero, ...).
class ScalarDomainError : public Error {
  public:
    ScalarDomainError(std::string op, double value, std::optional<std::size_t> index = {})
        : Error(format(op, value, index)), op_(std::move(op)), value_(value), index_(index) {}

    const std::string& op() const noexcept { return op_; }
    double value() const noexcept { return value_; }
    /// Coordinate (input slot) being differentiated when the error occurred, if known.
    std::optional<std::size_t> index() const noexcept { return index_; }

    ScalarDomainError with_index(std::size_t index) const { return {op_, value_, index}; }

  private:
    static std::string format(const std::string& op, double value, std::optional<std::size_t> index) {
        std::string msg = "scalar domain error in '" + op + "' at value " + std::to_string(value);
        if (index) msg += " (coordinate " + std::to_string(*index) + ")";
        return msg;
    }

    std::string op_;
    double value_;
    std::optional<std::size_t> index_;
};

class DimensionError : public Error {
  public:
    DimensionError(const std::string& what, std::size_t expected, std::size_t got)
        : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

/// A fiber element was used at the wrong base point.
class FiberError : public Error {
  public:
    using Error::Error;
};

/// A map was used where a map of another shape was required.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Two interfaces that must agree do not.
class SpaceMismatch : public Error {
  public:
    using Error::Error;
};

class MetricError : public Error {
  public:
    using Error::Error;
};

class DiffeomorphismError : public Error {
  public:
    using Error::Error;
};

class InvalidParameter : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Integration failed at a specific step.
class SimulationError : public Error {
  public:
    SimulationError(const std::string& what, std::size_t step)
        : Error(what + " at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

/// State became NaN or infinite.
class DivergenceError : public SimulationError {
  public:
    explicit DivergenceError(std::size_t step)
        : SimulationError("trajectory diverged (non-finite state)", step) {}
};

}  // namespace openerg
