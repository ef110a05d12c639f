#pragma once

/**
 * @file space.hpp
 * @brief Chart manifolds built from line and circle factors.
 *
 * Every supported space is a finite product of R and S^1 factors. Both factor
 * kinds have trivial tangent and cotangent bundles, so fibers are plain
 * vectors of length dim() in the coordinate basis.
 */

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "openerg/error.hpp"

namespace openerg {

enum class Factor { Line, Circle };

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle into [0, 2π).
double wrap_angle(double theta);

class Space {
  public:
    Space() = default;
    explicit Space(std::vector<Factor> factors) : factors_(std::move(factors)) {}

    static Space lines(std::size_t n) { return Space(std::vector<Factor>(n, Factor::Line)); }
    static Space circles(std::size_t n) { return Space(std::vector<Factor>(n, Factor::Circle)); }

    std::size_t dim() const noexcept { return factors_.size(); }
    bool empty() const noexcept { return factors_.empty(); }
    const std::vector<Factor>& factors() const noexcept { return factors_; }
    Factor operator[](std::size_t i) const { return factors_.at(i); }

    /// "[Circle,Line]" style rendering, "R^0" for the terminal space.
    std::string to_string() const;

    friend bool operator==(const Space&, const Space&) = default;

  private:
    std::vector<Factor> factors_;
};

Space product(const Space& a, const Space& b);

/// Base coordinates followed by dim(base) momentum lines.
Space cotangent_space(const Space& base);

/// Tangent bundle of a chart space: the same shape as the cotangent bundle.
Space tangent_space(const Space& base);

/// A point of some Space with circle coordinates in [0, 2π).
class Point {
  public:
    Point() = default;

    std::size_t size() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const Point&, const Point&) = default;

  private:
    friend Point normalize(const Space&, std::span<const double>);
    explicit Point(std::vector<double> c) : coords_(std::move(c)) {}
    std::vector<double> coords_;
};

/// Circle coordinates reduced mod 2π; line coordinates unchanged.
Point normalize(const Space& space, std::span<const double> raw);
inline Point normalize(const Space& space, std::initializer_list<double> raw) {
    return normalize(space, std::span<const double>(raw.begin(), raw.size()));
}

/// Coordinate-wise comparison; circle coordinates compared mod 2π.
bool same_point(const Space& space, const Point& a, const Point& b, double tol = 1e-9);

/// Split a point of A×X into its A and X parts.
std::vector<double> slice(std::span<const double> v, std::size_t offset, std::size_t count);
std::vector<double> concat(std::span<const double> a, std::span<const double> b);

enum class Variance { Covariant, Contravariant };

/// An element of the (trivialized) cotangent or tangent fiber over a point.
template <Variance V>
struct Fiber {
    Point base;
    std::vector<double> components;

    Fiber() = default;
    Fiber(Point b, std::vector<double> c) : base(std::move(b)), components(std::move(c)) {
        if (components.size() != base.size())
            throw DimensionError("fiber components", base.size(), components.size());
    }

    std::size_t size() const noexcept { return components.size(); }
    double operator[](std::size_t i) const { return components[i]; }

    friend bool operator==(const Fiber&, const Fiber&) = default;
};

using Covector = Fiber<Variance::Covariant>;
using Tangent = Fiber<Variance::Contravariant>;

}  // namespace openerg
