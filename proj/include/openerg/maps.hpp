#pragma once

/**
 * @file maps.hpp
 * @brief Smooth maps between chart spaces as programs over Dual.
 *
 * A SmoothMap owns a type-erased program from dim(dom) Duals to dim(cod)
 * Duals. The same program gives plain evaluation (zero seed) and exact
 * directional derivatives (unit seeds), from which Jacobians, pushforwards,
 * pullbacks and differentials are assembled.
 */

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "openerg/scalar.hpp"
#include "openerg/space.hpp"

namespace openerg {

using Matrix = Eigen::MatrixXd;

/// Body of a smooth map: reads dom().dim() inputs, writes cod().dim() outputs.
using Program = std::function<void(std::span<const Dual> in, std::span<Dual> out)>;

class SmoothMap {
  public:
    SmoothMap(Space dom, Space cod, Program body, std::string name = {});

    const Space& dom() const noexcept { return dom_; }
    const Space& cod() const noexcept { return cod_; }
    const std::string& name() const noexcept { return name_; }

    /// Run the program. No normalization of circle outputs.
    void apply(std::span<const Dual> in, std::span<Dual> out) const;
    std::vector<Dual> operator()(std::span<const Dual> in) const;

    /// Raw values at raw coordinates.
    std::vector<double> values(std::span<const double> x) const;

  private:
    Space dom_;
    Space cod_;
    std::shared_ptr<const Program> body_;
    std::string name_;
};

/// Evaluate at a point; the result is normalized into cod(f).
Point eval(const SmoothMap& f, const Point& x);

/// dim(cod) × dim(dom) Jacobian; column j is the derivative along e_j.
Matrix jacobian(const SmoothMap& f, std::span<const double> x);
Matrix jacobian(const SmoothMap& f, const Point& x);

/// J(x)ᵀ·beta on raw coordinates.
std::vector<double> pullback_components(const SmoothMap& f, std::span<const double> x,
                                        std::span<const double> beta);

/// Gradient row of a scalar map on raw coordinates.
std::vector<double> gradient(const SmoothMap& energy, std::span<const double> x);

Covector pullback(const SmoothMap& f, const Point& x, const Covector& beta);
Tangent pushforward(const SmoothMap& f, const Point& x, const Tangent& v);
Covector differential(const SmoothMap& energy, const Point& x);

/// Matrix-vector product with a fixed summation order.
std::vector<double> apply_matrix(const Matrix& m, std::span<const double> v);

// --- combinators -----------------------------------------------------------

SmoothMap identity_map(const Space& s);

/// Coordinates [offset, offset + cod.dim()) of the input.
SmoothMap projection(const Space& dom, std::size_t offset, const Space& cod);

SmoothMap constant_map(const Space& dom, const Space& cod, std::vector<double> value);

/// x ↦ M·x between all-line spaces (or any spaces when used as a chart map).
SmoothMap linear_map(const Space& dom, const Space& cod, const Matrix& m);

/// Diagrammatic composition f ⨟ g: first f, then g.
SmoothMap compose(const SmoothMap& f, const SmoothMap& g);

/// ⟨f, g⟩ : X → B × C for f : X → B, g : X → C.
SmoothMap pair(const SmoothMap& f, const SmoothMap& g);

/// f × g : X × Y → B × C.
SmoothMap cross(const SmoothMap& f, const SmoothMap& g);

/// Pointwise sum of two maps with equal domains and line codomains.
SmoothMap sum(const SmoothMap& f, const SmoothMap& g);

/// Samples random points and checks that shifting any circle input by 2π leaves
/// the output unchanged (circle outputs compared mod 2π).
bool is_well_defined_on_circles(const SmoothMap& f, std::mt19937_64& rng, int samples = 32,
                                double tol = 1e-9);

/// Random point with circle coordinates in [0, 2π) and line coordinates in [-scale, scale].
Point random_point(const Space& s, std::mt19937_64& rng, double scale = 3.0);

}  // namespace openerg
