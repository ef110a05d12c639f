#pragma once

/**
 * @file reaction.hpp
 * @brief Reactions R : T*X → TX stored as matrix fields over X.
 *
 * R(x) turns covector components into tangent components, v = R(x)·α.
 * Hamiltonian systems use the canonical symplectic reaction, gradient
 * systems use ±g(x)⁻¹. Reactions on a product space combine block-diagonally.
 */

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "openerg/maps.hpp"
#include "openerg/space.hpp"

namespace openerg {

using MatrixField = std::function<Matrix(std::span<const double> x)>;

/// Known structure of a diagonal block of a reaction. Used to decide whether
/// a structure-preserving integrator applies.
struct ReactionBlock {
    enum class Kind { Canonical, General };
    Kind kind = Kind::General;
    std::size_t offset = 0;
    std::size_t dim = 0;  // for Canonical: 2n, positions first then momenta

    friend bool operator==(const ReactionBlock&, const ReactionBlock&) = default;
};

class Reaction {
  public:
    Reaction(Space space, MatrixField field, std::vector<ReactionBlock> blocks = {});

    const Space& space() const noexcept { return space_; }
    const std::vector<ReactionBlock>& blocks() const noexcept { return blocks_; }

    Matrix matrix(std::span<const double> x) const;
    Matrix matrix(const Point& x) const { return matrix(x.coords()); }

    /// R(x)·α as a tangent vector at α's base.
    Tangent operator()(const Covector& alpha) const;

    /// True when every block is canonical symplectic.
    bool is_canonical() const;

  private:
    Space space_;
    std::shared_ptr<const MatrixField> field_;
    std::vector<ReactionBlock> blocks_;
};

/// The unique reaction on R^0.
Reaction empty_reaction();

/// Constant [[0, I],[−I, 0]] on cotangent_space(base), base coordinates first.
Reaction canonical_symplectic(const Space& base);

enum class MetricSign { Ascent, Descent };

using MetricField = std::function<Matrix(std::span<const double> x)>;

/// ±g(x)⁻¹. Throws MetricError at points where g is not symmetric positive
/// definite or is too badly conditioned to invert (condition estimate > 1e12).
Reaction from_metric(const Space& space, MetricField metric, MetricSign sign);

Reaction euclidean(const Space& space, MetricSign sign);

/// Block-diagonal sum on the product space.
Reaction oplus(const Reaction& r1, const Reaction& r2);

/// Push R along a diffeomorphism f (with inverse f_inv): y ↦ J_f(x)·R(x)·J_f(x)ᵀ, x = f_inv(y).
/// The pair is validated on random samples; failure throws DiffeomorphismError.
Reaction transport(const SmoothMap& f, const SmoothMap& f_inv, const Reaction& r, std::uint64_t seed = 0x5eed);

bool is_antisymmetric(const Reaction& r, const Point& x, double tol = 1e-12);
bool is_psd(const Reaction& r, const Point& x, double tol = 1e-12);

}  // namespace openerg
