#pragma once

/**
 * @file lens.hpp
 * @brief Lenses over trivialized bundles and the semantics of open systems.
 *
 * A lens ⟨X̄, X⟩ → ⟨Ȳ, Y⟩ is a forward smooth map X → Y together with a
 * backward map sending (x, fiber vector over f(x)) to a fiber vector over x,
 * linear in the fiber argument. Bundles are always base × R^k here, so the
 * backward map is an ordinary function of (point, vector).
 *
 * semantics() sends an open system (X, R, w, E) : A → B to the open ODE with
 * wiring lens ⟨w, T*w + dE⟩ : ⟨T*A, A⟩ ⊗ ⟨T*X, X⟩ → ⟨T*B, B⟩ and ODE
 * decoration R : ⟨TX, X⟩ → ⟨T*X, X⟩. collapse() folds the decoration into the
 * wiring, so the backward pass of the result yields the state velocity.
 */

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "openerg/maps.hpp"
#include "openerg/system.hpp"

namespace openerg {

enum class FiberKind { Cotangent, Tangent };

/// A trivialized bundle base × R^k; each fiber slot is tagged with its variance.
struct LensInterface {
    Space base;
    std::vector<FiberKind> fiber;

    std::size_t fiber_dim() const noexcept { return fiber.size(); }
    std::string to_string() const;

    friend bool operator==(const LensInterface&, const LensInterface&) = default;
};

LensInterface cotangent_interface(const Space& base);
LensInterface tangent_interface(const Space& base);
LensInterface tensor(const LensInterface& a, const LensInterface& b);

using Backward = std::function<std::vector<double>(std::span<const double> x, std::span<const double> beta)>;

class Lens {
  public:
    Lens(LensInterface dom, LensInterface cod, SmoothMap forward, Backward backward);

    const LensInterface& dom() const noexcept { return dom_; }
    const LensInterface& cod() const noexcept { return cod_; }
    const SmoothMap& forward_map() const noexcept { return forward_; }

    /// Raw forward values (no circle normalization).
    std::vector<double> forward(std::span<const double> x) const { return forward_.values(x); }

    /// Fiber vector over x from a fiber vector over forward(x).
    std::vector<double> backward(std::span<const double> x, std::span<const double> beta) const;

  private:
    LensInterface dom_;
    LensInterface cod_;
    SmoothMap forward_;
    std::shared_ptr<const Backward> backward_;
};

Lens identity_lens(const LensInterface& i);

/// l1 ⨟ l2: forward composes, backward(x, γ) = l1.backward(x, l2.backward(f1(x), γ)).
Lens lens_compose(const Lens& l1, const Lens& l2);
Lens lens_tensor(const Lens& l1, const Lens& l2);

/// ⟨T*f, f⟩ : ⟨T*A, A⟩ → ⟨T*B, B⟩.
Lens cotangent_lens(const SmoothMap& f);

/// Parametric lens with an ODE decoration on its parameter.
struct OpenODEMorphism {
    LensInterface dom;    // ⟨T*A, A⟩
    LensInterface cod;    // ⟨T*B, B⟩
    LensInterface param;  // ⟨T*X, X⟩
    Lens ode;             // ⟨TX, X⟩ → ⟨T*X, X⟩, identity forward, R backward
    Lens wiring;          // dom ⊗ param → cod
};

OpenODEMorphism semantics(const OpenSystem& s);

/// Composition in OpenODE: parameters tensor, wiring threads through the second morphism.
OpenODEMorphism ode_compose(const OpenODEMorphism& m1, const OpenODEMorphism& m2);
OpenODEMorphism ode_tensor(const OpenODEMorphism& m1, const OpenODEMorphism& m2);

/// ⟨T*A, A⟩ ⊗ ⟨TX, X⟩ → ⟨T*B, B⟩ whose backward output in the X slot is R(x)·α_X.
Lens collapse(const OpenODEMorphism& m);

}  // namespace openerg
