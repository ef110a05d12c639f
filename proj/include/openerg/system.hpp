#pragma once

/**
 * @file system.hpp
 * @brief Open energy-driven systems and their composition.
 *
 * An open system A → B has a state space X, a reaction R on X, an output map
 * w : A × X → B and an energy E : A × X → R. Sequential composition takes the
 * product of states, the block sum of reactions, threads outputs into the next
 * system's parameters and adds energies (E + w*E'). Closing a system fixes
 * the parameter point and drops the outgoing covector, leaving dx/dt = R dE.
 */

#include <span>
#include <string>
#include <vector>

#include "openerg/maps.hpp"
#include "openerg/reaction.hpp"
#include "openerg/space.hpp"

namespace openerg {

class OpenSystem {
  public:
    /// Checks dom(w) = dom(E) = A × X, cod(w) = B, cod(E) = R^1 and R.space = X.
    OpenSystem(Space dom, Space cod, Space state, Reaction reaction, SmoothMap output, SmoothMap energy,
               std::vector<std::string> labels = {}, std::string name = {});

    const Space& dom() const noexcept { return dom_; }
    const Space& cod() const noexcept { return cod_; }
    const Space& state() const noexcept { return state_; }
    const Reaction& reaction() const noexcept { return reaction_; }
    const SmoothMap& output() const noexcept { return output_; }
    const SmoothMap& energy() const noexcept { return energy_; }
    /// One label per state coordinate, used as column names on export.
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& name() const noexcept { return name_; }

    OpenSystem renamed(std::string name) const;
    OpenSystem relabeled(std::vector<std::string> labels) const;

  private:
    Space dom_;
    Space cod_;
    Space state_;
    Reaction reaction_;
    SmoothMap output_;
    SmoothMap energy_;
    std::vector<std::string> labels_;
    std::string name_;
};

class ClosedSystem {
  public:
    ClosedSystem(Space state, Reaction reaction, SmoothMap energy, std::vector<std::string> labels = {});

    const Space& state() const noexcept { return state_; }
    const Reaction& reaction() const noexcept { return reaction_; }
    const SmoothMap& energy() const noexcept { return energy_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// R(x)·dE(x) on raw coordinates.
    std::vector<double> velocity(std::span<const double> x) const;
    double energy_at(std::span<const double> x) const;

  private:
    Space state_;
    Reaction reaction_;
    SmoothMap energy_;
    std::vector<std::string> labels_;
};

/// X = R^0, w = id, E = 0.
OpenSystem identity(const Space& a);

/// S1 ⨟ S2 : A → C for S1 : A → B, S2 : B → C. State X1 × X2.
OpenSystem compose(const OpenSystem& s1, const OpenSystem& s2);

/// S1 ⊗ S2 : A1 × A2 → B1 × B2. State X1 × X2.
OpenSystem tensor(const OpenSystem& s1, const OpenSystem& s2);

/// Fix the parameter point; the outgoing covector is taken to be zero.
ClosedSystem close(const OpenSystem& s, const Point& a);
ClosedSystem close(const OpenSystem& s, std::span<const double> a);

/// View a closed system as an open system R^0 → R^0.
OpenSystem as_open(const ClosedSystem& s, std::string name = {});

/// Covector on A × X: T*w(alpha_b) + dE at (a, x), on raw coordinates.
std::vector<double> wiring_covector(const OpenSystem& s, std::span<const double> a, std::span<const double> alpha_b,
                                    std::span<const double> x);

/// R(x)·(π_X(T*w(alpha_b) + dE)) on raw coordinates.
std::vector<double> state_velocity(const OpenSystem& s, std::span<const double> a, std::span<const double> alpha_b,
                                   std::span<const double> x);

/// Typed form: alpha_b must be based at w(a, x).
Tangent vector_field(const OpenSystem& s, const Point& a, const Covector& alpha_b, const Point& x);
Tangent vector_field(const ClosedSystem& s, const Point& x);

}  // namespace openerg
