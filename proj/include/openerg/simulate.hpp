#pragma once

/**
 * @file simulate.hpp
 * @brief Fixed-step integration of energy-driven systems.
 */

#include <functional>
#include <string>
#include <vector>

#include "openerg/system.hpp"

namespace openerg {

enum class Method { Euler, RK4, SymplecticEuler };

std::string to_string(Method m);
/// Accepts "euler", "rk4", "symplectic" and "symplectic_euler".
Method parse_method(const std::string& name);

struct IntegratorConfig {
    Method method = Method::RK4;
    double dt = 1e-3;
    std::size_t steps = 1000;

    /// Throws ConfigError unless dt > 0 and steps > 0.
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Point> states;
    std::vector<double> energies;
};

/// Solve dx/dt = R(x)·dE(x) from x0. Symplectic Euler requires a reaction that
/// is a block sum of canonical symplectic blocks; it updates positions with
/// the momentum gradient, then momenta with the position gradient taken at the
/// new positions.
Trajectory integrate(const ClosedSystem& sys, const Point& x0, const IntegratorConfig& cfg);

using Signal = std::function<std::vector<double>(double t)>;

/// Integrate an open system driven by a parameter signal a(t) and an output
/// covector signal alpha_b(t). Euler and RK4 only. Energies are E(a(t), x).
Trajectory integrate_open(const OpenSystem& sys, const Signal& a, const Signal& alpha_b, const Point& x0,
                          const IntegratorConfig& cfg);

/// max_i |energies[i] - energies[0]|.
double energy_drift(const Trajectory& tr);

}  // namespace openerg
