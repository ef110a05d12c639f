#pragma once

/**
 * @file stdlib.hpp
 * @brief Ready-made systems: open pendulum, chain closures, gradient flows.
 */

#include <vector>

#include "openerg/reaction.hpp"
#include "openerg/system.hpp"

namespace openerg {

struct PendulumParams {
    double mass = 1.0;
    double length = 1.0;
    double gravity = 9.81;
};

/// Phase space of a pivot or bob: (x, y, vx, vy).
Space pivot_space();

/// Open pendulum T R^2 → T R^2 with state (θ, L) on T*S^1.
///
/// w((x0, v0), (θ, L)) = (x0 + l(cos θ, sin θ), v0 + l(L/(ml²))(−sin θ, cos θ))
/// E((x0, v0), (θ, L)) = (m/2)|v0 + v|² + m g (h0 + l sin θ), h0 = x0.y
///
/// Throws InvalidParameter unless m, l, g > 0.
OpenSystem pendulum(const PendulumParams& p);

/// R^0 → T R^2 fixing a pivot at rest at (x, y).
OpenSystem anchor(double x = 0.0, double y = 0.0);

/// T R^2 → R^0.
OpenSystem discard();

/// n pendula composed left to right. Labels theta1, L1, theta2, ...
OpenSystem chain(std::size_t n, const PendulumParams& p = {});
OpenSystem chain(const std::vector<PendulumParams>& params);

/// anchor(0, 0) ; chain ; discard, closed.
ClosedSystem anchored_chain(std::size_t n, const PendulumParams& p = {});

/// Gradient flow of `potential` under ±g⁻¹ on an all-line space.
ClosedSystem gradient_system(const Space& space, const SmoothMap& potential, MetricField metric, MetricSign sign);

/// scale·|x|² on R^n.
SmoothMap quadratic_potential(std::size_t n, double scale = 1.0);

/// Constant diagonal metric.
MetricField diagonal_metric(std::vector<double> diag);

/// H(q, p) = p²/(2m) + k q²/2 on [Line, Line] with the canonical reaction.
ClosedSystem harmonic_oscillator(double mass = 1.0, double stiffness = 1.0);

}  // namespace openerg
