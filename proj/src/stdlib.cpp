#include "openerg/stdlib.hpp"

#include <cmath>

namespace openerg {

Space pivot_space() { return Space::lines(4); }

OpenSystem pendulum(const PendulumParams& p) {
    if (!(p.mass > 0.0) || !(p.length > 0.0) || !(p.gravity > 0.0))
        throw InvalidParameter("pendulum parameters m, l, g must be positive");
    const double m = p.mass;
    const double l = p.length;
    const double g = p.gravity;
    const double inertia = m * l * l;
    const Space a = pivot_space();
    const Space x = cotangent_space(Space::circles(1));
    const Space ax = product(a, x);

    // input layout: x0.x, x0.y, v0.x, v0.y, θ, L
    SmoothMap w(ax, a,
                [l, inertia](std::span<const Dual> in, std::span<Dual> out) {
                    const Dual c = cos(in[4]);
                    const Dual s = sin(in[4]);
                    const Dual omega = in[5] / Dual(inertia);
                    out[0] = in[0] + l * c;
                    out[1] = in[1] + l * s;
                    out[2] = in[2] - l * omega * s;
                    out[3] = in[3] + l * omega * c;
                },
                "pendulum.w");

    SmoothMap e(ax, Space::lines(1),
                [m, l, g, inertia](std::span<const Dual> in, std::span<Dual> out) {
                    const Dual c = cos(in[4]);
                    const Dual s = sin(in[4]);
                    const Dual omega = in[5] / Dual(inertia);
                    const Dual vel[2] = {in[2] - l * omega * s, in[3] + l * omega * c};
                    const Dual kinetic = 0.5 * m * abs2(std::span<const Dual>(vel));
                    const Dual potential = m * g * (in[1] + l * s);
                    out[0] = kinetic + potential;
                },
                "pendulum.E");

    return {a, a, x, canonical_symplectic(Space::circles(1)), std::move(w), std::move(e), {"theta", "L"}, "pendulum"};
}

OpenSystem anchor(double x, double y) {
    const Space b = pivot_space();
    return {Space{}, b, Space{}, empty_reaction(), constant_map(Space{}, b, {x, y, 0.0, 0.0}),
            constant_map(Space{}, Space::lines(1), {0.0}), {}, "anchor"};
}

OpenSystem discard() {
    const Space a = pivot_space();
    return {a, Space{}, Space{}, empty_reaction(), constant_map(a, Space{}, {}),
            constant_map(a, Space::lines(1), {0.0}), {}, "discard"};
}

OpenSystem chain(const std::vector<PendulumParams>& params) {
    if (params.empty()) throw InvalidParameter("a pendulum chain needs at least one link");
    OpenSystem s = pendulum(params.front());
    for (std::size_t i = 1; i < params.size(); ++i) s = compose(s, pendulum(params[i]));
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= params.size(); ++i) {
        labels.push_back("theta" + std::to_string(i));
        labels.push_back("L" + std::to_string(i));
    }
    return s.relabeled(std::move(labels)).renamed("chain" + std::to_string(params.size()));
}

OpenSystem chain(std::size_t n, const PendulumParams& p) { return chain(std::vector<PendulumParams>(n, p)); }

ClosedSystem anchored_chain(std::size_t n, const PendulumParams& p) {
    return close(compose(compose(anchor(), chain(n, p)), discard()), std::span<const double>{});
}

ClosedSystem gradient_system(const Space& space, const SmoothMap& potential, MetricField metric, MetricSign sign) {
    for (Factor f : space.factors())
        if (f != Factor::Line) throw SpaceMismatch("gradient systems need an all-line space, got " + space.to_string());
    return {space, from_metric(space, std::move(metric), sign), potential};
}

SmoothMap quadratic_potential(std::size_t n, double scale) {
    return {Space::lines(n), Space::lines(1),
            [scale](std::span<const Dual> in, std::span<Dual> out) { out[0] = scale * abs2(in); }, "quadratic"};
}

MetricField diagonal_metric(std::vector<double> diag) {
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(diag.size()), static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    return [g](std::span<const double>) { return g; };
}

ClosedSystem harmonic_oscillator(double mass, double stiffness) {
    if (!(mass > 0.0) || !(stiffness > 0.0)) throw InvalidParameter("oscillator mass and stiffness must be positive");
    const Space base = Space::lines(1);
    SmoothMap h(cotangent_space(base), Space::lines(1),
                [mass, stiffness](std::span<const Dual> in, std::span<Dual> out) {
                    out[0] = in[1] * in[1] / Dual(2.0 * mass) + 0.5 * stiffness * in[0] * in[0];
                },
                "oscillator.H");
    return {cotangent_space(base), canonical_symplectic(base), std::move(h), {"q", "p"}};
}

}  // namespace openerg
