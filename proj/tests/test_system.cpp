#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "openerg/simulate.hpp"
#include "openerg/stdlib.hpp"
#include "openerg/system.hpp"

using namespace openerg;
using std::numbers::pi;

namespace {

/// An open system R^2 -> R^2 with a line state and a metric reaction, so the
/// algebraic laws are also exercised away from pendula.
OpenSystem spring(double k) {
    const Space a = Space::lines(2);
    const Space x = Space::lines(1);
    SmoothMap w(product(a, x), a, [](std::span<const Dual> in, std::span<Dual> out) {
        out[0] = in[0] + in[2];
        out[1] = in[1] * cos(in[2]);
    });
    SmoothMap e(product(a, x), Space::lines(1), [k](std::span<const Dual> in, std::span<Dual> out) {
        out[0] = 0.5 * k * abs2(in[2] - in[0]) + in[1] * in[2];
    });
    return {a, a, x, euclidean(x, MetricSign::Descent), std::move(w), std::move(e), {}, "spring"};
}

std::vector<double> values(const SmoothMap& f, std::span<const double> x) { return f.values(x); }

void check_pointwise_equal(const OpenSystem& s, const OpenSystem& t, std::mt19937_64& rng, double tol, int samples = 100) {
    REQUIRE(s.dom() == t.dom());
    REQUIRE(s.cod() == t.cod());
    REQUIRE(s.state() == t.state());
    const Space full = product(s.dom(), s.state());
    for (int k = 0; k < samples; ++k) {
        const Point p = random_point(full, rng);
        const auto ws = values(s.output(), p.coords());
        const auto wt = values(t.output(), p.coords());
        for (std::size_t i = 0; i < ws.size(); ++i) CHECK(oracle::rel_close(ws[i], wt[i], tol));
        CHECK(oracle::rel_close(values(s.energy(), p.coords())[0], values(t.energy(), p.coords())[0], tol));
        const auto x = slice(p.coords(), s.dom().dim(), s.state().dim());
        CHECK(s.reaction().matrix(x) == t.reaction().matrix(x));
    }
}

}  // namespace

TEST_CASE("constructor validates shapes") {
    const Space a = Space::lines(1);
    const Space x = Space::lines(1);
    const SmoothMap w = projection(product(a, x), 0, a);
    const SmoothMap e = constant_map(product(a, x), Space::lines(1), {0});
    CHECK_NOTHROW(OpenSystem(a, a, x, euclidean(x, MetricSign::Ascent), w, e));
    CHECK_THROWS_AS(OpenSystem(a, Space::lines(2), x, euclidean(x, MetricSign::Ascent), w, e), SpaceMismatch);
    CHECK_THROWS_AS(OpenSystem(a, a, x, euclidean(Space::lines(2), MetricSign::Ascent), w, e), SpaceMismatch);
    CHECK_THROWS_AS(OpenSystem(a, a, x, euclidean(x, MetricSign::Ascent), w, identity_map(product(a, x))), ShapeError);
    CHECK_THROWS_AS(OpenSystem(a, a, x, euclidean(x, MetricSign::Ascent), w, e, {"p", "q"}), DimensionError);
    CHECK(OpenSystem(a, a, x, euclidean(x, MetricSign::Ascent), w, e).labels() == std::vector<std::string>{"x1"});
}

TEST_CASE("identity system") {
    const OpenSystem id = identity(Space::lines(4));
    CHECK(id.state().dim() == 0);
    CHECK(id.energy().values(std::vector<double>{1, 2, 3, 4})[0] == 0.0);
    const auto v = state_velocity(id, std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 1, 1, 1}, {});
    CHECK(v.empty());
    const OpenSystem unit = identity(Space{});
    CHECK(unit.dom().dim() == 0);
    CHECK(unit.cod().dim() == 0);
}

TEST_CASE("identity is a unit for compose and tensor") {
    std::mt19937_64 rng(3);
    for (const OpenSystem& s : {pendulum({}), spring(2.0), chain(2)}) {
        check_pointwise_equal(compose(identity(s.dom()), s), s, rng, 0.0, 30);
        check_pointwise_equal(compose(s, identity(s.cod())), s, rng, 0.0, 30);
        check_pointwise_equal(tensor(identity(Space{}), s), s, rng, 0.0, 30);
        check_pointwise_equal(tensor(s, identity(Space{})), s, rng, 0.0, 30);
    }
}

TEST_CASE("composite energy matches hand-threaded component energies") {
    const PendulumParams p1{1.3, 0.7, 9.81};
    const PendulumParams p2{0.6, 1.4, 9.81};
    const OpenSystem s1 = pendulum(p1);
    const OpenSystem s2 = pendulum(p2);
    const OpenSystem c = compose(s1, s2);
    CHECK(c.state() == Space({Factor::Circle, Factor::Line, Factor::Circle, Factor::Line}));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const auto a = oracle::random_vec(rng, 4);
        const auto x = oracle::random_vec(rng, 4);
        // first bob by hand
        const double l1 = p1.length, m1 = p1.mass, i1 = m1 * l1 * l1;
        const double w1[4] = {a[0] + l1 * std::cos(x[0]), a[1] + l1 * std::sin(x[0]),
                              a[2] - l1 * (x[1] / i1) * std::sin(x[0]), a[3] + l1 * (x[1] / i1) * std::cos(x[0])};
        const double e1 = 0.5 * m1 * (w1[2] * w1[2] + w1[3] * w1[3]) + m1 * p1.gravity * w1[1];
        const double l2 = p2.length, m2 = p2.mass, i2 = m2 * l2 * l2;
        const double v2x = w1[2] - l2 * (x[3] / i2) * std::sin(x[2]);
        const double v2y = w1[3] + l2 * (x[3] / i2) * std::cos(x[2]);
        const double e2 = 0.5 * m2 * (v2x * v2x + v2y * v2y) + m2 * p2.gravity * (w1[1] + l2 * std::sin(x[2]));
        const auto full = concat(a, x);
        CHECK(oracle::rel_close(c.energy().values(full)[0], e1 + e2, 1e-13));
        const auto w = c.output().values(full);
        CHECK(oracle::rel_close(w[0], w1[0] + l2 * std::cos(x[2]), 1e-13));
        CHECK(oracle::rel_close(w[3], v2y, 1e-13));
    }
}

TEST_CASE("double pendulum energy is the sum of bob energies") {
    // anchored at rest: E = ½m|v1|² + ½m|v2|² + m g h1 + m g h2
    const ClosedSystem dp = anchored_chain(2);
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
        const auto x = oracle::random_vec(rng, 4);
        const double v1x = -std::sin(x[0]) * x[1], v1y = std::cos(x[0]) * x[1];
        const double v2x = v1x - std::sin(x[2]) * x[3], v2y = v1y + std::cos(x[2]) * x[3];
        const double h1 = std::sin(x[0]), h2 = h1 + std::sin(x[2]);
        const double e = 0.5 * (v1x * v1x + v1y * v1y) + 0.5 * (v2x * v2x + v2y * v2y) + 9.81 * h1 + 9.81 * h2;
        CHECK(oracle::rel_close(dp.energy_at(x), e, 1e-13));
    }
}

TEST_CASE("compose is associative") {
    std::mt19937_64 rng(11);
    const OpenSystem a = pendulum({1, 1, 9.81});
    const OpenSystem b = pendulum({2, 0.5, 3.7});
    const OpenSystem c = pendulum({0.5, 2, 9.81});
    check_pointwise_equal(compose(compose(a, b), c), compose(a, compose(b, c)), rng, 1e-12);
    const OpenSystem s1 = spring(1), s2 = spring(3), s3 = spring(0.5);
    check_pointwise_equal(compose(compose(s1, s2), s3), compose(s1, compose(s2, s3)), rng, 1e-12);
    CHECK(compose(compose(a, b), c).reaction().blocks() == compose(a, compose(b, c)).reaction().blocks());
}

TEST_CASE("compose rejects mismatched interfaces") {
    CHECK_THROWS_AS(compose(pendulum({}), spring(1)), SpaceMismatch);
    CHECK_THROWS_AS(compose(discard(), pendulum({})), SpaceMismatch);
}

TEST_CASE("tensor shapes and interchange law") {
    const OpenSystem t = tensor(pendulum({}), spring(1));
    CHECK(t.state().dim() == 3);
    CHECK(t.dom() == Space::lines(6));
    CHECK(t.labels() == std::vector<std::string>{"theta", "L", "x1"});

    // states are (x1, x2, x3, x4) on the left and (x1, x3, x2, x4) on the right
    std::mt19937_64 rng(13);
    const OpenSystem s1 = pendulum({1, 1, 9.81}), s2 = pendulum({2, 0.5, 3.7});
    const OpenSystem s3 = spring(1), s4 = spring(2);
    const OpenSystem lhs = tensor(compose(s1, s2), compose(s3, s4));
    const OpenSystem rhs = compose(tensor(s1, s3), tensor(s2, s4));
    REQUIRE(lhs.dom() == rhs.dom());
    REQUIRE(lhs.cod() == rhs.cod());
    // a1 (4), a3 (2), then states x1 (2), x2 (2), x3 (1), x4 (1)
    const std::vector<std::size_t> to_rhs{0, 1, 2, 3, 4, 5, 6, 7, 10, 8, 9, 11};
    for (int k = 0; k < 100; ++k) {
        const Point p = random_point(product(lhs.dom(), lhs.state()), rng);
        std::vector<double> q(p.size());
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = p[to_rhs[i]];
        const auto wl = lhs.output().values(p.coords());
        const auto wr = rhs.output().values(q);
        for (std::size_t i = 0; i < wl.size(); ++i) CHECK(oracle::rel_close(wl[i], wr[i], 1e-12));
        CHECK(oracle::rel_close(lhs.energy().values(p.coords())[0], rhs.energy().values(q)[0], 1e-12));
        const Matrix rl = lhs.reaction().matrix(slice(p.coords(), 6, 6));
        const Matrix rr = rhs.reaction().matrix(slice(q, 6, 6));
        for (Eigen::Index i = 0; i < 6; ++i)
            for (Eigen::Index j = 0; j < 6; ++j)
                CHECK(rr(i, j) == rl(static_cast<Eigen::Index>(to_rhs[6 + static_cast<std::size_t>(i)] - 6),
                                     static_cast<Eigen::Index>(to_rhs[6 + static_cast<std::size_t>(j)] - 6)));
    }
}

TEST_CASE("tensor then close matches separate simulations") {
    const OpenSystem s1 = compose(compose(anchor(), pendulum({})), discard());
    const OpenSystem s2 = compose(compose(anchor(0.5, 1), pendulum({2, 0.5, 3.7})), discard());
    const ClosedSystem both = close(tensor(s1, s2), std::vector<double>{});
    const IntegratorConfig cfg{Method::RK4, 1e-3, 500};
    const Trajectory t = integrate(both, normalize(both.state(), {4.5, 0.1, 1.0, -0.3}), cfg);
    const ClosedSystem c1 = close(s1, std::vector<double>{});
    const ClosedSystem c2 = close(s2, std::vector<double>{});
    const Trajectory t1 = integrate(c1, normalize(c1.state(), {4.5, 0.1}), cfg);
    const Trajectory t2 = integrate(c2, normalize(c2.state(), {1.0, -0.3}), cfg);
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        CHECK(oracle::rel_close(t.states[i][0], t1.states[i][0], 1e-12));
        CHECK(oracle::rel_close(t.states[i][1], t1.states[i][1], 1e-12));
        CHECK(oracle::rel_close(t.states[i][2], t2.states[i][0], 1e-12));
        CHECK(oracle::rel_close(t.states[i][3], t2.states[i][1], 1e-12));
    }
}

TEST_CASE("closed pendulum energy and vector field") {
    const OpenSystem p = pendulum({2, 0.5, 3.7});
    const ClosedSystem c = close(p, std::vector<double>{0, 0, 0, 0});
    const double inertia = 2 * 0.25;
    std::mt19937_64 rng(17);
    for (int k = 0; k < 50; ++k) {
        const auto x = oracle::random_vec(rng, 2);
        CHECK(oracle::rel_close(c.energy_at(x), x[1] * x[1] / (2 * inertia) + 2 * 3.7 * 0.5 * std::sin(x[0]), 1e-13));
        const auto v = c.velocity(x);
        const auto ref = oracle::pendulum_field(2, 0.5, 3.7, x[0], x[1]);
        CHECK(oracle::rel_close(v[0], ref[0], 1e-13));
        CHECK(oracle::rel_close(v[1], ref[1], 1e-13));
    }
    const auto eq = c.velocity(std::vector<double>{pi / 2, 0});
    CHECK(std::abs(eq[1]) < 1e-15);
}

TEST_CASE("closing a composite equals closing the composition of closed parts") {
    const OpenSystem full = compose(compose(anchor(), chain(2)), discard());
    const ClosedSystem a = close(full, std::vector<double>{});
    const ClosedSystem b = close(chain(2), std::vector<double>{0, 0, 0, 0});
    std::mt19937_64 rng(19);
    for (int k = 0; k < 50; ++k) {
        const auto x = oracle::random_vec(rng, 4);
        CHECK(a.energy_at(x) == b.energy_at(x));
    }
}

TEST_CASE("zero energy gives a zero field") {
    const Space x = Space::lines(3);
    const ClosedSystem s(x, oplus(canonical_symplectic(Space::lines(1)), euclidean(Space::lines(1), MetricSign::Ascent)),
                         constant_map(x, Space::lines(1), {7}));
    CHECK(s.velocity(std::vector<double>{1, 2, 3}) == std::vector<double>{0, 0, 0});
}

TEST_CASE("open vector field includes the pulled back output covector") {
    const OpenSystem p = pendulum({});
    const Point a = normalize(p.dom(), {0.1, 0.2, 0.3, 0.4});
    const Point x = normalize(p.state(), {1.0, 0.5});
    const auto ax = concat(a.coords(), x.coords());
    const Point b = normalize(p.cod(), p.output().values(ax));
    const std::vector<double> beta{1, -1, 0.5, 2};
    const Tangent v = vector_field(p, a, Covector(b, beta), x);
    // independent: J = [[0,1],[-1,0]] on the x-slot of (fd Jacobian of w)ᵀβ + dE
    const auto jw = oracle::fd_jacobian([&](std::span<const double> z) { return p.output().values(z); }, ax);
    const auto je = oracle::fd_jacobian([&](std::span<const double> z) { return p.energy().values(z); }, ax);
    double cov[2];
    for (int j = 0; j < 2; ++j) {
        cov[j] = je[0][4 + j];
        for (int i = 0; i < 4; ++i) cov[j] += jw[i][4 + j] * beta[i];
    }
    CHECK(oracle::rel_close(v.components[0], cov[1], 1e-6));
    CHECK(oracle::rel_close(v.components[1], -cov[0], 1e-6));

    CHECK_THROWS_AS(vector_field(p, a, Covector(a, beta), x), FiberError);
}

TEST_CASE("antisymmetric reactions conserve energy to first order") {
    std::mt19937_64 rng(23);
    for (std::size_t n : {1u, 2u, 4u}) {
        const ClosedSystem s = anchored_chain(n, {1.5, 0.8, 9.81});
        for (int k = 0; k < 100; ++k) {
            const Point x = random_point(s.state(), rng);
            const auto de = gradient(s.energy(), x.coords());
            const auto v = s.velocity(x.coords());
            double dot = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) dot += de[i] * v[i];
            CHECK(std::abs(dot) <= 1e-12);
        }
    }
}

TEST_CASE("positive semidefinite ascent reactions never decrease the potential") {
    std::mt19937_64 rng(29);
    const Space x = Space::lines(3);
    const SmoothMap s(x, Space::lines(1), [](std::span<const Dual> in, std::span<Dual> out) {
        out[0] = sin(in[0]) * in[1] - exp(0.1 * in[2]);
    });
    const ClosedSystem sys = gradient_system(x, s,
                                             [](std::span<const double> p) {
                                                 Matrix g = Matrix::Identity(3, 3);
                                                 g(0, 0) = 1 + p[0] * p[0];
                                                 g(1, 2) = g(2, 1) = 0.2;
                                                 return g;
                                             },
                                             MetricSign::Ascent);
    for (int k = 0; k < 100; ++k) {
        const Point p = random_point(x, rng);
        const auto ds = gradient(sys.energy(), p.coords());
        const auto v = sys.velocity(p.coords());
        double dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += ds[i] * v[i];
        CHECK(dot >= -1e-12);
    }
}

TEST_CASE("as_open round trip") {
    const ClosedSystem h = harmonic_oscillator(2, 3);
    const OpenSystem o = as_open(h, "osc");
    CHECK(o.dom().dim() == 0);
    CHECK(o.cod().dim() == 0);
    const ClosedSystem back = close(o, std::vector<double>{});
    const std::vector<double> x{0.4, -1.1};
    CHECK(back.velocity(x) == h.velocity(x));
    CHECK(back.labels() == h.labels());
}
