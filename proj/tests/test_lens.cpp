#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "openerg/lens.hpp"
#include "openerg/stdlib.hpp"

using namespace openerg;

namespace {

Lens linear_lens(const Matrix& m) {
    const Space dom = Space::lines(static_cast<std::size_t>(m.cols()));
    const Space cod = Space::lines(static_cast<std::size_t>(m.rows()));
    return cotangent_lens(linear_map(dom, cod, m));
}

SmoothMap bend() {
    return {Space::lines(3), Space::lines(2), [](std::span<const Dual> x, std::span<Dual> y) {
                y[0] = sin(x[0]) * x[1] + x[2];
                y[1] = exp(0.2 * x[1]) * cos(x[2]);
            }};
}

SmoothMap fold() {
    return {Space::lines(2), Space::lines(2), [](std::span<const Dual> x, std::span<Dual> y) {
                y[0] = x[0] * x[1];
                y[1] = sqrt(1.0 + x[0] * x[0]);
            }};
}

void check_same(const Lens& l, const Lens& r, std::mt19937_64& rng, double tol, int samples = 100) {
    REQUIRE(l.dom() == r.dom());
    REQUIRE(l.cod() == r.cod());
    for (int k = 0; k < samples; ++k) {
        const Point x = random_point(l.dom().base, rng);
        const auto fl = l.forward(x.coords());
        const auto fr = r.forward(x.coords());
        for (std::size_t i = 0; i < fl.size(); ++i) CHECK(oracle::rel_close(fl[i], fr[i], tol));
        const auto beta = oracle::random_vec(rng, l.cod().fiber_dim());
        const auto bl = l.backward(x.coords(), beta);
        const auto br = r.backward(x.coords(), beta);
        for (std::size_t i = 0; i < bl.size(); ++i) CHECK(oracle::rel_close(bl[i], br[i], tol));
    }
}

void check_same(const OpenODEMorphism& a, const OpenODEMorphism& b, std::mt19937_64& rng, double tol) {
    CHECK(a.dom == b.dom);
    CHECK(a.cod == b.cod);
    CHECK(a.param == b.param);
    check_same(a.wiring, b.wiring, rng, tol);
    check_same(a.ode, b.ode, rng, tol, 20);
}

}  // namespace

TEST_CASE("interfaces") {
    const Space cl({Factor::Circle, Factor::Line});
    CHECK(cotangent_interface(cl).fiber_dim() == 2);
    CHECK(cotangent_interface(cl).to_string() == "<T*[Circle,Line], [Circle,Line]>");
    CHECK(tangent_interface(Space{}).fiber_dim() == 0);
    CHECK(tensor(cotangent_interface(cl), tangent_interface(Space::lines(1))).base.dim() == 3);
    CHECK(cotangent_interface(cl) != tangent_interface(cl));
}

TEST_CASE("identity lens is a unit") {
    std::mt19937_64 rng(1);
    const Lens l = cotangent_lens(bend());
    check_same(lens_compose(identity_lens(l.dom()), l), l, rng, 0.0);
    check_same(lens_compose(l, identity_lens(l.cod())), l, rng, 0.0);
    check_same(cotangent_lens(identity_map(Space::lines(3))), identity_lens(cotangent_interface(Space::lines(3))),
               rng, 0.0);
}

TEST_CASE("linear lenses compose by transposes in reverse order") {
    Matrix a(2, 3), b(2, 2);
    a << 1, 2, 3, -1, 0, 4;
    b << 2, 1, 0.5, -3;
    const Lens l = lens_compose(linear_lens(a), linear_lens(b));
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        const auto x = oracle::random_vec(rng, 3);
        const auto g = oracle::random_vec(rng, 2);
        const Eigen::VectorXd ref = a.transpose() * b.transpose() * Eigen::Map<const Eigen::VectorXd>(g.data(), 2);
        const auto back = l.backward(x, g);
        for (int i = 0; i < 3; ++i) CHECK(oracle::rel_close(back[static_cast<std::size_t>(i)], ref(i), 1e-14));
        // backward of a linear lens does not depend on the base point
        CHECK(linear_lens(a).backward(x, g) == linear_lens(a).backward(std::vector<double>{0, 0, 0}, g));
    }
}

TEST_CASE("lens composition is associative and checks interfaces") {
    std::mt19937_64 rng(3);
    const Lens l1 = cotangent_lens(bend());
    const Lens l2 = cotangent_lens(fold());
    const Lens l3 = cotangent_lens(fold());
    check_same(lens_compose(lens_compose(l1, l2), l3), lens_compose(l1, lens_compose(l2, l3)), rng, 1e-12);
    CHECK_THROWS_AS(lens_compose(l2, l1), SpaceMismatch);
}

TEST_CASE("backward maps are linear in the fiber argument") {
    std::mt19937_64 rng(4);
    const OpenODEMorphism m = semantics(chain(2));
    const Lens c = collapse(m);
    for (const Lens* l : {&m.wiring, &m.ode, &c}) {
        for (int k = 0; k < 100; ++k) {
            const Point x = random_point(l->dom().base, rng);
            const std::size_t n = l->cod().fiber_dim();
            const auto b1 = oracle::random_vec(rng, n), b2 = oracle::random_vec(rng, n);
            const auto s = oracle::random_vec(rng, 2);
            std::vector<double> mix(n);
            for (std::size_t i = 0; i < n; ++i) mix[i] = s[0] * b1[i] + s[1] * b2[i];
            // the affine part dE is subtracted via the zero covector
            const std::vector<double> zero(n, 0.0);
            const auto r0 = l->backward(x.coords(), zero);
            const auto r = l->backward(x.coords(), mix);
            const auto r1 = l->backward(x.coords(), b1);
            const auto r2 = l->backward(x.coords(), b2);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double lhs = r[i] - r0[i];
                const double rhs = s[0] * (r1[i] - r0[i]) + s[1] * (r2[i] - r0[i]);
                CHECK(oracle::rel_close(lhs, rhs, 1e-12));
            }
        }
    }
    // cotangent lenses are strictly linear
    const Lens l = cotangent_lens(bend());
    for (int k = 0; k < 100; ++k) {
        const auto x = oracle::random_vec(rng, 3);
        const auto b1 = oracle::random_vec(rng, 2), b2 = oracle::random_vec(rng, 2), s = oracle::random_vec(rng, 2);
        const std::vector<double> mix{s[0] * b1[0] + s[1] * b2[0], s[0] * b1[1] + s[1] * b2[1]};
        const auto r = l.backward(x, mix), r1 = l.backward(x, b1), r2 = l.backward(x, b2);
        for (std::size_t i = 0; i < 3; ++i) CHECK(oracle::rel_close(r[i], s[0] * r1[i] + s[1] * r2[i], 1e-12));
    }
}

TEST_CASE("cotangent lens is functorial") {
    std::mt19937_64 rng(5);
    check_same(cotangent_lens(compose(bend(), fold())), lens_compose(cotangent_lens(bend()), cotangent_lens(fold())),
               rng, 1e-12);
}

TEST_CASE("lens tensor acts componentwise") {
    const Lens t = lens_tensor(cotangent_lens(bend()), cotangent_lens(fold()));
    CHECK(t.dom().base.dim() == 5);
    CHECK(t.cod().fiber_dim() == 4);
    std::mt19937_64 rng(6);
    const auto x = oracle::random_vec(rng, 5);
    const auto b = oracle::random_vec(rng, 4);
    const auto r = t.backward(x, b);
    const auto r1 = cotangent_lens(bend()).backward(slice(x, 0, 3), slice(b, 0, 2));
    const auto r2 = cotangent_lens(fold()).backward(slice(x, 3, 2), slice(b, 2, 2));
    CHECK(r == concat(r1, r2));
}

TEST_CASE("semantics of a single pendulum") {
    const OpenSystem p = pendulum({});
    const OpenODEMorphism m = semantics(p);
    CHECK(m.param == cotangent_interface(p.state()));
    CHECK(m.dom == cotangent_interface(Space::lines(4)));
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const Point ax = random_point(product(p.dom(), p.state()), rng);
        CHECK(m.wiring.backward(ax.coords(), std::vector<double>(4, 0.0)) == gradient(p.energy(), ax.coords()));
        CHECK(m.wiring.forward(ax.coords()) == p.output().values(ax.coords()));
        const auto x = slice(ax.coords(), 4, 2);
        CHECK(m.ode.forward(x) == x);
        const auto alpha = oracle::random_vec(rng, 2);
        CHECK(m.ode.backward(x, alpha) == std::vector<double>{alpha[1], -alpha[0]});
    }
}

TEST_CASE("semantics of the identity system") {
    const OpenODEMorphism m = semantics(identity(Space::lines(2)));
    CHECK(m.param.fiber_dim() == 0);
    CHECK(m.wiring.backward(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == std::vector<double>{3, 4});
}

TEST_CASE("semantics of a composite matches the expanded covector formula") {
    // T*(w ; w')(β) + d(E + w*E'): differentiate the hand-threaded composite directly
    const OpenSystem s1 = pendulum({1.2, 0.9, 9.81});
    const OpenSystem s2 = pendulum({0.7, 1.1, 9.81});
    const OpenODEMorphism m = semantics(compose(s1, s2));
    auto threaded = [&](std::span<const Dual> z) {
        // z = (a, x, x')
        std::vector<Dual> ax(z.begin(), z.begin() + 6);
        std::vector<Dual> b = s1.output()(ax);
        std::vector<Dual> bx = b;
        bx.insert(bx.end(), z.begin() + 6, z.end());
        std::vector<Dual> out = s2.output()(bx);
        out.push_back(s1.energy()(ax)[0] + s2.energy()(bx)[0]);
        return out;
    };
    std::mt19937_64 rng(8);
    for (int k = 0; k < 100; ++k) {
        const auto z = oracle::random_vec(rng, 8);
        const auto beta = oracle::random_vec(rng, 4);
        const auto got = m.wiring.backward(z, beta);
        for (std::size_t j = 0; j < 8; ++j) {
            std::vector<double> e(8, 0.0);
            e[j] = 1.0;
            const auto col = derivative(threaded, z, e);
            const double ref = col[0] * beta[0] + col[1] * beta[1] + col[2] * beta[2] + col[3] * beta[3] + col[4];
            CHECK(oracle::rel_close(got[j], ref, 1e-12));
        }
    }
}

TEST_CASE("semantics preserves composition") {
    std::mt19937_64 rng(9);
    const OpenSystem a = pendulum({1, 1, 9.81});
    const OpenSystem b = pendulum({2, 0.5, 3.7});
    check_same(semantics(compose(a, b)), ode_compose(semantics(a), semantics(b)), rng, 1e-12);
    const OpenSystem c = compose(compose(anchor(0.3, -0.2), chain(2)), discard());
    check_same(semantics(compose(anchor(0.3, -0.2), chain(2))),
               ode_compose(semantics(anchor(0.3, -0.2)), semantics(chain(2))), rng, 1e-12);
    check_same(semantics(c), ode_compose(semantics(compose(anchor(0.3, -0.2), chain(2))), semantics(discard())), rng,
               1e-12);
    CHECK_THROWS_AS(ode_compose(semantics(discard()), semantics(a)), SpaceMismatch);
}

TEST_CASE("semantics preserves tensor") {
    std::mt19937_64 rng(10);
    const OpenSystem a = pendulum({1, 1, 9.81});
    const OpenSystem b = compose(pendulum({2, 0.5, 3.7}), discard());
    check_same(semantics(tensor(a, b)), ode_tensor(semantics(a), semantics(b)), rng, 1e-12);
    check_same(semantics(tensor(b, a)), ode_tensor(semantics(b), semantics(a)), rng, 1e-12);
}

TEST_CASE("collapse reproduces the state velocity") {
    const PendulumParams pp{};
    const OpenSystem closed_p = compose(compose(anchor(), pendulum(pp)), discard());
    const Lens c = collapse(semantics(closed_p));
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        const Point x = random_point(closed_p.state(), rng);
        const auto v = c.backward(x.coords(), {});
        const auto ref = oracle::pendulum_field(1, 1, 9.81, x[0], x[1]);
        CHECK(oracle::rel_close(v[0], ref[0], 1e-13));
        CHECK(oracle::rel_close(v[1], ref[1], 1e-13));
    }

    for (const OpenSystem& s : {pendulum({}), chain(3), anchor(), discard(), identity(Space::lines(2)),
                                tensor(pendulum({}), chain(2))}) {
        const Lens cs = collapse(semantics(s));
        const std::size_t na = s.dom().dim();
        for (int k = 0; k < 100; ++k) {
            const Point ax = random_point(product(s.dom(), s.state()), rng);
            const std::vector<double> zero(s.cod().dim(), 0.0);
            const auto a = slice(ax.coords(), 0, na);
            const auto x = slice(ax.coords(), na, s.state().dim());
            const auto back = cs.backward(ax.coords(), zero);
            CHECK(slice(back, na, x.size()) == state_velocity(s, a, zero, x));
        }
    }
}

TEST_CASE("collapse with an empty parameter is the wiring") {
    std::mt19937_64 rng(12);
    const OpenODEMorphism m = semantics(identity(Space::lines(3)));
    check_same(collapse(m), m.wiring, rng, 0.0);
}

TEST_CASE("collapse commutes with composition") {
    std::mt19937_64 rng(13);
    const OpenSystem a = pendulum({1, 1, 9.81});
    const OpenSystem b = pendulum({2, 0.5, 3.7});
    const Lens direct = collapse(ode_compose(semantics(a), semantics(b)));
    const Lens via = collapse(semantics(compose(a, b)));
    REQUIRE(direct.dom() == via.dom());
    check_same(direct, via, rng, 1e-12);
}
