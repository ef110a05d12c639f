#include "openerg/system.hpp"

namespace openerg {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = "x" + std::to_string(i + 1);
    return l;
}

std::vector<std::string> join(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

SmoothMap zero_energy(const Space& dom) { return constant_map(dom, Space::lines(1), {0.0}); }

}  // namespace

OpenSystem::OpenSystem(Space dom, Space cod, Space state, Reaction reaction, SmoothMap output, SmoothMap energy,
                       std::vector<std::string> labels, std::string name)
    : dom_(std::move(dom)),
      cod_(std::move(cod)),
      state_(std::move(state)),
      reaction_(std::move(reaction)),
      output_(std::move(output)),
      energy_(std::move(energy)),
      labels_(std::move(labels)),
      name_(std::move(name)) {
    const Space ax = product(dom_, state_);
    if (output_.dom() != ax)
        throw SpaceMismatch("output map domain " + output_.dom().to_string() + " is not A x X = " + ax.to_string());
    if (output_.cod() != cod_)
        throw SpaceMismatch("output map codomain " + output_.cod().to_string() + " is not B = " + cod_.to_string());
    if (energy_.dom() != ax)
        throw SpaceMismatch("energy domain " + energy_.dom().to_string() + " is not A x X = " + ax.to_string());
    if (energy_.cod() != Space::lines(1))
        throw ShapeError("energy must be scalar, got codomain " + energy_.cod().to_string());
    if (reaction_.space() != state_)
        throw SpaceMismatch("reaction lives on " + reaction_.space().to_string() + ", state is " + state_.to_string());
    if (labels_.empty()) labels_ = default_labels(state_.dim());
    if (labels_.size() != state_.dim()) throw DimensionError("state labels", state_.dim(), labels_.size());
}

OpenSystem OpenSystem::renamed(std::string name) const {
    OpenSystem s = *this;
    s.name_ = std::move(name);
    return s;
}

OpenSystem OpenSystem::relabeled(std::vector<std::string> labels) const {
    return {dom_, cod_, state_, reaction_, output_, energy_, std::move(labels), name_};
}

ClosedSystem::ClosedSystem(Space state, Reaction reaction, SmoothMap energy, std::vector<std::string> labels)
    : state_(std::move(state)), reaction_(std::move(reaction)), energy_(std::move(energy)), labels_(std::move(labels)) {
    if (energy_.dom() != state_)
        throw SpaceMismatch("energy domain " + energy_.dom().to_string() + " is not X = " + state_.to_string());
    if (energy_.cod() != Space::lines(1))
        throw ShapeError("energy must be scalar, got codomain " + energy_.cod().to_string());
    if (reaction_.space() != state_)
        throw SpaceMismatch("reaction lives on " + reaction_.space().to_string() + ", state is " + state_.to_string());
    if (labels_.empty()) labels_ = default_labels(state_.dim());
    if (labels_.size() != state_.dim()) throw DimensionError("state labels", state_.dim(), labels_.size());
}

std::vector<double> ClosedSystem::velocity(std::span<const double> x) const {
    return apply_matrix(reaction_.matrix(x), gradient(energy_, x));
}

double ClosedSystem::energy_at(std::span<const double> x) const { return energy_.values(x)[0]; }

OpenSystem identity(const Space& a) {
    return {a, a, Space{}, empty_reaction(), identity_map(a), zero_energy(a), {}, "id"};
}

OpenSystem compose(const OpenSystem& s1, const OpenSystem& s2) {
    if (s1.cod() != s2.dom())
        throw SpaceMismatch("cannot compose " + s1.name() + " : ... -> " + s1.cod().to_string() + " with " +
                            s2.name() + " : " + s2.dom().to_string() + " -> ...");
    const std::size_t na = s1.dom().dim();
    const std::size_t nx = s1.state().dim();
    const std::size_t nb = s2.dom().dim();
    const Space state = product(s1.state(), s2.state());
    const Space dom = product(s1.dom(), state);
    const SmoothMap& w1 = s1.output();
    const SmoothMap& w2 = s2.output();
    const SmoothMap& e1 = s1.energy();
    const SmoothMap& e2 = s2.energy();

    // (a, x, x') ↦ w'(w(a, x), x')
    SmoothMap w(dom, s2.cod(),
                [w1, w2, na, nx, nb](std::span<const Dual> in, std::span<Dual> out) {
                    std::vector<Dual> bx(nb + (in.size() - na - nx));
                    w1.apply(in.first(na + nx), std::span<Dual>(bx).first(nb));
                    std::copy(in.begin() + static_cast<std::ptrdiff_t>(na + nx), in.end(),
                              bx.begin() + static_cast<std::ptrdiff_t>(nb));
                    w2.apply(bx, out);
                },
                w1.name() + ";" + w2.name());

    // (a, x, x') ↦ E(a, x) + E'(w(a, x), x')
    SmoothMap e(dom, Space::lines(1),
                [w1, e1, e2, na, nx, nb](std::span<const Dual> in, std::span<Dual> out) {
                    std::vector<Dual> bx(nb + (in.size() - na - nx));
                    w1.apply(in.first(na + nx), std::span<Dual>(bx).first(nb));
                    std::copy(in.begin() + static_cast<std::ptrdiff_t>(na + nx), in.end(),
                              bx.begin() + static_cast<std::ptrdiff_t>(nb));
                    Dual first;
                    Dual second;
                    e1.apply(in.first(na + nx), std::span<Dual>(&first, 1));
                    e2.apply(bx, std::span<Dual>(&second, 1));
                    out[0] = first + second;
                },
                e1.name() + "+w*" + e2.name());

    return {s1.dom(),
            s2.cod(),
            state,
            oplus(s1.reaction(), s2.reaction()),
            std::move(w),
            std::move(e),
            join(s1.labels(), s2.labels()),
            s1.name() + " ; " + s2.name()};
}

OpenSystem tensor(const OpenSystem& s1, const OpenSystem& s2) {
    const std::size_t na1 = s1.dom().dim();
    const std::size_t na2 = s2.dom().dim();
    const std::size_t nx1 = s1.state().dim();
    const std::size_t nb1 = s1.cod().dim();
    const Space dom = product(s1.dom(), s2.dom());
    const Space state = product(s1.state(), s2.state());
    const Space full = product(dom, state);
    const SmoothMap& w1 = s1.output();
    const SmoothMap& w2 = s2.output();
    const SmoothMap& e1 = s1.energy();
    const SmoothMap& e2 = s2.energy();

    // (a1, a2, x1, x2) → (a1, x1), (a2, x2)
    auto split = [na1, na2, nx1](std::span<const Dual> in, std::vector<Dual>& ax1, std::vector<Dual>& ax2) {
        const auto x_begin = in.begin() + static_cast<std::ptrdiff_t>(na1 + na2);
        ax1.assign(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(na1));
        ax1.insert(ax1.end(), x_begin, x_begin + static_cast<std::ptrdiff_t>(nx1));
        ax2.assign(in.begin() + static_cast<std::ptrdiff_t>(na1), x_begin);
        ax2.insert(ax2.end(), x_begin + static_cast<std::ptrdiff_t>(nx1), in.end());
    };

    SmoothMap w(full, product(s1.cod(), s2.cod()),
                [w1, w2, split, nb1](std::span<const Dual> in, std::span<Dual> out) {
                    std::vector<Dual> ax1, ax2;
                    split(in, ax1, ax2);
                    w1.apply(ax1, out.first(nb1));
                    w2.apply(ax2, out.subspan(nb1));
                },
                w1.name() + "x" + w2.name());

    SmoothMap e(full, Space::lines(1),
                [e1, e2, split](std::span<const Dual> in, std::span<Dual> out) {
                    std::vector<Dual> ax1, ax2;
                    split(in, ax1, ax2);
                    Dual first;
                    Dual second;
                    e1.apply(ax1, std::span<Dual>(&first, 1));
                    e2.apply(ax2, std::span<Dual>(&second, 1));
                    out[0] = first + second;
                },
                e1.name() + "+" + e2.name());

    return {dom,
            product(s1.cod(), s2.cod()),
            state,
            oplus(s1.reaction(), s2.reaction()),
            std::move(w),
            std::move(e),
            join(s1.labels(), s2.labels()),
            "(" + s1.name() + " | " + s2.name() + ")"};
}

ClosedSystem close(const OpenSystem& s, std::span<const double> a) {
    if (a.size() != s.dom().dim()) throw DimensionError("closing parameter point", s.dom().dim(), a.size());
    const Point ap = normalize(s.dom(), a);
    std::vector<double> fixed(ap.coords().begin(), ap.coords().end());
    const SmoothMap& e = s.energy();
    SmoothMap ea(s.state(), Space::lines(1),
                 [e, fixed](std::span<const Dual> in, std::span<Dual> out) {
                     std::vector<Dual> ax(fixed.begin(), fixed.end());
                     ax.insert(ax.end(), in.begin(), in.end());
                     e.apply(ax, out);
                 },
                 e.name() + "|a");
    return {s.state(), s.reaction(), std::move(ea), s.labels()};
}

ClosedSystem close(const OpenSystem& s, const Point& a) { return close(s, a.coords()); }

OpenSystem as_open(const ClosedSystem& s, std::string name) {
    const Space& x = s.state();
    // A = R^0, so A × X = X and the energy is reused as is
    return {Space{}, Space{}, x, s.reaction(), constant_map(x, Space{}, {}), s.energy(), s.labels(), std::move(name)};
}

std::vector<double> wiring_covector(const OpenSystem& s, std::span<const double> a, std::span<const double> alpha_b,
                                    std::span<const double> x) {
    if (a.size() != s.dom().dim()) throw DimensionError("parameter point", s.dom().dim(), a.size());
    if (x.size() != s.state().dim()) throw DimensionError("state point", s.state().dim(), x.size());
    const std::vector<double> ax = concat(a, x);
    std::vector<double> cov = pullback_components(s.output(), ax, alpha_b);
    const std::vector<double> de = gradient(s.energy(), ax);
    for (std::size_t i = 0; i < cov.size(); ++i) cov[i] += de[i];
    return cov;
}

std::vector<double> state_velocity(const OpenSystem& s, std::span<const double> a, std::span<const double> alpha_b,
                                   std::span<const double> x) {
    const std::vector<double> cov = wiring_covector(s, a, alpha_b, x);
    const std::span<const double> alpha_x = std::span<const double>(cov).subspan(a.size());
    return apply_matrix(s.reaction().matrix(x), alpha_x);
}

Tangent vector_field(const OpenSystem& s, const Point& a, const Covector& alpha_b, const Point& x) {
    const Point b = normalize(s.cod(), s.output().values(concat(a.coords(), x.coords())));
    if (!same_point(s.cod(), b, alpha_b.base))
        throw FiberError("vector_field: output covector is not based at w(a, x)");
    return {x, state_velocity(s, a.coords(), alpha_b.components, x.coords())};
}

Tangent vector_field(const ClosedSystem& s, const Point& x) { return {x, s.velocity(x.coords())}; }

}  // namespace openerg
