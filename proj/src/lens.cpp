#include "openerg/lens.hpp"

#include <algorithm>

namespace openerg {

namespace {

/// Coordinate permutation x ↦ (x[perm[0]], x[perm[1]], ...).
SmoothMap permutation_map(const Space& dom, std::vector<std::size_t> perm) {
    std::vector<Factor> f;
    for (std::size_t p : perm) f.push_back(dom[p]);
    return {dom, Space(std::move(f)),
            [perm = std::move(perm)](std::span<const Dual> in, std::span<Dual> out) {
                for (std::size_t i = 0; i < perm.size(); ++i) out[i] = in[perm[i]];
            },
            "perm"};
}

}  // namespace

std::string LensInterface::to_string() const {
    std::string s = "<";
    std::size_t cot = 0;
    for (FiberKind k : fiber) cot += k == FiberKind::Cotangent;
    if (fiber.empty())
        s += "0";
    else if (cot == fiber.size())
        s += "T*";
    else if (cot == 0)
        s += "T";
    else
        s += "mixed ";
    return s + base.to_string() + ", " + base.to_string() + ">";
}

LensInterface cotangent_interface(const Space& base) {
    return {base, std::vector<FiberKind>(base.dim(), FiberKind::Cotangent)};
}

LensInterface tangent_interface(const Space& base) {
    return {base, std::vector<FiberKind>(base.dim(), FiberKind::Tangent)};
}

LensInterface tensor(const LensInterface& a, const LensInterface& b) {
    std::vector<FiberKind> f = a.fiber;
    f.insert(f.end(), b.fiber.begin(), b.fiber.end());
    return {product(a.base, b.base), std::move(f)};
}

Lens::Lens(LensInterface dom, LensInterface cod, SmoothMap forward, Backward backward)
    : dom_(std::move(dom)),
      cod_(std::move(cod)),
      forward_(std::move(forward)),
      backward_(std::make_shared<const Backward>(std::move(backward))) {
    if (forward_.dom() != dom_.base || forward_.cod() != cod_.base)
        throw SpaceMismatch("lens forward map " + forward_.dom().to_string() + " -> " + forward_.cod().to_string() +
                            " does not match interfaces " + dom_.to_string() + " -> " + cod_.to_string());
}

std::vector<double> Lens::backward(std::span<const double> x, std::span<const double> beta) const {
    if (x.size() != dom_.base.dim()) throw DimensionError("lens base point", dom_.base.dim(), x.size());
    if (beta.size() != cod_.fiber_dim()) throw DimensionError("lens fiber vector", cod_.fiber_dim(), beta.size());
    std::vector<double> r = (*backward_)(x, beta);
    if (r.size() != dom_.fiber_dim()) throw DimensionError("lens backward result", dom_.fiber_dim(), r.size());
    return r;
}

Lens identity_lens(const LensInterface& i) {
    return {i, i, identity_map(i.base),
            [](std::span<const double>, std::span<const double> beta) {
                return std::vector<double>(beta.begin(), beta.end());
            }};
}

Lens lens_compose(const Lens& l1, const Lens& l2) {
    if (l1.cod() != l2.dom())
        throw SpaceMismatch("lens interface mismatch: " + l1.cod().to_string() + " vs " + l2.dom().to_string());
    return {l1.dom(), l2.cod(), compose(l1.forward_map(), l2.forward_map()),
            [l1, l2](std::span<const double> x, std::span<const double> gamma) {
                const std::vector<double> y = l1.forward(x);
                return l1.backward(x, l2.backward(y, gamma));
            }};
}

Lens lens_tensor(const Lens& l1, const Lens& l2) {
    const std::size_t n1 = l1.dom().base.dim();
    const std::size_t k1 = l1.cod().fiber_dim();
    return {tensor(l1.dom(), l2.dom()), tensor(l1.cod(), l2.cod()), cross(l1.forward_map(), l2.forward_map()),
            [l1, l2, n1, k1](std::span<const double> x, std::span<const double> beta) {
                std::vector<double> r = l1.backward(x.first(n1), beta.first(k1));
                const std::vector<double> r2 = l2.backward(x.subspan(n1), beta.subspan(k1));
                r.insert(r.end(), r2.begin(), r2.end());
                return r;
            }};
}

Lens cotangent_lens(const SmoothMap& f) {
    return {cotangent_interface(f.dom()), cotangent_interface(f.cod()), f,
            [f](std::span<const double> x, std::span<const double> beta) {
                return pullback_components(f, x, beta);
            }};
}

OpenODEMorphism semantics(const OpenSystem& s) {
    const LensInterface dom = cotangent_interface(s.dom());
    const LensInterface cod = cotangent_interface(s.cod());
    const LensInterface param = cotangent_interface(s.state());
    const Reaction& r = s.reaction();
    Lens ode(tangent_interface(s.state()), param, identity_map(s.state()),
             [r](std::span<const double> x, std::span<const double> alpha) {
                 return apply_matrix(r.matrix(x), alpha);
             });
    const SmoothMap& w = s.output();
    const SmoothMap& e = s.energy();
    Lens wiring(tensor(dom, param), cod, w, [w, e](std::span<const double> ax, std::span<const double> beta) {
        std::vector<double> cov = pullback_components(w, ax, beta);
        const std::vector<double> de = gradient(e, ax);
        for (std::size_t i = 0; i < cov.size(); ++i) cov[i] += de[i];
        return cov;
    });
    return {dom, cod, param, std::move(ode), std::move(wiring)};
}

OpenODEMorphism ode_compose(const OpenODEMorphism& m1, const OpenODEMorphism& m2) {
    if (m1.cod != m2.dom)
        throw SpaceMismatch("open ODE interface mismatch: " + m1.cod.to_string() + " vs " + m2.dom.to_string());
    // (A ⊗ P1) ⊗ P2 → B ⊗ P2 → C; the reassociation is the identity on flattened coordinates
    Lens wiring = lens_compose(lens_tensor(m1.wiring, identity_lens(m2.param)), m2.wiring);
    return {m1.dom, m2.cod, tensor(m1.param, m2.param), lens_tensor(m1.ode, m2.ode), std::move(wiring)};
}

OpenODEMorphism ode_tensor(const OpenODEMorphism& m1, const OpenODEMorphism& m2) {
    const std::size_t na1 = m1.dom.base.dim();
    const std::size_t na2 = m2.dom.base.dim();
    const std::size_t np1 = m1.param.base.dim();
    const std::size_t np2 = m2.param.base.dim();
    // (A1, A2, P1, P2) → (A1, P1, A2, P2)
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < na1; ++i) perm.push_back(i);
    for (std::size_t i = 0; i < np1; ++i) perm.push_back(na1 + na2 + i);
    for (std::size_t i = 0; i < na2; ++i) perm.push_back(na1 + i);
    for (std::size_t i = 0; i < np2; ++i) perm.push_back(na1 + na2 + np1 + i);
    const LensInterface dom = tensor(m1.dom, m2.dom);
    const LensInterface param = tensor(m1.param, m2.param);
    const Lens shuffle = cotangent_lens(permutation_map(tensor(dom, param).base, std::move(perm)));
    Lens wiring = lens_compose(shuffle, lens_tensor(m1.wiring, m2.wiring));
    return {dom, tensor(m1.cod, m2.cod), param, lens_tensor(m1.ode, m2.ode), std::move(wiring)};
}

Lens collapse(const OpenODEMorphism& m) {
    const std::size_t na = m.dom.base.dim();
    const Lens wiring = m.wiring;
    const Lens ode = m.ode;
    return {tensor(m.dom, m.ode.dom()), m.cod, m.wiring.forward_map(),
            [wiring, ode, na](std::span<const double> ax, std::span<const double> beta) {
                std::vector<double> cov = wiring.backward(ax, beta);
                const std::span<const double> x = ax.subspan(na);
                const std::vector<double> v = ode.backward(x, std::span<const double>(cov).subspan(na));
                std::copy(v.begin(), v.end(), cov.begin() + static_cast<std::ptrdiff_t>(na));
                return cov;
            }};
}

}  // namespace openerg
