#include "openerg/maps.hpp"

#include <algorithm>
#include <cmath>

namespace openerg {

SmoothMap::SmoothMap(Space dom, Space cod, Program body, std::string name)
    : dom_(std::move(dom)),
      cod_(std::move(cod)),
      body_(std::make_shared<const Program>(std::move(body))),
      name_(std::move(name)) {}

void SmoothMap::apply(std::span<const Dual> in, std::span<Dual> out) const {
    if (in.size() != dom_.dim()) throw DimensionError("input of " + name_, dom_.dim(), in.size());
    if (out.size() != cod_.dim()) throw DimensionError("output of " + name_, cod_.dim(), out.size());
    (*body_)(in, out);
}

std::vector<Dual> SmoothMap::operator()(std::span<const Dual> in) const {
    std::vector<Dual> out(cod_.dim());
    apply(in, out);
    return out;
}

std::vector<double> SmoothMap::values(std::span<const double> x) const {
    const std::vector<Dual> in = lift(x);
    const std::vector<Dual> out = (*this)(in);
    std::vector<double> v(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) v[i] = out[i].value;
    return v;
}

Point eval(const SmoothMap& f, const Point& x) { return normalize(f.cod(), f.values(x.coords())); }

Matrix jacobian(const SmoothMap& f, std::span<const double> x) {
    const std::size_t n = f.dom().dim();
    const std::size_t m = f.cod().dim();
    if (x.size() != n) throw DimensionError("jacobian of " + f.name(), n, x.size());
    Matrix jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    std::vector<Dual> in = lift(x);
    std::vector<Dual> out(m);
    for (std::size_t j = 0; j < n; ++j) {
        in[j].deriv = 1.0;
        try {
            f.apply(in, out);
        } catch (const ScalarDomainError& e) {
            throw e.with_index(j);
        }
        in[j].deriv = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = out[i].deriv;
    }
    return jac;
}

Matrix jacobian(const SmoothMap& f, const Point& x) { return jacobian(f, x.coords()); }

std::vector<double> pullback_components(const SmoothMap& f, std::span<const double> x,
                                        std::span<const double> beta) {
    const std::size_t n = f.dom().dim();
    const std::size_t m = f.cod().dim();
    if (beta.size() != m) throw DimensionError("covector for pullback", m, beta.size());
    if (x.size() != n) throw DimensionError("base of pullback", n, x.size());
    std::vector<double> r(n, 0.0);
    std::vector<Dual> in = lift(x);
    std::vector<Dual> out(m);
    for (std::size_t j = 0; j < n; ++j) {
        in[j].deriv = 1.0;
        try {
            f.apply(in, out);
        } catch (const ScalarDomainError& e) {
            throw e.with_index(j);
        }
        in[j].deriv = 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += out[i].deriv * beta[i];
        r[j] = s;
    }
    return r;
}

std::vector<double> gradient(const SmoothMap& energy, std::span<const double> x) {
    if (energy.cod().dim() != 1)
        throw ShapeError("differential needs a scalar map, got codomain " + energy.cod().to_string());
    const std::size_t n = energy.dom().dim();
    if (x.size() != n) throw DimensionError("base of differential", n, x.size());
    std::vector<double> g(n);
    std::vector<Dual> in = lift(x);
    Dual out;
    for (std::size_t j = 0; j < n; ++j) {
        in[j].deriv = 1.0;
        try {
            energy.apply(in, std::span<Dual>(&out, 1));
        } catch (const ScalarDomainError& e) {
            throw e.with_index(j);
        }
        in[j].deriv = 0.0;
        g[j] = out.deriv;
    }
    return g;
}

Covector pullback(const SmoothMap& f, const Point& x, const Covector& beta) {
    const Point fx = eval(f, x);
    if (!same_point(f.cod(), fx, beta.base))
        throw FiberError("pullback through " + f.name() + ": covector is not based at f(x)");
    return {x, pullback_components(f, x.coords(), beta.components)};
}

Tangent pushforward(const SmoothMap& f, const Point& x, const Tangent& v) {
    if (!same_point(f.dom(), x, v.base))
        throw FiberError("pushforward through " + f.name() + ": vector is not based at x");
    const std::size_t m = f.cod().dim();
    std::vector<Dual> in = seeded(x.coords(), v.components);
    std::vector<Dual> out(m);
    f.apply(in, out);
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = out[i].deriv;
    return {normalize(f.cod(), f.values(x.coords())), std::move(d)};
}

Covector differential(const SmoothMap& energy, const Point& x) { return {x, gradient(energy, x.coords())}; }

std::vector<double> apply_matrix(const Matrix& m, std::span<const double> v) {
    if (static_cast<std::size_t>(m.cols()) != v.size())
        throw DimensionError("matrix-vector product", static_cast<std::size_t>(m.cols()), v.size());
    std::vector<double> r(static_cast<std::size_t>(m.rows()), 0.0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

SmoothMap identity_map(const Space& s) {
    return {s, s, [](std::span<const Dual> in, std::span<Dual> out) { std::copy(in.begin(), in.end(), out.begin()); },
            "id"};
}

SmoothMap projection(const Space& dom, std::size_t offset, const Space& cod) {
    if (offset + cod.dim() > dom.dim()) throw DimensionError("projection", dom.dim(), offset + cod.dim());
    for (std::size_t i = 0; i < cod.dim(); ++i)
        if (dom[offset + i] != cod[i]) throw SpaceMismatch("projection onto " + cod.to_string() + " from " + dom.to_string());
    return {dom, cod,
            [offset](std::span<const Dual> in, std::span<Dual> out) {
                std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(offset), out.size(), out.begin());
            },
            "proj"};
}

SmoothMap constant_map(const Space& dom, const Space& cod, std::vector<double> value) {
    if (value.size() != cod.dim()) throw DimensionError("constant map value", cod.dim(), value.size());
    return {dom, cod,
            [value = std::move(value)](std::span<const Dual>, std::span<Dual> out) {
                for (std::size_t i = 0; i < out.size(); ++i) out[i] = Dual(value[i]);
            },
            "const"};
}

SmoothMap linear_map(const Space& dom, const Space& cod, const Matrix& m) {
    if (static_cast<std::size_t>(m.rows()) != cod.dim() || static_cast<std::size_t>(m.cols()) != dom.dim())
        throw DimensionError("linear map matrix", dom.dim() * cod.dim(), static_cast<std::size_t>(m.size()));
    return {dom, cod,
            [m](std::span<const Dual> in, std::span<Dual> out) {
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    Dual s;
                    for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j) * in[static_cast<std::size_t>(j)];
                    out[static_cast<std::size_t>(i)] = s;
                }
            },
            "linear"};
}

SmoothMap compose(const SmoothMap& f, const SmoothMap& g) {
    if (f.cod() != g.dom())
        throw SpaceMismatch("cannot compose " + f.name() + " : " + f.cod().to_string() + " with " + g.name() +
                            " : " + g.dom().to_string());
    return {f.dom(), g.cod(),
            [f, g](std::span<const Dual> in, std::span<Dual> out) {
                std::vector<Dual> mid(f.cod().dim());
                f.apply(in, mid);
                g.apply(mid, out);
            },
            f.name() + ";" + g.name()};
}

SmoothMap pair(const SmoothMap& f, const SmoothMap& g) {
    if (f.dom() != g.dom())
        throw SpaceMismatch("cannot pair maps with domains " + f.dom().to_string() + " and " + g.dom().to_string());
    const std::size_t nf = f.cod().dim();
    return {f.dom(), product(f.cod(), g.cod()),
            [f, g, nf](std::span<const Dual> in, std::span<Dual> out) {
                f.apply(in, out.first(nf));
                g.apply(in, out.subspan(nf));
            },
            "<" + f.name() + "," + g.name() + ">"};
}

SmoothMap cross(const SmoothMap& f, const SmoothMap& g) {
    const std::size_t nf = f.dom().dim();
    const std::size_t mf = f.cod().dim();
    return {product(f.dom(), g.dom()), product(f.cod(), g.cod()),
            [f, g, nf, mf](std::span<const Dual> in, std::span<Dual> out) {
                f.apply(in.first(nf), out.first(mf));
                g.apply(in.subspan(nf), out.subspan(mf));
            },
            f.name() + "x" + g.name()};
}

SmoothMap sum(const SmoothMap& f, const SmoothMap& g) {
    if (f.dom() != g.dom() || f.cod() != g.cod())
        throw SpaceMismatch("cannot add maps of different shapes");
    return {f.dom(), f.cod(),
            [f, g](std::span<const Dual> in, std::span<Dual> out) {
                std::vector<Dual> tmp(out.size());
                f.apply(in, out);
                g.apply(in, tmp);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] += tmp[i];
            },
            f.name() + "+" + g.name()};
}

Point random_point(const Space& s, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> line(-scale, scale);
    std::vector<double> c(s.dim());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = s[i] == Factor::Circle ? angle(rng) : line(rng);
    return normalize(s, c);
}

bool is_well_defined_on_circles(const SmoothMap& f, std::mt19937_64& rng, int samples, double tol) {
    for (int k = 0; k < samples; ++k) {
        const Point x = random_point(f.dom(), rng);
        const Point fx = eval(f, x);
        for (std::size_t i = 0; i < f.dom().dim(); ++i) {
            if (f.dom()[i] != Factor::Circle) continue;
            std::vector<double> shifted(x.coords().begin(), x.coords().end());
            shifted[i] += kTwoPi;
            const Point fy = normalize(f.cod(), f.values(shifted));
            // absolute tolerance scaled to the output magnitude
            double mag = 1.0;
            for (std::size_t j = 0; j < fx.size(); ++j) mag = std::max(mag, std::abs(fx[j]));
            if (!same_point(f.cod(), fx, fy, tol * mag)) return false;
        }
    }
    return true;
}

}  // namespace openerg
