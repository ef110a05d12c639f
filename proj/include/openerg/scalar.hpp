#pragma once

/**
 * @file scalar.hpp
 * @brief Dual numbers for forward-mode automatic differentiation.
 *
 * A Dual carries a value and the coefficient of a nilpotent part e with e^2 = 0,
 * so evaluating a program on Dual{x, s} yields f(x) together with the
 * directional derivative f'(x)·s. Every smooth map in the engine is written
 * against this type; plain evaluation just seeds a zero derivative.
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "openerg/error.hpp"

namespace openerg {

struct Dual {
    double value = 0.0;
    double deriv = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double v) : value(v) {}  // NOLINT: implicit lift of constants
    constexpr Dual(double v, double d) : value(v), deriv(d) {}

    constexpr Dual& operator+=(const Dual& o) {
        value += o.value;
        deriv += o.deriv;
        return *this;
    }
    constexpr Dual& operator-=(const Dual& o) {
        value -= o.value;
        deriv -= o.deriv;
        return *this;
    }
    constexpr Dual& operator*=(const Dual& o) {
        deriv = value * o.deriv + deriv * o.value;
        value *= o.value;
        return *this;
    }
    Dual& operator/=(const Dual& o);

    friend constexpr bool operator==(const Dual&, const Dual&) = default;
};

constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
constexpr Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }

inline Dual operator/(const Dual& a, const Dual& b) {
    if (b.value == 0.0) throw ScalarDomainError("div", b.value);
    const double q = a.value / b.value;
    return {q, (a.deriv - q * b.deriv) / b.value};
}

inline Dual& Dual::operator/=(const Dual& o) { return *this = *this / o; }

inline Dual sin(const Dual& x) { return {std::sin(x.value), std::cos(x.value) * x.deriv}; }
inline Dual cos(const Dual& x) { return {std::cos(x.value), -std::sin(x.value) * x.deriv}; }

inline Dual exp(const Dual& x) {
    const double e = std::exp(x.value);
    return {e, e * x.deriv};
}

inline Dual log(const Dual& x) {
    if (!(x.value > 0.0)) throw ScalarDomainError("ln", x.value);
    return {std::log(x.value), x.deriv / x.value};
}

inline Dual sqrt(const Dual& x) {
    if (!(x.value > 0.0)) throw ScalarDomainError("sqrt", x.value);
    const double r = std::sqrt(x.value);
    return {r, x.deriv / (2.0 * r)};
}

/// x^p for a constant exponent. Negative bases need an integral exponent.
inline Dual pow(const Dual& x, double p) {
    if (x.value < 0.0 && std::trunc(p) != p) throw ScalarDomainError("pow", x.value);
    if (x.value == 0.0 && p < 1.0 && p != 0.0) throw ScalarDomainError("pow", x.value);
    if (p == 0.0) return {1.0, 0.0};
    const double r = std::pow(x.value, p);
    return {r, p * std::pow(x.value, p - 1.0) * x.deriv};
}

/// x^y with a varying exponent; defined for positive bases only.
inline Dual pow(const Dual& x, const Dual& y) {
    if (!(x.value > 0.0)) throw ScalarDomainError("pow", x.value);
    const double r = std::pow(x.value, y.value);
    const double lx = std::log(x.value);
    return {r, r * (y.deriv * lx + y.value * x.deriv / x.value)};
}

constexpr Dual abs2(const Dual& x) { return x * x; }

/// Squared Euclidean norm; the smooth replacement for |v|.
inline Dual abs2(std::span<const Dual> v) {
    Dual s;
    for (const Dual& c : v) s += c * c;
    return s;
}

inline std::vector<Dual> lift(std::span<const double> x) { return {x.begin(), x.end()}; }

inline std::vector<Dual> seeded(std::span<const double> x, std::span<const double> seed) {
    if (x.size() != seed.size()) throw DimensionError("seed", x.size(), seed.size());
    std::vector<Dual> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = {x[i], seed[i]};
    return out;
}

/// Jacobian-vector product J_f(x)·seed for a program f over Dual.
///
/// `f` maps a span of n Duals to a vector of m Duals.
template <class F>
std::vector<double> derivative(F&& f, std::span<const double> x, std::span<const double> seed) {
    const std::vector<Dual> in = seeded(x, seed);
    const std::vector<Dual> out = f(std::span<const Dual>(in));
    std::vector<double> d(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) d[i] = out[i].deriv;
    return d;
}

}  // namespace openerg
