#include "openerg/space.hpp"

#include <cmath>

namespace openerg {

double wrap_angle(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative can round up to exactly 2π
    if (r >= kTwoPi) r = 0.0;
    return r;
}

std::string Space::to_string() const {
    if (factors_.empty()) return "R^0";
    std::string s = "[";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += ',';
        s += factors_[i] == Factor::Line ? "Line" : "Circle";
    }
    return s + "]";
}

Space product(const Space& a, const Space& b) {
    std::vector<Factor> f = a.factors();
    f.insert(f.end(), b.factors().begin(), b.factors().end());
    return Space(std::move(f));
}

Space cotangent_space(const Space& base) { return product(base, Space::lines(base.dim())); }

Space tangent_space(const Space& base) { return cotangent_space(base); }

Point normalize(const Space& space, std::span<const double> raw) {
    if (raw.size() != space.dim()) throw DimensionError("point on " + space.to_string(), space.dim(), raw.size());
    std::vector<double> c(raw.begin(), raw.end());
    for (std::size_t i = 0; i < c.size(); ++i)
        if (space[i] == Factor::Circle) c[i] = wrap_angle(c[i]);
    return Point(std::move(c));
}

bool same_point(const Space& space, const Point& a, const Point& b, double tol) {
    if (a.size() != space.dim() || b.size() != space.dim()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::abs(a[i] - b[i]);
        if (space[i] == Factor::Circle) d = std::min(d, kTwoPi - d);
        if (!(d <= tol)) return false;
    }
    return true;
}

std::vector<double> slice(std::span<const double> v, std::size_t offset, std::size_t count) {
    if (offset + count > v.size()) throw DimensionError("slice", offset + count, v.size());
    return {v.begin() + static_cast<std::ptrdiff_t>(offset),
            v.begin() + static_cast<std::ptrdiff_t>(offset + count)};
}

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
    std::vector<double> r(a.begin(), a.end());
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

}  // namespace openerg
