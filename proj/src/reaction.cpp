#include "openerg/reaction.hpp"

#include <cmath>
#include <limits>

namespace openerg {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

Reaction::Reaction(Space space, MatrixField field, std::vector<ReactionBlock> blocks)
    : space_(std::move(space)),
      field_(std::make_shared<const MatrixField>(std::move(field))),
      blocks_(std::move(blocks)) {
    if (blocks_.empty() && space_.dim() > 0)
        blocks_.push_back({ReactionBlock::Kind::General, 0, space_.dim()});
}

Matrix Reaction::matrix(std::span<const double> x) const {
    if (x.size() != space_.dim()) throw DimensionError("reaction base point", space_.dim(), x.size());
    Matrix m = (*field_)(x);
    if (m.rows() != idx(space_.dim()) || m.cols() != idx(space_.dim()))
        throw ShapeError("reaction matrix field returned a " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " matrix on " + space_.to_string());
    return m;
}

Tangent Reaction::operator()(const Covector& alpha) const {
    return {alpha.base, apply_matrix(matrix(alpha.base), alpha.components)};
}

bool Reaction::is_canonical() const {
    for (const auto& b : blocks_)
        if (b.kind != ReactionBlock::Kind::Canonical) return false;
    return true;
}

Reaction empty_reaction() {
    return {Space{}, [](std::span<const double>) { return Matrix(0, 0); }, {}};
}

Reaction canonical_symplectic(const Space& base) {
    const std::size_t n = base.dim();
    Matrix j = Matrix::Zero(idx(2 * n), idx(2 * n));
    j.topRightCorner(idx(n), idx(n)).setIdentity();
    j.bottomLeftCorner(idx(n), idx(n)) = -Matrix::Identity(idx(n), idx(n));
    std::vector<ReactionBlock> blocks;
    if (n > 0) blocks.push_back({ReactionBlock::Kind::Canonical, 0, 2 * n});
    return {cotangent_space(base), [j](std::span<const double>) { return j; }, std::move(blocks)};
}

Reaction from_metric(const Space& space, MetricField metric, MetricSign sign) {
    const double s = sign == MetricSign::Ascent ? 1.0 : -1.0;
    const auto n = idx(space.dim());
    auto field = [metric = std::move(metric), s, n](std::span<const double> x) -> Matrix {
        const Matrix g = metric(x);
        if (g.rows() != n || g.cols() != n) throw MetricError("metric has wrong shape");
        if (n == 0) return g;
        const double scale = std::max(g.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
        if (!((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale))
            throw MetricError("metric is not symmetric");
        Eigen::LLT<Matrix> llt(g);
        if (llt.info() != Eigen::Success) throw MetricError("metric is not positive definite");
        Eigen::PartialPivLU<Matrix> lu(g);
        if (!(lu.rcond() >= 1e-12)) throw MetricError("metric is too badly conditioned to invert");
        return s * lu.inverse();
    };
    return {space, std::move(field)};
}

Reaction euclidean(const Space& space, MetricSign sign) {
    const auto n = idx(space.dim());
    return from_metric(space, [n](std::span<const double>) { return Matrix::Identity(n, n); }, sign);
}

Reaction oplus(const Reaction& r1, const Reaction& r2) {
    const std::size_t n1 = r1.space().dim();
    const std::size_t n2 = r2.space().dim();
    std::vector<ReactionBlock> blocks = r1.blocks();
    for (ReactionBlock b : r2.blocks()) {
        b.offset += n1;
        blocks.push_back(b);
    }
    auto field = [r1, r2, n1, n2](std::span<const double> x) -> Matrix {
        Matrix m = Matrix::Zero(idx(n1 + n2), idx(n1 + n2));
        if (n1) m.topLeftCorner(idx(n1), idx(n1)) = r1.matrix(x.first(n1));
        if (n2) m.bottomRightCorner(idx(n2), idx(n2)) = r2.matrix(x.subspan(n1));
        return m;
    };
    return {product(r1.space(), r2.space()), std::move(field), std::move(blocks)};
}

Reaction transport(const SmoothMap& f, const SmoothMap& f_inv, const Reaction& r, std::uint64_t seed) {
    if (f.dom() != r.space() || f_inv.cod() != r.space() || f.cod() != f_inv.dom() || f.dom().dim() != f.cod().dim())
        throw DiffeomorphismError("transport: maps do not form a pair X → Y → X over the reaction's space");
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 16; ++k) {
        const Point x = random_point(f.dom(), rng);
        if (!same_point(f.dom(), eval(f_inv, eval(f, x)), x, 1e-9))
            throw DiffeomorphismError("transport: f ; f_inv is not the identity");
        const Point y = random_point(f.cod(), rng);
        if (!same_point(f.cod(), eval(f, eval(f_inv, y)), y, 1e-9))
            throw DiffeomorphismError("transport: f_inv ; f is not the identity");
    }
    auto field = [f, f_inv, r](std::span<const double> y) -> Matrix {
        const std::vector<double> x = f_inv.values(y);
        const Matrix jf = jacobian(f, x);
        return jf * r.matrix(x) * jf.transpose();
    };
    return {f.cod(), std::move(field)};
}

bool is_antisymmetric(const Reaction& r, const Point& x, double tol) {
    const Matrix m = r.matrix(x);
    return m.size() == 0 || (m + m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const Reaction& r, const Point& x, double tol) {
    const Matrix m = r.matrix(x);
    if (m.size() == 0) return true;
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace openerg
