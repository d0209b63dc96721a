#include "bundlesym/liegroup.hpp"

#include <cmath>
#include <numbers>

namespace bundlesym {

namespace {

using cd = std::complex<double>;

CMat real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMat m(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = cd(v, 0.0);
        ++i;
    }
    return m;
}

double inner(const CMat& a, const CMat& b) { return (a.adjoint() * b).trace().real(); }

// Angles closer than this to the cut locus are rejected by log().
constexpr double kCutTolerance = 1e-7;

} // namespace

GroupDescriptor::GroupDescriptor(GroupKind kind) : kind_(kind) {
    switch (kind) {
    case GroupKind::SO2:
        name_ = "SO2";
        matrix_dim_ = 2;
        basis_ = {real_matrix({{0, -1}, {1, 0}})};
        break;
    case GroupKind::SO3:
        name_ = "SO3";
        matrix_dim_ = 3;
        basis_ = {real_matrix({{0, 0, 0}, {0, 0, -1}, {0, 1, 0}}),
                  real_matrix({{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}}),
                  real_matrix({{0, -1, 0}, {1, 0, 0}, {0, 0, 0}})};
        break;
    case GroupKind::SU2: {
        name_ = "SU2";
        matrix_dim_ = 2;
        // E_k = -i sigma_k / 2, so that [E_1, E_2] = E_3 as in so(3).
        const cd i(0.0, 1.0);
        CMat s1(2, 2), s2(2, 2), s3(2, 2);
        s1 << 0, 1, 1, 0;
        s2 << 0, -i, i, 0;
        s3 << 1, 0, 0, -1;
        basis_ = {-0.5 * i * s1, -0.5 * i * s2, -0.5 * i * s3};
        break;
    }
    }
    norm_ = inner(basis_[0], basis_[0]);

    const int n = dim();
    structure_.assign(static_cast<std::size_t>(n * n * n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const CMat c = basis_[i] * basis_[j] - basis_[j] * basis_[i];
            const Vec coords = vee(c);
            for (int k = 0; k < n; ++k) structure_[static_cast<std::size_t>((k * n + i) * n + j)] = coords(k);
        }
    }
}

std::shared_ptr<const GroupDescriptor> GroupDescriptor::make(GroupKind kind) {
    static const auto so2 = std::shared_ptr<const GroupDescriptor>(new GroupDescriptor(GroupKind::SO2));
    static const auto so3 = std::shared_ptr<const GroupDescriptor>(new GroupDescriptor(GroupKind::SO3));
    static const auto su2 = std::shared_ptr<const GroupDescriptor>(new GroupDescriptor(GroupKind::SU2));
    switch (kind) {
    case GroupKind::SO2: return so2;
    case GroupKind::SO3: return so3;
    case GroupKind::SU2: return su2;
    }
    return so2;
}

std::shared_ptr<const GroupDescriptor> GroupDescriptor::from_name(std::string_view name) {
    if (name == "SO2") return make(GroupKind::SO2);
    if (name == "SO3") return make(GroupKind::SO3);
    if (name == "SU2") return make(GroupKind::SU2);
    throw Error(ErrorCode::InvalidArgument, "unknown group '" + std::string(name) + "'");
}

CMat GroupDescriptor::hat(const Vec& coords) const {
    CMat m = CMat::Zero(matrix_dim_, matrix_dim_);
    for (int i = 0; i < dim(); ++i) m += coords(i) * basis_[i];
    return m;
}

Vec GroupDescriptor::vee(const CMat& m) const {
    // The basis is orthogonal with equal norms, so projection is a dot product.
    Vec coords(dim());
    for (int i = 0; i < dim(); ++i) coords(i) = inner(basis_[i], m) / norm_;
    return coords;
}

double GroupDescriptor::structure_residual() const {
    const int n = dim();
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                worst = std::max(worst, std::abs(structure_constant(k, i, j) + structure_constant(k, j, i)));
    // sum_m c^m_ij c^l_mk + c^m_jk c^l_mi + c^m_ki c^l_mj = 0
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) {
                        s += structure_constant(m, i, j) * structure_constant(l, m, k) +
                             structure_constant(m, j, k) * structure_constant(l, m, i) +
                             structure_constant(m, k, i) * structure_constant(l, m, j);
                    }
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

GroupElement::GroupElement(GroupPtr group, CMat matrix) : group_(std::move(group)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != group_->matrix_dim() || matrix_.cols() != group_->matrix_dim())
        throw Error(ErrorCode::InvalidArgument, "group element has wrong matrix size");
}

GroupElement GroupElement::identity(GroupPtr group) {
    const int d = group->matrix_dim();
    return GroupElement(std::move(group), CMat::Identity(d, d));
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
    return GroupElement(group_, matrix_ * other.matrix_);
}

GroupElement GroupElement::inverse() const {
    // Compact groups: the inverse is the conjugate transpose.
    return GroupElement(group_, matrix_.adjoint());
}

double GroupElement::membership_residual() const {
    const int d = group_->matrix_dim();
    const double unitary = (matrix_.adjoint() * matrix_ - CMat::Identity(d, d)).cwiseAbs().maxCoeff();
    const double det = std::abs(matrix_.determinant() - cd(1.0, 0.0));
    double imag = 0.0;
    if (group_->kind() != GroupKind::SU2) imag = matrix_.imag().cwiseAbs().maxCoeff();
    return std::max({unitary, det, imag});
}

GroupElement exp(const GroupPtr& group, const LieAlgebraElement& x) {
    const Vec& c = x.coords;
    switch (group->kind()) {
    case GroupKind::SO2: {
        const double t = c(0);
        CMat m(2, 2);
        m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        return GroupElement(group, m);
    }
    case GroupKind::SO3: {
        // Rodrigues: I + sin(t)/t K + (1 - cos t)/t^2 K^2
        const double t = c.norm();
        const CMat k = group->hat(c);
        double a = 1.0, b = 0.5;
        if (t > 1e-6) {
            a = std::sin(t) / t;
            b = (1.0 - std::cos(t)) / (t * t);
        } else {
            a = 1.0 - t * t / 6.0;
            b = 0.5 - t * t / 24.0;
        }
        return GroupElement(group, CMat::Identity(3, 3) + a * k + b * k * k);
    }
    case GroupKind::SU2: {
        // hat(c) = -(i/2) c.sigma, and (c.sigma)^2 = |c|^2, so
        // exp = cos(|c|/2) I + (2/|c|) sin(|c|/2) hat(c).
        const double t = c.norm();
        const double s = t > 1e-8 ? 2.0 * std::sin(0.5 * t) / t : 1.0 - t * t / 24.0;
        return GroupElement(group, std::cos(0.5 * t) * CMat::Identity(2, 2) + s * group->hat(c));
    }
    }
    return GroupElement::identity(group);
}

LieAlgebraElement log(const GroupElement& g) {
    const auto& group = g.group();
    const CMat& m = g.matrix();
    switch (group->kind()) {
    case GroupKind::SO2: {
        const double t = std::atan2(m(1, 0).real(), m(0, 0).real());
        if (std::abs(t) > std::numbers::pi - kCutTolerance)
            throw Error(ErrorCode::AngleOutOfRange, "SO(2) rotation angle at pi");
        return {Vec::Constant(1, t)};
    }
    case GroupKind::SO3: {
        const double c = std::clamp(0.5 * (m.trace().real() - 1.0), -1.0, 1.0);
        const double t = std::acos(c);
        if (t > std::numbers::pi - kCutTolerance)
            throw Error(ErrorCode::AngleOutOfRange, "SO(3) rotation angle at pi");
        const Vec axis = group->vee(0.5 * (m - m.adjoint()));
        const double s = std::sin(t);
        const double scale = t > 1e-6 ? t / s : 1.0 + t * t / 6.0;
        return {scale * axis};
    }
    case GroupKind::SU2: {
        // m = cos(t/2) I + (2/t) sin(t/2) hat(c), |c| = t.
        const double c = std::clamp(0.5 * m.trace().real(), -1.0, 1.0);
        const double t = 2.0 * std::acos(c);
        if (t > 2.0 * std::numbers::pi - kCutTolerance)
            throw Error(ErrorCode::AngleOutOfRange, "SU(2) element at -I");
        const Vec v = group->vee(0.5 * (m - m.adjoint()));
        const double s = std::sin(0.5 * t);
        const double scale = t > 1e-6 ? t / (2.0 * s) : 1.0 + t * t / 24.0;
        return {scale * v};
    }
    }
    return LieAlgebraElement::zero(group->dim());
}

LieAlgebraElement bracket(const GroupPtr& group, const LieAlgebraElement& x, const LieAlgebraElement& y) {
    const int n = group->dim();
    Vec out = Vec::Zero(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(k) += group->structure_constant(k, i, j) * x.coords(i) * y.coords(j);
    return {out};
}

Mat adjoint_matrix(const GroupElement& g) {
    const auto& group = g.group();
    if (group->is_abelian()) return Mat::Identity(group->dim(), group->dim());
    Mat ad(group->dim(), group->dim());
    const CMat inv = g.matrix().adjoint();
    for (int j = 0; j < group->dim(); ++j) ad.col(j) = group->vee(g.matrix() * group->basis()[j] * inv);
    return ad;
}

LieAlgebraElement adjoint(const GroupElement& g, const LieAlgebraElement& y) {
    return {adjoint_matrix(g) * y.coords};
}

CoalgebraElement coadjoint(const GroupElement& g, const CoalgebraElement& rho) {
    return {adjoint_matrix(g).transpose() * rho.coords};
}

TangentGroupElement tg_product(const TangentGroupElement& a, const TangentGroupElement& b) {
    if (a.g.group() != b.g.group()) throw Error(ErrorCode::InvalidArgument, "tangent group descriptors differ");
    return {a.g * b.g, {a.x.coords + adjoint(a.g, b.x).coords}};
}

TangentGroupElement tg_inverse(const TangentGroupElement& a) {
    const GroupElement inv = a.g.inverse();
    return {inv, {-adjoint(inv, a.x).coords}};
}

bool is_coadjoint_fixed(const GroupPtr& group, const CoalgebraElement& rho, double tol) {
    const int n = group->dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += group->structure_constant(k, i, j) * rho.coords(k);
            if (std::abs(s) > tol) return false;
        }
    return true;
}

Vec coalgebra_gradient(const CoalgebraScalar& f, const CoalgebraElement& rho, double step) {
    const auto n = rho.coords.size();
    Vec grad(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        CoalgebraElement plus = rho, minus = rho;
        plus.coords(i) += step;
        minus.coords(i) -= step;
        grad(i) = (f(plus) - f(minus)) / (2.0 * step);
    }
    return grad;
}

double lie_poisson_bracket(const GroupPtr& group, const CoalgebraScalar& f, const CoalgebraScalar& h,
                           const CoalgebraElement& rho, const CoalgebraGradient& grad_f,
                           const CoalgebraGradient& grad_h) {
    const Vec df = grad_f ? grad_f(rho) : coalgebra_gradient(f, rho);
    const Vec dh = grad_h ? grad_h(rho) : coalgebra_gradient(h, rho);
    return pairing(rho, bracket(group, {df}, {dh}));
}

} // namespace bundlesym
