#include "bundlesym/field.hpp"

#include <cmath>
#include <limits>

namespace bundlesym {

MatrixField::MatrixField(int rows, int cols, Fn fn) : rows_(rows), cols_(cols), fn_(std::move(fn)) {
    if (!fn_) throw Error(ErrorCode::InvalidArgument, "empty field callable");
}

MatrixField MatrixField::constant(const Mat& value) {
    return MatrixField(static_cast<int>(value.rows()), static_cast<int>(value.cols()),
                       [value](const Vec&) { return value; });
}

MatrixField MatrixField::linear(const Mat& constant, std::vector<Mat> coefficients) {
    for (const auto& c : coefficients)
        if (c.rows() != constant.rows() || c.cols() != constant.cols())
            throw Error(ErrorCode::InvalidArgument, "linear field coefficient shape mismatch");
    return MatrixField(static_cast<int>(constant.rows()), static_cast<int>(constant.cols()),
                       [constant, coefficients = std::move(coefficients)](const Vec& x) {
                           Mat m = constant;
                           const auto n = std::min<Eigen::Index>(x.size(), static_cast<Eigen::Index>(coefficients.size()));
                           for (Eigen::Index k = 0; k < n; ++k) m += x(k) * coefficients[static_cast<std::size_t>(k)];
                           return m;
                       });
}

MatrixField MatrixField::magnetic2d(double strength, int alg_dim, int generator) {
    if (generator < 0 || generator >= alg_dim)
        throw Error(ErrorCode::InvalidArgument, "magnetic2d generator index out of range");
    return MatrixField(alg_dim, 2, [strength, alg_dim, generator](const Vec& x) {
        Mat a = Mat::Zero(alg_dim, 2);
        a(generator, 0) = -0.5 * strength * x(1);
        a(generator, 1) = 0.5 * strength * x(0);
        return a;
    });
}

MatrixField MatrixField::identity(int n) { return constant(Mat::Identity(n, n)); }

MatrixField MatrixField::zero(int rows, int cols) { return constant(Mat::Zero(rows, cols)); }

Mat MatrixField::operator()(const Vec& x) const { return fn_(x); }

MatrixField MatrixField::operator+(const MatrixField& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::InvalidArgument, "field shape mismatch");
    return MatrixField(rows_, cols_, [a = fn_, b = other.fn_](const Vec& x) -> Mat { return a(x) + b(x); });
}

MatrixField MatrixField::operator-(const MatrixField& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::InvalidArgument, "field shape mismatch");
    return MatrixField(rows_, cols_, [a = fn_, b = other.fn_](const Vec& x) -> Mat { return a(x) - b(x); });
}

MatrixField MatrixField::operator*(const MatrixField& other) const {
    if (cols_ != other.rows_) throw Error(ErrorCode::InvalidArgument, "field product shape mismatch");
    return MatrixField(rows_, other.cols_, [a = fn_, b = other.fn_](const Vec& x) -> Mat { return a(x) * b(x); });
}

MatrixField MatrixField::scaled(double c) const {
    return MatrixField(rows_, cols_, [a = fn_, c](const Vec& x) -> Mat { return c * a(x); });
}

MatrixField MatrixField::inverse() const {
    if (rows_ != cols_) throw Error(ErrorCode::InvalidArgument, "inverse of a non-square field");
    return MatrixField(rows_, cols_, [a = fn_](const Vec& x) -> Mat {
        const Mat m = a(x);
        const Eigen::PartialPivLU<Mat> lu(m);
        if (std::abs(lu.determinant()) <= kSingularDet)
            throw Error(ErrorCode::SingularBasePart, "base part is singular at a sampled point");
        return lu.inverse();
    });
}

Mat directional_derivative(const MatrixField& field, const Vec& x, const Vec& direction, double step) {
    return (field(x + step * direction) - field(x - step * direction)) / (2.0 * step);
}

SmoothnessReport smoothness_diagnostic(const MatrixField& field, const Vec& x, const Vec& direction, double step) {
    const Mat d1 = directional_derivative(field, x, direction, step);
    const Mat d2 = directional_derivative(field, x, direction, step / 2);
    const Mat d4 = directional_derivative(field, x, direction, step / 4);
    if (!d1.allFinite() || !d2.allFinite() || !d4.allFinite()) return {0.0, false};
    const double e1 = (d1 - d2).cwiseAbs().maxCoeff();
    const double e2 = (d2 - d4).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, d4.cwiseAbs().maxCoeff());
    const double noise = 1e-12 * scale / step;
    if (e1 <= noise && e2 <= noise) return {std::numeric_limits<double>::infinity(), true};
    const double order = std::log2(e1 / std::max(e2, std::numeric_limits<double>::min()));
    return {order, order > 1.5};
}

} // namespace bundlesym
