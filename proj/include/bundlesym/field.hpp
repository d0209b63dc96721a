#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bundlesym/liegroup.hpp"

namespace bundlesym {

/// A smooth matrix-valued field x -> M(x) on a base chart.
class MatrixField {
public:
    using Fn = std::function<Mat(const Vec&)>;

    MatrixField(int rows, int cols, Fn fn);

    static MatrixField constant(const Mat& value);
    /// M(x) = constant + sum_k x_k coefficients[k]
    static MatrixField linear(const Mat& constant, std::vector<Mat> coefficients);
    /// Uniform field strength B on R^2 in symmetric gauge along basis generator `generator`:
    /// a(x, y) = (-B y / 2, B x / 2) (x) E_generator, an alg_dim x 2 matrix.
    static MatrixField magnetic2d(double strength, int alg_dim, int generator = 0);
    static MatrixField identity(int n);
    static MatrixField zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Mat operator()(const Vec& x) const;

    MatrixField operator+(const MatrixField& other) const;
    MatrixField operator-(const MatrixField& other) const;
    /// Pointwise matrix product.
    MatrixField operator*(const MatrixField& other) const;
    MatrixField scaled(double c) const;
    /// Pointwise inverse; evaluation throws SingularBasePart where |det| <= 1e-10.
    MatrixField inverse() const;

private:
    int rows_;
    int cols_;
    Fn fn_;
};

inline constexpr double kSingularDet = 1e-10;

/// Central difference of the field along `direction`.
Mat directional_derivative(const MatrixField& field, const Vec& x, const Vec& direction, double step = 1e-5);

struct SmoothnessReport {
    /// Estimated convergence order of the central difference; infinity when the
    /// difference quotients agree to roundoff (polynomial fields of degree <= 2).
    double order;
    bool converged;
};

/// Order-2 Richardson diagnostic of the central difference at x along `direction`.
SmoothnessReport smoothness_diagnostic(const MatrixField& field, const Vec& x, const Vec& direction, double step = 1e-2);

} // namespace bundlesym
