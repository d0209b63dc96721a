#pragma once

// Finite-difference calculus on spaces of the form R^k x G x R^l, expressed in a
// global frame whose group directions are right-invariant vector fields. The
// only nonvanishing frame brackets are [xi_1, xi_2] -> -bracket(xi_1, xi_2).

#include <functional>

#include "bundlesym/liegroup.hpp"

namespace bundlesym {

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Central difference of a vector-valued function along the frame direction `dir`.
template <class Point, class Move, class F>
Vec frame_derivative(const F& f, const Point& z, const Vec& dir, const Move& move, double step) {
    const Vec plus = f(move(z, dir, step));
    const Vec minus = f(move(z, dir, -step));
    return (plus - minus) / (2.0 * step);
}

/**
 * Matrix of d(gamma) in the frame at z:
 *   D(i, j) = e_i[gamma(e_j)] - e_j[gamma(e_i)] - gamma([e_i, e_j]).
 * `gamma` returns the covector of the one-form in frame coordinates.
 */
template <class Point, class Move, class Bracket>
Mat exterior_derivative_matrix(const std::function<Vec(const Point&)>& gamma, const Point& z, int dim,
                               const Move& move, const Bracket& frame_bracket, double step) {
    Mat deriv(dim, dim);  // column i = D_{e_i} gamma
    for (int i = 0; i < dim; ++i) deriv.col(i) = frame_derivative(gamma, z, Vec::Unit(dim, i), move, step);
    const Vec g0 = gamma(z);
    Mat out(dim, dim);
    for (int i = 0; i < dim; ++i) {
        out(i, i) = 0.0;
        for (int j = i + 1; j < dim; ++j) {
            const double value =
                deriv(j, i) - deriv(i, j) - g0.dot(frame_bracket(Vec::Unit(dim, i), Vec::Unit(dim, j)));
            out(i, j) = value;
            out(j, i) = -value;
        }
    }
    return out;
}

/// Tangent of t -> g(t) at 0 in right trivialization, from g(+h), g(-h).
inline Vec right_trivialized_velocity(const GroupElement& plus, const GroupElement& minus, const GroupElement& center,
                                      double step) {
    const GroupElement inv = center.inverse();
    return (log(plus * inv).coords - log(minus * inv).coords) / (2.0 * step);
}

/**
 * Closedness residual max |d omega(e_i, e_j, e_k)| over frame triples, where
 * `omega` returns the two-form matrix in the frame. Outer derivatives use `step`.
 */
template <class Point, class Move, class Bracket>
double closure_residual(const std::function<Mat(const Point&)>& omega, const Point& z, int dim, const Move& move,
                        const Bracket& frame_bracket, double step) {
    std::vector<Mat> deriv;
    deriv.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const Vec e = Vec::Unit(dim, i);
        deriv.push_back((omega(move(z, e, step)) - omega(move(z, e, -step))) / (2.0 * step));
    }
    const Mat w = omega(z);
    auto br = [&](int a, int b) { return frame_bracket(Vec::Unit(dim, a), Vec::Unit(dim, b)); };
    double worst = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            for (int k = j + 1; k < dim; ++k) {
                const double d = deriv[i](j, k) - deriv[j](i, k) + deriv[k](i, j) - br(i, j).dot(w.col(k)) +
                                 br(i, k).dot(w.col(j)) - br(j, k).dot(w.col(i));
                worst = std::max(worst, std::abs(d));
            }
    return worst;
}

} // namespace bundlesym
