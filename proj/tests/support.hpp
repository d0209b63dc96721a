#pragma once

#include <doctest.h>

#include <Eigen/Dense>

#include "bundlesym/dynamics.hpp"

namespace testing {

using namespace bundlesym;

inline GroupPtr so2() { return GroupDescriptor::make(GroupKind::SO2); }
inline GroupPtr so3() { return GroupDescriptor::make(GroupKind::SO3); }
inline GroupPtr su2() { return GroupDescriptor::make(GroupKind::SU2); }

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline ConnectionForm flat_connection(const GroupPtr& g, int n, double half_width = 2.0) {
    return ConnectionForm(g, BaseChart::cube(n, half_width), MatrixField::zero(g->dim(), n), "flat");
}

inline ConnectionForm random_conn(const GroupPtr& g, int n, std::uint64_t seed, double strength = 0.4) {
    CounterRng rng(seed, "test.connection");
    return random_connection(rng, g, BaseChart::cube(n, 2.0), strength);
}

inline double phase_distance(const PhasePoint& a, const PhasePoint& b) {
    return std::max({max_abs(Vec(a.x - b.x)), max_abs(CMat(a.g.matrix() - b.g.matrix())), max_abs(Vec(a.pi - b.pi)),
                     max_abs(Vec(a.rho.coords - b.rho.coords))});
}

inline double pb_distance(const PBPoint& a, const PBPoint& b) {
    return std::max({max_abs(Vec(a.x - b.x)), max_abs(CMat(a.g.matrix() - b.g.matrix())),
                     max_abs(Vec(a.pitilde - b.pitilde)), max_abs(Vec(a.chi.coords - b.chi.coords))});
}

inline double tangent_distance(const TangentVector& a, const TangentVector& b) {
    return std::max({max_abs(Vec(a.base.x - b.base.x)), max_abs(CMat(a.base.g.matrix() - b.base.g.matrix())),
                     max_abs(Vec(a.dx - b.dx)), max_abs(Vec(a.xi.coords - b.xi.coords))});
}

/// Matrix exponential by truncated power series, independent of the closed forms.
inline CMat series_exp(const CMat& m, int terms = 40) {
    CMat out = CMat::Identity(m.rows(), m.cols());
    CMat term = out;
    for (int k = 1; k < terms; ++k) {
        term = term * m / static_cast<double>(k);
        out += term;
    }
    return out;
}

} // namespace testing
