#include "bundlesym/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace bundlesym {

HamiltonianSpec HamiltonianSpec::zero() {
    return {[](const Vec&, const Vec&) { return 0.0; }, [](const CoalgebraElement&) { return 0.0; }};
}

HamiltonianSpec HamiltonianSpec::kinetic(double spring, double casimir_scale) {
    return {[spring](const Vec& x, const Vec& p) { return 0.5 * p.squaredNorm() + 0.5 * spring * x.squaredNorm(); },
            [casimir_scale](const CoalgebraElement& chi) { return 0.5 * casimir_scale * chi.coords.squaredNorm(); }};
}

double hamiltonian_value(const ConnectionForm& alpha, const HamiltonianSpec& spec, const PhasePoint& z) {
    const PBPoint q = i_alpha(alpha, z);
    return spec.base(q.x, q.pitilde) + spec.casimir(q.chi);
}

Vec phase_gradient(const PhaseScalar& f, const PhasePoint& z, double step) {
    const int dim = phase_dim(z.base_dim(), z.alg_dim());
    Vec out(dim);
    for (int i = 0; i < dim; ++i) {
        const Vec e = Vec::Unit(dim, i);
        out(i) = (f(phase_move(z, e, step)) - f(phase_move(z, e, -step))) / (2.0 * step);
    }
    return out;
}

namespace {

Vec solve_symplectic(const Mat& w, const Vec& df) {
    const Vec zeta = w.partialPivLu().solve(df);
    const double residual = (w * zeta - df).cwiseAbs().maxCoeff();
    if (!zeta.allFinite() || residual > 1e-10 * (1.0 + df.cwiseAbs().maxCoeff()))
        throw Error(ErrorCode::DegenerateForm, "linear solve against omega_A failed");
    return zeta;
}

// dexp^{-1}_u(k) truncated after the ad_u^2 term, which is exact to the order of RK4.
Vec dexpinv(const GroupPtr& group, const Vec& u, const Vec& k) {
    if (group->is_abelian()) return k;
    const Vec uk = bracket(group, {u}, {k}).coords;
    const Vec uuk = bracket(group, {u}, {uk}).coords;
    return k - 0.5 * uk + uuk / 12.0;
}

void record(Trajectory& t, const ConnectionForm& alpha, const HamiltonianSpec& spec, const PhasePoint& z,
            double time) {
    t.times.push_back(time);
    t.points.push_back(z);
    t.energy.push_back(hamiltonian_value(alpha, spec, z));
    t.momentum.push_back(J0(z).coords);
}

Vec rk4_step(const std::function<Vec(const Vec&)>& f, const Vec& y, double dt) {
    const Vec k1 = f(y);
    const Vec k2 = f(y + 0.5 * dt * k1);
    const Vec k3 = f(y + 0.5 * dt * k2);
    const Vec k4 = f(y + dt * k3);
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

PhaseTangent symplectic_gradient(const GaugeAutomorphism& a, const PhaseScalar& f, const PhasePoint& z) {
    const Mat w = omega_matrix(a, z).matrix;
    return PhaseTangent::from_flat(solve_symplectic(w, phase_gradient(f, z)), z.base_dim(), z.alg_dim());
}

PhaseTangent hamiltonian_vector_field(const GaugeAutomorphism& a, const ConnectionForm& alpha,
                                      const HamiltonianSpec& spec, const PhasePoint& z) {
    return symplectic_gradient(a, [&](const PhasePoint& w) { return hamiltonian_value(alpha, spec, w); }, z);
}

Trajectory integrate(const GaugeAutomorphism& a, const ConnectionForm& alpha, const HamiltonianSpec& spec,
                     const PhasePoint& z0, double dt, int steps) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be nonnegative");
    Trajectory t;
    if (steps == 0) return t;

    const GroupPtr& group = z0.g.group();
    const int n = z0.base_dim();
    const int m = z0.alg_dim();
    auto field = [&](const PhasePoint& z) { return hamiltonian_vector_field(a, alpha, spec, z).flat(); };
    auto corrected = [&](const Vec& u, Vec k) {
        k.segment(n, m) = dexpinv(group, u.segment(n, m), k.segment(n, m));
        return k;
    };

    record(t, alpha, spec, z0, 0.0);
    PhasePoint z = z0;
    for (int s = 1; s <= steps; ++s) {
        const Vec k1 = field(z);
        const Vec u2 = 0.5 * dt * k1;
        const Vec k2 = corrected(u2, field(phase_move(z, u2, 1.0)));
        const Vec u3 = 0.5 * dt * k2;
        const Vec k3 = corrected(u3, field(phase_move(z, u3, 1.0)));
        const Vec u4 = dt * k3;
        const Vec k4 = corrected(u4, field(phase_move(z, u4, 1.0)));
        PhasePoint next = phase_move(z, dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), 1.0);
        if (!alpha.chart().contains(next.x)) {
            t.left_chart = true;
            break;
        }
        z = std::move(next);
        record(t, alpha, spec, z, s * dt);
    }
    return t;
}

double poisson_bracket(const GaugeAutomorphism& a, const PhaseScalar& f, const PhaseScalar& h, const PhasePoint& z) {
    const Mat w = omega_matrix(a, z).matrix;
    const Vec xf = solve_symplectic(w, phase_gradient(f, z));
    const Vec xh = solve_symplectic(w, phase_gradient(h, z));
    return xf.dot(w * xh);
}

BracketReport dual_pair_check(const GaugeAutomorphism& a, const BaseScalar& ftilde, const CoalgebraScalar& c,
                              int samples, std::uint64_t seed, double tol) {
    const ConnectionForm& alpha = a.reference();
    CounterRng rng(seed, "dual_pair");
    BracketReport r{0.0, tol, samples, seed};
    PhaseScalar f = [&](const PhasePoint& z) {
        const PBPoint q = i_alpha(alpha, z);
        return ftilde(q.x, q.pitilde);
    };
    PhaseScalar h = [&](const PhasePoint& z) { return c(J0(z)); };
    for (int s = 0; s < samples; ++s) {
        const PhasePoint z = random_phase_point(rng, alpha.group(), alpha.chart());
        r.residual = std::max(r.residual, std::abs(poisson_bracket(a, f, h, z)));
    }
    return r;
}

BracketReport momentum_bracket_check(const GaugeAutomorphism& a, const CoalgebraScalar& c1,
                                     const CoalgebraScalar& c2, int samples, std::uint64_t seed, double tol) {
    const ConnectionForm& alpha = a.reference();
    CounterRng rng(seed, "momentum_bracket");
    PhaseScalar f1 = [&](const PhasePoint& z) { return c1(J0(z)); };
    PhaseScalar f2 = [&](const PhasePoint& z) { return c2(J0(z)); };
    std::vector<double> lhs, rhs;
    for (int s = 0; s < samples; ++s) {
        const PhasePoint z = random_phase_point(rng, alpha.group(), alpha.chart());
        lhs.push_back(poisson_bracket(a, f1, f2, z));
        rhs.push_back(lie_poisson_bracket(alpha.group(), c1, c2, J0(z)));
    }
    double overlap = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) overlap += lhs[i] * rhs[i];
    BracketReport r{0.0, tol, samples, seed, overlap < 0.0 ? -1.0 : 1.0};
    for (std::size_t i = 0; i < lhs.size(); ++i) r.residual = std::max(r.residual, std::abs(lhs[i] - r.sign * rhs[i]));
    return r;
}

BracketReport invariant_bracket_check(const GaugeAutomorphism& a, const BaseScalar& f1, const BaseScalar& f2,
                                      int samples, std::uint64_t seed, double tol) {
    const ConnectionForm& alpha = a.reference();
    CounterRng rng(seed, "invariant_bracket");
    auto lift = [&](const BaseScalar& f) -> PhaseScalar {
        return [&alpha, f](const PhasePoint& z) {
            const PBPoint q = i_alpha(alpha, z);
            return f(q.x, q.pitilde);
        };
    };
    const PhaseScalar g1 = lift(f1);
    const PhaseScalar g2 = lift(f2);
    BracketReport r{0.0, tol, samples, seed};
    for (int s = 0; s < samples; ++s) {
        const PhasePoint z = random_phase_point(rng, alpha.group(), alpha.chart());
        const GroupElement h = random_group_element(rng, alpha.group());
        const double moved = poisson_bracket(a, g1, g2, lifted_g_action(h, z));
        r.residual = std::max(r.residual, std::abs(moved - poisson_bracket(a, g1, g2, z)));
    }
    return r;
}

bool leaf_membership(const CoalgebraElement& rho0, const PhasePoint& z, double tol) {
    const Vec j = J0(z).coords;
    if (z.g.group()->is_abelian()) return (j - rho0.coords).cwiseAbs().maxCoeff() <= tol;
    return std::abs(j.norm() - rho0.coords.norm()) <= tol;
}

ConservationReport conservation_report(const Trajectory& t) {
    if (t.empty()) throw Error(ErrorCode::InvalidArgument, "conservation report of an empty trajectory");
    ConservationReport r;
    r.points = static_cast<int>(t.points.size());
    r.momentum_drift = Vec::Zero(t.momentum.front().size());
    const double c0 = t.momentum.front().squaredNorm();
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        r.energy_drift = std::max(r.energy_drift, std::abs(t.energy[i] - t.energy.front()));
        r.momentum_drift = r.momentum_drift.cwiseMax((t.momentum[i] - t.momentum.front()).cwiseAbs());
        r.casimir_drift = std::max(r.casimir_drift, std::abs(t.momentum[i].squaredNorm() - c0));
    }
    r.max_momentum_drift = r.momentum_drift.size() ? r.momentum_drift.maxCoeff() : 0.0;
    return r;
}

ReductionReport reduced_magnetic_check(const GaugeAutomorphism& a, const ConnectionForm& alpha,
                                       const CoalgebraElement& rho, const HamiltonianSpec& spec, const Vec& x0,
                                       const Vec& pitilde0, const GroupElement& g0, double dt, int steps) {
    const GroupPtr& group = alpha.group();
    if (!is_coadjoint_fixed(group, rho))
        throw Error(ErrorCode::NotFixedPoint, "reduction needs a coadjoint fixed point");

    ReductionReport r;
    r.steps = steps;
    const PhasePoint z0 = i_alpha_inv(alpha, PBPoint{x0, pitilde0, g0, rho});
    const Trajectory full = integrate(a, alpha, spec, z0, dt, steps);
    r.left_chart = full.left_chart;
    if (full.empty()) return r;
    r.conservation = conservation_report(full);
    r.final_time = full.times.back();

    const int n = static_cast<int>(x0.size());
    for (const PhasePoint& z : full.points) {
        const PBPoint q = i_alpha(alpha, z);
        Vec y(2 * n);
        y << q.x, q.pitilde;
        r.projected.push_back(std::move(y));
    }

    // Reduced system on T*M: omega = d((base^T p + reduced^T rho) . dx).
    const MatrixField base = a.base_part();
    const MatrixField reduced = alpha.potential_field() + a.shift_part() * a.base_part();
    const double h = kFiniteDifferenceStep;
    auto reduced_field = [&](const Vec& y) -> Vec {
        const Vec x = y.segment(0, n);
        const Vec p = y.segment(n, n);
        const Mat bx = base(x);
        Mat w = Mat::Zero(2 * n, 2 * n);
        std::vector<Vec> dtheta;
        for (int k = 0; k < n; ++k) {
            const Vec e = Vec::Unit(n, k);
            dtheta.push_back(directional_derivative(base, x, e, h).transpose() * p +
                             directional_derivative(reduced, x, e, h).transpose() * rho.coords);
        }
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) w(k, j) = dtheta[k](j) - dtheta[j](k);
        w.block(n, 0, n, n) = bx;
        w.block(0, n, n, n) = -bx.transpose();
        Vec dh(2 * n);
        for (int i = 0; i < 2 * n; ++i) {
            Vec yp = y, ym = y;
            yp(i) += h;
            ym(i) -= h;
            dh(i) = (spec.base(yp.segment(0, n), yp.segment(n, n)) - spec.base(ym.segment(0, n), ym.segment(n, n))) /
                    (2.0 * h);
        }
        return solve_symplectic(w, dh);
    };

    Vec y = r.projected.front();
    r.reduced.push_back(y);
    for (std::size_t s = 1; s < r.projected.size(); ++s) {
        y = rk4_step(reduced_field, y, dt);
        r.reduced.push_back(y);
    }
    for (std::size_t s = 0; s < r.projected.size(); ++s) {
        const Vec d = (r.projected[s] - r.reduced[s]).cwiseAbs();
        r.max_base_deviation = std::max(r.max_base_deviation, d.segment(0, n).maxCoeff());
        r.max_momentum_deviation = std::max(r.max_momentum_deviation, d.segment(n, n).maxCoeff());
    }
    r.max_deviation = std::max(r.max_base_deviation, r.max_momentum_deviation);
    return r;
}

std::string trajectory_csv_header(const GroupPtr& group, int n) {
    std::string out = "t";
    for (int i = 0; i < n; ++i) out += ",x" + std::to_string(i);
    const int d = group->matrix_dim();
    const bool complex = group->kind() == GroupKind::SU2;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const std::string tag = ",g" + std::to_string(i) + std::to_string(j);
            out += complex ? tag + "_re" + tag + "_im" : tag;
        }
    for (int i = 0; i < n; ++i) out += ",pi" + std::to_string(i);
    for (int i = 0; i < group->dim(); ++i) out += ",rho" + std::to_string(i);
    out += ",H";
    for (int i = 0; i < group->dim(); ++i) out += ",J0_" + std::to_string(i);
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        out << buf;
    };
    for (std::size_t k = 0; k < t.points.size(); ++k) {
        const PhasePoint& z = t.points[k];
        std::snprintf(buf, sizeof buf, "%.17g", t.times[k]);
        out << buf;
        for (double v : z.x) put(v);
        const bool complex = z.g.group()->kind() == GroupKind::SU2;
        const CMat& g = z.g.matrix();
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j) {
                put(g(i, j).real());
                if (complex) put(g(i, j).imag());
            }
        for (double v : z.pi) put(v);
        for (double v : z.rho.coords) put(v);
        put(t.energy[k]);
        for (double v : t.momentum[k]) put(v);
        out << '\n';
    }
}

} // namespace bundlesym
