#pragma once

#include <iosfwd>
#include <string>

#include "bundlesym/pullback.hpp"

namespace bundlesym {

using BaseScalar = std::function<double(const Vec& x, const Vec& pitilde)>;
using PhaseScalar = std::function<double(const PhasePoint&)>;

/// H(pitilde, p, chi) = base(x, pitilde) + casimir(chi) on the pulled-back space.
struct HamiltonianSpec {
    BaseScalar base;
    CoalgebraScalar casimir;

    static HamiltonianSpec zero();
    /// |pitilde|^2 / 2 (+ k |x|^2 / 2), Casimir c |chi|^2 / 2.
    static HamiltonianSpec kinetic(double spring = 0.0, double casimir_scale = 0.0);
};

/// H_alpha(z) = base(x, pitilde) + casimir(J0(z)) with (x, pitilde) from i_alpha.
double hamiltonian_value(const ConnectionForm& alpha, const HamiltonianSpec& spec, const PhasePoint& z);

/// Covector of df at z in the phase frame, by central differences.
Vec phase_gradient(const PhaseScalar& f, const PhasePoint& z, double step = kFiniteDifferenceStep);

/// Solves omega_A(z) zeta = df(z). Throws DegenerateForm if omega_A is singular or the
/// relative residual of the solve exceeds 1e-10.
PhaseTangent symplectic_gradient(const GaugeAutomorphism& a, const PhaseScalar& f, const PhasePoint& z);
PhaseTangent hamiltonian_vector_field(const GaugeAutomorphism& a, const ConnectionForm& alpha,
                                      const HamiltonianSpec& spec, const PhasePoint& z);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    std::vector<double> energy;
    std::vector<Vec> momentum;
    /// Integration stopped early because x left the chart.
    bool left_chart = false;

    bool empty() const { return points.empty(); }
};

/**
 * Runge-Kutta-Munthe-Kaas integration of order 4. Euclidean slots advance linearly,
 * the group slot by g <- exp(u) g with u built from dexp^{-1}-corrected stages.
 * Zero steps yields an empty trajectory.
 */
Trajectory integrate(const GaugeAutomorphism& a, const ConnectionForm& alpha, const HamiltonianSpec& spec,
                     const PhasePoint& z0, double dt, int steps);

/// {f, h}_A(z) = omega_A(X_f, X_h). With this convention {x_i, pi_j} = -delta_ij.
double poisson_bracket(const GaugeAutomorphism& a, const PhaseScalar& f, const PhaseScalar& h, const PhasePoint& z);
inline constexpr double kCanonicalBracketSign = -1.0;

struct BracketReport {
    double residual = 0.0;
    double tolerance = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
    /// Lie-Poisson intertwining sign (momentum_bracket_check only).
    double sign = 1.0;

    bool pass() const { return residual <= tolerance; }
};

/// max |{ftilde o i_alpha, c o J0}_A| over seeded points; alpha = A's reference.
BracketReport dual_pair_check(const GaugeAutomorphism& a, const BaseScalar& ftilde, const CoalgebraScalar& c,
                              int samples, std::uint64_t seed, double tol = 1e-5);
/// max |{c1 o J0, c2 o J0}_A - s {c1, c2}_LP(J0)| with s fitted over the samples.
BracketReport momentum_bracket_check(const GaugeAutomorphism& a, const CoalgebraScalar& c1,
                                     const CoalgebraScalar& c2, int samples, std::uint64_t seed,
                                     double tol = 1e-5);
/// max |{F1, F2}_A(h z) - {F1, F2}_A(z)| over seeded (h, z), Fi = fi o i_alpha.
BracketReport invariant_bracket_check(const GaugeAutomorphism& a, const BaseScalar& f1, const BaseScalar& f2,
                                      int samples, std::uint64_t seed, double tol = 1e-5);

/// J0(z) on the coadjoint orbit through rho0: Casimir test for SO(3)/SU(2), equality for SO(2).
bool leaf_membership(const CoalgebraElement& rho0, const PhasePoint& z, double tol);

struct ConservationReport {
    double energy_drift = 0.0;
    Vec momentum_drift;
    double max_momentum_drift = 0.0;
    double casimir_drift = 0.0;
    int points = 0;
};

/// Throws InvalidArgument on an empty trajectory.
ConservationReport conservation_report(const Trajectory& t);

struct ReductionReport {
    double max_deviation = 0.0;
    double max_base_deviation = 0.0;
    double max_momentum_deviation = 0.0;
    double final_time = 0.0;
    int steps = 0;
    bool left_chart = false;
    ConservationReport conservation;
    /// Projected (x, pitilde) of the full flow and the reduced flow, per step.
    std::vector<Vec> projected;
    std::vector<Vec> reduced;
};

/**
 * Integrates the full system from i_alpha_inv(x0, pitilde0, g0, rho) and compares the
 * (x, pitilde) projection with a separate RK4 integration on T*M of the reduced
 * system with one-form (base^T pitilde + a''^T rho) dx, a'' = a + shift base.
 * Throws NotFixedPoint unless rho is a coadjoint fixed point.
 */
ReductionReport reduced_magnetic_check(const GaugeAutomorphism& a, const ConnectionForm& alpha,
                                       const CoalgebraElement& rho, const HamiltonianSpec& spec, const Vec& x0,
                                       const Vec& pitilde0, const GroupElement& g0, double dt, int steps);

std::string trajectory_csv_header(const GroupPtr& group, int base_dim);
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

} // namespace bundlesym
