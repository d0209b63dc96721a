#pragma once

#include <functional>

#include "bundlesym/autgroup.hpp"
#include "bundlesym/frames.hpp"

namespace bundlesym {

/// Covector phi on T_(x,g)P with <phi, (dx, xi)> = pi . dx + <rho, xi>.
struct PhasePoint {
    Vec x;
    GroupElement g;
    Vec pi;
    CoalgebraElement rho;

    BundlePoint base() const { return {x, g}; }
    int base_dim() const { return static_cast<int>(x.size()); }
    int alg_dim() const { return g.group()->dim(); }
};

/**
 * Tangent vector to T*P in the frame (dx, xi, dpi, drho), xi right-trivialized.
 * Flattened layout: [dx (n) | xi (m) | dpi (n) | drho (m)].
 */
struct PhaseTangent {
    Vec dx;
    LieAlgebraElement xi;
    Vec dpi;
    CoalgebraElement drho;

    Vec flat() const;
    static PhaseTangent from_flat(const Vec& v, int base_dim, int alg_dim);
};

inline int phase_dim(int base_dim, int alg_dim) { return 2 * base_dim + 2 * alg_dim; }

/// Point reached at parameter t along (x + t dx, exp(t xi) g, pi + t dpi, rho + t drho).
PhasePoint phase_move(const PhasePoint& z, const Vec& direction, double t);
/// Frame bracket of two constant frame fields (flattened).
Vec phase_frame_bracket(const GroupPtr& group, int base_dim, const Vec& a, const Vec& b);

/// One-form on T*P: returns its covector in the flattened phase frame.
class OneFormOnPhase {
public:
    using Fn = std::function<Vec(const PhasePoint&)>;

    explicit OneFormOnPhase(Fn fn) : fn_(std::move(fn)) {}

    Vec operator()(const PhasePoint& z) const { return fn_(z); }
    double operator()(const PhasePoint& z, const PhaseTangent& t) const { return fn_(z).dot(t.flat()); }
    const Fn& fn() const { return fn_; }

private:
    Fn fn_;
};

struct TwoFormMatrix {
    Mat matrix;

    double operator()(const Vec& a, const Vec& b) const { return a.dot(matrix * b); }
    double antisymmetry_residual() const { return (matrix + matrix.transpose()).cwiseAbs().maxCoeff(); }
    double determinant() const { return matrix.determinant(); }
};

Vec gamma0(const PhasePoint& z);
OneFormOnPhase gamma0_form();

/// Covector of Theta(A) at z: zeta -> <phi, A (dx, xi)>.
Vec theta(const GaugeAutomorphism& a, const PhasePoint& z);
OneFormOnPhase theta_form(const GaugeAutomorphism& a);

/**
 * Recovers the matrix of A(p) on stacked (dx, xi) from a generalized canonical
 * form by evaluating it on basis covectors. Throws NotFibrewiseLinear when the
 * sampled linearity test fails.
 */
Mat theta_reconstruct(const OneFormOnPhase& gamma, const BundlePoint& p, std::uint64_t seed = 0);

PhasePoint lifted_g_action(const GroupElement& h, const PhasePoint& z);
/// (A^* phi) = phi o A(p), same base point.
PhasePoint dual_action(const GaugeAutomorphism& a, const PhasePoint& z);

/// Jacobian (in phase frames) of a map of T*P at z, by central differences.
Mat phase_tangent_map(const std::function<PhasePoint(const PhasePoint&)>& map, const PhasePoint& z,
                      double step = kFiniteDifferenceStep);
/// Pullback of a one-form by a map of T*P: z -> T map(z)^T gamma(map(z)).
OneFormOnPhase pullback_by_map(const OneFormOnPhase& gamma, std::function<PhasePoint(const PhasePoint&)> map);
/// L*_A gamma = pullback of gamma by A^*.
OneFormOnPhase pullback_form(const GaugeAutomorphism& a, const OneFormOnPhase& gamma);

double exterior_derivative(const OneFormOnPhase& gamma, const PhasePoint& z, const PhaseTangent& first,
                           const PhaseTangent& second, double step = kFiniteDifferenceStep);
/// d(gamma) on the phase frame basis at z.
TwoFormMatrix two_form_matrix(const OneFormOnPhase& gamma, const PhasePoint& z, double step = kFiniteDifferenceStep);
/// omega_A = d Theta(A) at z. Throws DegenerateForm when |det| <= 1e-10.
TwoFormMatrix omega_matrix(const GaugeAutomorphism& a, const PhasePoint& z);
/// max |d omega(e_i, e_j, e_k)| for omega = d gamma; outer step `step`.
double omega_closure_residual(const OneFormOnPhase& gamma, const PhasePoint& z, double step = 1e-3);

CoalgebraElement J0(const PhasePoint& z);
CoalgebraElement JA(const GaugeAutomorphism& a, const PhasePoint& z);
PhaseTangent fundamental_vector_field(const LieAlgebraElement& x, const PhasePoint& z);

/// Theta(id + B) with B = connection_difference(alpha, alpha_prime).
OneFormOnPhase iota_alpha(const ConnectionForm& alpha, const ConnectionForm& alpha_prime);

struct GeneralizedCanonicalReport {
    /// Smallest |gamma_z| over sampled z with nonzero covector.
    double min_norm = 0.0;
    /// max |gamma_z(0, 0, dpi, drho)|
    double fibre_residual = 0.0;
    /// max |gamma at (c1 phi1 + c2 phi2) - c1 gamma(phi1) - c2 gamma(phi2)| on (dx, xi)-slots
    double linearity_residual = 0.0;
    bool nonvanishing = false;
    bool annihilates_fibres = false;
    bool fibre_linear = false;
    int samples = 0;
    std::uint64_t seed = 0;

    bool pass() const { return nonvanishing && annihilates_fibres && fibre_linear; }
};

GeneralizedCanonicalReport check_generalized_canonical(const OneFormOnPhase& gamma, const GroupPtr& group,
                                                       const BaseChart& chart, int samples, std::uint64_t seed,
                                                       double tol = 1e-10);

PhasePoint random_phase_point(CounterRng& rng, const GroupPtr& group, const BaseChart& chart, double scale = 1.0);
PhaseTangent random_phase_tangent(CounterRng& rng, int base_dim, int alg_dim, double scale = 1.0);

} // namespace bundlesym
