#pragma once

#include "bundlesym/canforms.hpp"

namespace bundlesym {

/// Point (pitilde, (x, g), chi) of the pulled-back bundle times the dual algebra.
struct PBPoint {
    Vec x;
    Vec pitilde;
    GroupElement g;
    CoalgebraElement chi;

    int base_dim() const { return static_cast<int>(x.size()); }
    int alg_dim() const { return g.group()->dim(); }
};

/**
 * Tangent vector in the frame (dx, dpitilde, xi, dchi). The base velocity dx
 * is shared by the cotangent factor and the bundle factor, so tangency to the
 * fibre product holds by construction.
 * Flattened layout: [dx (n) | dpitilde (n) | xi (m) | dchi (m)].
 */
struct PBTangent {
    Vec dx;
    Vec dpitilde;
    LieAlgebraElement xi;
    CoalgebraElement dchi;

    Vec flat() const;
    static PBTangent from_flat(const Vec& v, int base_dim, int alg_dim);
};

PBPoint pb_move(const PBPoint& q, const Vec& direction, double t);
Vec pb_frame_bracket(const GroupPtr& group, int base_dim, const Vec& a, const Vec& b);

/// (phi o Gamma_alpha, pi*(phi), J0(phi)).
PBPoint i_alpha(const ConnectionForm& alpha, const PhasePoint& z);
/// pitilde o T mu + chi o alpha_p.
PhasePoint i_alpha_inv(const ConnectionForm& alpha, const PBPoint& q);

/// I_alpha o A^* o I_alpha^{-1}. Throws ReferenceMismatch unless A is stored against alpha.
PBPoint lambda_action(const ConnectionForm& alpha, const GaugeAutomorphism& a, const PBPoint& q);
/// Transported lifted G-action: (pitilde, (x, g h), coadjoint(h, chi)).
PBPoint psi_g(const GroupElement& h, const PBPoint& q);

/// Covector of (I_alpha^{-1})^* Theta(A) at q in the flattened PB frame:
/// pitilde . base dx + <chi, phi_{A^-1}(alpha)_p(dx, xi)>, alpha = A's reference.
Vec pulled_back_theta(const GaugeAutomorphism& a, const PBPoint& q);
/// Theta(A) transported through T I_alpha^{-1} (finite-difference chain rule).
Vec transported_theta(const GaugeAutomorphism& a, const PBPoint& q);
/// Jacobian of I_alpha^{-1} at q, PB frame -> phase frame.
Mat i_alpha_inv_jacobian(const ConnectionForm& alpha, const PBPoint& q, double step = kFiniteDifferenceStep);

/// d of pulled_back_theta. Throws DegenerateForm when |det| <= 1e-10.
TwoFormMatrix pulled_back_omega(const GaugeAutomorphism& a, const PBPoint& q);
/// J^T omega_A(I^{-1} q) J with J = i_alpha_inv_jacobian.
TwoFormMatrix transported_omega(const GaugeAutomorphism& a, const PBPoint& q);

/// The three terms of d((I^{-1})^* Theta(A)) computed independently:
/// the base form d(pitilde . base dx), <d chi ^ beta>, and <chi, d beta>,
/// where beta = phi_{A^-1}(alpha) as an algebra-valued one-form on P.
struct PulledBackOmegaTerms {
    Mat base;
    Mat wedge;
    Mat curvature;

    Mat sum() const { return base + wedge + curvature; }
};

PulledBackOmegaTerms pulled_back_omega_terms(const GaugeAutomorphism& a, const PBPoint& q);

PBPoint random_pb_point(CounterRng& rng, const GroupPtr& group, const BaseChart& chart, double scale = 1.0);

} // namespace bundlesym
