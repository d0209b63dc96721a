#pragma once

#include <functional>

#include "bundlesym/bundle.hpp"

namespace bundlesym {

/// Automorphism of the base tangent bundle: an invertible n x n matrix field.
struct BaseAutomorphism {
    MatrixField field;
};

/// Element id + B of the abelian normal subgroup of vertical shifts.
struct VerticalShift {
    MatrixField shift;
};

/**
 * Element of the group of tangent-bundle automorphisms commuting with the
 * tangent group action, stored as A = (id + B) sigma_ref(base) relative to a
 * reference connection.
 *
 * In right-trivialized components, with a = reference potential:
 *   A(dx, xi) = (base dx, xi + (a - a base + shift base) dx).
 * The map does not depend on the group coordinate g.
 */
class GaugeAutomorphism {
public:
    /// Validates |det base(x)| > 1e-10 on a seeded sample of the reference chart.
    GaugeAutomorphism(ConnectionForm reference, MatrixField base, MatrixField shift);

    static GaugeAutomorphism identity(const ConnectionForm& reference);

    const ConnectionForm& reference() const { return reference_; }
    const MatrixField& base_part() const { return base_; }
    const MatrixField& shift_part() const { return shift_; }
    int base_dim() const { return base_.rows(); }
    int alg_dim() const { return shift_.rows(); }

    /// (n + alg_dim)-square matrix of A(p) acting on stacked (dx, xi).
    Mat matrix_at(const Vec& x) const;

private:
    ConnectionForm reference_;
    MatrixField base_;
    MatrixField shift_;
};

TangentVector apply(const GaugeAutomorphism& a, const TangentVector& v);
/// (A1 A2) with apply(product(A1, A2), v) = apply(A1, apply(A2, v)).
GaugeAutomorphism product(const GaugeAutomorphism& a1, const GaugeAutomorphism& a2);
GaugeAutomorphism inverse(const GaugeAutomorphism& a);

BaseAutomorphism lambda_base(const GaugeAutomorphism& a);
GaugeAutomorphism sigma_alpha(const ConnectionForm& alpha, const BaseAutomorphism& base);
VerticalShift beta_alpha(const GaugeAutomorphism& a);
/// The inclusion of a vertical shift relative to `alpha`.
GaugeAutomorphism include_shift(const ConnectionForm& alpha, const VerticalShift& shift);

/// Same automorphism re-expressed against another reference connection.
GaugeAutomorphism change_reference(const GaugeAutomorphism& a, const ConnectionForm& new_reference);

/// Connection v -> alpha'(A^{-1} v), as a new gauge potential
/// a'' = a_ref + (a' - a_ref) base^{-1} - shift.
ConnectionForm act_on_connection(const GaugeAutomorphism& a, const ConnectionForm& alpha_prime);

/// The unique vertical shift carrying alpha to alpha_prime: (id, a - a').
GaugeAutomorphism transitive_witness(const ConnectionForm& alpha, const ConnectionForm& alpha_prime);

/// Pi^v + c Pi^h. Throws ZeroScale for c == 0.
GaugeAutomorphism one_param(const ConnectionForm& alpha, double c);

struct ResidualReport {
    double max_residual = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
};

/// max |A Gamma_alpha(v) - Gamma_{phi_A(alpha)}(lambda(A) v)| over seeded (p, v).
ResidualReport lift_equivariance_check(const GaugeAutomorphism& a, int samples, std::uint64_t seed);

/// A fibre-preserving linear map of TP given as a callable; used to test the
/// tangent-group commutation criterion on maps outside the stored class.
using RawBundleMap = std::function<TangentVector(const TangentVector&)>;

RawBundleMap as_raw_map(const GaugeAutomorphism& a);

struct CommutationReport {
    /// max |A(pg) Phi_t(v) - Phi_t(A(p) v)| over t = (g, X)
    double commutation_residual = 0.0;
    /// max |A(p) T kappa_p(e) X - T kappa_p(e) X|
    double vertical_residual = 0.0;
    /// max |A(pg) T kappa_g v - T kappa_g A(p) v|
    double equivariance_residual = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
};

CommutationReport tg_commutation_check(const RawBundleMap& map, const GroupPtr& group, const BaseChart& chart,
                                       int samples, std::uint64_t seed);

/// Random admissible automorphism: base = I + small linear field, shift = linear field.
GaugeAutomorphism random_automorphism(CounterRng& rng, const ConnectionForm& reference, double strength = 0.3);
/// Random connection with a linear gauge potential.
ConnectionForm random_connection(CounterRng& rng, const GroupPtr& group, const BaseChart& chart, double strength = 0.5);
MatrixField random_linear_field(CounterRng& rng, int rows, int cols, int base_dim, double strength);

} // namespace bundlesym
