#include "bundlesym/autgroup.hpp"

#include <cmath>

namespace bundlesym {

namespace {

void require_same_reference(const GaugeAutomorphism& a1, const GaugeAutomorphism& a2) {
    if (!a1.reference().same_as(a2.reference()))
        throw Error(ErrorCode::ReferenceMismatch, "automorphisms are stored against different reference connections");
}

void require_same_bundle(const ConnectionForm& a, const ConnectionForm& b) {
    if (a.group() != b.group() || a.chart().dim() != b.chart().dim())
        throw Error(ErrorCode::InvalidArgument, "connections live on different bundles");
}

double component_distance(const TangentVector& u, const TangentVector& v) {
    return std::max((u.dx - v.dx).cwiseAbs().maxCoeff(), (u.xi.coords - v.xi.coords).cwiseAbs().maxCoeff());
}

double chart_radius(const BaseChart& chart) {
    return std::max({chart.lower.cwiseAbs().maxCoeff(), chart.upper.cwiseAbs().maxCoeff(), 1e-3});
}

} // namespace

GaugeAutomorphism::GaugeAutomorphism(ConnectionForm reference, MatrixField base, MatrixField shift)
    : reference_(std::move(reference)), base_(std::move(base)), shift_(std::move(shift)) {
    const int n = reference_.chart().dim();
    const int m = reference_.group()->dim();
    if (base_.rows() != n || base_.cols() != n) throw Error(ErrorCode::InvalidArgument, "base part must be n x n");
    if (shift_.rows() != m || shift_.cols() != n)
        throw Error(ErrorCode::InvalidArgument, "shift part must be alg_dim x n");

    CounterRng rng(0, "base_part_invertibility");
    const BaseChart& chart = reference_.chart();
    for (int s = 0; s < 32; ++s) {
        const Vec x = chart.sample(rng, 0.0);
        if (std::abs(base_(x).determinant()) <= kSingularDet)
            throw Error(ErrorCode::SingularBasePart, "base part is singular at a sampled point");
    }
}

GaugeAutomorphism GaugeAutomorphism::identity(const ConnectionForm& reference) {
    const int n = reference.chart().dim();
    return GaugeAutomorphism(reference, MatrixField::identity(n), MatrixField::zero(reference.group()->dim(), n));
}

Mat GaugeAutomorphism::matrix_at(const Vec& x) const {
    const int n = base_dim();
    const int m = alg_dim();
    const Mat base = base_(x);
    const Mat a = reference_.potential(x);
    Mat out = Mat::Zero(n + m, n + m);
    out.topLeftCorner(n, n) = base;
    out.bottomLeftCorner(m, n) = a - a * base + shift_(x) * base;
    out.bottomRightCorner(m, m).setIdentity();
    return out;
}

TangentVector apply(const GaugeAutomorphism& a, const TangentVector& v) {
    const Vec& x = v.base.x;
    const Mat base = a.base_part()(x);
    const Mat pot = a.reference().potential(x);
    const Vec bdx = base * v.dx;
    return {v.base, bdx, {v.xi.coords + pot * v.dx - pot * bdx + a.shift_part()(x) * bdx}};
}

GaugeAutomorphism product(const GaugeAutomorphism& a1, const GaugeAutomorphism& a2) {
    require_same_reference(a1, a2);
    return GaugeAutomorphism(a1.reference(), a1.base_part() * a2.base_part(),
                             a1.shift_part() + a2.shift_part() * a1.base_part().inverse());
}

GaugeAutomorphism inverse(const GaugeAutomorphism& a) {
    return GaugeAutomorphism(a.reference(), a.base_part().inverse(), (a.shift_part() * a.base_part()).scaled(-1.0));
}

BaseAutomorphism lambda_base(const GaugeAutomorphism& a) { return {a.base_part()}; }

GaugeAutomorphism sigma_alpha(const ConnectionForm& alpha, const BaseAutomorphism& base) {
    return GaugeAutomorphism(alpha, base.field, MatrixField::zero(alpha.group()->dim(), alpha.chart().dim()));
}

VerticalShift beta_alpha(const GaugeAutomorphism& a) { return {a.shift_part()}; }

GaugeAutomorphism include_shift(const ConnectionForm& alpha, const VerticalShift& shift) {
    return GaugeAutomorphism(alpha, MatrixField::identity(alpha.chart().dim()), shift.shift);
}

GaugeAutomorphism change_reference(const GaugeAutomorphism& a, const ConnectionForm& new_reference) {
    require_same_bundle(a.reference(), new_reference);
    // Equate the xi-rows of the two decompositions:
    // a - a base + b base = a' - a' base + b' base.
    const MatrixField diff = a.reference().potential_field() - new_reference.potential_field();
    return GaugeAutomorphism(new_reference, a.base_part(),
                             diff * a.base_part().inverse() - diff + a.shift_part());
}

ConnectionForm act_on_connection(const GaugeAutomorphism& a, const ConnectionForm& alpha_prime) {
    const ConnectionForm& ref = a.reference();
    require_same_bundle(ref, alpha_prime);
    const MatrixField& a_ref = ref.potential_field();
    MatrixField potential = a_ref + (alpha_prime.potential_field() - a_ref) * a.base_part().inverse() - a.shift_part();
    return ConnectionForm(alpha_prime.group(), alpha_prime.chart(), std::move(potential), "phi(" + alpha_prime.name() + ")");
}

GaugeAutomorphism transitive_witness(const ConnectionForm& alpha, const ConnectionForm& alpha_prime) {
    return include_shift(alpha, {connection_difference(alpha, alpha_prime).field});
}

GaugeAutomorphism one_param(const ConnectionForm& alpha, double c) {
    if (c == 0.0) throw Error(ErrorCode::ZeroScale, "one-parameter subgroup requires c != 0");
    return sigma_alpha(alpha, {MatrixField::identity(alpha.chart().dim()).scaled(c)});
}

ResidualReport lift_equivariance_check(const GaugeAutomorphism& a, int samples, std::uint64_t seed) {
    CounterRng rng(seed, "lift_equivariance");
    const ConnectionForm& alpha = a.reference();
    const ConnectionForm moved = act_on_connection(a, alpha);
    ResidualReport report{0.0, samples, seed};
    for (int s = 0; s < samples; ++s) {
        const BundlePoint p = random_bundle_point(rng, alpha.group(), alpha.chart());
        const Vec v = rng.uniform_vec(alpha.chart().dim(), -1.0, 1.0);
        const TangentVector lhs = apply(a, horizontal_lift(alpha, p, v));
        const TangentVector rhs = horizontal_lift(moved, p, a.base_part()(p.x) * v);
        report.max_residual = std::max(report.max_residual, component_distance(lhs, rhs));
    }
    return report;
}

RawBundleMap as_raw_map(const GaugeAutomorphism& a) {
    return [a](const TangentVector& v) { return apply(a, v); };
}

CommutationReport tg_commutation_check(const RawBundleMap& map, const GroupPtr& group, const BaseChart& chart,
                                       int samples, std::uint64_t seed) {
    CounterRng rng(seed, "tg_commutation");
    CommutationReport report;
    report.samples = samples;
    report.seed = seed;
    for (int s = 0; s < samples; ++s) {
        const BundlePoint p = random_bundle_point(rng, group, chart);
        const TangentVector v = random_tangent(rng, p);
        const TangentGroupElement t{random_group_element(rng, group), random_algebra(rng, group, 1.0, 2.0)};
        const LieAlgebraElement x = random_algebra(rng, group, 1.0, 2.0);

        report.commutation_residual =
            std::max(report.commutation_residual, component_distance(map(tg_action(t, v)), tg_action(t, map(v))));
        const TangentVector vert = vertical_generator(p, x);
        report.vertical_residual = std::max(report.vertical_residual, component_distance(map(vert), vert));
        report.equivariance_residual = std::max(
            report.equivariance_residual, component_distance(map(push_forward(v, t.g)), push_forward(map(v), t.g)));
    }
    return report;
}

MatrixField random_linear_field(CounterRng& rng, int rows, int cols, int base_dim, double strength) {
    const Mat c = rng.uniform_mat(rows, cols, -strength, strength);
    std::vector<Mat> coeffs;
    for (int k = 0; k < base_dim; ++k) coeffs.push_back(rng.uniform_mat(rows, cols, -strength, strength));
    return MatrixField::linear(c, std::move(coeffs));
}

GaugeAutomorphism random_automorphism(CounterRng& rng, const ConnectionForm& reference, double strength) {
    const int n = reference.chart().dim();
    const int m = reference.group()->dim();
    const double r = chart_radius(reference.chart());
    // Entries of the perturbation stay below 1.5 strength / n, so the base
    // part is diagonally dominant for strength < 2/3.
    const Mat c = rng.uniform_mat(n, n, -strength / n, strength / n);
    std::vector<Mat> coeffs;
    const double cs = strength / (2.0 * n * n * r);
    for (int k = 0; k < n; ++k) coeffs.push_back(rng.uniform_mat(n, n, -cs, cs));
    MatrixField base = MatrixField::linear(Mat::Identity(n, n) + c, std::move(coeffs));
    MatrixField shift = random_linear_field(rng, m, n, n, strength / r);
    return GaugeAutomorphism(reference, std::move(base), std::move(shift));
}

ConnectionForm random_connection(CounterRng& rng, const GroupPtr& group, const BaseChart& chart, double strength) {
    const double r = chart_radius(chart);
    return ConnectionForm(group, chart, random_linear_field(rng, group->dim(), chart.dim(), chart.dim(), strength / r),
                          "random");
}

} // namespace bundlesym
