#include "bundlesym/canforms.hpp"

#include <cmath>
#include <limits>

namespace bundlesym {

Vec PhaseTangent::flat() const {
    Vec v(2 * dx.size() + 2 * xi.coords.size());
    v << dx, xi.coords, dpi, drho.coords;
    return v;
}

PhaseTangent PhaseTangent::from_flat(const Vec& v, int n, int m) {
    if (v.size() != phase_dim(n, m)) throw Error(ErrorCode::InvalidArgument, "phase tangent has wrong length");
    return {v.segment(0, n), {v.segment(n, m)}, v.segment(n + m, n), {v.segment(2 * n + m, m)}};
}

PhasePoint phase_move(const PhasePoint& z, const Vec& d, double t) {
    const int n = z.base_dim();
    const int m = z.alg_dim();
    const auto& group = z.g.group();
    return {z.x + t * d.segment(0, n), exp(group, {t * d.segment(n, m)}) * z.g, z.pi + t * d.segment(n + m, n),
            {z.rho.coords + t * d.segment(2 * n + m, m)}};
}

Vec phase_frame_bracket(const GroupPtr& group, int n, const Vec& a, const Vec& b) {
    const int m = group->dim();
    Vec out = Vec::Zero(a.size());
    if (group->is_abelian()) return out;
    out.segment(n, m) = -bracket(group, {a.segment(n, m)}, {b.segment(n, m)}).coords;
    return out;
}

namespace {

auto phase_mover() {
    return [](const PhasePoint& z, const Vec& d, double t) { return phase_move(z, d, t); };
}

auto phase_bracket_for(const PhasePoint& z) {
    return [group = z.g.group(), n = z.base_dim()](const Vec& a, const Vec& b) {
        return phase_frame_bracket(group, n, a, b);
    };
}

} // namespace

Vec gamma0(const PhasePoint& z) {
    const int n = z.base_dim();
    const int m = z.alg_dim();
    Vec c = Vec::Zero(phase_dim(n, m));
    c.segment(0, n) = z.pi;
    c.segment(n, m) = z.rho.coords;
    return c;
}

OneFormOnPhase gamma0_form() { return OneFormOnPhase([](const PhasePoint& z) { return gamma0(z); }); }

Vec theta(const GaugeAutomorphism& a, const PhasePoint& z) {
    const int n = z.base_dim();
    const int m = z.alg_dim();
    const Mat mat = a.matrix_at(z.x);
    Vec covector(n + m);
    covector << z.pi, z.rho.coords;
    Vec c = Vec::Zero(phase_dim(n, m));
    c.segment(0, n + m) = mat.transpose() * covector;
    return c;
}

OneFormOnPhase theta_form(const GaugeAutomorphism& a) {
    return OneFormOnPhase([a](const PhasePoint& z) { return theta(a, z); });
}

Mat theta_reconstruct(const OneFormOnPhase& gamma, const BundlePoint& p, std::uint64_t seed) {
    const int n = static_cast<int>(p.x.size());
    const int m = p.g.group()->dim();
    const int k = n + m;
    auto at = [&](const Vec& phi) {
        return gamma(PhasePoint{p.x, p.g, phi.segment(0, n), {phi.segment(n, m)}});
    };

    CounterRng rng(seed, "theta_reconstruct");
    for (int s = 0; s < 4; ++s) {
        const Vec phi1 = rng.uniform_vec(k, -2.0, 2.0);
        const Vec phi2 = rng.uniform_vec(k, -2.0, 2.0);
        const double c1 = rng.uniform(-2.0, 2.0);
        const double c2 = rng.uniform(-2.0, 2.0);
        const Vec lhs = at(c1 * phi1 + c2 * phi2);
        const Vec rhs = c1 * at(phi1) + c2 * at(phi2);
        const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
        if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale)
            throw Error(ErrorCode::NotFibrewiseLinear, "one-form is not linear on the fibres of T*P");
    }

    Mat out(k, k);
    for (int row = 0; row < k; ++row) out.row(row) = at(Vec::Unit(k, row)).segment(0, k).transpose();
    return out;
}

PhasePoint lifted_g_action(const GroupElement& h, const PhasePoint& z) { return {z.x, z.g * h, z.pi, z.rho}; }

PhasePoint dual_action(const GaugeAutomorphism& a, const PhasePoint& z) {
    const Vec c = theta(a, z);
    const int n = z.base_dim();
    return {z.x, z.g, c.segment(0, n), {c.segment(n, z.alg_dim())}};
}

Mat phase_tangent_map(const std::function<PhasePoint(const PhasePoint&)>& map, const PhasePoint& z, double step) {
    const int n = z.base_dim();
    const int m = z.alg_dim();
    const int dim = phase_dim(n, m);
    const PhasePoint center = map(z);
    Mat jac(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const Vec e = Vec::Unit(dim, j);
        const PhasePoint plus = map(phase_move(z, e, step));
        const PhasePoint minus = map(phase_move(z, e, -step));
        Vec col(dim);
        col << (plus.x - minus.x) / (2.0 * step), right_trivialized_velocity(plus.g, minus.g, center.g, step),
            (plus.pi - minus.pi) / (2.0 * step), (plus.rho.coords - minus.rho.coords) / (2.0 * step);
        jac.col(j) = col;
    }
    return jac;
}

OneFormOnPhase pullback_by_map(const OneFormOnPhase& gamma, std::function<PhasePoint(const PhasePoint&)> map) {
    return OneFormOnPhase([gamma, map = std::move(map)](const PhasePoint& z) -> Vec {
        return phase_tangent_map(map, z).transpose() * gamma(map(z));
    });
}

OneFormOnPhase pullback_form(const GaugeAutomorphism& a, const OneFormOnPhase& gamma) {
    return pullback_by_map(gamma, [a](const PhasePoint& z) { return dual_action(a, z); });
}

double exterior_derivative(const OneFormOnPhase& gamma, const PhasePoint& z, const PhaseTangent& first,
                           const PhaseTangent& second, double step) {
    const Vec a = first.flat();
    const Vec b = second.flat();
    const auto move = phase_mover();
    const Vec da = frame_derivative(gamma.fn(), z, a, move, step);
    const Vec db = frame_derivative(gamma.fn(), z, b, move, step);
    return da.dot(b) - db.dot(a) - gamma(z).dot(phase_frame_bracket(z.g.group(), z.base_dim(), a, b));
}

TwoFormMatrix two_form_matrix(const OneFormOnPhase& gamma, const PhasePoint& z, double step) {
    const int dim = phase_dim(z.base_dim(), z.alg_dim());
    return {exterior_derivative_matrix<PhasePoint>(gamma.fn(), z, dim, phase_mover(), phase_bracket_for(z), step)};
}

TwoFormMatrix omega_matrix(const GaugeAutomorphism& a, const PhasePoint& z) {
    TwoFormMatrix w = two_form_matrix(theta_form(a), z);
    if (!w.matrix.allFinite() || std::abs(w.determinant()) <= 1e-10)
        throw Error(ErrorCode::DegenerateForm, "omega_A is degenerate at the evaluation point");
    return w;
}

double omega_closure_residual(const OneFormOnPhase& gamma, const PhasePoint& z, double step) {
    const int dim = phase_dim(z.base_dim(), z.alg_dim());
    std::function<Mat(const PhasePoint&)> omega = [gamma](const PhasePoint& w) {
        return two_form_matrix(gamma, w).matrix;
    };
    return closure_residual<PhasePoint>(omega, z, dim, phase_mover(), phase_bracket_for(z), step);
}

CoalgebraElement J0(const PhasePoint& z) { return coadjoint(z.g, z.rho); }

CoalgebraElement JA(const GaugeAutomorphism& a, const PhasePoint& z) { return J0(dual_action(a, z)); }

PhaseTangent fundamental_vector_field(const LieAlgebraElement& x, const PhasePoint& z) {
    const int n = z.base_dim();
    const int m = z.alg_dim();
    return {Vec::Zero(n), adjoint(z.g, x), Vec::Zero(n), CoalgebraElement::zero(m)};
}

OneFormOnPhase iota_alpha(const ConnectionForm& alpha, const ConnectionForm& alpha_prime) {
    return theta_form(transitive_witness(alpha, alpha_prime));
}

GeneralizedCanonicalReport check_generalized_canonical(const OneFormOnPhase& gamma, const GroupPtr& group,
                                                       const BaseChart& chart, int samples, std::uint64_t seed,
                                                       double tol) {
    CounterRng rng(seed, "generalized_canonical");
    GeneralizedCanonicalReport r;
    r.samples = samples;
    r.seed = seed;
    r.min_norm = std::numeric_limits<double>::infinity();
    const int n = chart.dim();
    const int m = group->dim();
    for (int s = 0; s < samples; ++s) {
        const PhasePoint z = random_phase_point(rng, group, chart);
        const Vec c = gamma(z);
        if (z.pi.norm() + z.rho.coords.norm() > 0.0) r.min_norm = std::min(r.min_norm, c.norm());
        r.fibre_residual = std::max(r.fibre_residual, c.segment(n + m, n + m).cwiseAbs().maxCoeff());

        const PhasePoint other = random_phase_point(rng, group, chart);
        const double c1 = rng.uniform(-2.0, 2.0);
        const double c2 = rng.uniform(-2.0, 2.0);
        PhasePoint z1 = z, z2 = z, mix = z;
        z2.pi = other.pi;
        z2.rho = other.rho;
        mix.pi = c1 * z1.pi + c2 * z2.pi;
        mix.rho.coords = c1 * z1.rho.coords + c2 * z2.rho.coords;
        const Vec lin = gamma(mix) - c1 * gamma(z1) - c2 * gamma(z2);
        r.linearity_residual = std::max(r.linearity_residual, lin.segment(0, n + m).cwiseAbs().maxCoeff());
    }
    r.nonvanishing = r.min_norm > tol;
    r.annihilates_fibres = r.fibre_residual <= tol;
    r.fibre_linear = r.linearity_residual <= tol;
    return r;
}

PhasePoint random_phase_point(CounterRng& rng, const GroupPtr& group, const BaseChart& chart, double scale) {
    Vec x = chart.sample(rng);
    GroupElement g = random_group_element(rng, group);
    Vec pi = rng.uniform_vec(chart.dim(), -scale, scale);
    Vec rho = rng.uniform_vec(group->dim(), -scale, scale);
    return {std::move(x), std::move(g), std::move(pi), {std::move(rho)}};
}

PhaseTangent random_phase_tangent(CounterRng& rng, int n, int m, double scale) {
    return PhaseTangent::from_flat(rng.uniform_vec(phase_dim(n, m), -scale, scale), n, m);
}

} // namespace bundlesym
