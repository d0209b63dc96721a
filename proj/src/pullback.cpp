#include "bundlesym/pullback.hpp"

#include <cmath>

namespace bundlesym {

Vec PBTangent::flat() const {
    Vec v(2 * dx.size() + 2 * xi.coords.size());
    v << dx, dpitilde, xi.coords, dchi.coords;
    return v;
}

PBTangent PBTangent::from_flat(const Vec& v, int n, int m) {
    if (v.size() != phase_dim(n, m)) throw Error(ErrorCode::InvalidArgument, "PB tangent has wrong length");
    return {v.segment(0, n), v.segment(n, n), {v.segment(2 * n, m)}, {v.segment(2 * n + m, m)}};
}

PBPoint pb_move(const PBPoint& q, const Vec& d, double t) {
    const int n = q.base_dim();
    const int m = q.alg_dim();
    return {q.x + t * d.segment(0, n), q.pitilde + t * d.segment(n, n), exp(q.g.group(), {t * d.segment(2 * n, m)}) * q.g,
            {q.chi.coords + t * d.segment(2 * n + m, m)}};
}

Vec pb_frame_bracket(const GroupPtr& group, int n, const Vec& a, const Vec& b) {
    const int m = group->dim();
    Vec out = Vec::Zero(a.size());
    if (group->is_abelian()) return out;
    out.segment(2 * n, m) = -bracket(group, {a.segment(2 * n, m)}, {b.segment(2 * n, m)}).coords;
    return out;
}

namespace {

auto pb_mover() {
    return [](const PBPoint& q, const Vec& d, double t) { return pb_move(q, d, t); };
}

auto pb_bracket_for(const PBPoint& q) {
    return [group = q.g.group(), n = q.base_dim()](const Vec& a, const Vec& b) {
        return pb_frame_bracket(group, n, a, b);
    };
}

// Matrix (m x N) of the algebra-valued one-form beta_(x,g)(dx, xi) = Ad_{g^-1}(b(x) dx + xi)
// on the PB frame, for a connection with potential b.
Mat connection_on_pb_frame(const ConnectionForm& beta, const PBPoint& q) {
    const int n = q.base_dim();
    const int m = q.alg_dim();
    const Mat ad_inv = adjoint_matrix(q.g.inverse());
    Mat out = Mat::Zero(m, phase_dim(n, m));
    out.block(0, 0, m, n) = ad_inv * beta.potential(q.x);
    out.block(0, 2 * n, m, m) = ad_inv;
    return out;
}

std::function<Vec(const PBPoint&)> pulled_back_theta_fn(const GaugeAutomorphism& a) {
    const ConnectionForm beta = act_on_connection(inverse(a), a.reference());
    const MatrixField base = a.base_part();
    return [beta, base](const PBPoint& q) -> Vec {
        const int n = q.base_dim();
        Vec c = connection_on_pb_frame(beta, q).transpose() * q.chi.coords;
        c.segment(0, n) += base(q.x).transpose() * q.pitilde;
        return c;
    };
}

} // namespace

PBPoint i_alpha(const ConnectionForm& alpha, const PhasePoint& z) {
    const Mat a = alpha.potential(z.x);
    return {z.x, z.pi - a.transpose() * z.rho.coords, z.g, J0(z)};
}

PhasePoint i_alpha_inv(const ConnectionForm& alpha, const PBPoint& q) {
    const Mat a = alpha.potential(q.x);
    const CoalgebraElement rho = coadjoint(q.g.inverse(), q.chi);
    return {q.x, q.g, q.pitilde + a.transpose() * rho.coords, rho};
}

PBPoint lambda_action(const ConnectionForm& alpha, const GaugeAutomorphism& a, const PBPoint& q) {
    if (!a.reference().same_as(alpha))
        throw Error(ErrorCode::ReferenceMismatch, "automorphism is stored against another reference connection");
    return i_alpha(alpha, dual_action(a, i_alpha_inv(alpha, q)));
}

PBPoint psi_g(const GroupElement& h, const PBPoint& q) { return {q.x, q.pitilde, q.g * h, coadjoint(h, q.chi)}; }

Vec pulled_back_theta(const GaugeAutomorphism& a, const PBPoint& q) { return pulled_back_theta_fn(a)(q); }

Mat i_alpha_inv_jacobian(const ConnectionForm& alpha, const PBPoint& q, double step) {
    const int n = q.base_dim();
    const int m = q.alg_dim();
    const int dim = phase_dim(n, m);
    const PhasePoint center = i_alpha_inv(alpha, q);
    Mat jac(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const Vec e = Vec::Unit(dim, j);
        const PhasePoint plus = i_alpha_inv(alpha, pb_move(q, e, step));
        const PhasePoint minus = i_alpha_inv(alpha, pb_move(q, e, -step));
        Vec col(dim);
        col << (plus.x - minus.x) / (2.0 * step), right_trivialized_velocity(plus.g, minus.g, center.g, step),
            (plus.pi - minus.pi) / (2.0 * step), (plus.rho.coords - minus.rho.coords) / (2.0 * step);
        jac.col(j) = col;
    }
    return jac;
}

Vec transported_theta(const GaugeAutomorphism& a, const PBPoint& q) {
    const ConnectionForm& alpha = a.reference();
    return i_alpha_inv_jacobian(alpha, q).transpose() * theta(a, i_alpha_inv(alpha, q));
}

TwoFormMatrix pulled_back_omega(const GaugeAutomorphism& a, const PBPoint& q) {
    const int dim = phase_dim(q.base_dim(), q.alg_dim());
    TwoFormMatrix w{exterior_derivative_matrix<PBPoint>(pulled_back_theta_fn(a), q, dim, pb_mover(), pb_bracket_for(q),
                                                        kFiniteDifferenceStep)};
    if (!w.matrix.allFinite() || std::abs(w.determinant()) <= 1e-10)
        throw Error(ErrorCode::DegenerateForm, "pulled-back omega is degenerate at the evaluation point");
    return w;
}

TwoFormMatrix transported_omega(const GaugeAutomorphism& a, const PBPoint& q) {
    const ConnectionForm& alpha = a.reference();
    const Mat jac = i_alpha_inv_jacobian(alpha, q);
    const TwoFormMatrix w = omega_matrix(a, i_alpha_inv(alpha, q));
    return {jac.transpose() * w.matrix * jac};
}

PulledBackOmegaTerms pulled_back_omega_terms(const GaugeAutomorphism& a, const PBPoint& q) {
    const int n = q.base_dim();
    const int m = q.alg_dim();
    const int dim = phase_dim(n, m);
    const double h = kFiniteDifferenceStep;
    PulledBackOmegaTerms terms{Mat::Zero(dim, dim), Mat::Zero(dim, dim), Mat::Zero(dim, dim)};

    // d(pitilde_i base_ij(x) dx_j)
    const Mat base = a.base_part()(q.x);
    std::vector<Mat> dbase;
    for (int k = 0; k < n; ++k) dbase.push_back(directional_derivative(a.base_part(), q.x, Vec::Unit(n, k), h));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += q.pitilde(i) * (dbase[k](i, j) - dbase[j](i, k));
            terms.base(k, j) = s;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            terms.base(n + i, j) = base(i, j);
            terms.base(j, n + i) = -base(i, j);
        }

    // <d chi ^ beta>
    const ConnectionForm beta = act_on_connection(inverse(a), a.reference());
    const Mat bmat = connection_on_pb_frame(beta, q);
    Mat dchi = Mat::Zero(m, dim);
    dchi.block(0, 2 * n + m, m, m).setIdentity();
    terms.wedge = dchi.transpose() * bmat - bmat.transpose() * dchi;

    // <chi, d beta> with chi frozen at q
    const Vec chi = q.chi.coords;
    std::function<Vec(const PBPoint&)> paired = [beta, chi](const PBPoint& w) -> Vec {
        return connection_on_pb_frame(beta, w).transpose() * chi;
    };
    terms.curvature = exterior_derivative_matrix<PBPoint>(paired, q, dim, pb_mover(), pb_bracket_for(q), h);
    return terms;
}

PBPoint random_pb_point(CounterRng& rng, const GroupPtr& group, const BaseChart& chart, double scale) {
    Vec x = chart.sample(rng);
    Vec pitilde = rng.uniform_vec(chart.dim(), -scale, scale);
    GroupElement g = random_group_element(rng, group);
    Vec chi = rng.uniform_vec(group->dim(), -scale, scale);
    return {std::move(x), std::move(pitilde), std::move(g), {std::move(chi)}};
}

} // namespace bundlesym
