#include "bundlesym/bundle.hpp"

namespace bundlesym {

namespace {

void require_same_base(const BundlePoint& p, const TangentVector& v) {
    const bool same_x = p.x.size() == v.base.x.size() && (p.x - v.base.x).cwiseAbs().maxCoeff() <= 1e-12;
    const bool same_g = (p.g.matrix() - v.base.g.matrix()).cwiseAbs().maxCoeff() <= 1e-12;
    if (!same_x || !same_g) throw Error(ErrorCode::BasePointMismatch, "tangent vector is not based at p");
}

} // namespace

BaseChart::BaseChart(Vec lower_corner, Vec upper_corner) : lower(std::move(lower_corner)), upper(std::move(upper_corner)) {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw Error(ErrorCode::InvalidArgument, "chart corners must be nonempty and of equal dimension");
    if ((upper - lower).minCoeff() <= 0.0) throw Error(ErrorCode::InvalidArgument, "chart requires lower < upper");
}

BaseChart BaseChart::cube(int dim, double half_width) {
    return BaseChart(Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width));
}

bool BaseChart::contains(const Vec& x) const {
    if (x.size() != lower.size()) return false;
    return (x - lower).minCoeff() >= 0.0 && (upper - x).minCoeff() >= 0.0;
}

Vec BaseChart::sample(CounterRng& rng, double margin) const {
    Vec x(dim());
    for (int i = 0; i < dim(); ++i) {
        const double w = upper(i) - lower(i);
        x(i) = rng.uniform(lower(i) + margin * w, upper(i) - margin * w);
    }
    return x;
}

Vec TangentVector::components() const {
    Vec c(dx.size() + xi.coords.size());
    c << dx, xi.coords;
    return c;
}

ConnectionForm::ConnectionForm(GroupPtr group, BaseChart chart, MatrixField potential, std::string name) {
    if (potential.rows() != group->dim() || potential.cols() != chart.dim())
        throw Error(ErrorCode::InvalidArgument, "gauge potential must be alg_dim x base_dim");
    impl_ = std::make_shared<const Impl>(Impl{std::move(group), std::move(chart), std::move(potential), std::move(name)});
}

BundlePoint right_action(const BundlePoint& p, const GroupElement& h) { return {p.x, p.g * h}; }

TangentVector vertical_generator(const BundlePoint& p, const LieAlgebraElement& x) {
    return {p, Vec::Zero(p.x.size()), adjoint(p.g, x)};
}

TangentVector tg_action(const TangentGroupElement& t, const TangentVector& v) {
    return {right_action(v.base, t.g), v.dx, {v.xi.coords + adjoint(v.base.g, t.x).coords}};
}

TangentVector push_forward(const TangentVector& v, const GroupElement& h) { return {right_action(v.base, h), v.dx, v.xi}; }

LieAlgebraElement connection_eval(const ConnectionForm& alpha, const BundlePoint& p, const TangentVector& v) {
    require_same_base(p, v);
    return adjoint(p.g.inverse(), {alpha.potential(p.x) * v.dx + v.xi.coords});
}

TangentVector vertical_projection(const ConnectionForm& alpha, const BundlePoint& p, const TangentVector& v) {
    require_same_base(p, v);
    return {p, Vec::Zero(v.dx.size()), {alpha.potential(p.x) * v.dx + v.xi.coords}};
}

TangentVector horizontal_projection(const ConnectionForm& alpha, const BundlePoint& p, const TangentVector& v) {
    require_same_base(p, v);
    return {p, v.dx, {-alpha.potential(p.x) * v.dx}};
}

TangentVector horizontal_lift(const ConnectionForm& alpha, const BundlePoint& p, const Vec& base_vector) {
    return {p, base_vector, {-alpha.potential(p.x) * base_vector}};
}

ConnectionAxiomsReport connection_axioms_report(const ConnectionForm& alpha, int sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw Error(ErrorCode::InvalidArgument, "sample_count must be >= 1");
    CounterRng rng(seed, "connection_axioms");
    ConnectionAxiomsReport report;
    report.samples = sample_count;
    report.seed = seed;
    const auto& group = alpha.group();
    for (int s = 0; s < sample_count; ++s) {
        const BundlePoint p = random_bundle_point(rng, group, alpha.chart());
        const LieAlgebraElement x = random_algebra(rng, group, 1.0, 2.0);
        const GroupElement g = random_group_element(rng, group);
        const TangentVector v = random_tangent(rng, p);

        const LieAlgebraElement back = connection_eval(alpha, p, vertical_generator(p, x));
        report.reproduction_residual =
            std::max(report.reproduction_residual, (back.coords - x.coords).cwiseAbs().maxCoeff());

        const BundlePoint pg = right_action(p, g);
        const LieAlgebraElement lhs = connection_eval(alpha, pg, push_forward(v, g));
        const LieAlgebraElement rhs = adjoint(g.inverse(), connection_eval(alpha, p, v));
        report.equivariance_residual =
            std::max(report.equivariance_residual, (lhs.coords - rhs.coords).cwiseAbs().maxCoeff());
    }
    return report;
}

TensorialField connection_difference(const ConnectionForm& alpha, const ConnectionForm& alpha_prime) {
    if (alpha.group() != alpha_prime.group() || alpha.chart().dim() != alpha_prime.chart().dim())
        throw Error(ErrorCode::InvalidArgument, "connections live on different bundles");
    return {alpha.potential_field() - alpha_prime.potential_field()};
}

BundlePoint random_bundle_point(CounterRng& rng, const GroupPtr& group, const BaseChart& chart) {
    Vec x = chart.sample(rng);
    return {std::move(x), random_group_element(rng, group)};
}

TangentVector random_tangent(CounterRng& rng, const BundlePoint& p, double scale) {
    return {p, rng.uniform_vec(p.x.size(), -scale, scale),
            {rng.uniform_vec(p.g.group()->dim(), -scale, scale)}};
}

} // namespace bundlesym
