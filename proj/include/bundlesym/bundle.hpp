#pragma once

#include <memory>
#include <string>

#include "bundlesym/field.hpp"
#include "bundlesym/liegroup.hpp"
#include "bundlesym/random.hpp"

namespace bundlesym {

/// Axis-aligned box chart of the base manifold.
struct BaseChart {
    Vec lower;
    Vec upper;

    BaseChart(Vec lower_corner, Vec upper_corner);
    static BaseChart cube(int dim, double half_width);

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const Vec& x) const;
    /// Uniform sample in the box shrunk by `margin` (fraction of each side).
    Vec sample(CounterRng& rng, double margin = 0.1) const;
};

/// Point (x, g) of the trivialized bundle.
struct BundlePoint {
    Vec x;
    GroupElement g;
};

/// Tangent vector at `base`, right-trivialized: the group velocity is xi * g.
struct TangentVector {
    BundlePoint base;
    Vec dx;
    LieAlgebraElement xi;

    /// (dx, xi) stacked into one vector.
    Vec components() const;
};

/**
 * Connection form encoded by its local gauge potential a(x) (alg_dim x n).
 *
 * alpha_(x, g)(dx, xi) = Ad_{g^-1}(a(x) dx + xi). Both connection axioms hold
 * for every potential in this encoding. Copies share identity, which is what
 * automorphisms compare when checking their reference connection.
 */
class ConnectionForm {
public:
    ConnectionForm(GroupPtr group, BaseChart chart, MatrixField potential, std::string name = "");

    const GroupPtr& group() const { return impl_->group; }
    const BaseChart& chart() const { return impl_->chart; }
    const MatrixField& potential_field() const { return impl_->potential; }
    const std::string& name() const { return impl_->name; }
    Mat potential(const Vec& x) const { return impl_->potential(x); }

    bool same_as(const ConnectionForm& other) const { return impl_ == other.impl_; }

private:
    struct Impl {
        GroupPtr group;
        BaseChart chart;
        MatrixField potential;
        std::string name;
    };
    std::shared_ptr<const Impl> impl_;
};

/// Tensorial one-form b(x) (alg_dim x n); acts as B(dx, xi) = (0, b(x) dx).
struct TensorialField {
    MatrixField field;
};

BundlePoint right_action(const BundlePoint& p, const GroupElement& h);
TangentVector vertical_generator(const BundlePoint& p, const LieAlgebraElement& x);
TangentVector tg_action(const TangentGroupElement& t, const TangentVector& v);
/// Push-forward of v along the right action by h (the identity on components).
TangentVector push_forward(const TangentVector& v, const GroupElement& h);

LieAlgebraElement connection_eval(const ConnectionForm& alpha, const BundlePoint& p, const TangentVector& v);
TangentVector vertical_projection(const ConnectionForm& alpha, const BundlePoint& p, const TangentVector& v);
TangentVector horizontal_projection(const ConnectionForm& alpha, const BundlePoint& p, const TangentVector& v);
TangentVector horizontal_lift(const ConnectionForm& alpha, const BundlePoint& p, const Vec& base_vector);

struct ConnectionAxiomsReport {
    /// max |alpha(vertical_generator(p, X)) - X|
    double reproduction_residual = 0.0;
    /// max |alpha_{pg}(T kappa_g v) - Ad_{g^-1} alpha_p(v)|
    double equivariance_residual = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
};

ConnectionAxiomsReport connection_axioms_report(const ConnectionForm& alpha, int sample_count, std::uint64_t seed);

/// b = a - a'. Throws InvalidArgument when the connections live on different groups or charts.
TensorialField connection_difference(const ConnectionForm& alpha, const ConnectionForm& alpha_prime);

/// Random bundle point inside the chart.
BundlePoint random_bundle_point(CounterRng& rng, const GroupPtr& group, const BaseChart& chart);
TangentVector random_tangent(CounterRng& rng, const BundlePoint& p, double scale = 1.0);

} // namespace bundlesym
