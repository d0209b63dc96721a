#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bundlesym/errors.hpp"

namespace bundlesym {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// Matrix realization of group and algebra elements. SU(2) needs complex
/// entries; the real groups simply carry zero imaginary parts.
using CMat = Eigen::MatrixXcd;

enum class GroupKind { SO2, SO3, SU2 };

/**
 * A compact matrix Lie group with a fixed basis {E_i} of its algebra.
 *
 * The basis is orthonormal for the Ad-invariant inner product
 * <A, B> = Re tr(A^H B) / tr(E_0^H E_0), so Ad_g is an orthogonal matrix in
 * algebra coordinates and the coalgebra pairing is the coordinate dot product.
 */
class GroupDescriptor {
public:
    static std::shared_ptr<const GroupDescriptor> make(GroupKind kind);
    /// Accepts "SO2", "SO3" or "SU2".
    static std::shared_ptr<const GroupDescriptor> from_name(std::string_view name);

    GroupKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    int matrix_dim() const { return matrix_dim_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    bool is_abelian() const { return kind_ == GroupKind::SO2; }

    const std::vector<CMat>& basis() const { return basis_; }
    /// c^k_ij with [E_i, E_j] = sum_k c^k_ij E_k.
    double structure_constant(int k, int i, int j) const {
        return structure_[static_cast<std::size_t>((k * dim() + i) * dim() + j)];
    }

    /// sum_i coords_i E_i
    CMat hat(const Vec& coords) const;
    /// Coordinates of an algebra matrix in the basis (least squares projection).
    Vec vee(const CMat& m) const;

    /// Max residual of antisymmetry and Jacobi identity of the structure constants.
    double structure_residual() const;

private:
    explicit GroupDescriptor(GroupKind kind);

    GroupKind kind_;
    std::string name_;
    int matrix_dim_ = 0;
    std::vector<CMat> basis_;
    std::vector<double> structure_;
    double norm_ = 1.0;
};

using GroupPtr = std::shared_ptr<const GroupDescriptor>;

struct LieAlgebraElement {
    Vec coords;

    static LieAlgebraElement zero(int dim) { return {Vec::Zero(dim)}; }
    static LieAlgebraElement unit(int dim, int i) { return {Vec::Unit(dim, i)}; }
};

struct CoalgebraElement {
    Vec coords;

    static CoalgebraElement zero(int dim) { return {Vec::Zero(dim)}; }
};

inline double pairing(const CoalgebraElement& rho, const LieAlgebraElement& x) {
    return rho.coords.dot(x.coords);
}

class GroupElement {
public:
    GroupElement(GroupPtr group, CMat matrix);

    static GroupElement identity(GroupPtr group);

    const GroupPtr& group() const { return group_; }
    const CMat& matrix() const { return matrix_; }

    GroupElement operator*(const GroupElement& other) const;
    GroupElement inverse() const;

    /// Distance from the group: orthogonality/unitarity and determinant defect.
    double membership_residual() const;

private:
    GroupPtr group_;
    CMat matrix_;
};

struct TangentGroupElement {
    GroupElement g;
    LieAlgebraElement x;
};

GroupElement exp(const GroupPtr& group, const LieAlgebraElement& x);
/// Principal logarithm. Throws AngleOutOfRange at the cut locus.
LieAlgebraElement log(const GroupElement& g);

LieAlgebraElement bracket(const GroupPtr& group, const LieAlgebraElement& x, const LieAlgebraElement& y);

/// Matrix of Ad_g in algebra coordinates.
Mat adjoint_matrix(const GroupElement& g);
LieAlgebraElement adjoint(const GroupElement& g, const LieAlgebraElement& y);
/// The dual map of adjoint(g, .): <coadjoint(g, rho), X> = <rho, Ad_g X>.
CoalgebraElement coadjoint(const GroupElement& g, const CoalgebraElement& rho);

TangentGroupElement tg_product(const TangentGroupElement& a, const TangentGroupElement& b);
TangentGroupElement tg_inverse(const TangentGroupElement& a);

/// Infinitesimal coadjoint fixed-point test: rho([E_i, E_j]) = 0 for all i, j.
bool is_coadjoint_fixed(const GroupPtr& group, const CoalgebraElement& rho, double tol = 1e-12);

using CoalgebraScalar = std::function<double(const CoalgebraElement&)>;
using CoalgebraGradient = std::function<Vec(const CoalgebraElement&)>;

inline constexpr double kGradientStep = 1e-5;

/// Central-difference gradient of a scalar field on the dual algebra.
Vec coalgebra_gradient(const CoalgebraScalar& f, const CoalgebraElement& rho, double step = kGradientStep);

/**
 * {f, h}(rho) = <rho, [grad f, grad h]>.
 *
 * Sign convention is "+". Analytic gradients are used when supplied.
 */
double lie_poisson_bracket(const GroupPtr& group, const CoalgebraScalar& f, const CoalgebraScalar& h,
                           const CoalgebraElement& rho,
                           const CoalgebraGradient& grad_f = {},
                           const CoalgebraGradient& grad_h = {});

} // namespace bundlesym
