#include "support.hpp"

#include <numbers>

using namespace testing;

TEST_SUITE("liegroup") {

TEST_CASE("structure constants are antisymmetric and satisfy Jacobi") {
    for (const auto& g : {so2(), so3(), su2()}) CHECK(g->structure_residual() < 1e-13);
}

TEST_CASE("basis is orthonormal and hat/vee are inverse") {
    for (const auto& g : {so2(), so3(), su2()}) {
        CounterRng rng(1, "hat");
        for (int s = 0; s < 50; ++s) {
            const Vec c = rng.uniform_vec(g->dim(), -2, 2);
            CHECK(max_abs(Vec(g->vee(g->hat(c)) - c)) < 1e-14);
        }
    }
}

TEST_CASE("exp agrees with the power series") {
    for (const auto& g : {so2(), so3(), su2()}) {
        CounterRng rng(2, "exp");
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const LieAlgebraElement x = random_algebra(rng, g, 2.0, 3.0);
            worst = std::max(worst, max_abs(CMat(exp(g, x).matrix() - series_exp(g->hat(x.coords)))));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("SO3 exp agrees with Rodrigues") {
    const auto g = so3();
    CounterRng rng(3, "rodrigues");
    for (int s = 0; s < 100; ++s) {
        const Vec w = rng.uniform_vec(3, -1.5, 1.5);
        const double t = w.norm();
        const Eigen::Matrix3d k = g->hat(w / t).real();
        const Eigen::Matrix3d r = Eigen::Matrix3d::Identity() + std::sin(t) * k + (1 - std::cos(t)) * k * k;
        CHECK(max_abs(Mat(exp(g, {w}).matrix().real() - r)) < 1e-13);
    }
}

TEST_CASE("group elements stay on the group") {
    for (const auto& g : {so2(), so3(), su2()}) {
        CounterRng rng(4, "member");
        for (int s = 0; s < 50; ++s) {
            const GroupElement a = random_group_element(rng, g);
            const GroupElement b = random_group_element(rng, g);
            CHECK((a * b).membership_residual() < 1e-13);
            CHECK(max_abs(CMat((a * a.inverse()).matrix() - CMat::Identity(g->matrix_dim(), g->matrix_dim()))) < 1e-14);
        }
    }
}

TEST_CASE("log inverts exp inside the principal domain") {
    for (const auto& g : {so2(), so3(), su2()}) {
        CounterRng rng(5, "log");
        double worst = 0.0;
        for (int s = 0; s < 200; ++s) {
            const LieAlgebraElement x = random_algebra(rng, g, 2.0, 2.5);
            worst = std::max(worst, max_abs(Vec(log(exp(g, x)).coords - x.coords)));
        }
        CHECK(worst < 1e-12);
        CHECK(max_abs(log(GroupElement::identity(g)).coords) < 1e-15);
    }
}

TEST_CASE("log at the cut locus throws AngleOutOfRange") {
    const double pi = std::numbers::pi;
    auto code_of = [](const GroupElement& g) {
        try {
            (void)log(g);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code_of(exp(so2(), {Vec::Constant(1, pi)})) == ErrorCode::AngleOutOfRange);
    CHECK(code_of(exp(so3(), {Vec::Unit(3, 2) * pi})) == ErrorCode::AngleOutOfRange);
    CHECK(code_of(exp(su2(), {Vec::Unit(3, 0) * 2 * pi})) == ErrorCode::AngleOutOfRange);
}

TEST_CASE("bracket is the matrix commutator") {
    for (const auto& g : {so2(), so3(), su2()}) {
        CounterRng rng(6, "bracket");
        for (int s = 0; s < 50; ++s) {
            const Vec x = rng.uniform_vec(g->dim(), -1, 1), y = rng.uniform_vec(g->dim(), -1, 1);
            const CMat hx = g->hat(x), hy = g->hat(y);
            CHECK(max_abs(Vec(bracket(g, {x}, {y}).coords - g->vee(hx * hy - hy * hx))) < 1e-14);
        }
    }
    const auto g = so3();
    CHECK(max_abs(Vec(bracket(g, LieAlgebraElement::unit(3, 0), LieAlgebraElement::unit(3, 1)).coords -
                      Vec::Unit(3, 2))) == 0.0);
}

TEST_CASE("adjoint is conjugation and orthogonal; coadjoint is its dual") {
    for (const auto& g : {so2(), so3(), su2()}) {
        CounterRng rng(7, "adjoint");
        for (int s = 0; s < 50; ++s) {
            const GroupElement h = random_group_element(rng, g);
            const Vec y = rng.uniform_vec(g->dim(), -1, 1);
            const CMat conj = h.matrix() * g->hat(y) * h.inverse().matrix();
            CHECK(max_abs(Vec(adjoint(h, {y}).coords - g->vee(conj))) < 1e-14);
            const Mat ad = adjoint_matrix(h);
            CHECK(max_abs(Mat(ad.transpose() * ad - Mat::Identity(g->dim(), g->dim()))) < 1e-13);
            const CoalgebraElement rho{rng.uniform_vec(g->dim(), -1, 1)};
            CHECK(std::abs(pairing(coadjoint(h, rho), {y}) - pairing(rho, adjoint(h, {y}))) < 1e-14);
        }
    }
}

TEST_CASE("tangent group product matches differentiated matrix curves") {
    const auto g = so3();
    CounterRng rng(8, "tg");
    const double h = 1e-6;
    for (int s = 0; s < 50; ++s) {
        const TangentGroupElement a{random_group_element(rng, g), random_algebra(rng, g, 1, 1.5)};
        const TangentGroupElement b{random_group_element(rng, g), random_algebra(rng, g, 1, 1.5)};
        auto curve = [&](double t) {
            return (exp(g, {a.x.coords * t}) * a.g * exp(g, {b.x.coords * t}) * b.g).matrix();
        };
        const TangentGroupElement ab = tg_product(a, b);
        const CMat velocity = (curve(h) - curve(-h)) / (2 * h);
        CHECK(max_abs(CMat(ab.g.matrix() - curve(0))) < 1e-14);
        CHECK(max_abs(Vec(ab.x.coords - g->vee(velocity * ab.g.inverse().matrix()))) < 1e-8);
    }
}

TEST_CASE("tangent group laws") {
    const auto g = so3();
    CounterRng rng(9, "tglaws");
    for (int s = 0; s < 200; ++s) {
        const TangentGroupElement a{random_group_element(rng, g), random_algebra(rng, g, 1, 1.5)};
        const TangentGroupElement b{random_group_element(rng, g), random_algebra(rng, g, 1, 1.5)};
        const TangentGroupElement c{random_group_element(rng, g), random_algebra(rng, g, 1, 1.5)};
        const auto l = tg_product(tg_product(a, b), c), r = tg_product(a, tg_product(b, c));
        CHECK(max_abs(CMat(l.g.matrix() - r.g.matrix())) < 1e-12);
        CHECK(max_abs(Vec(l.x.coords - r.x.coords)) < 1e-12);
        const auto e = tg_product(a, tg_inverse(a));
        CHECK(max_abs(CMat(e.g.matrix() - CMat::Identity(3, 3))) < 1e-12);
        CHECK(max_abs(e.x.coords) < 1e-12);
    }
}

TEST_CASE("Lie-Poisson bracket of coordinate functions") {
    const auto g = so3();
    const CoalgebraElement rho{Vec::LinSpaced(3, 0.3, 0.9)};
    auto coord = [](int i) { return CoalgebraScalar([i](const CoalgebraElement& r) { return r.coords(i); }); };
    CHECK(lie_poisson_bracket(g, coord(0), coord(1), rho) == doctest::Approx(rho.coords(2)).epsilon(1e-9));
    CHECK(lie_poisson_bracket(g, coord(1), coord(2), rho) == doctest::Approx(rho.coords(0)).epsilon(1e-9));
    const CoalgebraScalar casimir = [](const CoalgebraElement& r) { return r.coords.squaredNorm(); };
    CHECK(std::abs(lie_poisson_bracket(g, coord(0), casimir, rho)) < 1e-9);
    CHECK(lie_poisson_bracket(so2(), coord(0), coord(0), {Vec::Constant(1, 2.0)}) == 0.0);
}

TEST_CASE("coadjoint fixed points") {
    CHECK(is_coadjoint_fixed(so2(), {Vec::Constant(1, 3.0)}));
    CHECK(is_coadjoint_fixed(so3(), CoalgebraElement::zero(3)));
    CHECK_FALSE(is_coadjoint_fixed(so3(), {Vec::Unit(3, 1)}));
    CHECK_FALSE(is_coadjoint_fixed(su2(), {Vec::Unit(3, 0)}));
}

TEST_CASE("counter generator is deterministic per stream") {
    CounterRng a(42, "stream"), b(42, "stream"), c(42, "other"), d(43, "stream");
    bool differs_stream = false, differs_seed = false;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_stream |= x != c.next_u64();
        differs_seed |= x != d.next_u64();
        const double u = a.uniform();
        b.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(differs_stream);
    CHECK(differs_seed);
}

TEST_CASE("unknown group name") {
    CHECK_THROWS_AS(GroupDescriptor::from_name("SE3"), Error);
    CHECK(GroupDescriptor::from_name("SU2")->dim() == 3);
}

}
