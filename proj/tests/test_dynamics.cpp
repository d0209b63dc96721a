#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace testing;

namespace {

PhasePoint start(const ConnectionForm& alpha, const Vec& x, const Vec& pitilde, const CoalgebraElement& chi) {
    const GroupElement e = GroupElement::identity(alpha.group());
    return i_alpha_inv(alpha, PBPoint{x, pitilde, e, chi});
}

Vec lorentz(const Vec& x0, const Vec& v0, double omega, double t) {
    const double s = std::sin(omega * t), c = std::cos(omega * t);
    Vec x(2);
    x(0) = x0(0) + (v0(0) * s - v0(1) * c + v0(1)) / omega;
    x(1) = x0(1) + (v0(0) * c - v0(0) + v0(1) * s) / omega;
    return x;
}

/// Algebraic least-squares circle fit; returns the radius.
double fitted_radius(const std::vector<Vec>& points) {
    Mat a(static_cast<Eigen::Index>(points.size()), 3);
    Vec b(a.rows());
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
        const Vec& p = points[static_cast<std::size_t>(k)];
        a.row(k) << p(0), p(1), 1.0;
        b(k) = -(p(0) * p(0) + p(1) * p(1));
    }
    const Vec c = a.colPivHouseholderQr().solve(b);
    return std::sqrt(0.25 * (c(0) * c(0) + c(1) * c(1)) - c(2));
}

struct Magnetic {
    GroupPtr g = so2();
    ConnectionForm alpha{g, BaseChart::cube(2, 3.0), MatrixField::magnetic2d(1.0, 1), "magnetic"};
    GaugeAutomorphism id = GaugeAutomorphism::identity(alpha);
    HamiltonianSpec free = HamiltonianSpec::kinetic();
    Vec x0 = Vec::Zero(2);
    Vec v0 = Vec::Unit(2, 0);

    ReductionReport run(double rho, double dt = 1e-3, int steps = 1000) const {
        return reduced_magnetic_check(id, alpha, {Vec::Constant(1, rho)}, free, x0, v0, GroupElement::identity(g), dt,
                                      steps);
    }
};

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("hamiltonian values") {
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 61);
    CounterRng rng(62, "ham");
    const PhasePoint z = random_phase_point(rng, g, alpha.chart());
    CHECK(hamiltonian_value(alpha, HamiltonianSpec::zero(), z) == 0.0);
    const ConnectionForm flat = flat_connection(g, 2);
    CHECK(hamiltonian_value(flat, HamiltonianSpec::kinetic(), z) == doctest::Approx(0.5 * z.pi.squaredNorm()));
    const HamiltonianSpec wong = HamiltonianSpec::kinetic(0.5, 0.2);
    for (int s = 0; s < 50; ++s) {
        const PhasePoint w = random_phase_point(rng, g, alpha.chart());
        const GroupElement h = random_group_element(rng, g);
        CHECK(std::abs(hamiltonian_value(alpha, wong, lifted_g_action(h, w)) - hamiltonian_value(alpha, wong, w)) <
              1e-12);
    }
}

TEST_CASE("critical point has zero field") {
    const auto g = so2();
    const ConnectionForm flat = flat_connection(g, 2);
    const PhasePoint z{Vec::Zero(2), GroupElement::identity(g), Vec::Zero(2), CoalgebraElement::zero(1)};
    const PhaseTangent v =
        hamiltonian_vector_field(GaugeAutomorphism::identity(flat), flat, HamiltonianSpec::kinetic(1.0), z);
    CHECK(max_abs(v.flat()) < 1e-12);
}

TEST_CASE("canonical abelian case gives Hamilton's equations") {
    const auto g = so2();
    const ConnectionForm flat = flat_connection(g, 2);
    const double k = 2.0;
    CounterRng rng(63, "hamilton");
    for (int s = 0; s < 20; ++s) {
        const PhasePoint z = random_phase_point(rng, g, flat.chart());
        const PhaseTangent v =
            hamiltonian_vector_field(GaugeAutomorphism::identity(flat), flat, HamiltonianSpec::kinetic(k), z);
        CHECK(max_abs(Vec(v.dx - z.pi)) < 1e-8);
        CHECK(max_abs(Vec(v.dpi + k * z.x)) < 1e-8);
        CHECK(max_abs(v.xi.coords) < 1e-8);
        CHECK(max_abs(v.drho.coords) < 1e-8);
    }
}

TEST_CASE("energy is conserved infinitesimally") {
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 64);
    CounterRng rng(65, "energy");
    const HamiltonianSpec wong = HamiltonianSpec::kinetic(0.5, 0.2);
    for (int s = 0; s < 20; ++s) {
        const GaugeAutomorphism a = random_automorphism(rng, alpha, 0.3);
        const PhasePoint z = random_phase_point(rng, g, alpha.chart());
        const Vec v = hamiltonian_vector_field(a, alpha, wong, z).flat();
        const PhaseScalar h = [&](const PhasePoint& p) { return hamiltonian_value(alpha, wong, p); };
        CHECK(std::abs(phase_gradient(h, z).dot(v)) < 1e-6);
    }
}

TEST_CASE("integrator basics") {
    const auto g = so3();
    const ConnectionForm flat = flat_connection(g, 2);
    const GaugeAutomorphism id = GaugeAutomorphism::identity(flat);
    CounterRng rng(66, "integrate");
    const PhasePoint z0 = random_phase_point(rng, g, flat.chart(), 0.3);

    const Trajectory still = integrate(id, flat, HamiltonianSpec::zero(), z0, 0.1, 10);
    REQUIRE(still.points.size() == 11);
    for (const PhasePoint& z : still.points) CHECK(phase_distance(z, z0) < 1e-14);
    const ConservationReport cr = conservation_report(still);
    CHECK(cr.energy_drift == 0.0);
    CHECK(cr.max_momentum_drift < 1e-15);

    const Trajectory line = integrate(id, flat, HamiltonianSpec::kinetic(), z0, 0.01, 100);
    REQUIRE(line.points.size() == 101);
    CHECK_FALSE(line.left_chart);
    double worst = 0.0;
    for (std::size_t k = 0; k < line.points.size(); ++k)
        worst = std::max(worst, max_abs(Vec(line.points[k].x - (z0.x + line.times[k] * z0.pi))));
    CHECK(worst < 1e-8);
    CHECK(line.times.back() == doctest::Approx(1.0));
    for (std::size_t k = 1; k < line.times.size(); ++k) CHECK(line.times[k] > line.times[k - 1]);

    CHECK(integrate(id, flat, HamiltonianSpec::kinetic(), z0, 0.01, 0).empty());
    CHECK_THROWS_AS(integrate(id, flat, HamiltonianSpec::kinetic(), z0, 0.0, 10), Error);
    CHECK_THROWS_AS(conservation_report(Trajectory{}), Error);
}

TEST_CASE("trajectories leaving the chart are truncated") {
    const auto g = so2();
    const ConnectionForm flat = flat_connection(g, 1, 1.0);
    const GaugeAutomorphism id = GaugeAutomorphism::identity(flat);
    const PhasePoint z0{Vec::Zero(1), GroupElement::identity(g), Vec::Constant(1, 1.0), CoalgebraElement::zero(1)};
    const Trajectory t = integrate(id, flat, HamiltonianSpec::kinetic(), z0, 0.1, 50);
    CHECK(t.left_chart);
    CHECK(t.points.size() < 51);
    for (const PhasePoint& z : t.points) CHECK(flat.chart().contains(z.x));
}

TEST_CASE("drift shrinks at fourth order") {
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 67);
    CounterRng rng(68, "order");
    const GaugeAutomorphism a = random_automorphism(rng, alpha, 0.3);
    const HamiltonianSpec wong = HamiltonianSpec::kinetic(1.0, 0.5);
    const PhasePoint z0 = start(alpha, Vec::Zero(2), Vec::LinSpaced(2, 0.8, -0.5), {Vec::LinSpaced(3, 0.6, -0.4)});
    const Trajectory coarse = integrate(a, alpha, wong, z0, 0.2, 10);
    const Trajectory fine = integrate(a, alpha, wong, z0, 0.1, 20);
    const double ec = conservation_report(coarse).energy_drift;
    const double ef = conservation_report(fine).energy_drift;
    const double jc = conservation_report(coarse).max_momentum_drift;
    const double jf = conservation_report(fine).max_momentum_drift;
    MESSAGE("energy drift ", ec, " -> ", ef, ", momentum drift ", jc, " -> ", jf);
    CHECK(ec / ef > 8.0);
    CHECK(jc / jf > 8.0);
}

TEST_CASE("canonical brackets") {
    const auto g = so2();
    const ConnectionForm flat = flat_connection(g, 2);
    const GaugeAutomorphism id = GaugeAutomorphism::identity(flat);
    CounterRng rng(69, "brackets");
    const PhasePoint z = random_phase_point(rng, g, flat.chart());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const PhaseScalar xi = [i](const PhasePoint& p) { return p.x(i); };
            const PhaseScalar pj = [j](const PhasePoint& p) { return p.pi(j); };
            const double expected = i == j ? kCanonicalBracketSign : 0.0;
            CHECK(poisson_bracket(id, xi, pj, z) == doctest::Approx(expected).epsilon(1e-8));
            CHECK(std::abs(poisson_bracket(id, xi, xi, z)) < 1e-12);
        }
}

TEST_CASE("bracket antisymmetry and Leibniz rule") {
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 70);
    CounterRng rng(71, "leibniz");
    const PhaseScalar f = [](const PhasePoint& p) { return std::sin(p.x(0)) * p.pi(1) + p.rho.coords(0); };
    const PhaseScalar u = [](const PhasePoint& p) { return p.x(1) * p.x(1) + p.pi(0) * J0(p).coords(2); };
    const PhaseScalar w = [](const PhasePoint& p) { return std::cos(p.pi(0)) + J0(p).coords(1); };
    const PhaseScalar uw = [&](const PhasePoint& p) { return u(p) * w(p); };
    for (int s = 0; s < 20; ++s) {
        const GaugeAutomorphism a = random_automorphism(rng, alpha, 0.3);
        const PhasePoint z = random_phase_point(rng, g, alpha.chart());
        CHECK(std::abs(poisson_bracket(a, f, f, z)) < 1e-12);
        CHECK(std::abs(poisson_bracket(a, f, u, z) + poisson_bracket(a, u, f, z)) < 1e-12);
        const double lhs = poisson_bracket(a, f, uw, z);
        const double rhs = u(z) * poisson_bracket(a, f, w, z) + w(z) * poisson_bracket(a, f, u, z);
        CHECK(std::abs(lhs - rhs) < 1e-5);
    }
}

TEST_CASE("dual pair polarity") {
    const BaseScalar ftilde = [](const Vec& x, const Vec& p) { return std::sin(x(0)) * p(1) + x(1) * p.squaredNorm(); };
    const CoalgebraScalar c = [](const CoalgebraElement& r) { return r.coords(0) + r.coords.squaredNorm(); };
    {
        const ConnectionForm flat = flat_connection(so2(), 2);
        const BracketReport r = dual_pair_check(GaugeAutomorphism::identity(flat), ftilde, c, 30, 1);
        CHECK(r.residual < 1e-6);
    }
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 72);
    CounterRng rng(73, "polar");
    const GaugeAutomorphism a = random_automorphism(rng, alpha, 0.3);
    const BracketReport r = dual_pair_check(a, ftilde, c, 30, 2);
    CHECK(r.pass());
    CHECK(r.residual < 1e-5);
    const CoalgebraScalar constant = [](const CoalgebraElement&) { return 3.0; };
    CHECK(dual_pair_check(a, ftilde, constant, 10, 3).residual == 0.0);
}

TEST_CASE("momentum map is Poisson up to a fitted sign") {
    auto coord = [](int i) { return CoalgebraScalar([i](const CoalgebraElement& r) { return r.coords(i); }); };
    const CoalgebraScalar casimir = [](const CoalgebraElement& r) { return r.coords.squaredNorm(); };
    {
        const ConnectionForm flat = flat_connection(so2(), 2);
        const BracketReport r = momentum_bracket_check(GaugeAutomorphism::identity(flat), coord(0), casimir, 20, 1);
        CHECK(r.residual < 1e-8);
    }
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 74);
    CounterRng rng(75, "lp");
    const GaugeAutomorphism a = random_automorphism(rng, alpha, 0.3);
    const BracketReport r = momentum_bracket_check(a, coord(0), coord(1), 30, 4);
    CHECK(r.residual < 1e-5);
    CHECK(std::abs(std::abs(r.sign) - 1.0) == 0.0);
    CHECK(momentum_bracket_check(a, coord(2), casimir, 30, 5).residual < 1e-5);
}

TEST_CASE("brackets of invariant functions stay invariant") {
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 76);
    CounterRng rng(77, "closure");
    const GaugeAutomorphism a = random_automorphism(rng, alpha, 0.3);
    const BaseScalar f1 = [](const Vec& x, const Vec& p) { return x(0) * p(1); };
    const BaseScalar f2 = [](const Vec& x, const Vec& p) { return std::cos(x(1)) + p(0) * p(0); };
    CHECK(invariant_bracket_check(a, f1, f2, 30, 6).residual < 1e-5);
}

TEST_CASE("leaf membership") {
    CounterRng rng(78, "leaf");
    {
        const auto g = so3();
        const CoalgebraElement rho0{Vec::LinSpaced(3, 0.2, 0.7)};
        const PhasePoint z{Vec::Zero(2), GroupElement::identity(g), Vec::Zero(2), rho0};
        CHECK(leaf_membership(rho0, z, 1e-12));
        for (int s = 0; s < 20; ++s) {
            PhasePoint w = random_phase_point(rng, g, BaseChart::cube(2, 1.0));
            w.rho.coords = w.rho.coords.normalized() * rho0.coords.norm();
            CHECK(leaf_membership(rho0, w, 1e-10));
        }
        PhasePoint off = z;
        off.rho.coords *= 1.5;
        CHECK_FALSE(leaf_membership(rho0, off, 1e-10));
    }
    const auto g = so2();
    const PhasePoint z{Vec::Zero(2), exp(g, {Vec::Constant(1, 0.4)}), Vec::Zero(2), {Vec::Constant(1, 0.3)}};
    CHECK(leaf_membership({Vec::Constant(1, 0.3)}, z, 1e-12));
    CHECK_FALSE(leaf_membership({Vec::Constant(1, 0.5)}, z, 1e-12));
}

TEST_CASE_FIXTURE(Magnetic, "cyclotron motion matches the Lorentz oracle") {
    const ReductionReport r = run(1.0);
    CHECK(r.steps == 1000);
    CHECK(r.final_time == doctest::Approx(1.0));
    CHECK_FALSE(r.left_chart);
    CHECK(r.max_deviation < 1e-5);
    double worst = 0.0;
    for (std::size_t k = 0; k < r.projected.size(); ++k) {
        const double t = 1e-3 * static_cast<double>(k);
        worst = std::max(worst, max_abs(Vec(r.projected[k].head(2) - lorentz(x0, v0, 1.0, t))));
    }
    CHECK(worst < 1e-5);
    CHECK(r.conservation.energy_drift < 1e-6);
    CHECK(r.conservation.max_momentum_drift < 1e-6);
}

TEST_CASE_FIXTURE(Magnetic, "doubling the charge halves the radius") {
    auto positions = [](const ReductionReport& r) {
        std::vector<Vec> out;
        for (const Vec& p : r.projected) out.push_back(p.head(2));
        return out;
    };
    const double r1 = fitted_radius(positions(run(1.0)));
    const double r2 = fitted_radius(positions(run(2.0)));
    CHECK(std::abs(r1 - 1.0) < 1e-4);
    CHECK(std::abs(r1 / r2 - 2.0) < 1e-4);
}

TEST_CASE_FIXTURE(Magnetic, "neutral particle moves freely") {
    const ReductionReport r = run(0.0);
    CHECK(r.max_deviation < 1e-6);
    CHECK(max_abs(Vec(r.projected.back().head(2) - Vec::Unit(2, 0))) < 1e-8);
}

TEST_CASE("reduction at zero momentum for a nonabelian group") {
    const auto g = so3();
    const ConnectionForm alpha = random_conn(g, 2, 79);
    CounterRng rng(80, "reduce0");
    const GaugeAutomorphism a = random_automorphism(rng, alpha, 0.3);
    const HamiltonianSpec spec = HamiltonianSpec::kinetic(0.5, 0.2);
    const ReductionReport r = reduced_magnetic_check(a, alpha, CoalgebraElement::zero(3), spec, Vec::Zero(2),
                                                     Vec::LinSpaced(2, 0.4, -0.3), GroupElement::identity(g), 1e-2, 100);
    CHECK(r.max_deviation < 1e-6);
    try {
        (void)reduced_magnetic_check(a, alpha, {Vec::Unit(3, 0)}, spec, Vec::Zero(2), Vec::Zero(2),
                                     GroupElement::identity(g), 1e-2, 10);
        FAIL("expected NotFixedPoint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFixedPoint);
    }
}

TEST_CASE("csv output") {
    CHECK(trajectory_csv_header(so2(), 2) == "t,x0,x1,g00,g01,g10,g11,pi0,pi1,rho0,H,J0_0");
    CHECK(trajectory_csv_header(su2(), 1).find("g01_re,g01_im") != std::string::npos);
    std::ostringstream empty;
    write_trajectory_csv(empty, Trajectory{});
    CHECK(empty.str().empty());

    const ConnectionForm flat = flat_connection(so2(), 2);
    const PhasePoint z0{Vec::Zero(2), GroupElement::identity(so2()), Vec::Ones(2), CoalgebraElement::zero(1)};
    const Trajectory t = integrate(GaugeAutomorphism::identity(flat), flat, HamiltonianSpec::kinetic(), z0, 0.1, 3);
    std::ostringstream out;
    write_trajectory_csv(out, t);
    std::istringstream lines(out.str());
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 11);
    }
    CHECK(rows == 4);
}

}
