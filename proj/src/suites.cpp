#include "bundlesym/scenario.hpp"

#include <cmath>
#include <limits>

namespace bundlesym {

namespace {

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double distance(const TangentVector& u, const TangentVector& v) {
    return std::max(max_abs(Vec(u.dx - v.dx)), max_abs(Vec(u.xi.coords - v.xi.coords)));
}

double distance(const TangentGroupElement& a, const TangentGroupElement& b) {
    return std::max(max_abs(CMat(a.g.matrix() - b.g.matrix())), max_abs(Vec(a.x.coords - b.x.coords)));
}

double distance(const PBPoint& a, const PBPoint& b) {
    return std::max({max_abs(Vec(a.x - b.x)), max_abs(Vec(a.pitilde - b.pitilde)),
                     max_abs(CMat(a.g.matrix() - b.g.matrix())), max_abs(Vec(a.chi.coords - b.chi.coords))});
}

double distance(const PhasePoint& a, const PhasePoint& b) {
    return std::max({max_abs(Vec(a.x - b.x)), max_abs(Vec(a.pi - b.pi)), max_abs(CMat(a.g.matrix() - b.g.matrix())),
                     max_abs(Vec(a.rho.coords - b.rho.coords))});
}

class Suite {
public:
    Suite(const Scenario& sc, std::uint64_t seed, CheckReport& report, std::string prefix)
        : sc_(sc), seed_(seed), report_(report), prefix_(std::move(prefix)),
          alpha_(sc.connections().empty() ? make_reference(sc, seed) : sc.connections().front().second) {}

    const Scenario& sc() const { return sc_; }
    const GroupPtr& group() const { return sc_.group(); }
    const BaseChart& chart() const { return sc_.chart(); }
    const ConnectionForm& alpha() const { return alpha_; }
    int samples() const { return sc_.samples(); }
    int n() const { return sc_.chart().dim(); }
    int m() const { return sc_.group()->dim(); }
    std::uint64_t seed() const { return seed_; }

    CounterRng rng(const std::string& stream) const { return CounterRng(seed_, prefix_ + "." + stream); }

    PropertyResult& add(const std::string& name, double residual, double tol, int samples, bool lower_bound = false) {
        const std::string full = prefix_ + "." + name;
        PropertyResult p;
        p.name = full;
        p.residual = residual;
        p.tolerance = sc_.tolerance(full, tol);
        p.lower_bound = lower_bound;
        p.samples = samples;
        p.seed = seed_;
        report_.properties.push_back(std::move(p));
        return report_.properties.back();
    }

    /// Automorphisms checked by the suites: scenario ones referenced to alpha, then seeded random ones.
    std::vector<GaugeAutomorphism> automorphisms(CounterRng& rng, int count) const {
        std::vector<GaugeAutomorphism> out;
        for (const auto& entry : sc_.automorphisms())
            if (entry.second.reference().same_as(alpha_)) out.push_back(entry.second);
        while (static_cast<int>(out.size()) < count) out.push_back(random_automorphism(rng, alpha_));
        return out;
    }

    double map_distance(const std::function<TangentVector(const TangentVector&)>& f,
                        const std::function<TangentVector(const TangentVector&)>& g, CounterRng& rng,
                        int count) const {
        double worst = 0.0;
        for (int s = 0; s < count; ++s) {
            const TangentVector v = random_tangent(rng, random_bundle_point(rng, group(), chart()));
            worst = std::max(worst, distance(f(v), g(v)));
        }
        return worst;
    }

    double map_distance(const GaugeAutomorphism& a1, const GaugeAutomorphism& a2, CounterRng& rng, int count) const {
        return map_distance(as_raw_map(a1), as_raw_map(a2), rng, count);
    }

    double connection_distance(const ConnectionForm& c1, const ConnectionForm& c2, CounterRng& rng, int count) const {
        double worst = 0.0;
        for (int s = 0; s < count; ++s) {
            const BundlePoint p = random_bundle_point(rng, group(), chart());
            const TangentVector v = random_tangent(rng, p);
            worst = std::max(worst, max_abs(Vec(connection_eval(c1, p, v).coords - connection_eval(c2, p, v).coords)));
        }
        return worst;
    }

private:
    static ConnectionForm make_reference(const Scenario& sc, std::uint64_t seed) {
        CounterRng rng(seed, "suite_reference");
        return ConnectionForm(sc.group(), sc.chart(),
                              random_linear_field(rng, sc.group()->dim(), sc.chart().dim(), sc.chart().dim(), 0.5),
                              "reference");
    }

    const Scenario& sc_;
    std::uint64_t seed_;
    CheckReport& report_;
    std::string prefix_;
    ConnectionForm alpha_;
};

// Block realization [[g, 0], [X g, g]] of TG inside GL(2d).
CMat tg_block(const GroupPtr& group, const TangentGroupElement& t) {
    const int d = group->matrix_dim();
    CMat out = CMat::Zero(2 * d, 2 * d);
    out.topLeftCorner(d, d) = t.g.matrix();
    out.bottomRightCorner(d, d) = t.g.matrix();
    out.bottomLeftCorner(d, d) = group->hat(t.x.coords) * t.g.matrix();
    return out;
}

void suite_tg(Suite& s) {
    CounterRng rng = s.rng("samples");
    const GroupPtr& group = s.group();
    auto random_tg = [&] { return TangentGroupElement{random_group_element(rng, group), random_algebra(rng, group, 1.0, 2.0)}; };
    const TangentGroupElement e{GroupElement::identity(group), LieAlgebraElement::zero(s.m())};
    double assoc = 0.0, inv = 0.0, semidirect = 0.0, unit = 0.0;
    for (int k = 0; k < s.samples(); ++k) {
        const TangentGroupElement a = random_tg(), b = random_tg(), c = random_tg();
        assoc = std::max(assoc, distance(tg_product(tg_product(a, b), c), tg_product(a, tg_product(b, c))));
        const TangentGroupElement ai = tg_inverse(a);
        inv = std::max({inv, distance(tg_product(a, ai), e), distance(tg_product(ai, a), e)});
        unit = std::max({unit, distance(tg_product(a, e), a), distance(tg_product(e, a), a)});
        semidirect = std::max(semidirect, max_abs(CMat(tg_block(group, tg_product(a, b)) -
                                                       tg_block(group, a) * tg_block(group, b))));
    }
    s.add("associativity", assoc, 1e-12, s.samples());
    s.add("inverse", inv, 1e-12, s.samples());
    s.add("identity", unit, 1e-12, s.samples());
    s.add("semidirect_block_form", semidirect, 1e-12, s.samples());
}

void suite_prop1(Suite& s) {
    CounterRng rng = s.rng("automorphisms");
    double worst = 0.0;
    const auto autos = s.automorphisms(rng, 5);
    for (std::size_t i = 0; i < autos.size(); ++i) {
        const CommutationReport r = tg_commutation_check(as_raw_map(autos[i]), s.group(), s.chart(), s.samples(),
                                                         s.seed() + i);
        worst = std::max({worst, r.commutation_residual, r.vertical_residual, r.equivariance_residual});
    }
    s.add("tg_commutation", worst, 1e-12, s.samples() * static_cast<int>(autos.size()));

    // Scales vertical vectors, so A o T kappa_p(e) = T kappa_p(e) fails.
    const GaugeAutomorphism a = autos.front();
    RawBundleMap broken = [a](const TangentVector& v) {
        TangentVector w = apply(a, v);
        w.xi.coords += 0.5 * v.xi.coords;
        return w;
    };
    const CommutationReport r = tg_commutation_check(broken, s.group(), s.chart(), s.samples(), s.seed());
    s.add("broken_map_detected", std::max(r.commutation_residual, r.vertical_residual), 1e-6, s.samples(), true);
}

void suite_prop2(Suite& s) {
    CounterRng rng = s.rng("pairs");
    const ConnectionForm& alpha = s.alpha();
    const int pairs = std::max(1, s.samples() / 10);
    const int per = 10;
    double lambda_sigma = 0.0, beta_iota = 0.0, kernel = 0.0, image = 0.0, composition = 0.0, cocycle = 0.0,
           inverse_law = 0.0, beta_def = 0.0, mono = 0.0, shifts = 0.0, morphism = 0.0, action = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const GaugeAutomorphism a1 = random_automorphism(rng, alpha);
        const GaugeAutomorphism a2 = random_automorphism(rng, alpha);
        const BaseAutomorphism base1 = lambda_base(a1), base2 = lambda_base(a2);
        const VerticalShift shift{random_linear_field(rng, s.m(), s.n(), s.n(), 0.3)};
        const VerticalShift shift2{random_linear_field(rng, s.m(), s.n(), s.n(), 0.3)};
        const GaugeAutomorphism id = GaugeAutomorphism::identity(alpha);

        for (int j = 0; j < per; ++j) {
            const Vec x = s.chart().sample(rng);
            lambda_sigma = std::max(lambda_sigma, max_abs(Mat(lambda_base(sigma_alpha(alpha, base1)).field(x) - base1.field(x))));
            beta_iota = std::max(beta_iota, max_abs(Mat(beta_alpha(include_shift(alpha, shift)).shift(x) - shift.shift(x))));
            kernel = std::max(kernel, max_abs(Mat(lambda_base(include_shift(alpha, shift)).field(x) - Mat::Identity(s.n(), s.n()))));
            image = std::max(image, max_abs(beta_alpha(sigma_alpha(alpha, base1)).shift(x)));
            morphism = std::max(morphism, max_abs(Mat(lambda_base(product(a1, a2)).field(x) - base1.field(x) * base2.field(x))));
        }

        composition = std::max(composition, s.map_distance(as_raw_map(product(a1, a2)),
                                                           [&](const TangentVector& v) { return apply(a1, apply(a2, v)); },
                                                           rng, per));
        inverse_law = std::max({inverse_law, s.map_distance(product(a1, inverse(a1)), id, rng, per),
                                s.map_distance(product(inverse(a1), a1), id, rng, per)});

        // beta_alpha(A) = A sigma_alpha(lambda(A))^{-1}, composed pointwise.
        const GaugeAutomorphism sigma_inv = inverse(sigma_alpha(alpha, base1));
        beta_def = std::max(beta_def, s.map_distance(as_raw_map(include_shift(alpha, beta_alpha(a1))),
                                                     [&](const TangentVector& v) { return apply(a1, apply(sigma_inv, v)); },
                                                     rng, per));
        // A with lambda(A) = id is the inclusion of its shift.
        const GaugeAutomorphism pure(alpha, MatrixField::identity(s.n()), shift.shift);
        kernel = std::max(kernel, s.map_distance(pure, include_shift(alpha, beta_alpha(pure)), rng, per));

        // beta(A1 A2) = beta(A1) sigma(lambda(A1)) beta(A2) sigma(lambda(A1))^{-1}
        const GaugeAutomorphism s1 = sigma_alpha(alpha, base1);
        const GaugeAutomorphism b1 = include_shift(alpha, beta_alpha(a1));
        const GaugeAutomorphism b2 = include_shift(alpha, beta_alpha(a2));
        const GaugeAutomorphism lhs = include_shift(alpha, beta_alpha(product(a1, a2)));
        const GaugeAutomorphism s1_inv = inverse(s1);
        cocycle = std::max(cocycle, s.map_distance(as_raw_map(lhs),
                                                   [&](const TangentVector& v) {
                                                       return apply(b1, apply(s1, apply(b2, apply(s1_inv, v))));
                                                   },
                                                   rng, per));

        mono = std::max(mono, s.map_distance(sigma_alpha(alpha, {base1.field * base2.field}),
                                             product(sigma_alpha(alpha, base1), sigma_alpha(alpha, base2)), rng, per));

        const GaugeAutomorphism i1 = include_shift(alpha, shift), i2 = include_shift(alpha, shift2);
        shifts = std::max({shifts, s.map_distance(product(i1, i2), product(i2, i1), rng, per),
                           s.map_distance(product(i1, i2), include_shift(alpha, {shift.shift + shift2.shift}), rng, per)});

        CounterRng crng = s.rng("connection:" + std::to_string(k));
        const ConnectionForm other = random_connection(crng, s.group(), s.chart());
        action = std::max(action, s.connection_distance(act_on_connection(product(a1, a2), other),
                                                        act_on_connection(a1, act_on_connection(a2, other)), rng, per));
    }
    const int count = pairs * per;
    s.add("lambda_sigma_identity", lambda_sigma, 1e-10, count);
    s.add("beta_iota_identity", beta_iota, 1e-10, count);
    s.add("kernel_lambda_is_shifts", kernel, 1e-10, count);
    s.add("image_sigma_is_beta_kernel", image, 1e-10, count);
    s.add("beta_definition", beta_def, 1e-10, count);
    s.add("lambda_morphism", morphism, 1e-10, count);
    s.add("sigma_monomorphism", mono, 1e-10, count);
    s.add("product_vs_composition", composition, 1e-10, count);
    s.add("inverse_both_sides", inverse_law, 1e-10, count);
    s.add("twisted_cocycle", cocycle, 1e-10, count);
    s.add("shifts_abelian", shifts, 1e-10, count);
    s.add("phi_action_law", action, 1e-10, count);
}

void suite_prop3(Suite& s) {
    CounterRng rng = s.rng("witness");
    const ConnectionForm& alpha = s.alpha();
    const int trials = std::max(1, s.samples() / 20);
    double witness = 0.0, definition = 0.0, stabilizer = 0.0, axioms = 0.0;
    double freeness = std::numeric_limits<double>::infinity();
    for (int k = 0; k < trials; ++k) {
        const ConnectionForm other = random_connection(rng, s.group(), s.chart());
        const GaugeAutomorphism w = transitive_witness(alpha, other);
        witness = std::max(witness, s.connection_distance(act_on_connection(w, alpha), other, rng, 100));
        const GaugeAutomorphism w_inv = inverse(w);
        for (int j = 0; j < 100; ++j) {
            const BundlePoint p = random_bundle_point(rng, s.group(), s.chart());
            const TangentVector v = random_tangent(rng, p);
            definition = std::max(definition, max_abs(Vec(connection_eval(alpha, p, apply(w_inv, v)).coords -
                                                          connection_eval(other, p, v).coords)));
        }

        const GaugeAutomorphism a = random_automorphism(rng, alpha);
        stabilizer = std::max(stabilizer,
                              s.connection_distance(act_on_connection(sigma_alpha(alpha, lambda_base(a)), alpha), alpha, rng, 20));
        const ConnectionAxiomsReport ax = connection_axioms_report(act_on_connection(a, other), 20, s.seed() + k);
        axioms = std::max({axioms, ax.reproduction_residual, ax.equivariance_residual});

        // Any other shift moves alpha somewhere other than alpha'.
        const MatrixField delta = random_linear_field(rng, s.m(), s.n(), s.n(), 0.3);
        const GaugeAutomorphism perturbed(alpha, MatrixField::identity(s.n()), w.shift_part() + delta);
        freeness = std::min(freeness, s.connection_distance(act_on_connection(perturbed, alpha), other, rng, 20));
        const GaugeAutomorphism shift_only(alpha, MatrixField::identity(s.n()), delta);
        freeness = std::min(freeness, s.connection_distance(act_on_connection(shift_only, alpha), alpha, rng, 20));
    }
    s.add("witness_maps_alpha_to_alpha_prime", witness, 1e-12, trials * 100);
    s.add("witness_by_definition", definition, 1e-12, trials * 100);
    s.add("sigma_stabilizes_alpha", stabilizer, 1e-12, trials * 20);
    s.add("phi_result_is_connection", axioms, 1e-12, trials * 20);
    s.add("shift_action_free", freeness, 1e-8, trials * 40, true);
}

void suite_prop5(Suite& s) {
    CounterRng rng = s.rng("automorphisms");
    const auto autos = s.automorphisms(rng, 20);
    const int per = std::max(1, s.samples() / 20);
    const OneFormOnPhase g0 = gamma0_form();
    double l_gamma0 = 0.0, l_theta = 0.0, recon = 0.0, canonical = 0.0;
    double separation = std::numeric_limits<double>::infinity();
    double free_action = std::numeric_limits<double>::infinity();
    double min_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < autos.size(); ++i) {
        const GaugeAutomorphism& a = autos[i];
        const GaugeAutomorphism& a2 = autos[(i + 1) % autos.size()];
        const GaugeAutomorphism aa2 = product(a, a2);
        const OneFormOnPhase pulled0 = pullback_form(a, g0);
        const OneFormOnPhase pulled = pullback_form(a, theta_form(a2));
        double sep = 0.0, moved = 0.0;
        for (int j = 0; j < per; ++j) {
            const PhasePoint z = random_phase_point(rng, s.group(), s.chart());
            l_gamma0 = std::max(l_gamma0, max_abs(Vec(pulled0(z) - theta(a, z))));
            l_theta = std::max(l_theta, max_abs(Vec(pulled(z) - theta(aa2, z))));
            recon = std::max(recon, max_abs(Mat(theta_reconstruct(theta_form(a), z.base(), s.seed()) - a.matrix_at(z.x))));
            sep = std::max(sep, max_abs(Vec(theta(a, z) - theta(a2, z))));
            moved = std::max(moved, max_abs(Vec(theta(a, z) - gamma0(z))));
        }
        if (autos.size() > 1) separation = std::min(separation, sep);
        free_action = std::min(free_action, moved);
        const GeneralizedCanonicalReport r =
            check_generalized_canonical(theta_form(a), s.group(), s.chart(), per, s.seed() + i);
        canonical = std::max({canonical, r.fibre_residual, r.linearity_residual});
        min_norm = std::min(min_norm, r.min_norm);
    }
    const int count = per * static_cast<int>(autos.size());
    s.add("pullback_gamma0_is_theta", l_gamma0, 1e-8, count);
    s.add("pullback_theta_is_theta_of_product", l_theta, 1e-8, count);
    s.add("theta_reconstruction", recon, 1e-10, count);
    s.add("generalized_canonical_fibres", canonical, 1e-10, count);
    s.add("generalized_canonical_min_norm", min_norm, 1e-10, count, true);
    s.add("theta_injective", separation, 1e-8, count, true);
    s.add("action_free", free_action, 1e-8, count, true);
}

void suite_prop6(Suite& s) {
    CounterRng rng = s.rng("automorphisms");
    const auto autos = s.automorphisms(rng, 20);
    const int per = std::max(1, s.samples() / 20);
    double invariance = 0.0, ja = 0.0, ja_theta = 0.0, equivariance = 0.0;
    double broken = std::numeric_limits<double>::infinity();
    for (const GaugeAutomorphism& a : autos) {
        const OneFormOnPhase th = theta_form(a);
        for (int j = 0; j < per; ++j) {
            const PhasePoint z = random_phase_point(rng, s.group(), s.chart());
            const GroupElement h = random_group_element(rng, s.group());
            const OneFormOnPhase moved = pullback_by_map(th, [h](const PhasePoint& w) { return lifted_g_action(h, w); });
            invariance = std::max(invariance, max_abs(Vec(moved(z) - th(z))));
            ja = std::max(ja, max_abs(Vec(JA(a, z).coords - J0(z).coords)));
            const Vec c = th(z);
            Vec from_theta(s.m());
            for (int k = 0; k < s.m(); ++k)
                from_theta(k) = c.dot(fundamental_vector_field(LieAlgebraElement::unit(s.m(), k), z).flat());
            ja_theta = std::max(ja_theta, max_abs(Vec(from_theta - J0(z).coords)));
            equivariance = std::max(equivariance, max_abs(Vec(J0(lifted_g_action(h, z)).coords -
                                                              coadjoint(h, J0(z)).coords)));

            // Momentum of a fibre map that scales vertical vectors: rho -> 1.5 rho.
            PhasePoint bz = dual_action(a, z);
            bz.rho.coords *= 1.5;
            if (z.rho.coords.norm() > 1e-3) broken = std::min(broken, max_abs(Vec(J0(bz).coords - J0(z).coords)));
        }
    }
    const int count = per * static_cast<int>(autos.size());
    s.add("theta_g_invariant", invariance, 1e-10, count);
    s.add("JA_equals_J0", ja, 1e-12, count);
    s.add("momentum_from_theta", ja_theta, 1e-10, count);
    s.add("J0_equivariant", equivariance, 1e-12, count);
    s.add("broken_map_momentum_detected", broken, 1e-6, count, true);
}

void suite_symplectic(Suite& s) {
    CounterRng rng = s.rng("automorphisms");
    const auto autos = s.automorphisms(rng, 10);
    const int per = std::max(1, s.samples() / 4);
    double antisym = 0.0, closure = 0.0;
    double min_det = std::numeric_limits<double>::infinity();
    for (const GaugeAutomorphism& a : autos) {
        const OneFormOnPhase th = theta_form(a);
        for (int j = 0; j < per; ++j) {
            const PhasePoint z = random_phase_point(rng, s.group(), s.chart());
            const TwoFormMatrix w = two_form_matrix(th, z);
            antisym = std::max(antisym, w.antisymmetry_residual());
            min_det = std::min(min_det, std::abs(w.determinant()));
            closure = std::max(closure, omega_closure_residual(th, z));
        }
    }
    const int count = per * static_cast<int>(autos.size());
    s.add("antisymmetry", antisym, 1e-12, count);
    s.add("nondegenerate_min_abs_det", min_det, 1e-10, count, true);
    s.add("closure", closure, 1e-4, count);
}

void suite_momentum(Suite& s) {
    CounterRng rng = s.rng("samples");
    const auto autos = s.automorphisms(rng, 10);
    double worst = 0.0;
    for (int k = 0; k < s.samples(); ++k) {
        const GaugeAutomorphism& a = autos[static_cast<std::size_t>(k) % autos.size()];
        const PhasePoint z = random_phase_point(rng, s.group(), s.chart());
        const LieAlgebraElement x = random_algebra(rng, s.group(), 1.0, 2.0);
        const Mat w = omega_matrix(a, z).matrix;
        const Vec xi = fundamental_vector_field(x, z).flat();
        const Vec dj = phase_gradient([&x](const PhasePoint& q) { return pairing(J0(q), x); }, z);
        worst = std::max(worst, max_abs(Vec(w.transpose() * xi + dj)));
    }
    s.add("contraction_plus_dJ", worst, 1e-6, s.samples());
}

void suite_cor7(Suite& s) {
    CounterRng rng = s.rng("samples");
    const ConnectionForm& alpha = s.alpha();
    const OneFormOnPhase g0 = gamma0_form();
    const int trials = std::max(1, s.samples() / 20);
    const int per = 20;
    double identity = 0.0, pullback = 0.0;
    double injective = std::numeric_limits<double>::infinity();
    for (int k = 0; k < trials; ++k) {
        const ConnectionForm c1 = random_connection(rng, s.group(), s.chart());
        const ConnectionForm c2 = random_connection(rng, s.group(), s.chart());
        const OneFormOnPhase i1 = iota_alpha(alpha, c1);
        const OneFormOnPhase i2 = iota_alpha(alpha, c2);
        const OneFormOnPhase same = iota_alpha(alpha, alpha);
        const GaugeAutomorphism w = transitive_witness(alpha, c1);
        double sep = 0.0;
        for (int j = 0; j < per; ++j) {
            const PhasePoint z = random_phase_point(rng, s.group(), s.chart());
            identity = std::max(identity, max_abs(Vec(same(z) - gamma0(z))));
            sep = std::max(sep, max_abs(Vec(i1(z) - i2(z))));
            if (j < per / 4) {
                auto map = [w](const PhasePoint& q) { return dual_action(w, q); };
                const Mat jac = phase_tangent_map(map, z);
                const Mat pulled = jac.transpose() * two_form_matrix(g0, map(z)).matrix * jac;
                pullback = std::max(pullback, max_abs(Mat(two_form_matrix(i1, z).matrix - pulled)));
            }
        }
        injective = std::min(injective, sep);
    }
    s.add("iota_alpha_alpha_is_gamma0", identity, 1e-12, trials * per);
    s.add("d_iota_is_pullback_omega0", pullback, 1e-6, trials * (per / 4));
    s.add("iota_injective", injective, 1e-8, trials * per, true);
}

void suite_eq86(Suite& s) {
    CounterRng rng = s.rng("samples");
    const ConnectionForm& alpha = s.alpha();
    const auto autos = s.automorphisms(rng, 10);
    double round1 = 0.0, round2 = 0.0, pairing_id = 0.0, equivariant = 0.0, eq86 = 0.0, base_term = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0, lambda_general = 0.0, psi_commute = 0.0, omega = 0.0, terms = 0.0;
    int omega_count = 0;
    for (int k = 0; k < s.samples(); ++k) {
        const GaugeAutomorphism& a = autos[static_cast<std::size_t>(k) % autos.size()];
        const PBPoint q = random_pb_point(rng, s.group(), s.chart());
        const PhasePoint z = random_phase_point(rng, s.group(), s.chart());
        const GroupElement h = random_group_element(rng, s.group());

        round1 = std::max(round1, distance(i_alpha(alpha, i_alpha_inv(alpha, q)), q));
        round2 = std::max(round2, distance(i_alpha_inv(alpha, i_alpha(alpha, z)), z));

        const PhasePoint zq = i_alpha_inv(alpha, q);
        const TangentVector v = random_tangent(rng, zq.base());
        const double lhs = zq.pi.dot(v.dx) + zq.rho.coords.dot(v.xi.coords);
        const double rhs = q.pitilde.dot(v.dx) + pairing(q.chi, connection_eval(alpha, zq.base(), v));
        pairing_id = std::max(pairing_id, std::abs(lhs - rhs));

        equivariant = std::max(equivariant, distance(i_alpha(alpha, lifted_g_action(h, z)), psi_g(h, i_alpha(alpha, z))));

        eq86 = std::max(eq86, max_abs(Vec(pulled_back_theta(a, q) - transported_theta(a, q))));
        PBPoint q0 = q;
        q0.chi = CoalgebraElement::zero(s.m());
        Vec expected = Vec::Zero(phase_dim(s.n(), s.m()));
        expected.segment(0, s.n()) = a.base_part()(q.x).transpose() * q.pitilde;
        base_term = std::max(base_term, max_abs(Vec(pulled_back_theta(a, q0) - expected)));

        const Vec rho = coadjoint(q.g.inverse(), q.chi).coords;
        const Mat base = a.base_part()(q.x);
        const Mat shift = a.shift_part()(q.x);
        auto pitilde_gap = [&](const PBPoint& out, const Vec& want) {
            return std::max({max_abs(Vec(out.pitilde - want)), max_abs(Vec(out.x - q.x)),
                             max_abs(CMat(out.g.matrix() - q.g.matrix())), max_abs(Vec(out.chi.coords - q.chi.coords))});
        };
        const GaugeAutomorphism pure_shift = include_shift(alpha, beta_alpha(a));
        const GaugeAutomorphism pure_base = sigma_alpha(alpha, lambda_base(a));
        lambda1 = std::max(lambda1, pitilde_gap(lambda_action(alpha, pure_shift, q), q.pitilde + shift.transpose() * rho));
        lambda2 = std::max(lambda2, pitilde_gap(lambda_action(alpha, pure_base, q), base.transpose() * q.pitilde));
        lambda_general = std::max(lambda_general, pitilde_gap(lambda_action(alpha, a, q),
                                                              base.transpose() * (q.pitilde + shift.transpose() * rho)));
        psi_commute = std::max(psi_commute, distance(lambda_action(alpha, a, psi_g(h, q)), psi_g(h, lambda_action(alpha, a, q))));

        if (k % 4 == 0) {
            const Mat pb = pulled_back_omega(a, q).matrix;
            omega = std::max(omega, max_abs(Mat(pb - transported_omega(a, q).matrix)));
            terms = std::max(terms, max_abs(Mat(pb - pulled_back_omega_terms(a, q).sum())));
            ++omega_count;
        }
    }
    s.add("round_trip_inverse_then_forward", round1, 1e-12, s.samples());
    s.add("round_trip_forward_then_inverse", round2, 1e-12, s.samples());
    s.add("inverse_pairing_identity", pairing_id, 1e-12, s.samples());
    s.add("i_alpha_equivariant", equivariant, 1e-12, s.samples());
    s.add("pulled_back_theta_matches_transport", eq86, 1e-8, s.samples());
    s.add("pulled_back_theta_base_term", base_term, 1e-12, s.samples());
    s.add("lambda_pure_shift", lambda1, 1e-10, s.samples());
    s.add("lambda_pure_base", lambda2, 1e-10, s.samples());
    s.add("lambda_affine_form", lambda_general, 1e-10, s.samples());
    s.add("psi_commutes_with_lambda", psi_commute, 1e-10, s.samples());
    s.add("pulled_back_omega_matches_transport", omega, 1e-4, omega_count);
    s.add("pulled_back_omega_term_sum", terms, 1e-4, omega_count);
}

void suite_dualpair(Suite& s) {
    CounterRng rng = s.rng("automorphism");
    const GaugeAutomorphism a = s.automorphisms(rng, 1).front();
    const int count = std::max(1, s.samples() / 4);
    const int m = s.m();

    const BaseScalar f1 = [](const Vec& x, const Vec& p) { return 0.5 * p.squaredNorm() + std::sin(x(0)) * p(0); };
    const BaseScalar f2 = [](const Vec& x, const Vec& p) { return x.dot(p) + 0.25 * x.squaredNorm(); };
    const CoalgebraScalar c = [](const CoalgebraElement& chi) {
        return chi.coords(0) + 0.3 * chi.coords.squaredNorm() + 0.1 * std::pow(chi.coords(0), 3);
    };
    const BracketReport polar = dual_pair_check(a, f1, c, count, s.seed());
    s.add("polarity", polar.residual, polar.tolerance, count);

    const CoalgebraScalar lin1 = [](const CoalgebraElement& chi) { return chi.coords(0); };
    const CoalgebraScalar lin2 = [m](const CoalgebraElement& chi) { return chi.coords(m > 1 ? 1 : 0) + 0.5 * chi.coords(0) * chi.coords(0); };
    const BracketReport mom = momentum_bracket_check(a, lin1, lin2, count, s.seed());
    s.add("momentum_lie_poisson", mom.residual, mom.tolerance, count).extra = {{"fitted_sign", mom.sign}};

    const CoalgebraScalar casimir = [](const CoalgebraElement& chi) { return chi.coords.squaredNorm(); };
    const BracketReport cas = momentum_bracket_check(a, lin1, casimir, count, s.seed() + 1);
    s.add("momentum_casimir", cas.residual, cas.tolerance, count);

    const BracketReport inv = invariant_bracket_check(a, f1, f2, count, s.seed());
    s.add("invariant_bracket_closure", inv.residual, inv.tolerance, count);

    CounterRng lrng = s.rng("leaf");
    int misses = 0;
    for (int k = 0; k < count; ++k) {
        const PhasePoint z = random_phase_point(lrng, s.group(), s.chart());
        const GroupElement h = random_group_element(lrng, s.group());
        if (!leaf_membership(J0(z), lifted_g_action(h, z), 1e-10)) ++misses;
    }
    s.add("leaf_membership_orbit", misses, 0.0, count);
}

using SuiteFn = void (*)(Suite&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> suites = {
        {"tg", suite_tg},           {"prop1", suite_prop1},       {"prop2", suite_prop2},
        {"prop3", suite_prop3},     {"prop5", suite_prop5},       {"prop6", suite_prop6},
        {"symplectic", suite_symplectic}, {"momentum", suite_momentum}, {"cor7", suite_cor7},
        {"eq86", suite_eq86},       {"dualpair", suite_dualpair},
    };
    return suites;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : registry()) out.push_back(entry.first);
        out.push_back("all");
        return out;
    }();
    return names;
}

CheckReport run_check(const Scenario& scenario, const std::string& suite, std::optional<std::uint64_t> seed) {
    CheckReport report;
    report.suite = suite;
    report.seed = seed.value_or(scenario.seed());
    bool found = false;
    for (const auto& [name, fn] : registry()) {
        if (suite != "all" && suite != name) continue;
        found = true;
        Suite s(scenario, report.seed, report, name);
        fn(s);
    }
    if (!found) throw Error(ErrorCode::UnknownSuite, "unknown suite \"" + suite + "\"");
    return report;
}

} // namespace bundlesym
