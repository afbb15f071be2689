#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_helpers.hpp"

#include "lcs/soliton.hpp"

using namespace lcs;

namespace {

const EvalConfig kJets{};

struct SliceFixture {
    Geometry ambient;
    SubGeometry sub;
};

SliceFixture invariant_slice(const char* warp = "exp(t)",
                             std::pair<double, double> interval = {0.0, 1.0}) {
    GrwSpec spec;
    spec.dim = 5;
    spec.warp_text = warp;
    spec.t_interval = interval;
    const auto man = build_grw(spec);
    Geometry amb = make_geometry(man.domain, man.metric, man.xi, kJets, {});
    Immersion imm;
    imm.n = 5;
    imm.m = 3;
    imm.params.dim = 3;
    imm.params.box = {interval, {0.0, 1.0}, {0.0, 1.0}};
    imm.params.names = {"t", "x1", "x2"};
    imm.map.push_back(expr::parse("t", imm.params.names));
    imm.map.push_back(expr::parse("x1", imm.params.names));
    imm.map.push_back(expr::parse("x2", imm.params.names));
    imm.map.push_back(expr::parse("0.25", imm.params.names));
    imm.map.push_back(expr::parse("0.75", imm.params.names));
    SubGeometry sub = make_subgeometry("slice", imm, amb, {});
    return {std::move(amb), std::move(sub)};
}

SliceFixture xi_curve() {
    const auto man = th::grw_exp(5);
    Geometry amb = make_geometry(man.domain, man.metric, man.xi, kJets, {});
    Immersion imm;
    imm.n = 5;
    imm.m = 1;
    imm.params.dim = 1;
    imm.params.box = {{0.05, 0.95}};
    imm.params.names = {"s"};
    imm.map.push_back(expr::parse("s", imm.params.names));
    imm.map.push_back(expr::parse("0.3", imm.params.names));
    imm.map.push_back(expr::parse("0.4", imm.params.names));
    imm.map.push_back(expr::parse("0.5", imm.params.names));
    imm.map.push_back(expr::parse("0.6", imm.params.names));
    SubGeometry sub = make_subgeometry("curve", imm, amb, {});
    return {std::move(amb), std::move(sub)};
}

} // namespace

TEST_CASE("synthetic soliton algebra closes for 100 random (alpha, lambda, m)") {
    // pure frame-component computation: eta = (-1, 0, ..., 0), g = diag(eps)
    Rng rng(2718);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 2 + static_cast<int>(rng.next() % 5);
        const double alpha = rng.uniform(-2.0, 2.0);
        const double lambda = rng.uniform(-3.0, 3.0);
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const double g = (a == b) ? (a == 0 ? -1.0 : 1.0) : 0.0;
                const double q = (a == 0 && b == 0) ? 1.0 : 0.0; // eta x eta
                const double lie = 2.0 * alpha * (g + q);
                const double s = -(alpha + lambda) * g - alpha * q;
                worst = std::max(worst, std::fabs(lie + 2.0 * s + 2.0 * lambda * g));
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("soliton residual: synthetic eta-Einstein S closes the equation") {
    const auto fix = invariant_slice();
    const Geometry& M = fix.sub.intrinsic;
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const double lambda = rng.uniform(-3.0, 3.0);
        const BilinearProvider S = synthetic_eta_einstein(M, lambda);
        for (std::size_t pi = 0; pi < M.points.size(); pi += 7) {
            const Mat res = soliton_residual_frame(M, S, M.st().xi, lambda, pi);
            CHECK(max_abs(res) < 1e-8);
        }
    }
}

TEST_CASE("soliton residual on the actual slice geometry with lambda = -2") {
    // S = 2g intrinsically; residual = 2g + 2 eta x eta, frame max 2
    const auto fix = invariant_slice();
    const Geometry& M = fix.sub.intrinsic;
    for (std::size_t pi = 0; pi < M.points.size(); pi += 5) {
        const Mat res = soliton_residual_frame(M, intrinsic_ricci(M), M.st().xi, -2.0, pi);
        CHECK(max_abs(res) == doctest::Approx(2.0).epsilon(1e-8));
        // the (xi,xi) frame slot cancels exactly
        CHECK(std::fabs(res[0]) < 1e-8);
    }
}

TEST_CASE("best_lambda recovers a planted lambda exactly") {
    const auto fix = invariant_slice();
    const Geometry& M = fix.sub.intrinsic;
    Rng rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const double planted = rng.uniform(-3.0, 3.0);
        const double got = best_lambda(M, synthetic_eta_einstein(M, planted), M.st().xi);
        CHECK(got == doctest::Approx(planted).epsilon(1e-10));
    }
}

TEST_CASE("best_lambda on the de Sitter slice is -8/3") {
    const auto fix = invariant_slice();
    const Geometry& M = fix.sub.intrinsic;
    const double lambda = best_lambda(M, intrinsic_ricci(M), M.st().xi);
    CHECK(lambda == doctest::Approx(-8.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("best_lambda on the xi curve is zero (steady)") {
    const auto fix = xi_curve();
    const Geometry& M = fix.sub.intrinsic;
    const double lambda = best_lambda(M, intrinsic_ricci(M), fix.sub.xi_param);
    CHECK(std::fabs(lambda) < 1e-10);
    CHECK(std::string(classify_lambda(lambda)) == "steady");
}

TEST_CASE("eta-Einstein fit") {
    const auto fix = invariant_slice();
    const Geometry& M = fix.sub.intrinsic;

    SUBCASE("actual S = 2g gives a = 2, b = 0") {
        const EtaEinsteinFit fit = eta_einstein_fit(M, intrinsic_ricci(M));
        CHECK(fit.a == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(fit.b == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(fit.residual_max < 1e-8);
        CHECK_FALSE(fit.einstein_only);
    }

    SUBCASE("synthetic alpha=1, lambda=-2 gives a = 1, b = -1") {
        const EtaEinsteinFit fit = eta_einstein_fit(M, synthetic_eta_einstein(M, -2.0));
        CHECK(fit.a == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fit.b == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(fit.residual_max < 1e-8);
    }

    SUBCASE("zero S gives a = b = 0") {
        const BilinearProvider zero = [&M](const Vec&) {
            return Mat(static_cast<std::size_t>(M.dim()) * M.dim(), 0.0);
        };
        const EtaEinsteinFit fit = eta_einstein_fit(M, zero);
        CHECK(std::fabs(fit.a) < 1e-12);
        CHECK(std::fabs(fit.b) < 1e-12);
    }
}

TEST_CASE("eta-Einstein fit degenerates to Einstein-only on a curve") {
    const auto fix = xi_curve();
    const Geometry& M = fix.sub.intrinsic;
    // no intrinsic structure on the 1-dimensional chart: eta x eta would be
    // parallel to g anyway
    const EtaEinsteinFit fit = eta_einstein_fit(M, intrinsic_ricci(M), false);
    CHECK(fit.einstein_only);
    CHECK(std::fabs(fit.a) < 1e-10);
}

TEST_CASE("invariant chain on the exp slice") {
    const auto fix = invariant_slice();
    CHECK(check_eq_3_3(fix.sub).stats.max < 1e-8);
    const CheckOutcome lie = check_eq_3_4(fix.sub);
    CHECK(lie.stats.max < 1e-8);
    CHECK(lie.coefficients[0].second == doctest::Approx(1.0).epsilon(1e-9));
    const CheckOutcome ric = check_eq_3_6(fix.sub);
    CHECK(ric.stats.max < 1e-8);
    CHECK(ric.coefficients[0].second == doctest::Approx(2.0).epsilon(1e-8));
    const CheckOutcome lam = check_lambda_relation(fix.sub);
    CHECK(lam.stats.max < 1e-8);
    CHECK(lam.coefficients[0].second == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(lam.note.find("shrinking") != std::string::npos);
}

TEST_CASE("linear warp slice: lambda relation gives zero, steady") {
    const auto fix = invariant_slice("t", {1.0, 2.0});
    const CheckOutcome lam = check_lambda_relation(fix.sub);
    CHECK(lam.stats.max < 1e-8);
    CHECK(std::fabs(lam.coefficients[0].second) < 1e-9);
    CHECK(lam.note.find("steady") != std::string::npos);
}

TEST_CASE("theorem wording diagnostic reports the sign flip") {
    const auto fix = invariant_slice();
    const CheckOutcome w = check_thm_3_2_wording(fix.sub);
    CHECK(w.stats.max == 1.0); // labels disagree on this example
    CHECK(w.note.find("opposite") != std::string::npos);
}

TEST_CASE("anti-invariant chain on the xi curve") {
    const auto fix = xi_curve();
    CHECK(check_anti_nabla_xi(fix.sub).stats.max < 1e-8);
    CHECK(check_anti_h_xi(fix.sub).stats.max < 1e-8);
    CHECK(check_anti_killing(fix.sub).stats.max < 1e-8);
    CHECK(check_anti_ricci_xi(fix.sub).stats.max < 1e-8);
    const CheckOutcome steady = check_anti_steady(fix.sub);
    CHECK(steady.stats.max < 1e-8);
    CHECK(steady.note == "steady");
}

TEST_CASE("chain checks refuse mismatched submanifolds") {
    const auto inv = invariant_slice();
    const auto anti = xi_curve();
    CHECK_THROWS_AS(check_eq_3_3(anti.sub), Error);
    CHECK_THROWS_AS(check_anti_nabla_xi(inv.sub), Error);
}

TEST_CASE("soliton report flags Killing potentials") {
    const auto fix = xi_curve();
    const Geometry& M = fix.sub.intrinsic;
    const SolitonReport rep = soliton_report(M, intrinsic_ricci(M), fix.sub.xi_param);
    CHECK(rep.killing);
    CHECK(rep.cls == "steady");
    CHECK(rep.residual.max < 1e-8);

    const auto inv = invariant_slice();
    const Geometry& Mi = inv.sub.intrinsic;
    const SolitonReport rep2 = soliton_report(Mi, intrinsic_ricci(Mi), Mi.st().xi);
    CHECK_FALSE(rep2.killing);
    CHECK(rep2.lambda == doctest::Approx(-8.0 / 3.0).epsilon(1e-9));
    CHECK(rep2.residual.max > 0.1); // the slice is not an actual soliton
}

TEST_CASE("mean curvature diagnostics") {
    const auto inv = invariant_slice();
    const CheckOutcome mc = check_mean_curvature(inv.sub);
    CHECK(mc.stats.max < 1e-8);
    CHECK(mc.note == "totally geodesic");
    const CheckOutcome um = check_umbilical(inv.sub);
    CHECK(um.stats.max < 1e-8);
}
