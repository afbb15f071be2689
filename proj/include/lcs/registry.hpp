#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcs/parallel.hpp"
#include "lcs/qsmc.hpp"
#include "lcs/report.hpp"
#include "lcs/scenario.hpp"

namespace lcs {

enum class Scope { ambient, submanifold };

// How a check's status is decided: asserted checks turn pass/fail at their
// tolerance; conditional ones assert only when their gate holds and report a
// diagnostic row otherwise; diagnostic checks never fail a run.
enum class Assertability {
    always,
    const_alpha,    // assert only when alpha is constant on the chart
    geodesic_gated, // assert minimality only on totally geodesic examples
    expected_class, // assert only when the scenario states an expectation
    diagnostic,
};

struct CheckSpec {
    const char* id;
    const char* equation;
    Scope scope;
    Assertability assertability;
    double tol_factor;   // multiplies the engine tolerance
    double absolute_tol; // used instead when positive
    const char* description;
};

inline const std::vector<CheckSpec>& check_registry() {
    static const std::vector<CheckSpec> table = {
        {"frame_orthonormality", "frames", Scope::ambient, Assertability::always, 0.1, 0,
         "orthonormal frames satisfy g(e_a,e_b) = eps_a delta_ab"},
        {"lc_torsion_free", "Levi-Civita", Scope::ambient, Assertability::always, 1, 0,
         "the metric connection has vanishing torsion"},
        {"lc_metric_compat", "Levi-Civita", Scope::ambient, Assertability::always, 1, 0,
         "nabla g = 0 for the Levi-Civita connection"},
        {"eq_2_1", "(2.1)", Scope::ambient, Assertability::always, 1, 0,
         "g(xi, xi) = -1"},
        {"eq_2_2", "(2.2)", Scope::ambient, Assertability::always, 1, 0,
         "eta(X) = g(X, xi)"},
        {"eq_2_3", "(2.3)", Scope::ambient, Assertability::always, 1, 0,
         "(nabla_X eta)(Y) = alpha (g(X,Y) + eta(X) eta(Y))"},
        {"eq_2_4", "(2.4)", Scope::ambient, Assertability::always, 1, 0,
         "nabla_X xi = alpha (X + eta(X) xi)"},
        {"eq_2_5", "(2.5)", Scope::ambient, Assertability::always, 1, 0,
         "d alpha = rho eta with rho = -(xi alpha)"},
        {"eq_2_7", "(2.7)", Scope::ambient, Assertability::always, 1, 0,
         "phi X = X + eta(X) xi"},
        {"eq_2_8", "(2.8)", Scope::ambient, Assertability::always, 1, 0,
         "g(phi X, Y) = g(X, phi Y)"},
        {"eq_2_9", "(2.9)", Scope::ambient, Assertability::always, 1, 0,
         "eta(xi) = -1, phi xi = 0, eta(phi X) = 0, g(phi X, phi Y) = g + eta eta"},
        {"eq_2_10", "(2.10)", Scope::ambient, Assertability::always, 1, 0,
         "phi^2 X = X + eta(X) xi"},
        {"eq_2_11", "(2.11)", Scope::ambient, Assertability::always, 1, 0,
         "S(X, xi) = (n-1)(alpha^2 - rho) eta(X)"},
        {"eq_2_12", "(2.12)", Scope::ambient, Assertability::always, 1, 0,
         "R(X,Y) xi = (alpha^2 - rho)(eta(Y) X - eta(X) Y)"},
        {"eq_2_13", "(2.13)", Scope::ambient, Assertability::always, 1, 0,
         "R(xi,Y) Z = (alpha^2 - rho)(g(Y,Z) xi - eta(Z) Y)"},
        {"eq_2_14", "(2.14)", Scope::ambient, Assertability::always, 1, 0,
         "(nabla_X phi) Y = alpha (g(X,Y) xi + 2 eta(X) eta(Y) xi + eta(Y) X)"},
        {"eq_2_15", "(2.15)", Scope::ambient, Assertability::always, 1, 0,
         "d rho = beta eta with beta = -(xi rho)"},
        {"eq_2_16", "(2.16)", Scope::ambient, Assertability::always, 1, 0,
         "curvature projects through phi with the sign-consistent eta correction"},
        {"trace_phi", "trace", Scope::ambient, Assertability::always, 1, 0,
         "trace phi = dim - 1"},
        {"eq_1_2_torsion", "(1.2)", Scope::ambient, Assertability::always, 1, 0,
         "quarter-symmetric torsion is eta(Y) phi X - eta(X) phi Y"},
        {"qsmc_metric_compat", "(1.1)", Scope::ambient, Assertability::always, 1, 0,
         "the quarter-symmetric connection is metric"},
        {"eq_2_27_u_tensor", "(2.27)", Scope::ambient, Assertability::always, 1, 0,
         "difference tensor route (2.22)-(2.27) matches the closed form"},
        {"eq_2_29_curvature", "(2.29)", Scope::ambient, Assertability::const_alpha, 100, 0,
         "numeric quarter-symmetric curvature matches the transform"},
        {"eq_2_30_ricci", "(2.30)", Scope::ambient, Assertability::const_alpha, 100, 0,
         "numeric quarter-symmetric Ricci matches the transform"},
        {"eq_2_30_contraction", "(2.30)", Scope::ambient, Assertability::always, 0, 1e-10,
         "contracting the (2.29) transform reproduces the (2.30) transform"},
        {"eq_2_30_fit", "(2.30)", Scope::ambient, Assertability::diagnostic, 1, 0,
         "empirical coefficients of the Ricci shift in the structure basis"},
        {"eq_3_11_ambient", "(3.11)", Scope::ambient, Assertability::always, 1, 0,
         "connection Lie derivative of g along xi is 2(alpha-1)(g + eta eta)"},
        {"sub_classification", "class", Scope::submanifold, Assertability::expected_class,
         1, 0, "invariant / anti-invariant / neither classification"},
        {"eq_2_17_gauss", "(2.17)", Scope::submanifold, Assertability::always, 1, 0,
         "tangential Gauss part equals the induced Levi-Civita connection"},
        {"sub_h_symmetry", "(2.17)", Scope::submanifold, Assertability::always, 1, 0,
         "second fundamental form is symmetric and normal-valued"},
        {"eq_2_19_duality", "(2.19)", Scope::submanifold, Assertability::always, 1, 0,
         "g(h(X,Y), V) = g(A_V X, Y)"},
        {"eq_2_20_linearity", "(2.20)", Scope::submanifold, Assertability::always, 1, 0,
         "h(fX, Y) = f h(X, Y)"},
        {"eq_2_21_umbilical", "(2.21)", Scope::submanifold, Assertability::diagnostic, 1, 0,
         "umbilicity residual h - g H"},
        {"sub_mean_curvature", "H", Scope::submanifold, Assertability::diagnostic, 1, 0,
         "mean curvature norm and minimality"},
        {"thm_3_1_minimality", "Thm 3.1", Scope::submanifold, Assertability::geodesic_gated,
         1, 0, "claimed minimality; asserted only on totally geodesic examples"},
        {"eq_3_3_invariant", "(3.3)", Scope::submanifold, Assertability::always, 1, 0,
         "nabla_X xi = alpha phi X tangentially and h(X, xi) = 0"},
        {"eq_3_4_lie", "(3.4)", Scope::submanifold, Assertability::always, 1, 0,
         "Lie_xi g = 2 alpha (g + eta eta) on the invariant submanifold"},
        {"eq_3_6_ricci_xi", "(3.6)", Scope::submanifold, Assertability::always, 1, 0,
         "S(X, xi) = (m-1)(alpha^2 - rho) eta(X) intrinsically"},
        {"eq_3_5_lambda", "(3.5)", Scope::submanifold, Assertability::always, 1, 0,
         "soliton contraction forces lambda = -(m-1)(alpha^2 - rho)"},
        {"thm_3_2_wording", "Thm 3.2", Scope::submanifold, Assertability::diagnostic, 1, 0,
         "classification wording vs the sign of lambda"},
        {"soliton_best_fit", "(1.3)", Scope::submanifold, Assertability::diagnostic, 1, 0,
         "least-squares lambda, class and Killing flag for the actual geometry"},
        {"eta_einstein_fit", "(3.5)", Scope::submanifold, Assertability::diagnostic, 1, 0,
         "least-squares eta-Einstein decomposition of the intrinsic Ricci"},
        {"anti_nabla_xi", "(3.2)", Scope::submanifold, Assertability::always, 1, 0,
         "tangential nabla_X xi vanishes on the anti-invariant submanifold"},
        {"anti_h_xi", "(3.2)", Scope::submanifold, Assertability::always, 1, 0,
         "h(X, xi) = alpha phi X on the anti-invariant submanifold"},
        {"anti_killing", "Thm 3.3", Scope::submanifold, Assertability::always, 1, 0,
         "xi is Killing on the anti-invariant submanifold"},
        {"anti_ricci_xi", "Thm 3.4", Scope::submanifold, Assertability::always, 1, 0,
         "S(Y, xi) = 0 on the anti-invariant submanifold"},
        {"thm_3_4_steady", "Thm 3.4", Scope::submanifold, Assertability::always, 1, 0,
         "the anti-invariant soliton is steady (lambda = 0)"},
        {"eq_3_10_induced", "(3.10)", Scope::submanifold, Assertability::always, 1, 0,
         "induced quarter-symmetric connection matches the intrinsic formula"},
        {"eq_3_9_hbar", "(3.9)", Scope::submanifold, Assertability::always, 1, 0,
         "both connections share one second fundamental form"},
        {"qsmc_nabla_xi_sub", "(3.10)", Scope::submanifold, Assertability::always, 1, 0,
         "nabla~_X xi = (alpha - 1) phi X tangentially"},
        {"eq_3_11_sub", "(3.11)", Scope::submanifold, Assertability::always, 1, 0,
         "connection Lie derivative on the submanifold"},
        {"eq_4_7_curvature", "(4.7)", Scope::submanifold, Assertability::const_alpha, 100,
         0, "induced quarter-symmetric curvature transform"},
        {"eq_3_12_ricci", "(3.12)", Scope::submanifold, Assertability::const_alpha, 100, 0,
         "numeric induced Ricci matches the contraction-derived transform"},
        {"eq_3_12_fit", "(3.12)", Scope::submanifold, Assertability::diagnostic, 1, 0,
         "empirical Ricci-shift coefficients vs contraction and printed forms"},
        {"eq_3_13_fit", "(3.13)", Scope::submanifold, Assertability::diagnostic, 1, 0,
         "eta-Einstein coefficients under the soliton hypothesis"},
        {"eq_3_14_lie_zero", "(3.14)", Scope::submanifold, Assertability::always, 1, 0,
         "quarter-symmetric Lie derivative vanishes on the anti-invariant curve"},
        {"qsmc_anti_einstein", "(3.12)", Scope::submanifold, Assertability::diagnostic, 1,
         0, "Einstein fit and lambda of the induced quarter-symmetric Ricci"},
    };
    return table;
}

inline std::vector<std::string> registry_ids() {
    std::vector<std::string> ids;
    for (const auto& spec : check_registry()) ids.emplace_back(spec.id);
    return ids;
}

inline const CheckSpec& registry_entry(const std::string& id) {
    for (const auto& spec : check_registry())
        if (id == spec.id) return spec;
    fail(errc::registry, "unknown check id: " + id);
}

// ---- world construction ----------------------------------------------------

struct SubTarget {
    SubmanifoldSpec spec;
    std::optional<SubGeometry> geometry;
    std::string build_error;
};

struct World {
    ScenarioDoc doc;
    EvalConfig cfg;
    std::optional<Geometry> ambient;
    std::optional<Connection> qsm;
    std::string build_error;
    std::vector<SubTarget> subs;
};

inline World build_world(const ScenarioDoc& doc) {
    World w;
    w.doc = doc;
    w.cfg.engine = doc.engine;
    try {
        const GrwManifold man = build_grw(doc.manifold);
        TensorField xi = man.xi;
        if (doc.prefer != "t") {
            int idx = -1;
            for (int i = 0; i < man.domain.dim; ++i)
                if (man.domain.names[i] == doc.prefer) idx = i;
            if (idx < 0) fail(errc::schema, "structure.prefer: unknown coordinate '" +
                                                doc.prefer + "'");
            Vec v(man.domain.dim, 0.0);
            v[idx] = 1.0;
            xi = constant_vector_field(man.domain.dim, v);
        }
        GeometryOptions opt;
        opt.samples = doc.samples;
        opt.seed = doc.seed;
        opt.tol = doc.tolerance;
        w.ambient = make_geometry(man.domain, man.metric, xi, w.cfg, opt);
        w.qsm = qsm_connection(*w.ambient);
    } catch (const Error& e) {
        w.build_error = e.what();
        return w;
    }
    for (const auto& spec : doc.submanifolds) {
        SubTarget t;
        t.spec = spec;
        try {
            const Immersion imm = resolve_immersion(spec, w.ambient->domain);
            GeometryOptions opt;
            opt.samples = doc.samples;
            opt.seed = doc.seed;
            opt.tol = doc.tolerance;
            t.geometry = make_subgeometry(spec.name, imm, *w.ambient, opt);
        } catch (const Error& e) {
            t.build_error = e.what();
        }
        w.subs.push_back(std::move(t));
    }
    return w;
}

// ---- check runners ----------------------------------------------------------

namespace detail_registry {

inline CheckResult base_result(const CheckSpec& spec, const World& w) {
    CheckResult r;
    r.id = spec.id;
    r.equation = spec.equation;
    r.target = "ambient";
    r.tolerance = spec.absolute_tol > 0
                      ? spec.absolute_tol
                      : spec.tol_factor * (w.doc.tolerance > 0
                                               ? w.doc.tolerance
                                               : w.cfg.default_tolerance());
    return r;
}

inline void finish(CheckResult& r, const CheckOutcome& outcome, bool asserted,
                   const char* gate_note = nullptr) {
    r.residual_max = outcome.stats.max;
    r.residual_mean = outcome.stats.mean();
    r.coefficients = outcome.coefficients;
    r.note = outcome.note;
    if (asserted) {
        r.status = outcome.stats.max <= r.tolerance ? "pass" : "fail";
    } else {
        r.status = "diagnostic";
        if (gate_note) {
            if (!r.note.empty()) r.note += "; ";
            r.note += gate_note;
        }
    }
}

inline CheckOutcome run_ambient_check(const std::string& id, const Geometry& G,
                                      const Connection& qsm) {
    if (id == "frame_orthonormality") return check_frame_orthonormality(G);
    if (id == "lc_torsion_free") return check_lc_torsion_free(G);
    if (id == "lc_metric_compat") return check_lc_metric_compat(G);
    if (id == "eq_2_1") return check_eq_2_1(G);
    if (id == "eq_2_2") return check_eq_2_2(G);
    if (id == "eq_2_3") return check_eq_2_3(G);
    if (id == "eq_2_4") return check_eq_2_4(G);
    if (id == "eq_2_5") return check_eq_2_5(G);
    if (id == "eq_2_7") return check_eq_2_7(G);
    if (id == "eq_2_8") return check_eq_2_8(G);
    if (id == "eq_2_9") return check_eq_2_9(G);
    if (id == "eq_2_10") return check_eq_2_10(G);
    if (id == "eq_2_11") return check_eq_2_11(G);
    if (id == "eq_2_12") return check_eq_2_12(G);
    if (id == "eq_2_13") return check_eq_2_13(G);
    if (id == "eq_2_14") return check_eq_2_14(G);
    if (id == "eq_2_15") return check_eq_2_15(G);
    if (id == "eq_2_16") return check_eq_2_16(G);
    if (id == "trace_phi") return check_trace_phi(G);
    if (id == "eq_1_2_torsion") return check_eq_1_2_torsion(G, qsm);
    if (id == "qsmc_metric_compat") return check_qsmc_metric_compat(G, qsm);
    if (id == "eq_2_27_u_tensor") return check_eq_2_27_u_tensor(G, qsm);
    if (id == "eq_2_29_curvature") return check_eq_2_29(G, qsm);
    if (id == "eq_2_30_ricci") {
        const RicciTransformOutcome r = check_eq_2_30(G, qsm);
        CheckOutcome out = r.outcome;
        out.coefficients.emplace_back("antisymmetric_part_max", r.antisym_max);
        return out;
    }
    if (id == "eq_2_30_contraction") return check_eq_2_30_contraction(G);
    if (id == "eq_2_30_fit") {
        const RicciShiftFit fit = ricci_shift_fit(G, qsm, G.lc);
        CheckOutcome out;
        out.stats.add(fit.residual_max);
        out.coefficients.emplace_back("fit_g", fit.fit_g);
        out.coefficients.emplace_back("fit_etaeta", fit.fit_etaeta);
        out.coefficients.emplace_back("canonical_g", fit.canonical_g);
        out.coefficients.emplace_back("canonical_etaeta", fit.canonical_etaeta);
        out.coefficients.emplace_back("canonical_phig", fit.canonical_phig);
        out.coefficients.emplace_back("gram_condition_triple", fit.gram_condition_triple);
        out.note = "three-tensor basis is rank deficient: g(phi.,.) = g + eta eta";
        return out;
    }
    if (id == "eq_3_11_ambient") return check_qsmc_lie(G, qsm);
    fail(errc::registry, "no ambient runner for check id: " + id);
}

inline CheckOutcome run_sub_check(const std::string& id, const SubTarget& t,
                                  const Connection& qsm, bool& asserted,
                                  std::string& gate_note) {
    const SubGeometry& S = *t.geometry;
    if (id == "sub_classification") {
        CheckOutcome out;
        out.note = subclass_name(S.cls);
        out.coefficients.emplace_back("xi_tangency_residual", S.xi_tangency_residual);
        out.coefficients.emplace_back("phi_tangential_max", S.phi_tangential_max);
        out.coefficients.emplace_back("phi_normal_max", S.phi_normal_max);
        if (!t.spec.expect_class.empty()) {
            out.stats.add(t.spec.expect_class == subclass_name(S.cls) ? 0.0 : 1.0);
            out.note += "; expected " + t.spec.expect_class;
        } else {
            asserted = false;
            gate_note = "no expected class declared";
        }
        return out;
    }
    if (id == "eq_2_17_gauss") {
        CheckOutcome out;
        const int m = S.m();
        for (std::size_t pi = 0; pi < S.pts.size(); ++pi) {
            const auto GM = S.intrinsic.lc(S.pts[pi].u);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    for (int c = 0; c < m; ++c)
                        out.stats.add(S.pts[pi].gamma_tan[a][b][c] -
                                      GM[gamma_index(m, c, a, b)].value());
        }
        return out;
    }
    if (id == "sub_h_symmetry") {
        CheckOutcome out;
        const int m = S.m(), n = S.n();
        for (std::size_t pi = 0; pi < S.pts.size(); ++pi) {
            const SubPointData& sp = S.pts[pi];
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    Vec asym(n, 0.0);
                    for (int A = 0; A < n; ++A) asym[A] = sp.h[a][b][A] - sp.h[b][a][A];
                    out.stats.add(frame_norm(sp.gA, n, sp.ambient_frame, asym));
                    out.stats.add(frame_norm(sp.gA, n, sp.ambient_frame,
                                             tangential_part(sp, sp.h[a][b], m, n)));
                }
        }
        return out;
    }
    if (id == "eq_2_19_duality") {
        CheckOutcome out;
        const int m = S.m(), n = S.n();
        Rng rng(S.ambient.seed ^ 0x19u);
        for (std::size_t pi = 0; pi < S.pts.size(); ++pi) {
            const SubPointData& sp = S.pts[pi];
            for (std::size_t k = 0; k < sp.normals.size(); ++k) {
                // V field built from the projection of the normal at this point
                const TensorField V =
                    projected_normal_field(S.imm, S.ambient.metric, sp.normals[k]);
                Vec xp(m), yp(m);
                for (double& x : xp) x = rng.symmetric();
                for (double& y : yp) y = rng.symmetric();
                const auto split = weingarten(S, pi, xp, V, S.ambient.cfg);
                const auto vj = eval_field(V, sp.u, S.ambient.cfg, 1);
                Vec vv(n);
                for (int A = 0; A < n; ++A) vv[A] = vj[A].value();
                const double lhs = bilinear(sp.gA, n, h_of(sp, xp, yp, m, n), vv);
                const double rhs =
                    -bilinear(sp.gA, n, split.tangential, push_forward(sp, yp, m, n));
                out.stats.add(lhs - rhs);
            }
        }
        return out;
    }
    if (id == "eq_2_20_linearity") {
        CheckOutcome out;
        const int m = S.m(), n = S.n();
        Rng rng(S.ambient.seed ^ 0x20u);
        for (std::size_t pi = 0; pi < S.pts.size(); ++pi) {
            const SubPointData& sp = S.pts[pi];
            Vec xp(m), yp(m);
            for (double& x : xp) x = rng.symmetric();
            for (double& y : yp) y = rng.symmetric();
            const double f = rng.uniform(0.5, 2.0);
            Vec fx = xp;
            for (double& x : fx) x *= f;
            const Vec h1 = h_of(sp, fx, yp, m, n);
            const Vec h2 = h_of(sp, xp, yp, m, n);
            Vec res(n, 0.0);
            for (int A = 0; A < n; ++A) res[A] = h1[A] - f * h2[A];
            out.stats.add(frame_norm(sp.gA, n, sp.ambient_frame, res));
        }
        return out;
    }
    if (id == "eq_2_21_umbilical") {
        asserted = false;
        return check_umbilical(S);
    }
    if (id == "sub_mean_curvature") {
        asserted = false;
        return check_mean_curvature(S);
    }
    if (id == "thm_3_1_minimality") {
        CheckOutcome mc = check_mean_curvature(S);
        double h_max = 0.0;
        for (const auto& [k, v] : mc.coefficients)
            if (k == "h_norm_max") h_max = v;
        if (h_max > S.intrinsic.tol) {
            asserted = false;
            gate_note = "not totally geodesic: minimality reported, not asserted";
        }
        return mc;
    }
    if (id == "eq_3_3_invariant") return check_eq_3_3(S);
    if (id == "eq_3_4_lie") return check_eq_3_4(S);
    if (id == "eq_3_6_ricci_xi") return check_eq_3_6(S);
    if (id == "eq_3_5_lambda") return check_lambda_relation(S);
    if (id == "thm_3_2_wording") {
        asserted = false;
        return check_thm_3_2_wording(S);
    }
    if (id == "soliton_best_fit") {
        asserted = false;
        CheckOutcome out;
        const Geometry& M = S.intrinsic;
        const TensorField V = S.xi_tangent ? S.xi_param
                                           : (M.structure ? M.st().xi : TensorField{});
        if (!V.valid()) {
            out.note = "xi is not tangent: no canonical potential";
            return out;
        }
        const SolitonReport rep = soliton_report(M, intrinsic_ricci(M), V);
        out.stats.merge(rep.residual);
        out.coefficients.emplace_back("lambda", rep.lambda);
        out.coefficients.emplace_back("lie_norm_max", rep.lie_norm_max);
        out.note = rep.cls + std::string(rep.killing ? "; xi is Killing" : "");
        return out;
    }
    if (id == "eta_einstein_fit") {
        asserted = false;
        CheckOutcome out;
        const Geometry& M = S.intrinsic;
        const EtaEinsteinFit fit =
            eta_einstein_fit(M, intrinsic_ricci(M), M.structure.has_value());
        out.stats.add(fit.residual_max);
        out.coefficients.emplace_back("a", fit.a);
        out.coefficients.emplace_back("b", fit.b);
        out.note = fit.einstein_only ? "Einstein-only fit" : "eta-Einstein fit";
        return out;
    }
    if (id == "anti_nabla_xi") return check_anti_nabla_xi(S);
    if (id == "anti_h_xi") return check_anti_h_xi(S);
    if (id == "anti_killing") return check_anti_killing(S);
    if (id == "anti_ricci_xi") return check_anti_ricci_xi(S);
    if (id == "thm_3_4_steady") return check_anti_steady(S);
    if (id == "eq_3_10_induced") return check_eq_3_10(S, qsm);
    if (id == "eq_3_9_hbar") return check_eq_3_9_hbar(S, qsm);
    if (id == "qsmc_nabla_xi_sub") return check_qsmc_nabla_xi_sub(S, qsm);
    if (id == "eq_3_11_sub") return check_eq_3_11_sub(S, qsm);
    if (id == "eq_4_7_curvature") return check_eq_4_7(S, qsm);
    if (id == "eq_3_12_ricci") {
        const RicciTransformOutcome r = check_eq_3_12(S, qsm);
        CheckOutcome out = r.outcome;
        out.coefficients.emplace_back("antisymmetric_part_max", r.antisym_max);
        return out;
    }
    if (id == "eq_3_12_fit") {
        asserted = false;
        const InducedRicciFitReport rep = check_eq_3_12_fit(S, qsm);
        CheckOutcome out;
        out.stats.add(rep.fit.residual_max);
        out.coefficients.emplace_back("fit_g", rep.fit.fit_g);
        out.coefficients.emplace_back("fit_etaeta", rep.fit.fit_etaeta);
        out.coefficients.emplace_back("contraction_g", rep.contraction_g);
        out.coefficients.emplace_back("contraction_etaeta", rep.contraction_etaeta);
        out.coefficients.emplace_back("printed_g", rep.printed_g);
        out.coefficients.emplace_back("printed_etaeta", rep.printed_etaeta);
        out.note = rep.note;
        return out;
    }
    if (id == "eq_3_13_fit") {
        asserted = false;
        const Eq313Report rep = check_eq_3_13_fit(S, qsm);
        CheckOutcome out;
        out.coefficients.emplace_back("lambda", rep.lambda);
        out.coefficients.emplace_back("fit_g", rep.fit_g);
        out.coefficients.emplace_back("fit_etaeta", rep.fit_etaeta);
        out.coefficients.emplace_back("printed_g", rep.printed_g);
        out.coefficients.emplace_back("corrected_g", rep.corrected_g);
        out.coefficients.emplace_back("etaeta_coeff", rep.etaeta_coeff);
        out.note = rep.note;
        return out;
    }
    if (id == "eq_3_14_lie_zero") return check_eq_3_14(S, qsm);
    if (id == "qsmc_anti_einstein") {
        asserted = false;
        const QsmcAntiReport rep = qsmc_anti_report(S, qsm);
        CheckOutcome out;
        out.stats.add(rep.fit.residual_max);
        out.coefficients.emplace_back("lambda", rep.lambda);
        out.coefficients.emplace_back("einstein_a", rep.fit.a);
        out.note = rep.note;
        return out;
    }
    fail(errc::registry, "no submanifold runner for check id: " + id);
}

} // namespace detail_registry

// Executes the scenario's checks in declared order (submanifold-scoped
// checks run once per declared submanifold). Tasks may execute on several
// threads; results are keyed by task index so the report bytes do not depend
// on the schedule. Component errors become failed rows, never exceptions.
inline Report run_checks(const ScenarioDoc& doc, int threads = 1) {
    const World w = build_world(doc);
    Report rep;
    rep.scenario = doc.name;
    rep.engine = engine_name(doc.engine);
    rep.seed = doc.seed;
    rep.samples = doc.samples;
    rep.tolerance = doc.tolerance > 0 ? doc.tolerance : w.cfg.default_tolerance();

    struct Task {
        const CheckSpec* spec;
        int sub_index; // -1 for ambient
    };
    std::vector<Task> tasks;
    for (const std::string& id : doc.checks) {
        const CheckSpec& spec = registry_entry(id);
        if (spec.scope == Scope::ambient) {
            tasks.push_back({&spec, -1});
        } else {
            for (std::size_t s = 0; s < w.subs.size(); ++s)
                tasks.push_back({&spec, static_cast<int>(s)});
        }
    }

    std::vector<CheckResult> results(tasks.size());
    parallel_for(tasks.size(), threads, [&](std::size_t ti) {
        const Task& task = tasks[ti];
        const CheckSpec& spec = *task.spec;
        CheckResult r = detail_registry::base_result(spec, w);
        const auto started = std::chrono::steady_clock::now();
        bool asserted = spec.assertability != Assertability::diagnostic;
        std::string gate_note;
        try {
            if (!w.build_error.empty())
                fail(errc::misuse, "scenario setup failed: " + w.build_error);
            if (task.sub_index < 0) {
                if (spec.assertability == Assertability::const_alpha &&
                    !w.ambient->alpha_constant()) {
                    asserted = false;
                    gate_note = "alpha is not constant: residual reported, not asserted";
                }
                const CheckOutcome outcome =
                    detail_registry::run_ambient_check(spec.id, *w.ambient, *w.qsm);
                detail_registry::finish(r, outcome, asserted,
                                        gate_note.empty() ? nullptr : gate_note.c_str());
            } else {
                const SubTarget& t = w.subs[static_cast<std::size_t>(task.sub_index)];
                r.id = std::string(spec.id) + "[" + t.spec.name + "]";
                if (!t.build_error.empty())
                    fail(errc::misuse, "submanifold setup failed: " + t.build_error);
                r.target = t.spec.name + " (" +
                           subclass_name(t.geometry->cls) + ")";
                if (spec.assertability == Assertability::const_alpha &&
                    !t.geometry->intrinsic.alpha_constant()) {
                    asserted = false;
                    gate_note = "alpha is not constant: residual reported, not asserted";
                }
                const CheckOutcome outcome = detail_registry::run_sub_check(
                    spec.id, t, *w.qsm, asserted, gate_note);
                detail_registry::finish(r, outcome, asserted,
                                        gate_note.empty() ? nullptr : gate_note.c_str());
            }
        } catch (const Error& e) {
            r.status = "fail";
            r.note = e.what();
        } catch (const std::exception& e) {
            r.status = "fail";
            r.note = std::string("internal error: ") + e.what();
        }
        r.elapsed_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        results[ti] = std::move(r);
    });
    rep.checks = std::move(results);
    return rep;
}

} // namespace lcs
