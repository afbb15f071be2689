// Acceptance suite: every criterion below prints one [PASS]/[FAIL] line and
// the process exits nonzero if any criterion fails. The optional argv[1]
// names the bundled-scenarios directory (defaults to ../scenarios).

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "lcs/axioms.hpp"
#include "lcs/qsmc.hpp"
#include "lcs/registry.hpp"
#include "lcs/scenario.hpp"
#include "lcs/soliton.hpp"

using namespace lcs;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void outcome(int index, const char* title, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", index, title,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

struct Fixtures {
    Geometry exp5;        // exp warp, n = 5, flat fiber
    Geometry cosh4;       // cosh warp on [0.5, 1.5], n = 4
    Connection qsm_exp5;
    Connection qsm_cosh4;
    SubGeometry slice;    // t,x1,x2 slice of exp5 (m = 3)
    SubGeometry curve;    // xi integral curve in exp5 (m = 1)
    SubGeometry fiber;    // fixed-t slice of exp5 (m = 4)
    SubGeometry sphere;   // I x S^2(1) in an n = 4 chart
};

Geometry make_ambient(const char* warp, std::pair<double, double> interval, int n,
                      std::vector<std::pair<double, double>> fiber_intervals = {}) {
    GrwSpec spec;
    spec.dim = n;
    spec.warp_text = warp;
    spec.t_interval = interval;
    spec.fiber_intervals = std::move(fiber_intervals);
    const GrwManifold man = build_grw(spec);
    return make_geometry(man.domain, man.metric, man.xi, EvalConfig{}, {});
}

Immersion inline_immersion(const Geometry& amb, std::vector<std::string> params,
                           std::vector<std::pair<double, double>> box,
                           std::vector<std::string> map) {
    Immersion imm;
    imm.n = amb.dim();
    imm.m = static_cast<int>(params.size());
    imm.params.dim = imm.m;
    imm.params.names = params;
    imm.params.box = std::move(box);
    for (const auto& text : map) imm.map.push_back(expr::parse(text, params));
    return imm;
}

Fixtures make_fixtures() {
    Fixtures f{make_ambient("exp(t)", {0.0, 1.0}, 5),
               make_ambient("cosh(t)", {0.5, 1.5}, 4),
               Connection{},
               Connection{},
               SubGeometry{},
               SubGeometry{},
               SubGeometry{},
               SubGeometry{}};
    f.qsm_exp5 = qsm_connection(f.exp5);
    f.qsm_cosh4 = qsm_connection(f.cosh4);
    f.slice = make_subgeometry(
        "slice",
        inline_immersion(f.exp5, {"t", "x1", "x2"}, {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}},
                         {"t", "x1", "x2", "0.25", "0.75"}),
        f.exp5, {});
    f.curve = make_subgeometry(
        "curve", inline_immersion(f.exp5, {"s"}, {{0.05, 0.95}}, {"s", "0.3", "0.4", "0.5", "0.6"}),
        f.exp5, {});
    f.fiber = make_subgeometry(
        "fiber",
        inline_immersion(f.exp5, {"x1", "x2", "x3", "x4"},
                         {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}},
                         {"0.5", "x1", "x2", "x3", "x4"}),
        f.exp5, {});
    Geometry amb_sphere = make_ambient("exp(t)", {0.0, 1.0}, 4,
                                       {{-1.2, 1.2}, {-1.2, 1.2}, {-1.2, 1.2}});
    f.sphere = make_subgeometry(
        "sphere",
        inline_immersion(amb_sphere, {"t", "th", "ph"},
                         {{0.05, 0.95}, {0.6, 2.5}, {0.2, 6.0}},
                         {"t", "sin(th)*cos(ph)", "sin(th)*sin(ph)", "cos(th)"}),
        amb_sphere, {});
    return f;
}

// ---- criteria ---------------------------------------------------------------

void criterion_1(const Fixtures& f) {
    bool ok = true;
    std::string detail;
    for (const Vec& p : f.exp5.points) {
        ok &= near(f.exp5.alpha_at(p), 1.0, 1e-8);
        ok &= near(f.exp5.rho_at(p), 0.0, 1e-8);
        ok &= near(f.exp5.beta_at(p), 0.0, 1e-8);
    }
    Vec p1(4, 0.7);
    p1[0] = 1.0;
    const double a1 = f.cosh4.alpha_at(p1);
    const double c1 = f.cosh4.c_at(p1);
    ok &= near(a1, std::tanh(1.0), 1e-8);
    ok &= near(c1, 1.0, 1e-8);
    for (const Vec& p : f.cosh4.points) ok &= near(f.cosh4.c_at(p), 1.0, 1e-8);
    detail = "alpha(1)=" + fmt::brief(a1) + ", alpha^2-rho=" + fmt::brief(c1);
    outcome(1, "structure derivation: alpha, rho, beta on both warps", ok, detail);
}

void criterion_2(const Fixtures& f) {
    bool ok = true;
    double worst_jet = 0.0;
    for (const Geometry* G : {&f.exp5, &f.cosh4}) {
        for (const auto& [id, oc] : verify_axioms(*G)) {
            worst_jet = std::max(worst_jet, oc.stats.max);
            if (oc.stats.max >= 1e-8) {
                ok = false;
                g_notes.push_back(std::string("axiom ") + id + " residual " +
                                  fmt::brief(oc.stats.max));
            }
        }
    }
    // FD engine cross-check at reduced sample count (stencil cost)
    GeometryOptions opt;
    opt.samples = 8;
    double worst_gap = 0.0;
    for (const char* warp : {"exp(t)", "cosh(t)"}) {
        GrwSpec spec;
        spec.dim = 4;
        spec.warp_text = warp;
        spec.t_interval = warp[0] == 'e' ? std::pair{0.0, 1.0} : std::pair{0.5, 1.5};
        const GrwManifold man = build_grw(spec);
        const Geometry Gj = make_geometry(man.domain, man.metric, man.xi, EvalConfig{}, opt);
        const Geometry Gf = make_geometry(man.domain, man.metric, man.xi,
                                          EvalConfig{Engine::finite_difference}, opt);
        const auto rj = verify_axioms(Gj);
        const auto rf = verify_axioms(Gf);
        for (std::size_t i = 0; i < rj.size(); ++i) {
            const double gap = std::fabs(rj[i].second.stats.max - rf[i].second.stats.max);
            worst_gap = std::max(worst_gap, gap);
            ok &= rf[i].second.stats.max < 1e-4 && gap < 1e-4;
        }
    }
    outcome(2, "axiom suite (2.1)-(2.16) under jets, FD engine within 1e-4", ok,
            "worst jet residual " + fmt::brief(worst_jet) + ", worst FD gap " +
                fmt::brief(worst_gap));
}

void criterion_3(const Fixtures& f) {
    bool ok = true;
    double worst = 0.0;
    for (const Vec& p : f.exp5.points) {
        const Mat S = ricci(f.exp5.lc, p);
        const Mat g = f.exp5.g_at(p);
        for (std::size_t k = 0; k < S.size(); ++k)
            worst = std::max(worst, std::fabs(S[k] - 4.0 * g[k]));
    }
    ok &= worst < 1e-8;
    const CheckOutcome c11 = check_eq_2_11(f.exp5);
    const CheckOutcome c12 = check_eq_2_12(f.exp5);
    const CheckOutcome c13 = check_eq_2_13(f.exp5);
    ok &= c11.stats.max < 1e-8 && c12.stats.max < 1e-8 && c13.stats.max < 1e-8;
    ok &= near(c11.coefficients[0].second, 1.0, 1e-8);
    ok &= near(c12.coefficients[0].second, 1.0, 1e-8);
    outcome(3, "ambient curvature: S = 4g and (2.11)-(2.13) with alpha^2-rho = 1", ok,
            "max |S - 4g| = " + fmt::brief(worst));
}

void criterion_4(const Fixtures& f) {
    bool ok = f.slice.cls == SubClass::invariant;
    double hmax = 0.0, Hmax = 0.0;
    for (std::size_t pi = 0; pi < f.slice.pts.size(); ++pi) {
        const auto& sp = f.slice.pts[pi];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                hmax = std::max(hmax, frame_norm(sp.gA, 5, sp.ambient_frame, sp.h[a][b]));
        Hmax = std::max(Hmax, frame_norm(sp.gA, 5, sp.ambient_frame,
                                         mean_curvature(f.slice, pi)));
    }
    ok &= hmax < 1e-8 && Hmax < 1e-8;
    ok &= check_eq_3_3(f.slice).stats.max < 1e-8;
    const CheckOutcome ric = check_eq_3_6(f.slice);
    ok &= ric.stats.max < 1e-8 && near(ric.coefficients[0].second, 2.0, 1e-8);
    const CheckOutcome lam = check_lambda_relation(f.slice);
    ok &= lam.stats.max < 1e-8;
    ok &= near(lam.coefficients[0].second, -2.0, 1e-10);
    ok &= lam.note.find("shrinking") != std::string::npos;
    const CheckOutcome wording = check_thm_3_2_wording(f.slice);
    ok &= wording.note.find("opposite") != std::string::npos; // diagnostic, not a failure
    outcome(4, "invariant chain on I x R^2: h = 0, (3.3)/(3.6), lambda = -2 shrinking", ok,
            "h_max " + fmt::brief(hmax) + ", lambda " +
                fmt::brief(lam.coefficients[0].second));
}

void criterion_5() {
    Rng rng(314159);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 2 + static_cast<int>(rng.next() % 5);
        const double alpha = rng.uniform(-2.0, 2.0);
        const double lambda = rng.uniform(-3.0, 3.0);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const double g = (a == b) ? (a == 0 ? -1.0 : 1.0) : 0.0;
                const double q = (a == 0 && b == 0) ? 1.0 : 0.0;
                const double lie = 2.0 * alpha * (g + q);
                const double s = -(alpha + lambda) * g - alpha * q;
                worst = std::max(worst, std::fabs(lie + 2.0 * s + 2.0 * lambda * g));
            }
    }
    outcome(5, "synthetic soliton algebra closes for 100 random (alpha, lambda, m)",
            worst < 1e-12, "worst residual " + fmt::brief(worst));
}

void criterion_6(const Fixtures& f) {
    const Geometry& M = f.slice.intrinsic;
    bool ok = true;
    Rng rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        const double planted = rng.uniform(-3.0, 3.0);
        const double got = best_lambda(M, synthetic_eta_einstein(M, planted), M.st().xi);
        ok &= near(got, planted, 1e-8);
    }
    const double actual = best_lambda(M, intrinsic_ricci(M), M.st().xi);
    ok &= near(actual, -8.0 / 3.0, 1e-6);
    outcome(6, "best_lambda: planted recovery and -8/3 on the geometric slice", ok,
            "geometric lambda " + fmt::full(actual));
}

void criterion_7(const Fixtures& f) {
    bool ok = true;
    ok &= f.curve.cls == SubClass::anti_invariant;
    ok &= f.slice.cls == SubClass::invariant;
    ok &= f.fiber.cls == SubClass::neither;
    ok &= check_anti_killing(f.curve).stats.max < 1e-8;
    ok &= check_anti_ricci_xi(f.curve).stats.max < 1e-8;
    ok &= check_anti_nabla_xi(f.curve).stats.max < 1e-8;
    ok &= check_anti_h_xi(f.curve).stats.max < 1e-8;
    const CheckOutcome steady = check_anti_steady(f.curve);
    ok &= steady.stats.max < 1e-8 && steady.note == "steady";
    outcome(7, "anti-invariant chain and the three classifications", ok,
            std::string("curve=") + subclass_name(f.curve.cls) + ", slice=" +
                subclass_name(f.slice.cls) + ", fiber=" + subclass_name(f.fiber.cls));
}

void criterion_8(const Fixtures& f) {
    bool ok = true;
    for (const auto* pair : {&f.exp5, &f.cosh4}) {
        const Connection& qsm = pair == &f.exp5 ? f.qsm_exp5 : f.qsm_cosh4;
        ok &= check_eq_1_2_torsion(*pair, qsm).stats.max < 1e-8;
        ok &= check_qsmc_metric_compat(*pair, qsm).stats.max < 1e-8;
        ok &= check_eq_2_30_contraction(*pair).stats.max < 1e-10;
    }
    const CheckOutcome curv = check_eq_2_29(f.exp5, f.qsm_exp5);
    ok &= curv.stats.max < 1e-6;
    const RicciTransformOutcome ric = check_eq_2_30(f.exp5, f.qsm_exp5);
    ok &= ric.outcome.stats.max < 1e-6;
    outcome(8, "quarter-symmetric ambient: torsion, metric, (2.29)/(2.30), contraction",
            ok, "(2.29) residual " + fmt::brief(curv.stats.max));
}

void criterion_9(const Fixtures& f) {
    bool ok = true;
    ok &= check_eq_3_10(f.slice, f.qsm_exp5).stats.max < 1e-8;
    ok &= check_eq_3_9_hbar(f.slice, f.qsm_exp5).stats.max < 1e-8;
    const CheckOutcome nx = check_qsmc_nabla_xi_sub(f.slice, f.qsm_exp5);
    ok &= nx.stats.max < 1e-8; // (alpha - 1) phi X = 0 here
    ok &= check_eq_3_11_sub(f.slice, f.qsm_exp5).stats.max < 1e-8;
    const Connection induced = induced_connection(f.slice.imm, f.exp5.metric, f.qsm_exp5);
    double sbar = 0.0;
    for (const Vec& u : f.slice.intrinsic.points)
        sbar = std::max(sbar, max_abs(ricci(induced, u)));
    ok &= sbar < 1e-6;
    const InducedRicciFitReport fit = check_eq_3_12_fit(f.slice, f.qsm_exp5);
    ok &= near(fit.fit.fit_g, fit.contraction_g, 1e-6);
    const bool printed_differs = std::fabs(fit.fit.fit_g - fit.printed_g) > 0.5;
    ok &= printed_differs; // the comparison is reported, not asserted
    outcome(9, "quarter-symmetric submanifold: (3.10), h = h~, numeric S~ = 0, fit report",
            ok,
            "S~ max " + fmt::brief(sbar) + "; fit g " + fmt::brief(fit.fit.fit_g) +
                " vs printed " + fmt::brief(fit.printed_g));
}

void criterion_10(const Fixtures& f, const std::string& scenario_dir) {
    bool ok = true;
    // sphere-fiber minimality probe
    double Hmin = 1e9;
    for (std::size_t pi = 0; pi < f.sphere.pts.size(); ++pi)
        Hmin = std::min(Hmin, frame_norm(f.sphere.pts[pi].gA, 4,
                                         f.sphere.pts[pi].ambient_frame,
                                         mean_curvature(f.sphere, pi)));
    ok &= Hmin > 0.1;
    // nonconstant-alpha curvature transform: reported as diagnostic
    ok &= !f.cosh4.alpha_constant();
    const CheckOutcome curv = check_eq_2_29(f.cosh4, f.qsm_cosh4);
    g_notes.push_back("nonconstant-alpha (2.29) residual " + fmt::brief(curv.stats.max));
    // errata scenarios run with zero failures (diagnostics never fail a run)
    for (const char* name : {"sphere_fiber_errata", "cosh_structure", "qsmc_invariant"}) {
        const ScenarioDoc doc =
            load_scenario(scenario_dir + "/" + name + ".json", registry_ids());
        const Report rep = run_checks(doc, 1);
        if (rep.any_failure()) {
            ok = false;
            g_notes.push_back(std::string(name) + " reported a failure");
        }
        bool has_diag = rep.count("diagnostic") > 0;
        ok &= has_diag;
    }
    outcome(10, "errata probes: |H| > 0.1 on the sphere fiber, diagnostics exit clean",
            ok, "min |H| = " + fmt::brief(Hmin));
}

void criterion_11(const Fixtures& f, const std::string& scenario_dir) {
    bool ok = true;
    // parser round trip on 100 random trees lives in the unit suite as well;
    // repeat the core property here so the acceptance run is self-contained
    {
        Rng rng(4242);
        const std::vector<std::string> vars{"t", "x1"};
        std::function<expr::NodePtr(int)> gen = [&](int depth) -> expr::NodePtr {
            auto node = std::make_shared<expr::Node>();
            const double pick = rng.uniform();
            if (depth <= 0 || pick < 0.3) {
                if (rng.uniform() < 0.5) {
                    node->kind = expr::NodeKind::number;
                    node->number = std::round(rng.uniform(0.0, 8.0) * 4.0) / 4.0;
                } else {
                    node->kind = expr::NodeKind::variable;
                    node->var_index = static_cast<int>(rng.next() % vars.size());
                    node->name = vars[static_cast<std::size_t>(node->var_index)];
                }
                return node;
            }
            if (pick < 0.45) {
                node->kind = expr::NodeKind::call;
                const char* fns[] = {"exp", "sin", "cos", "tanh"};
                node->name = fns[rng.next() % 4];
                node->a = gen(depth - 1);
                return node;
            }
            const expr::NodeKind ops[] = {expr::NodeKind::add, expr::NodeKind::sub,
                                          expr::NodeKind::mul, expr::NodeKind::div};
            node->kind = ops[rng.next() % 4];
            node->a = gen(depth - 1);
            node->b = gen(depth - 1);
            return node;
        };
        for (int rep = 0; rep < 100; ++rep) {
            expr::Ast ast(gen(4), vars);
            const expr::Ast back = expr::parse(ast.print(), vars);
            if (!(back == ast)) {
                ok = false;
                g_notes.push_back("round-trip failed for: " + ast.print());
                break;
            }
        }
    }
    // jet vs FD agreement on the metric field of the cosh chart
    {
        const EvalConfig fd{Engine::finite_difference};
        double worst = 0.0;
        for (std::size_t pi = 0; pi < 4; ++pi) {
            const Vec& p = f.cosh4.points[pi];
            const auto jets = eval_field(f.cosh4.metric.field, p, EvalConfig{});
            const auto fds = eval_field(f.cosh4.metric.field, p, fd);
            for (std::size_t k = 0; k < jets.size(); ++k) {
                for (int i = 0; i < 4; ++i) {
                    const double rel =
                        std::fabs(jets[k].d1(i) - fds[k].d1(i)) /
                        std::max({1.0, std::fabs(jets[k].d1(i))});
                    worst = std::max(worst, rel);
                    for (int j = 0; j < 4; ++j) {
                        const double rel2 =
                            std::fabs(jets[k].d2(i, j) - fds[k].d2(i, j)) /
                            std::max({1.0, std::fabs(jets[k].d2(i, j))});
                        worst = std::max(worst, rel2);
                    }
                }
            }
        }
        ok &= worst < 1e-5;
        g_notes.push_back("jet-vs-FD worst relative deviation " + fmt::brief(worst));
    }
    // byte-identical reports: two runs, then serial vs four threads
    {
        const ScenarioDoc doc =
            load_scenario(scenario_dir + "/desitter_invariant.json", registry_ids());
        const std::string a = emit_json(run_checks(doc, 1));
        const std::string b = emit_json(run_checks(doc, 1));
        const std::string c = emit_json(run_checks(doc, 4));
        ok &= a == b && a == c;
        const std::string ta = emit_text(run_checks(doc, 1));
        const std::string tb = emit_text(run_checks(doc, 2));
        ok &= ta == tb;
    }
    outcome(11, "infrastructure: parser round-trip, jet-vs-FD, byte-identical reports",
            ok);
}

} // namespace

int main(int argc, char** argv) {
    const std::string scenario_dir = argc > 1 ? argv[1] : "../scenarios";
    try {
        const Fixtures f = make_fixtures();
        criterion_1(f);
        criterion_2(f);
        criterion_3(f);
        criterion_4(f);
        criterion_5();
        criterion_6(f);
        criterion_7(f);
        criterion_8(f);
        criterion_9(f);
        criterion_10(f, scenario_dir);
        criterion_11(f, scenario_dir);
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance suite aborted: %s\n", e.what());
        return 1;
    }
    for (const auto& note : g_notes) std::printf("       note: %s\n", note.c_str());
    std::printf("%d of 11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
