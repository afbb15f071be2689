#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_helpers.hpp"

#include "lcs/structure.hpp"

using namespace lcs;
using th::dot;

namespace {

const EvalConfig kJets{};
const EvalConfig kFd{Engine::finite_difference};

} // namespace

TEST_CASE("Minkowski: vanishing Christoffel, curvature, Ricci") {
    const auto g = th::minkowski_metric(4);
    const Connection lc = levi_civita(g, kJets);
    const Vec p(4, 0.25);
    const auto G = lc(p);
    for (const auto& j : G) CHECK(std::fabs(j.value()) < 1e-12);
    const CurvatureValue R = curvature(lc, p);
    for (double v : R.comp) CHECK(std::fabs(v) < 1e-12);
    const Mat S = ricci(lc, p);
    for (double v : S) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("GRW exp warp Christoffel against the closed form") {
    // for -dt^2 + f^2 delta: Gamma^t_{xx} = f f', Gamma^x_{tx} = f'/f
    const auto man = th::grw_exp(5);
    const Connection lc = levi_civita(man.metric, kJets);
    const auto pts = sample_points(man.domain, 8, 3);
    for (const auto& p : pts) {
        const auto G = lc(p);
        const double t = p[0];
        for (int i = 1; i < 5; ++i) {
            CHECK(G[gamma_index(5, 0, i, i)].value() ==
                  doctest::Approx(std::exp(2 * t)).epsilon(1e-10));
            CHECK(G[gamma_index(5, i, 0, i)].value() == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(G[gamma_index(5, i, i, 0)].value() == doctest::Approx(1.0).epsilon(1e-10));
        }
        CHECK(G[gamma_index(5, 0, 0, 0)].value() == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("GRW cosh warp: Gamma^x_{tx} = tanh t") {
    const auto man = th::grw_cosh(4);
    const Connection lc = levi_civita(man.metric, kJets);
    const auto pts = sample_points(man.domain, 8, 5);
    for (const auto& p : pts)
        for (int i = 1; i < 4; ++i)
            CHECK(lc(p)[gamma_index(4, i, 0, i)].value() ==
                  doctest::Approx(std::tanh(p[0])).epsilon(1e-10));
}

TEST_CASE("Levi-Civita is torsion-free and metric compatible") {
    const auto man = th::grw_exp(5);
    const Connection lc = levi_civita(man.metric, kJets);
    const TensorField T = torsion_field(lc);
    const auto pts = sample_points(man.domain, 8, 11);
    const Vec dt = th::time_axis(5);
    for (const auto& p : pts) {
        for (const Jet& comp : T.at_constant(p)) CHECK(std::fabs(comp.value()) < 1e-10);
        const Mat gm = metric_values(man.metric, p);
        const FramePoint fr = orthonormal_frame(gm, 5, p, &dt);
        CHECK(metric_compat_residual(lc, man.metric, p, fr, kJets) < 1e-8);
    }
}

TEST_CASE("zero connection is not metric for a warped chart") {
    const auto man = th::grw_exp(5);
    const Connection zero = custom_connection(5, [](const Vec&) {
        return std::vector<Jet>(5 * 5 * 5, Jet(5));
    });
    const auto pts = sample_points(man.domain, 4, 2);
    const Vec dt = th::time_axis(5);
    double worst = 0.0;
    for (const auto& p : pts) {
        const Mat gm = metric_values(man.metric, p);
        const FramePoint fr = orthonormal_frame(gm, 5, p, &dt);
        worst = std::max(worst, metric_compat_residual(zero, man.metric, p, fr, kJets));
    }
    CHECK(worst > 0.1);
}

TEST_CASE("torsion antisymmetrizes custom coefficients") {
    const Connection conn = custom_connection(3, [](const Vec&) {
        std::vector<Jet> G(27, Jet(3));
        G[gamma_index(3, 1, 1, 2)] = Jet::constant(3, 1.0);
        return G;
    });
    const auto T = torsion_field(conn).at_constant(Vec(3, 0.1));
    CHECK(T[gamma_index(3, 1, 1, 2)].value() == doctest::Approx(1.0));
    CHECK(T[gamma_index(3, 1, 2, 1)].value() == doctest::Approx(-1.0));
    CHECK(T[gamma_index(3, 0, 1, 2)].value() == doctest::Approx(0.0));
}

TEST_CASE("curvature of the exp GRW acts on xi with coefficient f''/f = 1") {
    const auto man = th::grw_exp(5);
    const Connection lc = levi_civita(man.metric, kJets);
    const auto pts = sample_points(man.domain, 8, 13);
    Rng rng(99);
    const Vec xi = th::time_axis(5);
    for (const auto& p : pts) {
        const Mat gm = metric_values(man.metric, p);
        const CurvatureValue R = curvature(lc, p);
        const Vec eta = th::eta_covector(gm, 5, xi);
        for (int rep = 0; rep < 4; ++rep) {
            const Vec x = th::random_vec(rng, 5), y = th::random_vec(rng, 5);
            const Vec rxy = R.apply(x, y, xi);
            for (int k = 0; k < 5; ++k) {
                const double want = dot(eta, y) * x[k] - dot(eta, x) * y[k];
                CHECK(rxy[k] == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("unit sphere block has sectional curvature one") {
    // -dt^2 + dth^2 + sin(th)^2 dph^2: static metric, spherical part S^2(1)
    const int n = 3;
    TensorField f(Valence{0, 2}, n, [](std::span<const Jet> c) {
        std::vector<Jet> g(9, Jet::constant(c[0].dim(), 0.0));
        g[0] = Jet::constant(c[0].dim(), -1.0);
        g[4] = Jet::constant(c[0].dim(), 1.0);
        const Jet s = sin(c[1]);
        g[8] = s * s;
        return g;
    });
    const MetricField metric{f, n};
    const Connection lc = levi_civita(metric, kJets);
    Vec p{0.2, 1.1, 2.0};
    const Mat gm = metric_values(metric, p);
    const CurvatureValue R = curvature(lc, p);
    // K(th,ph) = g(R(e_th,e_ph)e_ph, e_th) over the orthonormal pair
    Vec eth{0.0, 1.0, 0.0};
    Vec eph{0.0, 0.0, 1.0 / std::sin(p[1])};
    const Vec r = R.apply(eth, eph, eph);
    CHECK(bilinear(gm, n, r, eth) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("curvature antisymmetry and first Bianchi identity") {
    const auto man = th::grw_cosh(4);
    const Connection lc = levi_civita(man.metric, kJets);
    const auto pts = sample_points(man.domain, 6, 17);
    Rng rng(31);
    for (const auto& p : pts) {
        const CurvatureValue R = curvature(lc, p);
        const Vec x = th::random_vec(rng, 4), y = th::random_vec(rng, 4),
                  z = th::random_vec(rng, 4);
        const Vec a = R.apply(x, y, z);
        const Vec b = R.apply(y, x, z);
        for (int k = 0; k < 4; ++k) CHECK(a[k] + b[k] == doctest::Approx(0.0).epsilon(1e-10));
        const Vec c2 = R.apply(y, z, x), c3 = R.apply(z, x, y);
        for (int k = 0; k < 4; ++k) CHECK(std::fabs(a[k] + c2[k] + c3[k]) < 1e-8);
    }
}

TEST_CASE("coordinate-formula curvature equals the commutator definition") {
    const auto man = th::grw_cosh(4);
    const Connection lc = levi_civita(man.metric, kJets);
    Rng rng(5);
    const TensorField X = th::linear_vector_field(4, rng);
    const TensorField Y = th::linear_vector_field(4, rng);
    const TensorField Z = th::linear_vector_field(4, rng);
    const TensorField nabla_y_z = th::covd_along(lc, Y, Z, kJets);
    const TensorField nabla_x_z = th::covd_along(lc, X, Z, kJets);

    const auto pts = sample_points(man.domain, 6, 23);
    for (const auto& p : pts) {
        const auto xj = eval_field(X, p, kJets);
        const auto yj = eval_field(Y, p, kJets);
        const auto zj = eval_field(Z, p, kJets);
        // [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k
        Vec bracket(4, 0.0);
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                bracket[k] += xj[i].value() * yj[k].d1(i) - yj[i].value() * xj[k].d1(i);

        const auto G = lc(p);
        auto covd_values = [&](const TensorField& w, const Vec& dir) {
            const auto wj = eval_field(w, p, kJets);
            Vec out(4, 0.0);
            for (int k = 0; k < 4; ++k)
                for (int i = 0; i < 4; ++i) {
                    double inner = wj[k].d1(i);
                    for (int m = 0; m < 4; ++m)
                        inner += G[gamma_index(4, k, i, m)].value() * wj[m].value();
                    out[k] += dir[i] * inner;
                }
            return out;
        };
        Vec xv(4), yv(4), zv(4);
        for (int i = 0; i < 4; ++i) {
            xv[i] = xj[i].value();
            yv[i] = yj[i].value();
            zv[i] = zj[i].value();
        }
        const Vec first = covd_values(nabla_y_z, xv);
        const Vec second = covd_values(nabla_x_z, yv);
        const Vec third = covd_values(Z, bracket);

        const CurvatureValue R = curvature(lc, p);
        const Vec direct = R.apply(xv, yv, zv);
        for (int k = 0; k < 4; ++k)
            CHECK(direct[k] ==
                  doctest::Approx(first[k] - second[k] - third[k]).epsilon(1e-8));
    }
}

TEST_CASE("Ricci of the exp GRW is 4 g (de Sitter slicing)") {
    const auto man = th::grw_exp(5);
    const Connection lc = levi_civita(man.metric, kJets);
    const auto pts = sample_points(man.domain, 8, 29);
    const Vec xi = th::time_axis(5);
    for (const auto& p : pts) {
        const Mat gm = metric_values(man.metric, p);
        const Mat S = ricci(lc, p);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                CHECK(mat_at(S, 5, i, j) ==
                      doctest::Approx(4.0 * mat_at(gm, 5, i, j)).epsilon(1e-9));
        // S(X,xi) = (n-1)(alpha^2 - rho) eta(X) = 4 eta(X)
        const Vec eta = th::eta_covector(gm, 5, xi);
        Rng rng(1);
        const Vec x = th::random_vec(rng, 5);
        double sxxi = 0.0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) sxxi += mat_at(S, 5, i, j) * x[i] * xi[j];
        CHECK(sxxi == doctest::Approx(4.0 * dot(eta, x)).epsilon(1e-9));
        // symmetric and equal to the frame-trace form
        const FramePoint fr = orthonormal_frame(gm, 5, p, &xi);
        const Mat Sf = ricci_frame_trace(curvature(lc, p), gm, fr);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                CHECK(mat_at(S, 5, i, j) == doctest::Approx(mat_at(S, 5, j, i)).epsilon(1e-9));
                CHECK(mat_at(S, 5, i, j) ==
                      doctest::Approx(mat_at(Sf, 5, i, j)).epsilon(1e-8));
            }
    }
}

TEST_CASE("covariant derivative: scalars reduce to partials, bad valence rejected") {
    const auto man = th::grw_exp(4);
    const Connection lc = levi_civita(man.metric, kJets);
    const auto warp = man.warp;
    TensorField scalar(Valence{0, 0}, 4, [warp](std::span<const Jet> c) {
        return std::vector<Jet>{warp.eval_jets(c) * sin(c[1])};
    });
    const TensorField ds = covariant_derivative(lc, scalar, kJets);
    const Vec p{0.4, 0.7, 0.2, 0.9};
    const auto dsj = ds.at_constant(p);
    CHECK(dsj[0].value() == doctest::Approx(std::exp(p[0]) * std::sin(p[1])));
    CHECK(dsj[1].value() == doctest::Approx(std::exp(p[0]) * std::cos(p[1])));
    CHECK(dsj[2].value() == doctest::Approx(0.0));

    TensorField bad(Valence{0, 3}, 4, [](std::span<const Jet> c) {
        return std::vector<Jet>(64, Jet(static_cast<int>(c.size())));
    });
    CHECK_THROWS_AS(covariant_derivative(lc, bad, kJets), Error);
}

TEST_CASE("covariant derivative of eta satisfies the concircular identity") {
    // (nabla_X eta)(Y) = alpha (g(X,Y) + eta(X) eta(Y)) with alpha = 1
    const auto man = th::grw_exp(5);
    const Connection lc = levi_civita(man.metric, kJets);
    const Vec xi = th::time_axis(5);
    const TensorField xif = constant_vector_field(5, xi);
    const MetricField g = man.metric;
    TensorField eta(Valence{0, 1}, 5, [g, xif](std::span<const Jet> c) {
        const auto gj = g.field(c);
        const auto xj = xif(c);
        std::vector<Jet> out(5, Jet(c[0].dim()));
        for (int i = 0; i < 5; ++i) {
            Jet s(c[0].dim());
            for (int j = 0; j < 5; ++j) s += gj[static_cast<std::size_t>(i) * 5 + j] * xj[j];
            out[i] = s;
        }
        return out;
    });
    const TensorField deta = covariant_derivative(lc, eta, kJets);
    const auto pts = sample_points(man.domain, 6, 37);
    Rng rng(71);
    for (const auto& p : pts) {
        const Mat gm = metric_values(man.metric, p);
        const Vec etav = th::eta_covector(gm, 5, xi);
        const auto dj = deta.at_constant(p);
        const Vec x = th::random_vec(rng, 5), y = th::random_vec(rng, 5);
        double lhs = 0.0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                lhs += dj[static_cast<std::size_t>(i) * 5 + j].value() * x[i] * y[j];
        const double rhs = bilinear(gm, 5, x, y) + dot(etav, x) * dot(etav, y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("Lie derivative of the metric") {
    const auto man = th::grw_exp(5);
    const Connection lc = levi_civita(man.metric, kJets);
    const Vec xi = th::time_axis(5);
    const TensorField xif = constant_vector_field(5, xi);
    const auto pts = sample_points(man.domain, 6, 41);

    SUBCASE("along xi: 2(g + eta x eta)") {
        for (const auto& p : pts) {
            const Mat gm = metric_values(man.metric, p);
            const Vec eta = th::eta_covector(gm, 5, xi);
            const Mat lie = lie_derivative_metric(lc, man.metric, xif, p, kJets);
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    CHECK(mat_at(lie, 5, i, j) ==
                          doctest::Approx(2.0 * (mat_at(gm, 5, i, j) + eta[i] * eta[j]))
                              .epsilon(1e-9));
        }
    }

    SUBCASE("zero field gives zero") {
        const TensorField zero = constant_vector_field(5, Vec(5, 0.0));
        for (const auto& p : pts) {
            const Mat lie = lie_derivative_metric(lc, man.metric, zero, p, kJets);
            for (double v : lie) CHECK(std::fabs(v) < 1e-12);
        }
    }

    SUBCASE("torsionful connection is rejected") {
        const Connection torsionful = custom_connection(5, [](const Vec&) {
            std::vector<Jet> G(125, Jet(5));
            G[gamma_index(5, 1, 1, 2)] = Jet::constant(5, 1.0);
            return G;
        });
        CHECK_THROWS_AS(lie_derivative_metric(torsionful, man.metric, xif, pts[0], kJets),
                        Error);
    }
}

TEST_CASE("azimuthal rotation of a sphere-block chart is Killing") {
    GrwSpec spec;
    spec.dim = 4;
    spec.warp_text = "exp(t)";
    spec.t_interval = {0.0, 1.0};
    spec.fiber = FiberKind::sphere_block;
    const auto man = build_grw(spec);
    const Connection lc = levi_civita(man.metric, kJets);
    // d_ph: no metric component depends on ph
    Vec dph(4, 0.0);
    dph[2] = 1.0;
    const TensorField killing = constant_vector_field(4, dph);
    const auto pts = sample_points(man.domain, 8, 43);
    for (const auto& p : pts) {
        const Mat lie = lie_derivative_metric(lc, man.metric, killing, p, kJets);
        for (double v : lie) CHECK(std::fabs(v) < 1e-9);
    }
}

TEST_CASE("FD engine reproduces jet-engine Christoffel and curvature") {
    const auto man = th::grw_cosh(4);
    const Connection lc_j = levi_civita(man.metric, kJets);
    const Connection lc_f = levi_civita(man.metric, kFd);
    const auto pts = sample_points(man.domain, 4, 47);
    for (const auto& p : pts) {
        const auto gj = lc_j(p);
        const auto gf = lc_f(p);
        for (std::size_t k = 0; k < gj.size(); ++k)
            CHECK(std::fabs(gf[k].value() - gj[k].value()) < 1e-6);
        const CurvatureValue rj = curvature(lc_j, p);
        const CurvatureValue rf = curvature(lc_f, p);
        for (std::size_t k = 0; k < rj.comp.size(); ++k)
            CHECK(std::fabs(rj.comp[k] - rf.comp[k]) < 1e-4);
    }
}
