#pragma once

#include <string>
#include <vector>

#include "lcs/expr.hpp"
#include "lcs/geometry.hpp"

namespace lcs {

// Parametrized immersion u in U subset R^m -> x(u) in the ambient chart,
// component functions given as expressions over the parameter names.
struct Immersion {
    ChartDomain params;          // m-dimensional parameter box
    std::vector<expr::Ast> map;  // n ambient components
    int m = 0;
    int n = 0;
};

enum class SubClass { invariant, anti_invariant, neither };

inline const char* subclass_name(SubClass c) {
    switch (c) {
        case SubClass::invariant: return "invariant";
        case SubClass::anti_invariant: return "anti_invariant";
        case SubClass::neither: return "neither";
    }
    return "?";
}

// chain rule: re-express a jet taken in ambient coordinates (value, gradient,
// Hessian w.r.t. x) as a jet in parameters, given the immersion jets
inline Jet pullback_jet(const Jet& chart, const std::vector<Jet>& xjets, int m) {
    const int n = static_cast<int>(xjets.size());
    Jet r(m, chart.value());
    for (int a = 0; a < m; ++a) {
        double s = 0.0;
        for (int A = 0; A < n; ++A) s += chart.d1(A) * xjets[A].d1(a);
        r.d1(a) = s;
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double s = 0.0;
            for (int A = 0; A < n; ++A) {
                for (int B = 0; B < n; ++B)
                    s += chart.d2(A, B) * xjets[A].d1(a) * xjets[B].d1(b);
                s += chart.d1(A) * xjets[A].d2(a, b);
            }
            r.d2(a, b) = s;
        }
    return r;
}

// immersion component jets (order 3 in the parameters)
inline std::vector<Jet> immersion_jets(const Immersion& imm, std::span<const Jet> c) {
    std::vector<Jet> x;
    x.reserve(imm.map.size());
    for (const auto& ast : imm.map) x.push_back(ast.eval_jets(c));
    return x;
}

inline std::vector<Jet> immersion_jets_at(const Immersion& imm, const Vec& u) {
    std::vector<Jet> c;
    c.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        c.push_back(Jet::variable(static_cast<int>(u.size()), static_cast<int>(i), u[i]));
    return immersion_jets(imm, c);
}

// Pullback closures are chart-native: the pushforward is part of their
// VALUE, so the parameter coordinates are re-seeded locally no matter what
// jets the caller passes in.
inline std::vector<Jet> reseed(std::span<const Jet> c) {
    std::vector<Jet> seeded;
    seeded.reserve(c.size());
    const int m = static_cast<int>(c.size());
    for (int i = 0; i < m; ++i) seeded.push_back(Jet::variable(m, i, c[i].value()));
    return seeded;
}

// pullback metric g_M(a,b) = g~(dx(d_a), dx(d_b)) as a field over parameters
inline MetricField induced_metric(const Immersion& imm, const MetricField& ambient) {
    const int m = imm.m, n = imm.n;
    TensorField amb = ambient.field;
    TensorField f(Valence{0, 2}, m, [imm, amb, m, n](std::span<const Jet> c) {
        const auto seeded = reseed(c);
        const auto x = immersion_jets(imm, seeded);
        const auto gA = amb(x);
        std::vector<Jet> out(static_cast<std::size_t>(m) * m, Jet(m));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Jet s(m);
                for (int A = 0; A < n; ++A)
                    for (int B = 0; B < n; ++B)
                        s += gA[static_cast<std::size_t>(A) * n + B] * x[A].partial(a) *
                             x[B].partial(b);
                out[static_cast<std::size_t>(a) * m + b] = s;
            }
        return out;
    });
    return MetricField{std::move(f), m};
}

// per-sample cache: pushforward, metrics, frames, projections, Gauss data
struct SubPointData {
    Vec u;
    Vec x;
    std::vector<Jet> xjets;          // order-3 jets in u
    std::vector<Vec> tangent;        // tangent[a][A] = (dx/du_a)^A
    Mat gM, gM_inv, gA;              // induced and ambient metric values
    FramePoint ambient_frame;        // at x, preferring ambient xi
    std::vector<Vec> normals;        // orthonormal normal basis, ambient comps
    std::vector<double> normal_signs;
    std::vector<std::vector<Vec>> W; // W[a][b]: ambient nabla~_{d_a} d_b along M
    std::vector<std::vector<Vec>> h; // normal part of W
    std::vector<std::vector<Vec>> gamma_tan; // tangential coefficients of W
};

// tangential coefficients c^a with v_tan = sum_a c^a dx(d_a)
inline Vec tangential_coeffs(const SubPointData& sp, const Vec& v, int m, int n) {
    Vec rhs(m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int A = 0; A < n; ++A)
            for (int B = 0; B < n; ++B)
                rhs[a] += mat_at(sp.gA, n, A, B) * v[A] * sp.tangent[a][B];
    Vec c(m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) c[a] += mat_at(sp.gM_inv, m, a, b) * rhs[b];
    return c;
}

inline Vec tangential_part(const SubPointData& sp, const Vec& v, int m, int n) {
    const Vec c = tangential_coeffs(sp, v, m, n);
    Vec out(n, 0.0);
    for (int a = 0; a < m; ++a)
        for (int A = 0; A < n; ++A) out[A] += c[a] * sp.tangent[a][A];
    return out;
}

inline Vec normal_part(const SubPointData& sp, const Vec& v, int m, int n) {
    Vec out = v;
    const Vec tan = tangential_part(sp, v, m, n);
    for (int A = 0; A < n; ++A) out[A] -= tan[A];
    return out;
}

// push a tangent vector given in parameter components into the ambient chart
inline Vec push_forward(const SubPointData& sp, const Vec& xparam, int m, int n) {
    Vec out(n, 0.0);
    for (int a = 0; a < m; ++a)
        for (int A = 0; A < n; ++A) out[A] += xparam[a] * sp.tangent[a][A];
    return out;
}

// ambient covariant derivative of the coordinate tangent fields along the
// immersion: W^A_{ab} = d^2 x^A / du_a du_b + Gamma^A_{BC}(x) J^B_a J^C_b
inline std::vector<std::vector<Vec>> gauss_data(const SubPointData& sp,
                                                const Connection& ambient_conn, int m,
                                                int n) {
    const auto G = ambient_conn(sp.x);
    std::vector<std::vector<Vec>> W(m, std::vector<Vec>(m, Vec(n, 0.0)));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int A = 0; A < n; ++A) {
                double s = sp.xjets[A].d2(a, b);
                for (int B = 0; B < n; ++B)
                    for (int C = 0; C < n; ++C)
                        s += G[gamma_index(n, A, B, C)].value() * sp.tangent[a][B] *
                             sp.tangent[b][C];
                W[a][b][A] = s;
            }
    return W;
}

// induced connection of any ambient connection, as a field over parameters:
// Gamma_ind^c_{ab} = g_M^{cd} g~(W_ab, dx(d_d)). Carries value and gradient,
// enough for the induced curvature.
inline Connection induced_connection(const Immersion& imm, const MetricField& ambient_g,
                                     const Connection& ambient_conn) {
    const int m = imm.m, n = imm.n;
    TensorField amb = ambient_g.field;
    Connection out;
    out.dim = m;
    out.kind = ConnKind::induced;
    out.coeffs = [imm, amb, ambient_conn, m, n](const Vec& u) {
        const auto x = immersion_jets_at(imm, u);
        Vec xval(n);
        for (int A = 0; A < n; ++A) xval[A] = x[A].value();
        const auto gA = amb(x); // ambient metric as jets in u
        const auto Gamb = ambient_conn(xval);

        // pushforward columns as u-jets
        std::vector<std::vector<Jet>> J(m, std::vector<Jet>(n, Jet(m)));
        for (int a = 0; a < m; ++a)
            for (int A = 0; A < n; ++A) J[a][A] = x[A].partial(a);

        // induced metric jets and inverse
        std::vector<Jet> gM(static_cast<std::size_t>(m) * m, Jet(m));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Jet s(m);
                for (int A = 0; A < n; ++A)
                    for (int B = 0; B < n; ++B)
                        s += gA[static_cast<std::size_t>(A) * n + B] * J[a][A] * J[b][B];
                gM[static_cast<std::size_t>(a) * m + b] = s;
            }
        const auto gM_inv = mat_inverse(gM, m);

        // W_ab as u-jets, ambient Christoffel pulled back through the map
        std::vector<std::vector<std::vector<Jet>>> W(
            m, std::vector<std::vector<Jet>>(m, std::vector<Jet>(n, Jet(m))));
        std::vector<Jet> Gpull(Gamb.size(), Jet(m));
        for (std::size_t k = 0; k < Gamb.size(); ++k) Gpull[k] = pullback_jet(Gamb[k], x, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int A = 0; A < n; ++A) {
                    Jet s = x[A].partial(a).partial(b);
                    for (int B = 0; B < n; ++B)
                        for (int C = 0; C < n; ++C)
                            s += Gpull[gamma_index(n, A, B, C)] * J[a][B] * J[b][C];
                    W[a][b][A] = s;
                }

        std::vector<Jet> out_coeffs(static_cast<std::size_t>(m) * m * m, Jet(m));
        for (int c2 = 0; c2 < m; ++c2)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    Jet s(m);
                    for (int d = 0; d < m; ++d) {
                        Jet inner(m);
                        for (int A = 0; A < n; ++A)
                            for (int B = 0; B < n; ++B)
                                inner += gA[static_cast<std::size_t>(A) * n + B] *
                                         W[a][b][A] * J[d][B];
                        s += gM_inv[static_cast<std::size_t>(c2) * m + d] * inner;
                    }
                    out_coeffs[gamma_index(m, c2, a, b)] = s;
                }
        return out_coeffs;
    };
    return out;
}

// xi expressed in parameter components (valid where xi is tangent)
inline TensorField xi_param_field(const Immersion& imm, const MetricField& ambient_g,
                                  const TensorField& ambient_xi) {
    const int m = imm.m, n = imm.n;
    TensorField amb = ambient_g.field;
    return TensorField(Valence{1, 0}, m, [imm, amb, ambient_xi, m, n](std::span<const Jet> c) {
        const auto seeded = reseed(c);
        const auto x = immersion_jets(imm, seeded);
        const auto gA = amb(x);
        const auto xiA = ambient_xi(x);
        std::vector<std::vector<Jet>> J(m, std::vector<Jet>(n, Jet(m)));
        for (int a = 0; a < m; ++a)
            for (int A = 0; A < n; ++A) J[a][A] = x[A].partial(a);
        std::vector<Jet> gM(static_cast<std::size_t>(m) * m, Jet(m));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Jet s(m);
                for (int A = 0; A < n; ++A)
                    for (int B = 0; B < n; ++B)
                        s += gA[static_cast<std::size_t>(A) * n + B] * J[a][A] * J[b][B];
                gM[static_cast<std::size_t>(a) * m + b] = s;
            }
        const auto gM_inv = mat_inverse(gM, m);
        std::vector<Jet> out(m, Jet(m));
        for (int a = 0; a < m; ++a) {
            Jet s(m);
            for (int b = 0; b < m; ++b) {
                Jet rhs(m);
                for (int A = 0; A < n; ++A)
                    for (int B = 0; B < n; ++B)
                        rhs += gA[static_cast<std::size_t>(A) * n + B] * xiA[A] * J[b][B];
                s += gM_inv[static_cast<std::size_t>(a) * m + b] * rhs;
            }
            out[a] = s;
        }
        return out;
    });
}

struct SubGeometry {
    std::string name;
    Immersion imm;
    Geometry ambient;   // ambient chart (shared closures, cheap samples)
    Geometry intrinsic; // induced chart; carries structure when invariant
    TensorField xi_param;
    SubClass cls = SubClass::neither;
    bool xi_tangent = false;
    double xi_tangency_residual = 0.0; // frame norm of the normal part of xi
    double phi_normal_max = 0.0;       // worst normal part of phi X, X tangent
    double phi_tangential_max = 0.0;   // worst tangential part of phi X
    std::vector<SubPointData> pts;     // aligned with intrinsic.points

    int m() const { return imm.m; }
    int n() const { return imm.n; }
};

inline SubGeometry make_subgeometry(std::string name, Immersion imm,
                                    const Geometry& ambient, GeometryOptions opt) {
    SubGeometry S;
    S.name = std::move(name);
    S.imm = std::move(imm);
    S.ambient = ambient;
    const int m = S.imm.m, n = S.imm.n;
    if (!(m < n)) fail(errc::dimension, "immersion must satisfy m < n");

    const MetricField gM_field = induced_metric(S.imm, ambient.metric);

    // sample and validate the pointwise machinery before deriving anything
    const auto upoints = sample_points(S.imm.params, opt.samples, opt.seed);
    const Vec* xi_probe = nullptr;
    Vec xi_first;
    for (const Vec& u : upoints) {
        SubPointData sp;
        sp.u = u;
        sp.xjets = immersion_jets_at(S.imm, u);
        sp.x.resize(n);
        for (int A = 0; A < n; ++A) sp.x[A] = sp.xjets[A].value();
        if (!ambient.domain.contains(sp.x))
            fail(errc::domain, "immersion leaves the ambient chart at a sample point");
        sp.tangent.assign(m, Vec(n, 0.0));
        for (int a = 0; a < m; ++a)
            for (int A = 0; A < n; ++A) sp.tangent[a][A] = sp.xjets[A].d1(a);
        sp.gA = metric_values(ambient.metric, sp.x);
        sp.gM.assign(static_cast<std::size_t>(m) * m, 0.0);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                sp.gM[static_cast<std::size_t>(a) * m + b] =
                    bilinear(sp.gA, n, sp.tangent[a], sp.tangent[b]);
        // degenerate pullback (null or rank-deficient) is a hard error
        {
            const EigenSym es = eigen_symmetric(sp.gM, m);
            double scale = 0.0;
            for (double v : es.values) scale = std::max(scale, std::fabs(v));
            bool degenerate = scale == 0.0;
            for (double v : es.values) degenerate |= std::fabs(v) < 1e-10 * scale;
            if (degenerate)
                fail(errc::degenerate_metric, "induced metric is degenerate at a sample");
        }
        sp.gM_inv = mat_inverse(sp.gM, m);

        // ambient frame, preferring xi when it is timelike there
        Vec xiv = eval_values(ambient.st().xi, sp.x);
        sp.ambient_frame = orthonormal_frame(sp.gA, n, sp.x, &xiv);
        if (!xi_probe) {
            xi_first = xiv;
            xi_probe = &xi_first;
        }

        // normal frame by projecting coordinate directions
        for (int A = 0; A < n && static_cast<int>(sp.normals.size()) < n - m; ++A) {
            Vec cand(n, 0.0);
            cand[A] = 1.0;
            Vec v = normal_part(sp, cand, m, n);
            for (std::size_t k = 0; k < sp.normals.size(); ++k) {
                const double c =
                    sp.normal_signs[k] * bilinear(sp.gA, n, v, sp.normals[k]);
                for (int B = 0; B < n; ++B) v[B] -= c * sp.normals[k][B];
            }
            const double q = bilinear(sp.gA, n, v, v);
            double norm2 = 0.0;
            for (double xv : v) norm2 += xv * xv;
            if (norm2 < 1e-16 || std::fabs(q) < 1e-10 * std::max(1.0, norm2)) continue;
            const double inv = 1.0 / std::sqrt(std::fabs(q));
            for (double& xv : v) xv *= inv;
            sp.normal_signs.push_back(q > 0 ? 1.0 : -1.0);
            sp.normals.push_back(std::move(v));
        }
        if (static_cast<int>(sp.normals.size()) != n - m)
            fail(errc::degenerate_metric, "could not build a normal frame");

        sp.W = gauss_data(sp, ambient.lc, m, n);
        sp.h.assign(m, std::vector<Vec>(m, Vec(n, 0.0)));
        sp.gamma_tan.assign(m, std::vector<Vec>(m, Vec(m, 0.0)));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                sp.gamma_tan[a][b] = tangential_coeffs(sp, sp.W[a][b], m, n);
                sp.h[a][b] = normal_part(sp, sp.W[a][b], m, n);
            }
        S.pts.push_back(std::move(sp));
    }

    // classification diagnostics against the ambient structure
    const double ctol = 1e-8;
    S.xi_tangent = true;
    for (const auto& sp : S.pts) {
        const Vec xiv = eval_values(ambient.st().xi, sp.x);
        const Vec xin = normal_part(sp, xiv, m, n);
        const double r = frame_norm(sp.gA, n, sp.ambient_frame, xin);
        S.xi_tangency_residual = std::max(S.xi_tangency_residual, r);
        if (r > ctol) S.xi_tangent = false;
        const Mat phi = eval_values(ambient.st().phi, sp.x);
        for (int a = 0; a < m; ++a) {
            const Vec px = mat_vec(phi, n, sp.tangent[a]);
            S.phi_normal_max =
                std::max(S.phi_normal_max,
                         frame_norm(sp.gA, n, sp.ambient_frame, normal_part(sp, px, m, n)));
            S.phi_tangential_max = std::max(
                S.phi_tangential_max,
                frame_norm(sp.gA, n, sp.ambient_frame, tangential_part(sp, px, m, n)));
        }
    }
    if (S.phi_tangential_max < ctol)
        S.cls = SubClass::anti_invariant;
    else if (S.xi_tangent && S.phi_normal_max < ctol)
        S.cls = SubClass::invariant;
    else
        S.cls = SubClass::neither;

    // intrinsic chart: structure derivable exactly in the invariant case
    S.xi_param = S.xi_tangent ? xi_param_field(S.imm, ambient.metric, ambient.st().xi)
                              : TensorField{};
    GeometryOptions iopt = opt;
    iopt.derive = S.cls == SubClass::invariant;
    S.intrinsic = make_geometry(S.imm.params, gM_field, S.xi_param, ambient.cfg, iopt);
    return S;
}

// second fundamental form on probe tangent vectors (parameter components)
inline Vec h_of(const SubPointData& sp, const Vec& xp, const Vec& yp, int m, int n) {
    Vec out(n, 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int A = 0; A < n; ++A) out[A] += xp[a] * yp[b] * sp.h[a][b][A];
    return out;
}

// mean curvature vector H = (1/m) sum_a eps_a h(e_a, e_a) in ambient comps,
// over the induced orthonormal frame
inline Vec mean_curvature(const SubGeometry& S, std::size_t pi) {
    const SubPointData& sp = S.pts[pi];
    const FramePoint& fr = S.intrinsic.frames[pi];
    const int m = S.m(), n = S.n();
    Vec H(n, 0.0);
    for (int a = 0; a < m; ++a) {
        const Vec ha = h_of(sp, fr.basis[a], fr.basis[a], m, n);
        for (int A = 0; A < n; ++A) H[A] += fr.signs[a] * ha[A] / static_cast<double>(m);
    }
    return H;
}

// normal field along M: the normal projection of a fixed ambient seed vector
inline TensorField projected_normal_field(const Immersion& imm, const MetricField& ambient_g,
                                          Vec seed) {
    const int m = imm.m, n = imm.n;
    TensorField amb = ambient_g.field;
    return TensorField(Valence{1, 0}, m, [imm, amb, seed, m, n](std::span<const Jet> c) {
        const auto seeded2 = reseed(c);
        const auto x = immersion_jets(imm, seeded2);
        const auto gA = amb(x);
        const int jd = m;
        std::vector<std::vector<Jet>> J(m, std::vector<Jet>(n, Jet(jd)));
        for (int a = 0; a < m; ++a)
            for (int A = 0; A < n; ++A) J[a][A] = x[A].partial(a);
        std::vector<Jet> gM(static_cast<std::size_t>(m) * m, Jet(jd));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Jet s(jd);
                for (int A = 0; A < n; ++A)
                    for (int B = 0; B < n; ++B)
                        s += gA[static_cast<std::size_t>(A) * n + B] * J[a][A] * J[b][B];
                gM[static_cast<std::size_t>(a) * m + b] = s;
            }
        const auto gM_inv = mat_inverse(gM, m);
        // tangential coefficients of the seed, then subtract
        std::vector<Jet> coeff(m, Jet(jd));
        for (int a = 0; a < m; ++a) {
            Jet s(jd);
            for (int b = 0; b < m; ++b) {
                Jet rhs(jd);
                for (int A = 0; A < n; ++A)
                    for (int B = 0; B < n; ++B)
                        rhs += gA[static_cast<std::size_t>(A) * n + B] *
                               Jet::constant(jd, seed[A]) * J[b][B];
                s += gM_inv[static_cast<std::size_t>(a) * m + b] * rhs;
            }
            coeff[a] = s;
        }
        std::vector<Jet> out(n, Jet(jd));
        for (int A = 0; A < n; ++A) {
            Jet s = Jet::constant(jd, seed[A]);
            for (int a = 0; a < m; ++a) s -= coeff[a] * J[a][A];
            out[A] = s;
        }
        return out;
    });
}

// Weingarten split of an ambient-valued field V along M in direction of the
// tangent probe xp: returns (ambient derivative, tangential part, normal part)
struct WeingartenSplit {
    Vec derivative; // ambient comps of nabla~_X V
    Vec tangential; // = -A_V X
    Vec normal;     // = nabla^perp_X V
};

inline WeingartenSplit weingarten(const SubGeometry& S, std::size_t pi, const Vec& xp,
                                  const TensorField& V, const EvalConfig& cfg,
                                  double normal_tol = 1e-6) {
    const SubPointData& sp = S.pts[pi];
    const int m = S.m(), n = S.n();
    const auto vj = eval_field(V, sp.u, cfg, 1); // jets in u
    Vec vval(n);
    for (int A = 0; A < n; ++A) vval[A] = vj[A].value();
    // precondition: V normal at the sample
    const Vec vtan = tangential_part(sp, vval, m, n);
    if (frame_norm(sp.gA, n, sp.ambient_frame, vtan) > normal_tol)
        fail(errc::input, "weingarten requires a normal field");
    const auto G = S.ambient.lc(sp.x);
    WeingartenSplit out;
    out.derivative.assign(n, 0.0);
    for (int A = 0; A < n; ++A) {
        double s = 0.0;
        for (int a = 0; a < m; ++a) {
            double inner = vj[A].d1(a);
            for (int B = 0; B < n; ++B)
                for (int C = 0; C < n; ++C)
                    inner += G[gamma_index(n, A, B, C)].value() * sp.tangent[a][B] * vval[C];
            s += xp[a] * inner;
        }
        out.derivative[A] = s;
    }
    out.tangential = tangential_part(sp, out.derivative, m, n);
    out.normal = normal_part(sp, out.derivative, m, n);
    return out;
}

} // namespace lcs
