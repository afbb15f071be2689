#pragma once

#include <cmath>
#include <vector>

#include "lcs/connection.hpp"
#include "lcs/fields.hpp"
#include "lcs/frame.hpp"
#include "lcs/metric.hpp"
#include "lcs/stats.hpp"

namespace lcs {

// The concircular structure carried by a chart: unit timelike xi, its dual
// 1-form eta, the (1,1) tensor phi = (1/alpha) nabla xi, and the scalar chain
// alpha, rho = -(xi alpha), beta = -(xi rho).
//
// All six live as fields so the axiom checks can differentiate them. Each
// scalar in the chain consumes one derivative level of its predecessor, so
// beta carries values only and rho carries values and gradient.
struct LcsStructure {
    int dim = 0;
    TensorField xi;    // (1,0)
    TensorField eta;   // (0,1)
    TensorField phi;   // (1,1), stored [k][j]
    TensorField alpha; // scalar
    TensorField rho;   // scalar
    TensorField beta;  // scalar
    double derivation_residual = 0.0; // worst frame residual of nabla xi vs alpha(X + eta(X) xi)
    double phi_cross_residual = 0.0;  // worst residual of phi X vs X + eta(X) xi

    bool valid() const { return xi.valid(); }
};

namespace detail {

// nabla xi as a (1,1) field, stored [k][i] = (nabla_i xi)^k
inline TensorField nabla_xi_field(const Connection& lc, const TensorField& xi,
                                  const EvalConfig& cfg) {
    return covariant_derivative(lc, xi, cfg);
}

} // namespace detail

// Least-squares alpha over coordinate components: nabla xi is proportional
// to P = I + xi (x) eta on a concircular chart, so any positive inner product
// recovers the same alpha; the coordinate one keeps the closure jet-friendly.
// The frame-based recovery with a residual gate happens in derive_structure.
inline TensorField alpha_field(const MetricField& g, const TensorField& xi,
                               const Connection& lc, const EvalConfig& cfg) {
    const int n = g.dim;
    TensorField nx = detail::nabla_xi_field(lc, xi, cfg);
    TensorField gf = g.field;
    return TensorField(Valence{0, 0}, n, [nx, gf, xi, n](std::span<const Jet> c) {
        const auto N = nx(c);
        const auto xij = xi(c);
        const auto gj = gf(c);
        const int jd = c[0].dim();
        // eta_i = g_ij xi^j
        std::vector<Jet> eta(n, Jet(jd));
        for (int i = 0; i < n; ++i) {
            Jet s(jd);
            for (int j = 0; j < n; ++j) s += gj[static_cast<std::size_t>(i) * n + j] * xij[j];
            eta[i] = s;
        }
        Jet num(jd), den(jd);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                Jet p = xij[k] * eta[i];
                if (k == i) p += 1.0;
                num += N[static_cast<std::size_t>(k) * n + i] * p;
                den += p * p;
            }
        return std::vector<Jet>{num / den};
    }, /*fd_depth=*/1); // values contain first metric derivatives
}

inline LcsStructure derive_structure(const MetricField& g, const TensorField& xi,
                                     const Connection& lc,
                                     const std::vector<Vec>& points,
                                     const std::vector<FramePoint>& frames,
                                     const EvalConfig& cfg, double tol) {
    const int n = g.dim;
    LcsStructure st;
    st.dim = n;
    st.xi = xi;

    TensorField gf = g.field;
    st.eta = TensorField(Valence{0, 1}, n, [gf, xi, n](std::span<const Jet> c) {
        const auto gj = gf(c);
        const auto xij = xi(c);
        std::vector<Jet> eta(n, Jet(c[0].dim()));
        for (int i = 0; i < n; ++i) {
            Jet s(c[0].dim());
            for (int j = 0; j < n; ++j) s += gj[static_cast<std::size_t>(i) * n + j] * xij[j];
            eta[i] = s;
        }
        return eta;
    });

    st.alpha = alpha_field(g, xi, lc, cfg);

    // The derived fields below are chart-native: they rebuild their jets at
    // the requested point through eval_field, so gradient information always
    // comes from the configured engine (exact jets, or FD stencils at the
    // step matching each field's derivation depth).
    TensorField nx = detail::nabla_xi_field(lc, xi, cfg);
    TensorField alpha = st.alpha;
    st.phi = TensorField(Valence{1, 1}, n, [nx, alpha, cfg, n](std::span<const Jet> c) {
        Vec p(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i].value();
        const auto N = nx(c);
        const Jet a = eval_field(alpha, p, cfg, 1)[0];
        std::vector<Jet> out;
        out.reserve(N.size());
        // stored [k][j]: phi^k_j = (1/alpha) (nabla_j xi)^k
        for (const auto& comp : N) out.push_back(comp / a);
        return out;
    }, /*fd_depth=*/1);

    st.rho = TensorField(Valence{0, 0}, n, [alpha, xi, cfg, n](std::span<const Jet> c) {
        Vec p(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i].value();
        const Jet a = eval_field(alpha, p, cfg, 1)[0];
        const auto xij = xi(c);
        Jet s(c[0].dim());
        for (int i = 0; i < n; ++i) s += xij[i] * a.partial(i);
        return std::vector<Jet>{-s};
    }, /*fd_depth=*/2);

    TensorField rho = st.rho;
    st.beta = TensorField(Valence{0, 0}, n, [rho, xi, cfg, n](std::span<const Jet> c) {
        Vec p(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i].value();
        const Jet r = eval_field(rho, p, cfg, 1)[0];
        const auto xij = xi(c);
        Jet s(c[0].dim());
        for (int i = 0; i < n; ++i) s += xij[i] * r.partial(i);
        return std::vector<Jet>{-s};
    }, /*fd_depth=*/3);

    // pointwise validation with the frame-based least squares
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Vec& p = points[pi];
        const FramePoint& fr = frames[pi];
        const Mat gm = metric_values(g, p);
        const Vec xiv = eval_values(xi, p);

        const double unit = bilinear(gm, n, xiv, xiv);
        if (std::fabs(unit + 1.0) > 1e-8)
            fail(errc::input, "candidate structure field is not unit timelike");

        const auto Nj = nx.at_constant(p);
        Vec etav(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) etav[i] += mat_at(gm, n, i, j) * xiv[j];

        double num = 0.0, den = 0.0;
        std::vector<Vec> nxe(n, Vec(n, 0.0)), pe(n, Vec(n, 0.0));
        for (int a = 0; a < n; ++a) {
            const Vec& e = fr.basis[a];
            Vec ne(n, 0.0), pv(n, 0.0);
            double etae = 0.0;
            for (int i = 0; i < n; ++i) etae += etav[i] * e[i];
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < n; ++i)
                    ne[k] += Nj[static_cast<std::size_t>(k) * n + i].value() * e[i];
                pv[k] = e[k] + etae * xiv[k];
            }
            const Vec cn = frame_vector_components(gm, n, fr, ne);
            const Vec cp = frame_vector_components(gm, n, fr, pv);
            for (int k = 0; k < n; ++k) {
                num += cn[k] * cp[k];
                den += cp[k] * cp[k];
            }
            nxe[a] = std::move(ne);
            pe[a] = std::move(pv);
        }
        if (den < 1e-14) fail(errc::not_lcs, "degenerate proportionality system");
        const double ahat = num / den;
        if (std::fabs(ahat) < 1e-10)
            fail(errc::alpha_degenerate,
                 "alpha is numerically zero: nabla xi vanishes at a sample point");
        for (int a = 0; a < n; ++a) {
            Vec resid(n, 0.0);
            for (int k = 0; k < n; ++k) resid[k] = nxe[a][k] - ahat * pe[a][k];
            st.derivation_residual =
                std::max(st.derivation_residual, frame_max_abs(gm, n, fr, resid));
        }
        if (st.derivation_residual > tol)
            fail(errc::not_lcs,
                 "nabla xi is not proportional to X + eta(X) xi (residual " +
                     std::to_string(st.derivation_residual) + ")");

        // cross-check the constructed phi against X + eta(X) xi
        const Vec phiv = eval_values(st.phi, p);
        for (int a = 0; a < n; ++a) {
            const Vec& e = fr.basis[a];
            double etae = 0.0;
            for (int i = 0; i < n; ++i) etae += etav[i] * e[i];
            Vec resid(n, 0.0);
            for (int k = 0; k < n; ++k) {
                double px = 0.0;
                for (int j = 0; j < n; ++j)
                    px += phiv[static_cast<std::size_t>(k) * n + j] * e[j];
                resid[k] = px - (e[k] + etae * xiv[k]);
            }
            st.phi_cross_residual =
                std::max(st.phi_cross_residual, frame_max_abs(gm, n, fr, resid));
        }
    }
    return st;
}

// a = trace phi = sum_a eps_a g(phi e_a, e_a); equals dim-1 on any chart
// carrying the structure
inline double trace_phi(const LcsStructure& st, const MetricField& g, const Vec& p,
                        const FramePoint& fr) {
    const int n = st.dim;
    const Mat gm = metric_values(g, p);
    const Vec phiv = eval_values(st.phi, p);
    double tr = 0.0;
    for (int a = 0; a < n; ++a) {
        Vec pe(n, 0.0);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                pe[k] += phiv[static_cast<std::size_t>(k) * n + j] * fr.basis[a][j];
        tr += fr.signs[a] * bilinear(gm, n, pe, fr.basis[a]);
    }
    return tr;
}

// alpha^2 - rho at a point (the curvature coefficient of the structure)
inline double alpha_sq_minus_rho(const LcsStructure& st, const Vec& p) {
    const double a = eval_values(st.alpha, p)[0];
    const double r = eval_values(st.rho, p)[0];
    return a * a - r;
}

} // namespace lcs
