#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lcs/frame.hpp"
#include "lcs/linalg.hpp"
#include "lcs/metric.hpp"

namespace lcs {

enum class ConnKind { levi_civita, quarter_symmetric, induced, custom };

inline std::size_t gamma_index(int n, int k, int i, int j) {
    return (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(i)) * n +
           static_cast<std::size_t>(j);
}

// Affine connection as a map point -> Gamma^k_{ij} jets (no i,j symmetry
// assumed). The jets carry value and gradient always; the Hessian level is
// populated when the metric behind them supplies three derivative levels.
struct Connection {
    int dim = 0;
    ConnKind kind = ConnKind::custom;
    std::function<std::vector<Jet>(const Vec&)> coeffs;

    std::vector<Jet> operator()(const Vec& p) const { return coeffs(p); }
    bool torsion_free() const {
        return kind == ConnKind::levi_civita || kind == ConnKind::induced;
    }
};

// Christoffel symbols from first derivatives of the metric:
// Gamma^k_{ij} = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
inline Connection levi_civita(const MetricField& g, const EvalConfig& cfg) {
    const int n = g.dim;
    Connection conn;
    conn.dim = n;
    conn.kind = ConnKind::levi_civita;
    conn.coeffs = [g, cfg, n](const Vec& p) {
        const auto gj = eval_field(g.field, p, cfg);
        const auto ginv = mat_inverse(gj, n);
        auto G = [&](int i, int j) -> const Jet& {
            return gj[static_cast<std::size_t>(i) * n + j];
        };
        std::vector<Jet> out(static_cast<std::size_t>(n) * n * n, Jet(n));
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Jet sum(n);
                    for (int l = 0; l < n; ++l) {
                        Jet term = G(j, l).partial(i) + G(i, l).partial(j) - G(i, j).partial(l);
                        sum += ginv[static_cast<std::size_t>(k) * n + l] * term;
                    }
                    out[gamma_index(n, k, i, j)] = sum * 0.5;
                }
        return out;
    };
    return conn;
}

inline Connection custom_connection(int dim,
                                    std::function<std::vector<Jet>(const Vec&)> coeffs,
                                    ConnKind kind = ConnKind::custom) {
    Connection c;
    c.dim = dim;
    c.kind = kind;
    c.coeffs = std::move(coeffs);
    return c;
}

// torsion T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji} as a (1,2) field
inline TensorField torsion_field(const Connection& conn) {
    const int n = conn.dim;
    return TensorField(Valence{1, 2}, n, [conn, n](std::span<const Jet> coords) {
        Vec p(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) p[i] = coords[i].value();
        const auto G = conn(p);
        std::vector<Jet> out(static_cast<std::size_t>(n) * n * n, Jet(n));
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    out[gamma_index(n, k, i, j)] =
                        G[gamma_index(n, k, i, j)] - G[gamma_index(n, k, j, i)];
        return out;
    });
}

// R(d_i,d_j)d_k = R^l_{kij} d_l with
// R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//           + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
struct CurvatureValue {
    int dim = 0;
    std::vector<double> comp; // [l][k][i][j]

    double at(int l, int k, int i, int j) const {
        return comp[((static_cast<std::size_t>(l) * dim + k) * dim + i) * dim + j];
    }

    // components of R(X,Y)Z
    Vec apply(const Vec& x, const Vec& y, const Vec& z) const {
        Vec out(dim, 0.0);
        for (int l = 0; l < dim; ++l) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k)
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) s += at(l, k, i, j) * z[k] * x[i] * y[j];
            out[l] = s;
        }
        return out;
    }
};

inline CurvatureValue curvature(const Connection& conn, const Vec& p) {
    const int n = conn.dim;
    const auto G = conn(p);
    auto g = [&](int k, int i, int j) -> const Jet& { return G[gamma_index(n, k, i, j)]; };
    CurvatureValue R;
    R.dim = n;
    R.comp.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    std::size_t idx = 0;
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j, ++idx) {
                    double v = g(l, j, k).d1(i) - g(l, i, k).d1(j);
                    for (int m = 0; m < n; ++m)
                        v += g(l, i, m).value() * g(m, j, k).value() -
                             g(l, j, m).value() * g(m, i, k).value();
                    R.comp[idx] = v;
                }
    return R;
}

// Ricci with the signed trace over the first curvature slot:
// S(Y,Z) = sum_a eps_a g(R(e_a,Y)Z, e_a), which in coordinates reduces to
// S_{jk} = R^i_{kij} independent of the frame. Row index j pairs with Y.
inline Mat ricci_components(const CurvatureValue& R) {
    const int n = R.dim;
    Mat S(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += R.at(i, k, i, j);
            S[static_cast<std::size_t>(j) * n + k] = s;
        }
    return S;
}

inline Mat ricci(const Connection& conn, const Vec& p) {
    return ricci_components(curvature(conn, p));
}

// frame-trace form of the same contraction; used as an internal cross-check
inline Mat ricci_frame_trace(const CurvatureValue& R, const Mat& g, const FramePoint& fr) {
    const int n = R.dim;
    Mat S(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Vec y(n, 0.0), z(n, 0.0);
            y[j] = 1.0;
            z[k] = 1.0;
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                const Vec r = R.apply(fr.basis[a], y, z);
                s += fr.signs[a] * bilinear(g, n, r, fr.basis[a]);
            }
            S[static_cast<std::size_t>(j) * n + k] = s;
        }
    return S;
}

// covariant derivative of a field; the derivative index is the first
// covariant slot of the result
inline TensorField covariant_derivative(const Connection& conn, const TensorField& field,
                                        const EvalConfig& cfg) {
    const int n = conn.dim;
    const Valence v = field.valence();
    const bool ok = (v == Valence{0, 0}) || (v == Valence{1, 0}) || (v == Valence{0, 1}) ||
                    (v == Valence{1, 1}) || (v == Valence{0, 2});
    if (!ok)
        fail(errc::unsupported, "covariant derivative implemented for valences "
                                "(0,0),(1,0),(0,1),(1,1),(0,2)");
    const Valence rv{v.con, v.cov + 1};
    const int depth = field.fd_depth() + 1;
    return TensorField(rv, n, [conn, field, cfg, n, v](std::span<const Jet> coords) {
        Vec p(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) p[i] = coords[i].value();
        // order 1: under FD every current consumer reads values of the
        // result (or re-stencils it), so the input Hessian is never needed
        const auto T = eval_field(field, p, cfg, 1);
        const auto G = conn(p);
        auto gamma = [&](int k, int i, int j) -> const Jet& {
            return G[gamma_index(n, k, i, j)];
        };
        std::vector<Jet> out;
        if (v == Valence{0, 0}) {
            out.resize(static_cast<std::size_t>(n), Jet(n));
            for (int i = 0; i < n; ++i) out[i] = T[0].partial(i);
        } else if (v == Valence{1, 0}) {
            // (nabla V)^k_i = d_i V^k + Gamma^k_{im} V^m   stored [k][i]
            out.resize(static_cast<std::size_t>(n) * n, Jet(n));
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i) {
                    Jet s = T[k].partial(i);
                    for (int m = 0; m < n; ++m) s += gamma(k, i, m) * T[m];
                    out[static_cast<std::size_t>(k) * n + i] = s;
                }
        } else if (v == Valence{0, 1}) {
            // (nabla eta)_{ij} = d_i eta_j - Gamma^m_{ij} eta_m   stored [i][j]
            out.resize(static_cast<std::size_t>(n) * n, Jet(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Jet s = T[j].partial(i);
                    for (int m = 0; m < n; ++m) s -= gamma(m, i, j) * T[m];
                    out[static_cast<std::size_t>(i) * n + j] = s;
                }
        } else if (v == Valence{1, 1}) {
            // (nabla phi)^k_{ij} = d_i phi^k_j + Gamma^k_{im} phi^m_j
            //                      - Gamma^m_{ij} phi^k_m   stored [k][i][j]
            out.resize(static_cast<std::size_t>(n) * n * n, Jet(n));
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        Jet s = T[static_cast<std::size_t>(k) * n + j].partial(i);
                        for (int m = 0; m < n; ++m)
                            s += gamma(k, i, m) * T[static_cast<std::size_t>(m) * n + j] -
                                 gamma(m, i, j) * T[static_cast<std::size_t>(k) * n + m];
                        out[(static_cast<std::size_t>(k) * n + i) * n + j] = s;
                    }
        } else {
            // (nabla g)_{ijk} = d_i g_{jk} - Gamma^m_{ij} g_{mk} - Gamma^m_{ik} g_{jm}
            out.resize(static_cast<std::size_t>(n) * n * n, Jet(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        Jet s = T[static_cast<std::size_t>(j) * n + k].partial(i);
                        for (int m = 0; m < n; ++m)
                            s -= gamma(m, i, j) * T[static_cast<std::size_t>(m) * n + k] +
                                 gamma(m, i, k) * T[static_cast<std::size_t>(j) * n + m];
                        out[(static_cast<std::size_t>(i) * n + j) * n + k] = s;
                    }
        }
        return out;
    }, depth);
}

// (Lie_V g)(Y,Z) = g(nabla_Y V, Z) + g(Y, nabla_Z V); valid for torsion-free
// metric connections, which is the only place this overload may be used
inline Mat lie_derivative_metric(const Connection& conn, const MetricField& g,
                                 const TensorField& V, const Vec& p,
                                 const EvalConfig& cfg) {
    if (!conn.torsion_free())
        fail(errc::misuse,
             "lie_derivative_metric requires a torsion-free connection; "
             "use the quarter-symmetric variant for torsionful connections");
    const int n = conn.dim;
    const Mat gm = metric_values(g, p);
    const auto Vj = eval_field(V, p, cfg);
    const auto G = conn(p);
    // (nabla V)^l_j values
    Mat nv(static_cast<std::size_t>(n) * n, 0.0);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
            double s = Vj[l].d1(j);
            for (int m = 0; m < n; ++m)
                s += G[gamma_index(n, l, j, m)].value() * Vj[m].value();
            nv[static_cast<std::size_t>(l) * n + j] = s;
        }
    Mat lie(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int l = 0; l < n; ++l)
                s += mat_at(gm, n, l, k) * nv[static_cast<std::size_t>(l) * n + j] +
                     mat_at(gm, n, j, l) * nv[static_cast<std::size_t>(l) * n + k];
            lie[static_cast<std::size_t>(j) * n + k] = s;
        }
    return lie;
}

// max |(nabla_{e_a} g)(e_b, e_c)| over the frame
inline double metric_compat_residual(const Connection& conn, const MetricField& g,
                                     const Vec& p, const FramePoint& fr,
                                     const EvalConfig& cfg) {
    const int n = conn.dim;
    const auto gj = eval_field(g.field, p, cfg);
    const auto G = conn(p);
    std::vector<double> nabla(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = gj[static_cast<std::size_t>(j) * n + k].d1(i);
                for (int m = 0; m < n; ++m)
                    s -= G[gamma_index(n, m, i, j)].value() *
                             gj[static_cast<std::size_t>(m) * n + k].value() +
                         G[gamma_index(n, m, i, k)].value() *
                             gj[static_cast<std::size_t>(j) * n + m].value();
                nabla[(static_cast<std::size_t>(i) * n + j) * n + k] = s;
            }
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k)
                            s += nabla[(static_cast<std::size_t>(i) * n + j) * n + k] *
                                 fr.basis[a][i] * fr.basis[b][j] * fr.basis[c][k];
                worst = std::max(worst, std::fabs(s));
            }
    return worst;
}

} // namespace lcs
