#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "lcs/chart.hpp"
#include "lcs/error.hpp"
#include "lcs/linalg.hpp"

namespace lcs {

using Mat = std::vector<double>; // row-major square matrix

inline double mat_at(const Mat& m, int n, int i, int j) {
    return m[static_cast<std::size_t>(i) * n + j];
}

inline double bilinear(const Mat& g, int n, const Vec& x, const Vec& y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += mat_at(g, n, i, j) * x[i] * y[j];
    return s;
}

// Orthonormal frame at a point: basis vectors e_a with g(e_a,e_b) =
// sign_a delta_ab. Lorentzian metrics carry exactly one -1, listed first;
// Riemannian (induced) metrics carry none.
struct FramePoint {
    Vec point;
    std::vector<Vec> basis;
    std::vector<double> signs;

    int dim() const { return static_cast<int>(basis.size()); }
};

inline int count_negative_eigenvalues(const Mat& g, int n) {
    const EigenSym es = eigen_symmetric(g, n);
    double scale = 0.0;
    for (double v : es.values) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) fail(errc::signature, "zero metric");
    int neg = 0;
    for (double v : es.values) {
        if (std::fabs(v) < 1e-10 * scale)
            fail(errc::signature, "metric is degenerate at sample point");
        if (v < 0) ++neg;
    }
    return neg;
}

// Gram-Schmidt against an indefinite metric. The timelike direction is
// processed first; remaining coordinate directions follow in index order so
// the frame is deterministic.
inline FramePoint orthonormal_frame(const Mat& g, int n, const Vec& point,
                                    const Vec* prefer = nullptr) {
    const int negatives = count_negative_eigenvalues(g, n);
    if (negatives > 1)
        fail(errc::signature, "metric has more than one negative eigenvalue");

    FramePoint frame;
    frame.point = point;

    std::vector<Vec> candidates;
    if (negatives == 1) {
        if (prefer) {
            const double q = bilinear(g, n, *prefer, *prefer);
            if (!(q < 0)) fail(errc::input, "preferred frame vector is not timelike");
            candidates.push_back(*prefer);
        } else {
            candidates.push_back(eigen_symmetric(g, n).vectors.front());
        }
    } else if (prefer) {
        fail(errc::input, "preferred timelike vector supplied for a Riemannian metric");
    }
    for (int i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        candidates.push_back(std::move(e));
    }

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(mat_at(g, n, i, i)));

    for (const Vec& cand : candidates) {
        if (frame.dim() == n) break;
        Vec v = cand;
        for (int a = 0; a < frame.dim(); ++a) {
            const double c = frame.signs[a] * bilinear(g, n, v, frame.basis[a]);
            for (int i = 0; i < n; ++i) v[i] -= c * frame.basis[a][i];
        }
        const double q = bilinear(g, n, v, v);
        if (std::fabs(q) < 1e-20 * scale) continue; // candidate already spanned
        double norm2 = 0.0;
        for (double x : v) norm2 += x * x;
        if (std::fabs(q) < 1e-12 * scale * norm2) continue;
        const double sign = q > 0 ? 1.0 : -1.0;
        const double inv = 1.0 / std::sqrt(std::fabs(q));
        for (double& x : v) x *= inv;
        frame.basis.push_back(std::move(v));
        frame.signs.push_back(sign);
    }
    if (frame.dim() != n)
        fail(errc::signature, "Gram-Schmidt could not complete a frame");
    return frame;
}

// components c_a of vector v in the frame: v = sum_a c_a e_a
inline Vec frame_vector_components(const Mat& g, int n, const FramePoint& fr, const Vec& v) {
    Vec c(n, 0.0);
    for (int a = 0; a < n; ++a) c[a] = fr.signs[a] * bilinear(g, n, v, fr.basis[a]);
    return c;
}

// Euclidean norm of the frame components: the residual norm used on
// indefinite manifolds (the metric norm of a nonzero error can vanish).
inline double frame_norm(const Mat& g, int n, const FramePoint& fr, const Vec& v) {
    const Vec c = frame_vector_components(g, n, fr, v);
    double s = 0.0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
}

inline double frame_max_abs(const Mat& g, int n, const FramePoint& fr, const Vec& v) {
    const Vec c = frame_vector_components(g, n, fr, v);
    double m = 0.0;
    for (double x : c) m = std::max(m, std::fabs(x));
    return m;
}

// T(e_a, e_b) for a (0,2)-tensor given by coordinate components
inline Mat frame_bilinear_components(const Mat& t, int n, const FramePoint& fr) {
    Mat out(static_cast<std::size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out[static_cast<std::size_t>(a) * n + b] = bilinear(t, n, fr.basis[a], fr.basis[b]);
    return out;
}

inline double max_abs(const Mat& m) {
    double r = 0.0;
    for (double x : m) r = std::max(r, std::fabs(x));
    return r;
}

} // namespace lcs
