#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/jet.hpp"

// Small dense routines for chart-sized matrices (dim <= 8). Hand-rolled so
// they work uniformly over double and Jet entries; a general linear-algebra
// dependency buys nothing at these sizes.
namespace lcs {

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet& x) { return x.value(); }

// Gauss-Jordan inverse with partial pivoting on the value part.
// a is row-major n x n; throws errc::degenerate_metric on singular input.
template <typename T>
std::vector<T> mat_inverse(std::vector<T> a, int n) {
    std::vector<T> inv;
    inv.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if constexpr (std::is_same_v<T, double>) {
                inv.push_back(i == j ? 1.0 : 0.0);
            } else {
                inv.push_back(T::constant(a.front().dim(), i == j ? 1.0 : 0.0));
            }
        }
    auto at = [n](std::vector<T>& m, int i, int j) -> T& {
        return m[static_cast<std::size_t>(i) * n + j];
    };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(scalar_value(at(a, col, col)));
        for (int r = col + 1; r < n; ++r) {
            const double cand = std::fabs(scalar_value(at(a, r, col)));
            if (cand > best) { best = cand; pivot = r; }
        }
        if (best < 1e-14) fail(errc::degenerate_metric, "singular matrix in inverse");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(at(a, pivot, j), at(a, col, j));
                std::swap(at(inv, pivot, j), at(inv, col, j));
            }
        const T diag = at(a, col, col);
        for (int j = 0; j < n; ++j) {
            at(a, col, j) = at(a, col, j) / diag;
            at(inv, col, j) = at(inv, col, j) / diag;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const T factor = at(a, r, col);
            if (std::fabs(scalar_value(factor)) == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                at(a, r, j) = at(a, r, j) - factor * at(a, col, j);
                at(inv, r, j) = at(inv, r, j) - factor * at(inv, col, j);
            }
        }
    }
    return inv;
}

struct EigenSym {
    std::vector<double> values;           // ascending
    std::vector<std::vector<double>> vectors; // vectors[k] belongs to values[k]
};

// Cyclic Jacobi for a symmetric matrix; plenty for n <= 8.
inline EigenSym eigen_symmetric(std::vector<double> a, int n) {
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
    }
    EigenSym out;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (A(order[j], order[j]) < A(order[i], order[i])) std::swap(order[i], order[j]);
    for (int k = 0; k < n; ++k) {
        const int c = order[k];
        out.values.push_back(A(c, c));
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = V(i, c);
        // deterministic sign: first component of largest magnitude positive
        int lead = 0;
        for (int i = 1; i < n; ++i)
            if (std::fabs(col[i]) > std::fabs(col[lead])) lead = i;
        if (col[lead] < 0)
            for (auto& x : col) x = -x;
        out.vectors.push_back(std::move(col));
    }
    return out;
}

// Solve a tiny symmetric positive system by Gauss elimination (doubles only).
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(A(r, col)) > std::fabs(A(pivot, col))) pivot = r;
        if (std::fabs(A(pivot, col)) < 1e-300)
            fail(errc::degenerate_metric, "singular system in solve_dense");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(A(pivot, j), A(col, j));
            std::swap(b[pivot], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / A(col, col);
            for (int j = col; j < n; ++j) A(r, j) -= f * A(col, j);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

} // namespace lcs
