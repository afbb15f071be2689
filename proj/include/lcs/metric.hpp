#pragma once

#include <cmath>
#include <vector>

#include "lcs/fields.hpp"
#include "lcs/frame.hpp"

namespace lcs {

// Symmetric (0,2) field with a pinned signature: one negative eigenvalue for
// a Lorentzian chart, none for induced Riemannian metrics.
struct MetricField {
    TensorField field; // valence (0,2)
    int dim = 0;

    bool valid() const { return field.valid(); }
};

inline Mat metric_values(const MetricField& g, const Vec& p) {
    return eval_values(g.field, p);
}

// symmetry + signature over the given points; returns the negative count
inline int validate_metric(const MetricField& g, const std::vector<Vec>& points,
                           double tol = 1e-10) {
    int negatives = -1;
    for (const Vec& p : points) {
        const Mat m = metric_values(g, p);
        double scale = 0.0;
        for (double x : m) scale = std::max(scale, std::fabs(x));
        for (int i = 0; i < g.dim; ++i)
            for (int j = i + 1; j < g.dim; ++j)
                if (std::fabs(mat_at(m, g.dim, i, j) - mat_at(m, g.dim, j, i)) >
                    tol * std::max(1.0, scale))
                    fail(errc::input, "metric is not symmetric at a sample point");
        int neg;
        try {
            neg = count_negative_eigenvalues(m, g.dim);
        } catch (const Error&) {
            fail(errc::degenerate_metric, "metric is degenerate at a sample point");
        }
        if (negatives == -1) negatives = neg;
        if (neg != negatives)
            fail(errc::signature, "metric signature changes across the chart");
    }
    if (negatives > 1)
        fail(errc::signature, "metric has more than one negative eigenvalue");
    return negatives;
}

} // namespace lcs
