#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lcs/chart.hpp"
#include "lcs/connection.hpp"
#include "lcs/fields.hpp"
#include "lcs/frame.hpp"
#include "lcs/metric.hpp"
#include "lcs/structure.hpp"

namespace lcs {

// One chart with everything the identity checks consume: deterministic
// sample points, frames, random probe vectors, the Levi-Civita connection
// and (when derivable) the concircular structure. Ambient manifolds and
// induced submanifold charts both live in this shape.
struct Geometry {
    ChartDomain domain;
    MetricField metric;
    EvalConfig cfg;
    double tol = 1e-8;
    std::uint64_t seed = 42;
    int signature_negatives = 1;
    Connection lc;
    std::vector<Vec> points;
    std::vector<FramePoint> frames;
    std::vector<std::vector<Vec>> probes; // random vectors, fixed per point
    std::optional<LcsStructure> structure;
    std::optional<Connection> qsmc;

    int dim() const { return domain.dim; }

    const LcsStructure& st() const {
        if (!structure) fail(errc::misuse, "check requires a derived structure");
        return *structure;
    }

    // field evaluation with the chart-boundary contract enforced
    std::vector<Jet> eval_checked(const TensorField& f, const Vec& p, int order = 2) const {
        if (!domain.contains(p))
            fail(errc::domain, "evaluation point lies outside the chart box");
        return eval_field(f, p, cfg, order);
    }

    // evaluation shorthands (component values at a point)
    Mat g_at(const Vec& p) const { return metric_values(metric, p); }
    Vec xi_at(const Vec& p) const { return eval_values(st().xi, p); }
    Vec eta_at(const Vec& p) const { return eval_values(st().eta, p); }
    Mat phi_at(const Vec& p) const { return eval_values(st().phi, p); }
    double alpha_at(const Vec& p) const { return eval_values(st().alpha, p)[0]; }
    double rho_at(const Vec& p) const { return eval_values(st().rho, p)[0]; }
    double beta_at(const Vec& p) const { return eval_values(st().beta, p)[0]; }
    double c_at(const Vec& p) const { // alpha^2 - rho
        const double a = alpha_at(p);
        return a * a - rho_at(p);
    }

    // is alpha constant across the chart (frame norm of d alpha below 1e-10)?
    bool alpha_constant() const {
        if (!structure) return false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto aj = eval_field(structure->alpha, points[i], cfg);
            for (int k = 0; k < dim(); ++k)
                if (std::fabs(aj[0].d1(k)) > 1e-10) return false;
        }
        return true;
    }
};

inline Vec mat_vec(const Mat& m, int n, const Vec& x) {
    Vec out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i] += m[static_cast<std::size_t>(i) * n + j] * x[j];
    return out;
}

inline double covec_apply(const Vec& eta, const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) s += eta[i] * x[i];
    return s;
}

struct GeometryOptions {
    int samples = 32;
    std::uint64_t seed = 42;
    int probes_per_point = 4;
    double tol = -1.0;     // negative: engine default
    bool derive = true;    // derive the concircular structure from xi
};

inline Geometry make_geometry(ChartDomain domain, MetricField metric, TensorField xi,
                              const EvalConfig& cfg, const GeometryOptions& opt = {}) {
    Geometry G;
    G.domain = std::move(domain);
    G.metric = std::move(metric);
    G.cfg = cfg;
    G.seed = opt.seed;
    G.tol = opt.tol > 0 ? opt.tol : cfg.default_tolerance();
    G.points = sample_points(G.domain, opt.samples, opt.seed);
    G.signature_negatives = validate_metric(G.metric, G.points);

    const bool lorentzian = G.signature_negatives == 1;
    std::optional<Vec> prefer;
    if (lorentzian && xi.valid()) {
        const Vec xv = eval_values(xi, G.points.front());
        const Mat gm = G.g_at(G.points.front());
        if (bilinear(gm, G.dim(), xv, xv) < 0) prefer = xv;
    }
    for (const Vec& p : G.points) {
        const Mat gm = G.g_at(p);
        std::optional<Vec> pref_here;
        if (lorentzian && xi.valid()) {
            const Vec xv = eval_values(xi, p);
            if (bilinear(gm, G.dim(), xv, xv) < 0) pref_here = xv;
        }
        G.frames.push_back(
            orthonormal_frame(gm, G.dim(), p, pref_here ? &*pref_here : nullptr));
    }

    Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < G.points.size(); ++i) {
        std::vector<Vec> vs;
        for (int k = 0; k < opt.probes_per_point; ++k) {
            Vec v(G.dim());
            for (double& x : v) x = rng.symmetric();
            vs.push_back(std::move(v));
        }
        G.probes.push_back(std::move(vs));
    }

    G.lc = levi_civita(G.metric, cfg);
    if (opt.derive && xi.valid()) {
        if (!lorentzian)
            fail(errc::signature, "structure derivation requires a Lorentzian metric");
        G.structure = derive_structure(G.metric, xi, G.lc, G.points, G.frames, cfg, G.tol);
    }
    return G;
}

} // namespace lcs
