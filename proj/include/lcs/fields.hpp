#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lcs/chart.hpp"
#include "lcs/error.hpp"
#include "lcs/expr.hpp"
#include "lcs/jet.hpp"

namespace lcs {

enum class Engine { jets, finite_difference };

inline const char* engine_name(Engine e) {
    return e == Engine::jets ? "jet" : "fd";
}

// Evaluation policy threaded through every derived construction. The jet
// engine seeds coordinates and propagates derivatives exactly; the FD engine
// re-derives gradient and Hessian from value-only stencils, which serves as
// an independent cross-check of the jet path.
//
// FD steps widen with the field's derivation depth. A field whose values
// already contain one FD level (Christoffel symbols, alpha) carries noise
// around 1e-9; differencing it at step h amplifies that noise by 1/h, so the
// base step 1e-5 would drown the result. The ladder below keeps each level's
// total error near its own noise floor. The depth-0 Hessian step is also
// wider than the gradient step: at 1e-5 the second-difference roundoff floor
// (~eps/h^2) would sit near 1e-5, too close to the contract.
struct EvalConfig {
    Engine engine = Engine::jets;

    double grad_step(int depth) const {
        static constexpr double steps[4] = {1e-5, 1e-3, 5e-3, 2e-2};
        return steps[depth < 0 ? 0 : (depth > 3 ? 3 : depth)];
    }
    double hess_step(int depth) const {
        static constexpr double steps[4] = {2e-4, 4e-3, 2e-2, 5e-2};
        return steps[depth < 0 ? 0 : (depth > 3 ? 3 : depth)];
    }

    double default_tolerance() const {
        return engine == Engine::jets ? 1e-8 : 1e-4;
    }
};

struct Valence {
    int con = 0; // contravariant slots
    int cov = 0; // covariant slots
    int rank() const { return con + cov; }
    friend bool operator==(const Valence&, const Valence&) = default;
};

// A smooth map from chart points to component arrays of shape dim^rank,
// stored row-major over (contravariant..., covariant...) indices. The
// closure receives jet coordinates so derivatives propagate through whatever
// arithmetic defines the field; feeding it the jets of an immersion's
// component functions performs the pullback chain rule automatically.
class TensorField {
public:
    using Eval = std::function<std::vector<Jet>(std::span<const Jet>)>;

    TensorField() = default;
    TensorField(Valence v, int dim, Eval eval, int fd_depth = 0)
        : valence_(v), dim_(dim), fd_depth_(fd_depth), eval_(std::move(eval)) {}

    const Valence& valence() const { return valence_; }
    int dim() const { return dim_; }
    // number of FD differentiations already embedded in this field's values
    int fd_depth() const { return fd_depth_; }
    bool valid() const { return static_cast<bool>(eval_); }

    std::size_t component_count() const {
        std::size_t c = 1;
        for (int i = 0; i < valence_.rank(); ++i) c *= static_cast<std::size_t>(dim_);
        return c;
    }

    std::vector<Jet> operator()(std::span<const Jet> coords) const { return eval_(coords); }

    std::vector<Jet> at_constant(const Vec& p) const {
        std::vector<Jet> coords;
        coords.reserve(p.size());
        for (double x : p) coords.push_back(Jet::constant(static_cast<int>(p.size()), x));
        return eval_(coords);
    }

private:
    Valence valence_{};
    int dim_ = 0;
    int fd_depth_ = 0;
    Eval eval_;
};

inline std::size_t flat_index(int dim, std::span<const int> indices) {
    std::size_t f = 0;
    for (int ix : indices) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(ix);
    return f;
}

// scalar field from an expression over the chart's coordinate names
inline TensorField scalar_from_expr(const expr::Ast& ast, int dim) {
    return TensorField(Valence{0, 0}, dim, [ast](std::span<const Jet> c) {
        return std::vector<Jet>{ast.eval_jets(c)};
    });
}

inline TensorField constant_vector_field(int dim, Vec components) {
    return TensorField(Valence{1, 0}, dim, [components, dim](std::span<const Jet> c) {
        std::vector<Jet> out;
        out.reserve(components.size());
        const int jd = c.empty() ? dim : c[0].dim();
        for (double x : components) out.push_back(Jet::constant(jd, x));
        return out;
    });
}

// Field evaluation with derivative data at a point. Under the jet engine all
// levels are exact; under FD the gradient and Hessian come from central
// differences of component values and the third level is zero. `order`
// limits the FD work: consumers that only read the gradient pass 1 and skip
// the Hessian stencils, which matters for the nested derived-field chain.
inline std::vector<Jet> eval_field(const TensorField& f, const Vec& p,
                                   const EvalConfig& cfg, int order = 2) {
    const int n = static_cast<int>(p.size());
    if (cfg.engine == Engine::jets) {
        std::vector<Jet> coords;
        coords.reserve(p.size());
        for (int i = 0; i < n; ++i) coords.push_back(Jet::variable(n, i, p[i]));
        return f(coords);
    }
    auto values_at = [&](const Vec& q) {
        const auto comps = f.at_constant(q);
        Vec v(comps.size());
        for (std::size_t k = 0; k < comps.size(); ++k) v[k] = comps[k].value();
        return v;
    };
    const Vec center = values_at(p);
    const std::size_t m = center.size();
    std::vector<Jet> out(m, Jet(n));
    for (std::size_t k = 0; k < m; ++k) out[k].value() = center[k];

    const double hg = cfg.grad_step(f.fd_depth());
    for (int i = 0; i < n; ++i) {
        Vec q = p;
        q[i] = p[i] + hg;
        const Vec plus = values_at(q);
        q[i] = p[i] - hg;
        const Vec minus = values_at(q);
        for (std::size_t k = 0; k < m; ++k) out[k].d1(i) = (plus[k] - minus[k]) / (2.0 * hg);
    }
    if (order < 2) return out;
    const double hh = cfg.hess_step(f.fd_depth());
    for (int i = 0; i < n; ++i) {
        Vec q = p;
        q[i] = p[i] + hh;
        const Vec plus = values_at(q);
        q[i] = p[i] - hh;
        const Vec minus = values_at(q);
        Vec center_h = center;
        for (std::size_t k = 0; k < m; ++k)
            out[k].d2(i, i) = (plus[k] - 2.0 * center_h[k] + minus[k]) / (hh * hh);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec q = p;
            q[i] = p[i] + hh; q[j] = p[j] + hh;
            const Vec pp = values_at(q);
            q[j] = p[j] - hh;
            const Vec pm = values_at(q);
            q[i] = p[i] - hh; q[j] = p[j] + hh;
            const Vec mp = values_at(q);
            q[j] = p[j] - hh;
            const Vec mm = values_at(q);
            for (std::size_t k = 0; k < m; ++k) {
                const double v = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * hh * hh);
                out[k].d2(i, j) = v;
                out[k].d2(j, i) = v;
            }
        }
    return out;
}

// component values only
inline Vec eval_values(const TensorField& f, const Vec& p) {
    const auto comps = f.at_constant(p);
    Vec v(comps.size());
    for (std::size_t k = 0; k < comps.size(); ++k) v[k] = comps[k].value();
    return v;
}

} // namespace lcs
