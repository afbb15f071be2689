#pragma once

#include <string>
#include <vector>

#include "lcs/expr.hpp"
#include "lcs/fields.hpp"
#include "lcs/metric.hpp"

namespace lcs {

// Generalized Robertson-Walker chart: metric -dt^2 + f(t)^2 g_F on
// I x F. With f' nonvanishing, d_t is a unit timelike concircular field and
// the chart carries a Lorentzian concircular structure with alpha = f'/f.
enum class FiberKind { flat, sphere_block, explicit_matrix };

struct GrwSpec {
    int dim = 0;                                   // total dimension n
    std::string warp_text;                         // f(t)
    std::pair<double, double> t_interval{0.0, 1.0};
    FiberKind fiber = FiberKind::flat;
    // explicit_matrix: row-major (n-1)^2 expressions over fiber coordinates
    std::vector<std::string> fiber_entries;
    // optional per-fiber-coordinate intervals; defaults applied when empty
    std::vector<std::pair<double, double>> fiber_intervals;
};

struct GrwManifold {
    ChartDomain domain;
    MetricField metric;
    TensorField xi; // d_t
    expr::Ast warp;
};

namespace detail {

inline bool ast_uses_variable(const expr::Node* n, int index) {
    if (!n) return false;
    if (n->kind == expr::NodeKind::variable) return n->var_index == index;
    return ast_uses_variable(n->a.get(), index) || ast_uses_variable(n->b.get(), index);
}

} // namespace detail

inline std::vector<std::string> grw_coordinate_names(const GrwSpec& spec) {
    std::vector<std::string> names{"t"};
    for (int i = 1; i < spec.dim; ++i) {
        if (spec.fiber == FiberKind::sphere_block && i == 1) names.push_back("th");
        else if (spec.fiber == FiberKind::sphere_block && i == 2) names.push_back("ph");
        else names.push_back("x" + std::to_string(i));
    }
    return names;
}

inline GrwManifold build_grw(const GrwSpec& spec) {
    const int n = spec.dim;
    if (n < 3) fail(errc::dimension, "GRW chart needs dimension >= 3");
    if (!(spec.t_interval.first < spec.t_interval.second))
        fail(errc::input, "empty t interval");
    if (spec.fiber == FiberKind::sphere_block && n < 3)
        fail(errc::dimension, "sphere block fiber needs at least 2 fiber coordinates");

    ChartDomain domain;
    domain.dim = n;
    domain.names = grw_coordinate_names(spec);
    domain.box.push_back(spec.t_interval);
    for (int i = 1; i < n; ++i) {
        if (static_cast<int>(spec.fiber_intervals.size()) >= i)
            domain.box.push_back(spec.fiber_intervals[i - 1]);
        else if (spec.fiber == FiberKind::sphere_block && i == 1)
            domain.box.push_back({0.4, 2.7}); // away from the poles
        else if (spec.fiber == FiberKind::sphere_block && i == 2)
            domain.box.push_back({0.2, 6.0});
        else
            domain.box.push_back({0.0, 1.0});
    }
    domain.validate(3);

    const expr::Ast warp = expr::parse(spec.warp_text, {"t"});

    // alpha = f'/f must exist on the whole interval: refuse charts where f
    // vanishes or f' vanishes/changes sign
    {
        const int grid = 257;
        double prev_sign = 0.0;
        for (int k = 0; k < grid; ++k) {
            const double t = spec.t_interval.first +
                             (spec.t_interval.second - spec.t_interval.first) * k / (grid - 1);
            const Jet tj = Jet::variable(1, 0, t);
            const Jet f = warp.eval_jets(std::span<const Jet>(&tj, 1));
            if (!(f.value() > 0.0))
                fail(errc::structure, "warp function must be positive on the interval");
            const double fp = f.d1(0);
            if (std::fabs(fp) < 1e-10)
                fail(errc::structure,
                     "warp derivative vanishes near t = " + std::to_string(t) +
                         "; alpha = f'/f would be degenerate");
            const double s = fp > 0 ? 1.0 : -1.0;
            if (prev_sign != 0.0 && s != prev_sign)
                fail(errc::structure, "warp derivative changes sign on the interval");
            prev_sign = s;
        }
    }

    std::vector<expr::Ast> fiber_asts;
    if (spec.fiber == FiberKind::explicit_matrix) {
        const int m = n - 1;
        if (static_cast<int>(spec.fiber_entries.size()) != m * m)
            fail(errc::input, "explicit fiber metric needs (n-1)^2 entries");
        for (const auto& text : spec.fiber_entries) {
            expr::Ast ast = expr::parse(text, domain.names);
            if (detail::ast_uses_variable(ast.root().get(), 0))
                fail(errc::input, "fiber metric entries may not depend on t");
            fiber_asts.push_back(std::move(ast));
        }
    }

    const FiberKind fiber = spec.fiber;
    TensorField metric_field(
        Valence{0, 2}, n, [warp, fiber, fiber_asts, n](std::span<const Jet> c) {
            const int jd = c[0].dim();
            const Jet f = warp.eval_jets(c); // only the t slot is referenced
            const Jet f2 = f * f;
            std::vector<Jet> g(static_cast<std::size_t>(n) * n, Jet::constant(jd, 0.0));
            g[0] = Jet::constant(jd, -1.0);
            for (int i = 1; i < n; ++i)
                for (int j = 1; j < n; ++j) {
                    Jet entry(jd);
                    if (fiber == FiberKind::flat) {
                        if (i == j) entry = Jet::constant(jd, 1.0);
                    } else if (fiber == FiberKind::sphere_block) {
                        if (i == j && i == 2) {
                            const Jet s = sin(c[1]);
                            entry = s * s;
                        } else if (i == j) {
                            entry = Jet::constant(jd, 1.0);
                        }
                    } else {
                        entry = fiber_asts[static_cast<std::size_t>(i - 1) * (n - 1) + (j - 1)]
                                    .eval_jets(c);
                    }
                    g[static_cast<std::size_t>(i) * n + j] = f2 * entry;
                }
            return g;
        });

    GrwManifold out{std::move(domain), MetricField{std::move(metric_field), n},
                    constant_vector_field(n, [n] {
                        Vec v(n, 0.0);
                        v[0] = 1.0;
                        return v;
                    }()),
                    warp};
    return out;
}

} // namespace lcs
