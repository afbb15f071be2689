#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/rng.hpp"

namespace lcs {

using Vec = std::vector<double>;

// Single coordinate box; the only chart topology supported.
struct ChartDomain {
    int dim = 0;
    std::vector<std::pair<double, double>> box; // closed intervals
    std::vector<std::string> names;

    void validate(int min_dim = 1) const {
        if (dim < min_dim)
            fail(errc::dimension, "chart dimension " + std::to_string(dim) +
                                      " below minimum " + std::to_string(min_dim));
        if (static_cast<int>(box.size()) != dim || static_cast<int>(names.size()) != dim)
            fail(errc::input, "chart box/name count does not match dimension");
        for (const auto& [lo, hi] : box) {
            if (!(lo < hi)) fail(errc::input, "empty chart interval");
            if (!std::isfinite(lo) || !std::isfinite(hi))
                fail(errc::input, "chart interval must be finite");
        }
    }

    bool contains(const Vec& p) const {
        if (static_cast<int>(p.size()) != dim) return false;
        for (int i = 0; i < dim; ++i)
            if (p[i] < box[i].first || p[i] > box[i].second) return false;
        return true;
    }
};

// Deterministic samples, uniform over the box shrunk by a 5% margin per side
// (derivative checks degrade at the boundary).
inline std::vector<Vec> sample_points(const ChartDomain& domain, int count,
                                      std::uint64_t seed) {
    domain.validate();
    if (count < 1) fail(errc::input, "sample count must be >= 1");
    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        Vec p(domain.dim);
        for (int i = 0; i < domain.dim; ++i) {
            const auto [lo, hi] = domain.box[i];
            const double w = hi - lo;
            p[i] = rng.uniform(lo + 0.05 * w, hi - 0.05 * w);
        }
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace lcs
