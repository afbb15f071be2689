#pragma once

#include <cmath>
#include <cstdint>

namespace lcs {

// Residual accumulator. Merging is associative with fixed operand order, so
// point-parallel evaluation reduces to the same numbers as a serial loop as
// long as per-point results are combined in point order.
struct ResidualStats {
    double max = 0.0;
    double sum = 0.0;
    std::int64_t count = 0;

    void add(double r) {
        r = std::fabs(r);
        if (r > max) max = r;
        sum += r;
        ++count;
    }

    void merge(const ResidualStats& o) {
        if (o.max > max) max = o.max;
        sum += o.sum;
        count += o.count;
    }

    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

} // namespace lcs
