#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lcs/error.hpp"

namespace lcs {

// Truncated Taylor value of order 3 in `dim` variables: value, gradient,
// Hessian and third-derivative tensor, all propagated exactly through
// arithmetic. Curvature consumes two derivative levels of the metric; the
// pullback of a metric through an immersion and the scalar chain
// alpha -> rho -> beta each consume one more, which is why the truncation
// order is 3 and not 2.
//
// partial() shifts a jet down one level; the vacated top level is zero, so a
// jet is only as deep as the data that produced it. Code that differentiates
// must track how many valid levels its inputs carry.
class Jet {
public:
    Jet() = default;

    explicit Jet(int dim, double value = 0.0)
        : dim_(dim), v_(value), d1_(dim, 0.0),
          d2_(static_cast<std::size_t>(dim) * dim, 0.0),
          d3_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

    static Jet constant(int dim, double value) { return Jet(dim, value); }

    // seed for coordinate `index`: value p_index, unit gradient
    static Jet variable(int dim, int index, double value) {
        Jet j(dim, value);
        j.d1_[static_cast<std::size_t>(index)] = 1.0;
        return j;
    }

    int dim() const { return dim_; }
    double value() const { return v_; }
    double d1(int i) const { return d1_[idx1(i)]; }
    double d2(int i, int j) const { return d2_[idx2(i, j)]; }
    double d3(int i, int j, int k) const { return d3_[idx3(i, j, k)]; }

    double& value() { return v_; }
    double& d1(int i) { return d1_[idx1(i)]; }
    double& d2(int i, int j) { return d2_[idx2(i, j)]; }
    double& d3(int i, int j, int k) { return d3_[idx3(i, j, k)]; }

    // d/dx_m as a jet one level shallower (top level zeroed)
    Jet partial(int m) const {
        Jet r(dim_, d1(m));
        for (int i = 0; i < dim_; ++i) {
            r.d1(i) = d2(m, i);
            for (int j = 0; j < dim_; ++j) r.d2(i, j) = d3(m, i, j);
        }
        return r;
    }

    Jet operator-() const {
        Jet r = *this;
        r.v_ = -r.v_;
        for (auto& x : r.d1_) x = -x;
        for (auto& x : r.d2_) x = -x;
        for (auto& x : r.d3_) x = -x;
        return r;
    }

    Jet& operator+=(const Jet& o) {
        check_dim(o);
        v_ += o.v_;
        for (std::size_t i = 0; i < d1_.size(); ++i) d1_[i] += o.d1_[i];
        for (std::size_t i = 0; i < d2_.size(); ++i) d2_[i] += o.d2_[i];
        for (std::size_t i = 0; i < d3_.size(); ++i) d3_[i] += o.d3_[i];
        return *this;
    }

    Jet& operator-=(const Jet& o) {
        check_dim(o);
        v_ -= o.v_;
        for (std::size_t i = 0; i < d1_.size(); ++i) d1_[i] -= o.d1_[i];
        for (std::size_t i = 0; i < d2_.size(); ++i) d2_[i] -= o.d2_[i];
        for (std::size_t i = 0; i < d3_.size(); ++i) d3_[i] -= o.d3_[i];
        return *this;
    }

    Jet& operator*=(double c) {
        v_ *= c;
        for (auto& x : d1_) x *= c;
        for (auto& x : d2_) x *= c;
        for (auto& x : d3_) x *= c;
        return *this;
    }

    Jet& operator+=(double c) { v_ += c; return *this; }
    Jet& operator-=(double c) { v_ -= c; return *this; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double c) { a.v_ += c; return a; }
    friend Jet operator+(double c, Jet a) { a.v_ += c; return a; }
    friend Jet operator-(Jet a, double c) { a.v_ -= c; return a; }
    friend Jet operator-(double c, const Jet& a) { return (-a) + c; }
    friend Jet operator*(Jet a, double c) { return a *= c; }
    friend Jet operator*(double c, Jet a) { return a *= c; }
    friend Jet operator/(Jet a, double c) { return a *= (1.0 / c); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_dim(b);
        const int n = a.dim_;
        Jet r(n, a.v_ * b.v_);
        for (int i = 0; i < n; ++i)
            r.d1(i) = a.d1(i) * b.v_ + a.v_ * b.d1(i);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r.d2(i, j) = a.d2(i, j) * b.v_ + a.d1(i) * b.d1(j) +
                             a.d1(j) * b.d1(i) + a.v_ * b.d2(i, j);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    r.d3(i, j, k) = a.d3(i, j, k) * b.v_ +
                                    a.d2(i, j) * b.d1(k) + a.d2(i, k) * b.d1(j) +
                                    a.d2(j, k) * b.d1(i) + a.d1(i) * b.d2(j, k) +
                                    a.d1(j) * b.d2(i, k) + a.d1(k) * b.d2(i, j) +
                                    a.v_ * b.d3(i, j, k);
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(double c, const Jet& b) { return reciprocal(b) * c; }

    // f(u) for a scalar function with derivatives f0..f3 at u.value()
    friend Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
        const int n = u.dim_;
        Jet r(n, f0);
        for (int i = 0; i < n; ++i) r.d1(i) = f1 * u.d1(i);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r.d2(i, j) = f1 * u.d2(i, j) + f2 * u.d1(i) * u.d1(j);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    r.d3(i, j, k) = f1 * u.d3(i, j, k) +
                                    f2 * (u.d1(i) * u.d2(j, k) + u.d1(j) * u.d2(i, k) +
                                          u.d1(k) * u.d2(i, j)) +
                                    f3 * u.d1(i) * u.d1(j) * u.d1(k);
        return r;
    }

    friend Jet reciprocal(const Jet& u) {
        const double v = u.v_;
        return compose(u, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v),
                       -6.0 / (v * v * v * v));
    }

private:
    std::size_t idx1(int i) const { return static_cast<std::size_t>(i); }
    std::size_t idx2(int i, int j) const {
        return static_cast<std::size_t>(i) * dim_ + j;
    }
    std::size_t idx3(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
    }
    void check_dim(const Jet& o) const {
        if (dim_ != o.dim_) fail(errc::input, "jet dimension mismatch");
    }

    int dim_ = 0;
    double v_ = 0.0;
    std::vector<double> d1_, d2_, d3_;
};

inline Jet exp(const Jet& u) {
    const double e = std::exp(u.value());
    return compose(u, e, e, e, e);
}

inline Jet log(const Jet& u) {
    const double v = u.value();
    return compose(u, std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

inline Jet sin(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    return compose(u, s, c, -s, -c);
}

inline Jet cos(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    return compose(u, c, -s, -c, s);
}

inline Jet sinh(const Jet& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    return compose(u, s, c, s, c);
}

inline Jet cosh(const Jet& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    return compose(u, c, s, c, s);
}

inline Jet tanh(const Jet& u) {
    // t' = 1 - t^2, t'' = -2 t t', t''' = -2 t'^2 - 2 t t''
    const double t = std::tanh(u.value());
    const double t1 = 1.0 - t * t;
    const double t2 = -2.0 * t * t1;
    const double t3 = -2.0 * t1 * t1 - 2.0 * t * t2;
    return compose(u, t, t1, t2, t3);
}

inline Jet sqrt(const Jet& u) {
    const double v = u.value();
    const double s = std::sqrt(v);
    return compose(u, s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v));
}

// integer power by repeated multiplication: valid for any base sign
inline Jet pow_int(const Jet& u, long long e) {
    const int n = u.dim();
    if (e < 0) return reciprocal(pow_int(u, -e));
    Jet acc = Jet::constant(n, 1.0);
    Jet base = u;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

inline Jet pow(const Jet& u, double p) {
    const double r = std::llround(p);
    if (r == p && std::fabs(p) < 64.0) return pow_int(u, std::llround(p));
    const double v = u.value();
    return compose(u, std::pow(v, p), p * std::pow(v, p - 1),
                   p * (p - 1) * std::pow(v, p - 2),
                   p * (p - 1) * (p - 2) * std::pow(v, p - 3));
}

inline Jet pow(const Jet& u, const Jet& e) { return exp(e * log(u)); }

} // namespace lcs
