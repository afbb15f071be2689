#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "lcs/jet.hpp"
#include "lcs/rng.hpp"

using lcs::Jet;
using lcs::Rng;
using Fn = std::function<double(const std::vector<double>&)>;

namespace {

// independent central-difference oracle, deliberately not the library's FD
// engine: gradient at step 1e-5, Hessian at a roundoff-balanced step
double fd_grad(const Fn& f, std::vector<double> p, int i, double h = 1e-5) {
    p[i] += h;
    const double a = f(p);
    p[i] -= 2 * h;
    const double b = f(p);
    return (a - b) / (2 * h);
}

double fd_hess(const Fn& f, std::vector<double> p, int i, int j, double h = 2e-4) {
    if (i == j) {
        const double c = f(p);
        p[i] += h;
        const double a = f(p);
        p[i] -= 2 * h;
        const double b = f(p);
        return (a - 2 * c + b) / (h * h);
    }
    std::vector<double> q = p;
    q[i] = p[i] + h; q[j] = p[j] + h;
    const double pp = f(q);
    q[j] = p[j] - h;
    const double pm = f(q);
    q[i] = p[i] - h; q[j] = p[j] + h;
    const double mp = f(q);
    q[j] = p[j] - h;
    const double mm = f(q);
    return (pp - pm - mp + mm) / (4 * h * h);
}

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::vector<Jet> seed(const std::vector<double>& p) {
    std::vector<Jet> c;
    for (std::size_t i = 0; i < p.size(); ++i)
        c.push_back(Jet::variable(static_cast<int>(p.size()), static_cast<int>(i), p[i]));
    return c;
}

} // namespace

TEST_CASE("constant jets carry no derivatives") {
    const Jet c = Jet::constant(3, 4.5);
    CHECK(c.value() == 4.5);
    for (int i = 0; i < 3; ++i) {
        CHECK(c.d1(i) == 0.0);
        for (int j = 0; j < 3; ++j) CHECK(c.d2(i, j) == 0.0);
    }
}

TEST_CASE("polynomial jet: t^2 at t=3") {
    const Jet t = Jet::variable(1, 0, 3.0);
    const Jet r = t * t;
    CHECK(r.value() == doctest::Approx(9.0));
    CHECK(r.d1(0) == doctest::Approx(6.0));
    CHECK(r.d2(0, 0) == doctest::Approx(2.0));
    CHECK(r.d3(0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("exp jet at 0") {
    const Jet t = Jet::variable(1, 0, 0.0);
    const Jet r = exp(t);
    CHECK(r.value() == doctest::Approx(1.0));
    CHECK(r.d1(0) == doctest::Approx(1.0));
    CHECK(r.d2(0, 0) == doctest::Approx(1.0));
    CHECK(r.d3(0, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("division and reciprocal chain rule") {
    const Jet t = Jet::variable(1, 0, 2.0);
    const Jet r = 1.0 / t; // value 1/2, d1 -1/4, d2 1/4, d3 -3/8
    CHECK(r.value() == doctest::Approx(0.5));
    CHECK(r.d1(0) == doctest::Approx(-0.25));
    CHECK(r.d2(0, 0) == doctest::Approx(0.25));
    CHECK(r.d3(0, 0, 0) == doctest::Approx(-0.375));
}

TEST_CASE("partial extraction shifts levels") {
    // f = t^3 x: d/dt f = 3 t^2 x with its own grad/hess
    const int n = 2;
    std::vector<double> p{1.3, 0.7};
    auto c = seed(p);
    const Jet f = c[0] * c[0] * c[0] * c[1];
    const Jet ft = f.partial(0);
    CHECK(ft.value() == doctest::Approx(3 * 1.3 * 1.3 * 0.7));
    CHECK(ft.d1(0) == doctest::Approx(6 * 1.3 * 0.7));
    CHECK(ft.d1(1) == doctest::Approx(3 * 1.3 * 1.3));
    CHECK(ft.d2(0, 1) == doctest::Approx(6 * 1.3));
    (void)n;
}

TEST_CASE("hessian symmetry for random compositions") {
    Rng rng(2024);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> p{rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5),
                              rng.uniform(0.2, 1.5)};
        auto c = seed(p);
        const Jet f = sin(c[0] * c[1]) + exp(c[2] * 0.3) * cosh(c[0]) +
                      pow(c[1] + 2.0, 2.5) / (c[2] + 1.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(f.d2(i, j) == doctest::Approx(f.d2(j, i)).epsilon(1e-12));
                for (int k = 0; k < 3; ++k) {
                    CHECK(f.d3(i, j, k) == doctest::Approx(f.d3(j, i, k)).epsilon(1e-12));
                    CHECK(f.d3(i, j, k) == doctest::Approx(f.d3(i, k, j)).epsilon(1e-12));
                }
            }
    }
}

TEST_CASE("jets agree with finite differences over random inputs") {
    // every built-in plus compositions, >= 100 random evaluation points
    struct Named {
        const char* name;
        std::function<Jet(const std::vector<Jet>&)> jet;
        Fn plain;
    };
    const std::vector<Named> cases = {
        {"exp", [](const std::vector<Jet>& c) { return exp(c[0]); },
         [](const std::vector<double>& p) { return std::exp(p[0]); }},
        {"log", [](const std::vector<Jet>& c) { return log(c[0] + 1.5); },
         [](const std::vector<double>& p) { return std::log(p[0] + 1.5); }},
        {"sin", [](const std::vector<Jet>& c) { return sin(c[0]); },
         [](const std::vector<double>& p) { return std::sin(p[0]); }},
        {"cos", [](const std::vector<Jet>& c) { return cos(c[0]); },
         [](const std::vector<double>& p) { return std::cos(p[0]); }},
        {"sinh", [](const std::vector<Jet>& c) { return sinh(c[0]); },
         [](const std::vector<double>& p) { return std::sinh(p[0]); }},
        {"cosh", [](const std::vector<Jet>& c) { return cosh(c[0]); },
         [](const std::vector<double>& p) { return std::cosh(p[0]); }},
        {"tanh", [](const std::vector<Jet>& c) { return tanh(c[0]); },
         [](const std::vector<double>& p) { return std::tanh(p[0]); }},
        {"sqrt", [](const std::vector<Jet>& c) { return sqrt(c[0] + 2.0); },
         [](const std::vector<double>& p) { return std::sqrt(p[0] + 2.0); }},
        {"pow", [](const std::vector<Jet>& c) { return pow(c[0] + 2.0, 1.7); },
         [](const std::vector<double>& p) { return std::pow(p[0] + 2.0, 1.7); }},
        {"mix1",
         [](const std::vector<Jet>& c) { return exp(c[0] * c[1]) * sin(c[1] + c[0] * c[0]); },
         [](const std::vector<double>& p) {
             return std::exp(p[0] * p[1]) * std::sin(p[1] + p[0] * p[0]);
         }},
        {"mix2",
         [](const std::vector<Jet>& c) {
             return tanh(c[0]) / (cosh(c[1]) + 0.5) + pow_int(c[0] - c[1], 3);
         },
         [](const std::vector<double>& p) {
             return std::tanh(p[0]) / (std::cosh(p[1]) + 0.5) +
                    std::pow(p[0] - p[1], 3.0);
         }},
        {"mix3",
         [](const std::vector<Jet>& c) { return log(c[0] * c[0] + c[1] * c[1] + 0.7); },
         [](const std::vector<double>& p) {
             return std::log(p[0] * p[0] + p[1] * p[1] + 0.7);
         }},
    };

    Rng rng(7);
    int evaluations = 0;
    for (const auto& fn : cases) {
        for (int rep = 0; rep < 12; ++rep) {
            std::vector<double> p{rng.uniform(0.1, 1.2), rng.uniform(0.1, 1.2)};
            auto c = seed(p);
            const Jet j = fn.jet(c);
            CAPTURE(fn.name);
            CAPTURE(p[0]);
            CAPTURE(p[1]);
            for (int i = 0; i < 2; ++i)
                CHECK(close_rel(j.d1(i), fd_grad(fn.plain, p, i), 1e-5));
            for (int i = 0; i < 2; ++i)
                for (int k = i; k < 2; ++k)
                    CHECK(close_rel(j.d2(i, k), fd_hess(fn.plain, p, i, k), 1e-5));
            ++evaluations;
        }
    }
    CHECK(evaluations >= 100);
}

TEST_CASE("integer powers accept negative bases") {
    const Jet t = Jet::variable(1, 0, -2.0);
    const Jet r = pow(t, 3.0);
    CHECK(r.value() == doctest::Approx(-8.0));
    CHECK(r.d1(0) == doctest::Approx(12.0));
    CHECK(r.d2(0, 0) == doctest::Approx(-12.0));
}

TEST_CASE("dimension mismatch is rejected") {
    const Jet a = Jet::variable(2, 0, 1.0);
    const Jet b = Jet::variable(3, 0, 1.0);
    CHECK_THROWS_AS(a + b, lcs::Error);
}
