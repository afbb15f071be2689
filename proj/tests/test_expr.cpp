#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <string>
#include <vector>

#include "lcs/expr.hpp"
#include "lcs/rng.hpp"

using lcs::Jet;
using lcs::Rng;
namespace expr = lcs::expr;

namespace {

Jet eval1(const expr::Ast& ast, double t) {
    const Jet tj = Jet::variable(1, 0, t);
    return ast.eval_jets(std::span<const Jet>(&tj, 1));
}

// random AST generator mirroring what the parser can produce: nonnegative
// literals (negation is a node), known functions only
expr::NodePtr random_node(Rng& rng, const std::vector<std::string>& vars, int depth) {
    auto node = std::make_shared<expr::Node>();
    const double pick = rng.uniform();
    if (depth <= 0 || pick < 0.25) {
        if (rng.uniform() < 0.5) {
            node->kind = expr::NodeKind::number;
            node->number = std::round(rng.uniform(0.0, 9.0) * 4.0) / 4.0;
        } else {
            node->kind = expr::NodeKind::variable;
            node->var_index = static_cast<int>(rng.next() % vars.size());
            node->name = vars[static_cast<std::size_t>(node->var_index)];
        }
        return node;
    }
    if (pick < 0.35) {
        node->kind = expr::NodeKind::negate;
        node->a = random_node(rng, vars, depth - 1);
        return node;
    }
    if (pick < 0.5) {
        node->kind = expr::NodeKind::call;
        const char* fns[] = {"exp", "sin", "cos", "sinh", "cosh", "tanh"};
        node->name = fns[rng.next() % 6];
        node->a = random_node(rng, vars, depth - 1);
        return node;
    }
    const expr::NodeKind ops[] = {expr::NodeKind::add, expr::NodeKind::sub,
                                  expr::NodeKind::mul, expr::NodeKind::div,
                                  expr::NodeKind::pow};
    node->kind = ops[rng.next() % 5];
    node->a = random_node(rng, vars, depth - 1);
    if (node->kind == expr::NodeKind::pow) {
        // keep exponents literal so evaluation stays real
        auto e = std::make_shared<expr::Node>();
        e->kind = expr::NodeKind::number;
        e->number = static_cast<double>(1 + rng.next() % 3);
        node->b = e;
    } else {
        node->b = random_node(rng, vars, depth - 1);
    }
    return node;
}

} // namespace

TEST_CASE("basic parses") {
    const auto ast = expr::parse("exp(t)", {"t"});
    CHECK(ast.print() == "exp(t)");
    CHECK(eval1(ast, 0.0).value() == doctest::Approx(1.0));
}

TEST_CASE("2*t^2+1 with jets at t=3") {
    const auto ast = expr::parse("2*t^2+1", {"t"});
    const Jet r = eval1(ast, 3.0);
    CHECK(r.value() == doctest::Approx(19.0));
    CHECK(r.d1(0) == doctest::Approx(12.0));
    CHECK(r.d2(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("precedence and associativity") {
    CHECK(eval1(expr::parse("2+3*4", {"t"}), 0).value() == doctest::Approx(14.0));
    CHECK(eval1(expr::parse("2*3^2", {"t"}), 0).value() == doctest::Approx(18.0));
    CHECK(eval1(expr::parse("-t^2", {"t"}), 3).value() == doctest::Approx(-9.0));
    CHECK(eval1(expr::parse("(-t)^2", {"t"}), 3).value() == doctest::Approx(9.0));
    CHECK(eval1(expr::parse("2^3^2", {"t"}), 0).value() == doctest::Approx(512.0));
    CHECK(eval1(expr::parse("8/4/2", {"t"}), 0).value() == doctest::Approx(1.0));
    CHECK(eval1(expr::parse("t^-2", {"t"}), 2).value() == doctest::Approx(0.25));
}

TEST_CASE("pow function with two arguments") {
    const auto ast = expr::parse("pow(t,3)", {"t"});
    CHECK(eval1(ast, 2.0).value() == doctest::Approx(8.0));
    CHECK(eval1(ast, -2.0).value() == doctest::Approx(-8.0));
}

TEST_CASE("errors carry byte offsets and name the offender") {
    using lcs::Error;
    CHECK_THROWS_WITH_AS(expr::parse("foo(t)", {"t"}),
                         doctest::Contains("unknown function 'foo'"), Error);
    CHECK_THROWS_WITH_AS(expr::parse("q+1", {"t", "x1"}),
                         doctest::Contains("known: t, x1"), Error);
    CHECK_THROWS_WITH_AS(expr::parse("2*+3", {"t"}), doctest::Contains("offset 2"), Error);
    CHECK_THROWS_AS(expr::parse("pow(t)", {"t"}), Error);
    CHECK_THROWS_AS(expr::parse("sin(t,1)", {"t"}), Error);
    CHECK_THROWS_AS(expr::parse("", {"t"}), Error);
    CHECK_THROWS_AS(expr::parse("(t", {"t"}), Error);
    CHECK_THROWS_AS(expr::parse("t@1", {"t"}), Error);
}

TEST_CASE("round trip: parse(print(ast)) == ast for 100 random trees") {
    const std::vector<std::string> vars{"t", "x1", "x2"};
    Rng rng(42);
    int done = 0;
    while (done < 100) {
        expr::Ast ast(random_node(rng, vars, 4), vars);
        const std::string text = ast.print();
        CAPTURE(text);
        const expr::Ast back = expr::parse(text, vars);
        CHECK(back == ast);
        // and the printed form is stable
        CHECK(back.print() == text);
        ++done;
    }
}

TEST_CASE("jet evaluation through random ASTs matches plain evaluation") {
    const std::vector<std::string> vars{"t", "x1"};
    Rng rng(9);
    for (int rep = 0; rep < 40; ++rep) {
        expr::Ast ast(random_node(rng, vars, 3), vars);
        const std::vector<double> p{rng.uniform(0.3, 0.9), rng.uniform(0.3, 0.9)};
        std::vector<Jet> c{Jet::variable(2, 0, p[0]), Jet::variable(2, 1, p[1])};
        const Jet j = ast.eval_jets(c);
        const double direct = ast.eval<double>(std::span<const double>(p.data(), 2));
        if (std::isfinite(direct) && std::fabs(direct) < 1e6)
            CHECK(j.value() == doctest::Approx(direct).epsilon(1e-12));
    }
}
