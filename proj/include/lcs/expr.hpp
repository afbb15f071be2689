#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "lcs/error.hpp"
#include "lcs/jet.hpp"

// Scalar-field expressions: the textual form warping functions, fiber metric
// entries and immersion components take in scenario files.
//
// Grammar (precedence low to high): '+'/'-', '*'/'/', unary '-', '^'
// (right-associative), atoms. Functions: exp log sin cos sinh cosh tanh sqrt
// (one argument) and pow (two arguments).
namespace lcs::expr {

enum class NodeKind { number, variable, negate, add, sub, mul, div, pow, call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double number = 0.0;          // number
    int var_index = -1;           // variable
    std::string name;             // variable or call
    NodePtr a, b;                 // operands (call: a, b as args)
};

class Ast {
public:
    Ast() = default;
    Ast(NodePtr root, std::vector<std::string> vars)
        : root_(std::move(root)), vars_(std::move(vars)) {}

    const NodePtr& root() const { return root_; }
    const std::vector<std::string>& variables() const { return vars_; }
    bool valid() const { return root_ != nullptr; }

    template <typename S>
    S eval(std::span<const S> coords) const;

    Jet eval_jets(std::span<const Jet> coords) const { return eval<Jet>(coords); }

    std::string print() const;

    friend bool operator==(const Ast& x, const Ast& y) {
        return node_equal(x.root_.get(), y.root_.get());
    }

private:
    static bool node_equal(const Node* x, const Node* y);

    NodePtr root_;
    std::vector<std::string> vars_;
};

namespace detail {

struct Token {
    enum Type { number, ident, op, lparen, rparen, comma, end } type;
    std::string text;
    double value = 0.0;
    std::size_t offset = 0;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { ++i; continue; }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.'))
                ++j;
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                    ++k;
                    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                    j = k;
                }
            }
            double v = 0.0;
            const auto res = std::from_chars(text.data() + i, text.data() + j, v);
            if (res.ec != std::errc() || res.ptr != text.data() + j)
                fail(errc::syntax, "bad numeric literal at offset " + std::to_string(i));
            out.push_back({Token::number, std::string(text.substr(i, j - i)), v, i});
            i = j;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({Token::ident, std::string(text.substr(i, j - i)), 0.0, i});
            i = j;
            continue;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                out.push_back({Token::op, std::string(1, c), 0.0, i}); break;
            case '(': out.push_back({Token::lparen, "(", 0.0, i}); break;
            case ')': out.push_back({Token::rparen, ")", 0.0, i}); break;
            case ',': out.push_back({Token::comma, ",", 0.0, i}); break;
            default:
                fail(errc::syntax,
                     "unexpected character '" + std::string(1, c) + "' at offset " +
                         std::to_string(i));
        }
        ++i;
    }
    out.push_back({Token::end, "", 0.0, text.size()});
    return out;
}

struct Parser {
    const std::vector<Token>& toks;
    const std::vector<std::string>& vars;
    std::size_t pos = 0;

    const Token& peek() const { return toks[pos]; }
    Token take() { return toks[pos++]; }

    [[noreturn]] void error(const std::string& what) const {
        fail(errc::syntax, what + " at offset " + std::to_string(peek().offset));
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (peek().type == Token::op && (peek().text == "+" || peek().text == "-")) {
            const bool add = take().text == "+";
            NodePtr rhs = parse_term();
            auto n = std::make_shared<Node>();
            n->kind = add ? NodeKind::add : NodeKind::sub;
            n->a = lhs; n->b = rhs;
            lhs = n;
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (peek().type == Token::op && (peek().text == "*" || peek().text == "/")) {
            const bool mul = take().text == "*";
            NodePtr rhs = parse_unary();
            auto n = std::make_shared<Node>();
            n->kind = mul ? NodeKind::mul : NodeKind::div;
            n->a = lhs; n->b = rhs;
            lhs = n;
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (peek().type == Token::op && peek().text == "-") {
            take();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::negate;
            n->a = parse_unary();
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (peek().type == Token::op && peek().text == "^") {
            take();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::pow;
            n->a = base;
            n->b = parse_unary(); // right-associative, exponent may be negated
            return n;
        }
        return base;
    }

    NodePtr parse_atom() {
        const Token t = take();
        if (t.type == Token::number) {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::number;
            n->number = t.value;
            return n;
        }
        if (t.type == Token::lparen) {
            NodePtr inner = parse_expr();
            if (peek().type != Token::rparen) error("expected ')'");
            take();
            return inner;
        }
        if (t.type == Token::ident) {
            if (peek().type == Token::lparen) return parse_call(t);
            for (std::size_t k = 0; k < vars.size(); ++k)
                if (vars[k] == t.text) {
                    auto n = std::make_shared<Node>();
                    n->kind = NodeKind::variable;
                    n->var_index = static_cast<int>(k);
                    n->name = t.text;
                    return n;
                }
            std::string known;
            for (const auto& v : vars) { if (!known.empty()) known += ", "; known += v; }
            fail(errc::syntax, "unknown identifier '" + t.text + "' at offset " +
                                   std::to_string(t.offset) + " (known: " + known + ")");
        }
        fail(errc::syntax, "unexpected token '" + t.text + "' at offset " +
                               std::to_string(t.offset));
    }

    NodePtr parse_call(const Token& name) {
        static const char* unary_fns[] = {"exp", "log", "sin", "cos",
                                          "sinh", "cosh", "tanh", "sqrt"};
        bool is_unary = false;
        for (const char* f : unary_fns) is_unary |= name.text == f;
        const bool is_pow = name.text == "pow";
        if (!is_unary && !is_pow)
            fail(errc::syntax, "unknown function '" + name.text + "' at offset " +
                                   std::to_string(name.offset));
        take(); // '('
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::call;
        n->name = name.text;
        n->a = parse_expr();
        if (is_pow) {
            if (peek().type != Token::comma)
                fail(errc::syntax, "pow expects 2 arguments at offset " +
                                       std::to_string(name.offset));
            take();
            n->b = parse_expr();
        } else if (peek().type == Token::comma) {
            fail(errc::syntax, "'" + name.text + "' expects 1 argument at offset " +
                                   std::to_string(name.offset));
        }
        if (peek().type != Token::rparen) error("expected ')'");
        take();
        return n;
    }
};

template <typename S>
S eval_node(const Node* n, std::span<const S> coords) {
    using std::exp; using std::log; using std::sin; using std::cos;
    using std::sinh; using std::cosh; using std::tanh; using std::sqrt; using std::pow;
    switch (n->kind) {
        case NodeKind::number:
            if constexpr (std::is_same_v<S, double>) return n->number;
            else return S::constant(coords.empty() ? 1 : coords[0].dim(), n->number);
        case NodeKind::variable:
            return coords[static_cast<std::size_t>(n->var_index)];
        case NodeKind::negate: return -eval_node(n->a.get(), coords);
        case NodeKind::add:
            return eval_node(n->a.get(), coords) + eval_node(n->b.get(), coords);
        case NodeKind::sub:
            return eval_node(n->a.get(), coords) - eval_node(n->b.get(), coords);
        case NodeKind::mul:
            return eval_node(n->a.get(), coords) * eval_node(n->b.get(), coords);
        case NodeKind::div:
            return eval_node(n->a.get(), coords) / eval_node(n->b.get(), coords);
        case NodeKind::pow: {
            // literal exponents keep negative bases legal (integral powers)
            if (n->b->kind == NodeKind::number) return pow(eval_node(n->a.get(), coords), n->b->number);
            if (n->b->kind == NodeKind::negate && n->b->a->kind == NodeKind::number)
                return pow(eval_node(n->a.get(), coords), -n->b->a->number);
            return pow(eval_node(n->a.get(), coords), eval_node(n->b.get(), coords));
        }
        case NodeKind::call: {
            S x = eval_node(n->a.get(), coords);
            if (n->name == "exp") return exp(x);
            if (n->name == "log") return log(x);
            if (n->name == "sin") return sin(x);
            if (n->name == "cos") return cos(x);
            if (n->name == "sinh") return sinh(x);
            if (n->name == "cosh") return cosh(x);
            if (n->name == "tanh") return tanh(x);
            if (n->name == "sqrt") return sqrt(x);
            if (n->b->kind == NodeKind::number) return pow(x, n->b->number);
            return pow(x, eval_node(n->b.get(), coords));
        }
    }
    fail(errc::syntax, "corrupt expression node");
}

inline int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::add: case NodeKind::sub: return 10;
        case NodeKind::mul: case NodeKind::div: return 20;
        case NodeKind::negate: return 30;
        case NodeKind::pow: return 40;
        default: return 100;
    }
}

inline std::string print_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void print_node(const Node* n, std::string& out) {
    const int prec = precedence(n->kind);
    auto child = [&](const Node* c, bool needs_paren) {
        if (needs_paren) out += '(';
        print_node(c, out);
        if (needs_paren) out += ')';
    };
    switch (n->kind) {
        case NodeKind::number: out += print_number(n->number); return;
        case NodeKind::variable: out += n->name; return;
        case NodeKind::negate:
            out += '-';
            child(n->a.get(), precedence(n->a->kind) < prec);
            return;
        case NodeKind::add: case NodeKind::sub:
        case NodeKind::mul: case NodeKind::div: {
            child(n->a.get(), precedence(n->a->kind) < prec);
            out += (n->kind == NodeKind::add ? "+" : n->kind == NodeKind::sub ? "-" :
                    n->kind == NodeKind::mul ? "*" : "/");
            // left-associative: parenthesize right child at equal precedence
            child(n->b.get(), precedence(n->b->kind) <= prec);
            return;
        }
        case NodeKind::pow:
            // right-associative: parenthesize left child at equal precedence
            child(n->a.get(), precedence(n->a->kind) <= prec);
            out += '^';
            child(n->b.get(), precedence(n->b->kind) < prec);
            return;
        case NodeKind::call:
            out += n->name;
            out += '(';
            print_node(n->a.get(), out);
            if (n->b) { out += ','; print_node(n->b.get(), out); }
            out += ')';
            return;
    }
}

} // namespace detail

inline Ast parse(std::string_view text, std::vector<std::string> variables) {
    if (text.empty()) fail(errc::syntax, "empty expression");
    const auto toks = detail::tokenize(text);
    detail::Parser p{toks, variables, 0};
    NodePtr root = p.parse_expr();
    if (p.peek().type != detail::Token::end)
        fail(errc::syntax, "trailing input at offset " + std::to_string(p.peek().offset));
    return Ast(root, std::move(variables));
}

template <typename S>
S Ast::eval(std::span<const S> coords) const {
    return detail::eval_node<S>(root_.get(), coords);
}

inline std::string Ast::print() const {
    std::string out;
    detail::print_node(root_.get(), out);
    return out;
}

inline bool Ast::node_equal(const Node* x, const Node* y) {
    if (x == y) return true;
    if (!x || !y || x->kind != y->kind) return false;
    switch (x->kind) {
        case NodeKind::number: return x->number == y->number;
        case NodeKind::variable: return x->var_index == y->var_index && x->name == y->name;
        case NodeKind::negate: return node_equal(x->a.get(), y->a.get());
        case NodeKind::call:
            if (x->name != y->name) return false;
            [[fallthrough]];
        default:
            return node_equal(x->a.get(), y->a.get()) &&
                   (x->b == nullptr) == (y->b == nullptr) &&
                   (x->b == nullptr || node_equal(x->b.get(), y->b.get()));
    }
}

} // namespace lcs::expr
