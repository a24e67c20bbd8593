#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eopt/errors.hpp"

namespace eopt {

/// Parsed weight function w(x): an immutable expression tree over real
/// literals, the variable x, the operators + - * / ^ (with ^ right
/// associative and unary minus binding below it), and exp().
///
/// Grammar:
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := unary ('^' factor)?
///   unary   := '-' unary | primary
///   primary := number | 'x' | 'exp' '(' expr ')' | '(' expr ')'
///
/// Evaluation is pure; the same tree at the same x always yields the same
/// bits. 0^0 evaluates to 1. A negative base with a fractional exponent,
/// division by zero, and any non-finite intermediate are distinct EvalErrors.
class WeightFn {
    enum class Op { number, variable, add, sub, mul, div, pow, neg, exp_fn };

    struct Node {
        Op op;
        double value = 0.0;
        int lhs = -1;
        int rhs = -1;
    };

public:
    /// Default-constructed weight is the constant 1.
    WeightFn() : nodes_{{Op::number, 1.0, -1, -1}}, root_(0), src_("1") {}

    static WeightFn parse(std::string_view src) {
        Parser p{src};
        WeightFn w;
        w.src_ = std::string(src);
        w.root_ = p.parse_expr(w.nodes_);
        p.skip_ws();
        if (!p.done()) p.fail("trailing input", "operator or end of input");
        return w;
    }

    double operator()(double x) const { return eval_node(root_, x); }

    const std::string& source() const { return src_; }

    /// Fully parenthesized re-serialization; parsing it reproduces the tree.
    std::string canonical_text() const { return emit(root_); }

private:
    double eval_node(int idx, double x) const {
        const Node& n = nodes_[static_cast<std::size_t>(idx)];
        switch (n.op) {
            case Op::number: return n.value;
            case Op::variable: return x;
            case Op::neg: return -eval_node(n.lhs, x);
            case Op::exp_fn: {
                const double v = std::exp(eval_node(n.lhs, x));
                if (!std::isfinite(v)) throw EvalError("weight evaluation produced a non-finite value");
                return v;
            }
            default: break;
        }
        const double a = eval_node(n.lhs, x);
        const double b = eval_node(n.rhs, x);
        double v = 0.0;
        switch (n.op) {
            case Op::add: v = a + b; break;
            case Op::sub: v = a - b; break;
            case Op::mul: v = a * b; break;
            case Op::div:
                if (b == 0.0) throw EvalError("division by zero in weight expression");
                v = a / b;
                break;
            case Op::pow:
                if (a == 0.0 && b == 0.0) return 1.0;
                if (a < 0.0 && b != std::floor(b))
                    throw EvalError("negative base with fractional exponent in weight expression");
                v = std::pow(a, b);
                break;
            default: break;
        }
        if (!std::isfinite(v)) throw EvalError("weight evaluation produced a non-finite value");
        return v;
    }

    std::string emit(int idx) const {
        const Node& n = nodes_[static_cast<std::size_t>(idx)];
        char buf[40];
        switch (n.op) {
            case Op::number:
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                return buf;
            case Op::variable: return "x";
            case Op::neg: return "(-" + emit(n.lhs) + ")";
            case Op::exp_fn: return "exp(" + emit(n.lhs) + ")";
            case Op::add: return "(" + emit(n.lhs) + "+" + emit(n.rhs) + ")";
            case Op::sub: return "(" + emit(n.lhs) + "-" + emit(n.rhs) + ")";
            case Op::mul: return "(" + emit(n.lhs) + "*" + emit(n.rhs) + ")";
            case Op::div: return "(" + emit(n.lhs) + "/" + emit(n.rhs) + ")";
            case Op::pow: return "(" + emit(n.lhs) + "^" + emit(n.rhs) + ")";
        }
        return {};
    }

    struct Parser {
        std::string_view s;
        std::size_t pos = 0;

        explicit Parser(std::string_view src) : s(src) {}

        bool done() const { return pos >= s.size(); }
        char peek() const { return done() ? '\0' : s[pos]; }

        void skip_ws() {
            while (!done() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }

        [[noreturn]] void fail(const std::string& what, const std::string& expected) const {
            throw ParseError(what, pos, expected);
        }

        bool accept(char c) {
            skip_ws();
            if (peek() == c) {
                ++pos;
                return true;
            }
            return false;
        }

        int parse_expr(std::vector<Node>& out) {
            int lhs = parse_term(out);
            for (;;) {
                skip_ws();
                if (accept('+'))
                    lhs = push(out, {Op::add, 0.0, lhs, parse_term(out)});
                else if (accept('-'))
                    lhs = push(out, {Op::sub, 0.0, lhs, parse_term(out)});
                else
                    return lhs;
            }
        }

        int parse_term(std::vector<Node>& out) {
            int lhs = parse_factor(out);
            for (;;) {
                skip_ws();
                if (accept('*'))
                    lhs = push(out, {Op::mul, 0.0, lhs, parse_factor(out)});
                else if (accept('/'))
                    lhs = push(out, {Op::div, 0.0, lhs, parse_factor(out)});
                else
                    return lhs;
            }
        }

        int parse_factor(std::vector<Node>& out) {
            int base = parse_unary(out);
            if (accept('^')) return push(out, {Op::pow, 0.0, base, parse_factor(out)});
            return base;
        }

        int parse_unary(std::vector<Node>& out) {
            if (accept('-')) return push(out, {Op::neg, 0.0, parse_unary(out), -1});
            return parse_primary(out);
        }

        int parse_primary(std::vector<Node>& out) {
            skip_ws();
            if (done()) fail("unexpected end of input", "number, 'x', 'exp', or '('");
            const char c = peek();
            if (c == '(') {
                ++pos;
                int e = parse_expr(out);
                if (!accept(')')) fail("unbalanced parenthesis", "')'");
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number(out);
            if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t start = pos;
                while (!done() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
                const std::string_view ident = s.substr(start, pos - start);
                if (ident == "x") return push(out, {Op::variable, 0.0, -1, -1});
                if (ident == "exp") {
                    if (!accept('(')) fail("exp requires parentheses", "'('");
                    int e = parse_expr(out);
                    if (!accept(')')) fail("unbalanced parenthesis", "')'");
                    return push(out, {Op::exp_fn, 0.0, e, -1});
                }
                pos = start;
                throw ParseError("unknown identifier '" + std::string(ident) + "'", start,
                                 "'x' or 'exp'");
            }
            fail(std::string("unexpected character '") + c + "'", "number, 'x', 'exp', or '('");
        }

        int parse_number(std::vector<Node>& out) {
            const std::size_t start = pos;
            while (!done() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (!done() && s[pos] == '.') {
                ++pos;
                while (!done() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            }
            if (pos == start || (pos == start + 1 && s[start] == '.'))
                fail("malformed number", "digits");
            if (!done() && (s[pos] == 'e' || s[pos] == 'E')) {
                std::size_t mark = pos++;
                if (!done() && (s[pos] == '+' || s[pos] == '-')) ++pos;
                if (done() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                    pos = mark;  // 'e' belonged to something else; not a valid exponent
                else
                    while (!done() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            }
            const double v = std::strtod(std::string(s.substr(start, pos - start)).c_str(), nullptr);
            return push(out, {Op::number, v, -1, -1});
        }

        static int push(std::vector<Node>& out, Node n) {
            out.push_back(n);
            return static_cast<int>(out.size()) - 1;
        }
    };

    std::vector<Node> nodes_;
    int root_ = -1;
    std::string src_;
};

struct PositivityVerdict {
    bool pass = false;
    double offending_x = 0.0;  // meaningful only when pass is false
    std::string reason;
};

/// Samples w on a uniform grid strictly inside (a, b) (offset half a step
/// from each endpoint) and passes iff every sample is finite and positive.
inline PositivityVerdict positivity_check(const WeightFn& w, double a, double b, int grid = 10001) {
    if (grid < 2) throw std::domain_error("positivity_check: grid must be >= 2");
    const double step = (b - a) / grid;
    for (int i = 0; i < grid; ++i) {
        const double x = a + (i + 0.5) * step;
        double v;
        try {
            v = w(x);
        } catch (const EvalError& e) {
            return {false, x, e.what()};
        }
        if (!(v > 0.0) || !std::isfinite(v))
            return {false, x, "weight is not strictly positive"};
    }
    return {true, 0.0, {}};
}

/// Recognizes the weight texts whose E-optimal designs admit the closed-form
/// Jacobi construction: (1-x)^alpha (1+x)^beta with alpha, beta in {0, 1}.
/// Matching is by a normalized-source alias list, not symbolic equality.
inline std::optional<std::pair<int, int>> jacobi_weight_exponents(const WeightFn& w) {
    std::string t;
    for (char c : w.source())
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t == "1") return std::make_pair(0, 0);
    if (t == "1-x") return std::make_pair(1, 0);
    if (t == "1+x" || t == "x+1") return std::make_pair(0, 1);
    if (t == "(1-x)*(1+x)" || t == "(1+x)*(1-x)") return std::make_pair(1, 1);
    return std::nullopt;
}

}  // namespace eopt
