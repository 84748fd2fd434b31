#include "flowshoot/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "flowshoot/errors.hpp"

namespace flowshoot {

using Op = Expr::Op;

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(int index) {
    if (index < 0 || index > 2) throw InvalidArgument("variable index must be 0, 1 or 2");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->index = index;
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::make_shared<const Expr>(std::move(lhs));
    n->rhs = std::make_shared<const Expr>(std::move(rhs));
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::make_shared<const Expr>(std::move(arg));
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->index = exponent;
    n->lhs = std::make_shared<const Expr>(std::move(base));
    return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
        case Op::Const: return a.constant_value() == b.constant_value();
        case Op::Var: return a.variable_index() == b.variable_index();
        case Op::Pow: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
        default: return a.lhs() == b.lhs();
    }
}

namespace {

double int_power(double b, int n) {
    if (n < 0) return 1.0 / int_power(b, -n);
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
    return v;
}

}  // namespace

double Expr::evaluate(const Vec3& x) const {
    switch (op()) {
        case Op::Const: return constant_value();
        case Op::Var: return x[variable_index()];
        case Op::Add: return checked(lhs().evaluate(x) + rhs().evaluate(x), "+");
        case Op::Sub: return checked(lhs().evaluate(x) - rhs().evaluate(x), "-");
        case Op::Mul: return checked(lhs().evaluate(x) * rhs().evaluate(x), "*");
        case Op::Div: {
            const double den = rhs().evaluate(x);
            if (den == 0.0) throw EvalError("division by zero");
            return checked(lhs().evaluate(x) / den, "/");
        }
        case Op::Neg: return -lhs().evaluate(x);
        case Op::Pow: {
            const double b = lhs().evaluate(x);
            if (b == 0.0 && exponent() < 0) throw EvalError("division by zero in negative power");
            return checked(int_power(b, exponent()), "^");
        }
        case Op::Exp: return checked(std::exp(lhs().evaluate(x)), "exp");
        case Op::Sin: return std::sin(lhs().evaluate(x));
        case Op::Cos: return std::cos(lhs().evaluate(x));
        case Op::Sqrt: {
            const double a = lhs().evaluate(x);
            if (a < 0.0) throw EvalError("sqrt of a negative number");
            return std::sqrt(a);
        }
        case Op::Tanh: return std::tanh(lhs().evaluate(x));
    }
    return 0.0;
}


// ---------------------------------------------------------------------------
// Differentiation. The builders fold constants and drop 0/1 identities so the
// derivative trees stay small enough to evaluate every integration stage.

namespace {

bool is_const(const Expr& e, double v) { return e.op() == Op::Const && e.constant_value() == v; }

Expr add(Expr a, Expr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a.op() == Op::Const && b.op() == Op::Const) return Expr::constant(a.constant_value() + b.constant_value());
    return Expr::binary(Op::Add, std::move(a), std::move(b));
}

Expr neg(Expr a) {
    if (a.op() == Op::Const) return Expr::constant(-a.constant_value());
    if (a.op() == Op::Neg) return a.lhs();
    return Expr::unary(Op::Neg, std::move(a));
}

Expr sub(Expr a, Expr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(std::move(b));
    if (a.op() == Op::Const && b.op() == Op::Const) return Expr::constant(a.constant_value() - b.constant_value());
    return Expr::binary(Op::Sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a.op() == Op::Const && b.op() == Op::Const) return Expr::constant(a.constant_value() * b.constant_value());
    return Expr::binary(Op::Mul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
    if (is_const(a, 0.0)) return Expr::constant(0.0);
    if (is_const(b, 1.0)) return a;
    return Expr::binary(Op::Div, std::move(a), std::move(b));
}

Expr pow_int(Expr base, int n) {
    if (n == 0) return Expr::constant(1.0);
    if (n == 1) return base;
    return Expr::power(std::move(base), n);
}

}  // namespace

Expr Expr::derivative(int index) const {
    switch (op()) {
        case Op::Const: return constant(0.0);
        case Op::Var: return constant(variable_index() == index ? 1.0 : 0.0);
        case Op::Add: return add(lhs().derivative(index), rhs().derivative(index));
        case Op::Sub: return sub(lhs().derivative(index), rhs().derivative(index));
        case Op::Mul:
            return add(mul(lhs().derivative(index), rhs()), mul(lhs(), rhs().derivative(index)));
        case Op::Div: {
            const Expr num = sub(mul(lhs().derivative(index), rhs()), mul(lhs(), rhs().derivative(index)));
            return div(num, pow_int(rhs(), 2));
        }
        case Op::Neg: return neg(lhs().derivative(index));
        case Op::Pow: {
            const int n = exponent();
            if (n == 0) return constant(0.0);
            return mul(mul(constant(n), pow_int(lhs(), n - 1)), lhs().derivative(index));
        }
        case Op::Exp: return mul(*this, lhs().derivative(index));
        case Op::Sin: return mul(unary(Op::Cos, lhs()), lhs().derivative(index));
        case Op::Cos: return mul(neg(unary(Op::Sin, lhs())), lhs().derivative(index));
        case Op::Sqrt: return div(lhs().derivative(index), mul(constant(2.0), *this));
        case Op::Tanh: return mul(sub(constant(1.0), pow_int(*this, 2)), lhs().derivative(index));
    }
    return constant(0.0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Op op) {
    switch (op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        default: return 5;
    }
}

const char* function_name(Op op) {
    switch (op) {
        case Op::Exp: return "exp";
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Sqrt: return "sqrt";
        case Op::Tanh: return "tanh";
        default: return nullptr;
    }
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string wrap(const Expr& e, int min_prec) {
    std::string s = e.to_string();
    // Negative constants only arise from differentiation; print them as a
    // parenthesized negation.
    const bool negative_literal = e.op() == Op::Const && std::signbit(e.constant_value());
    if (precedence(e.op()) < min_prec || (negative_literal && min_prec > 1)) return "(" + s + ")";
    return s;
}

}  // namespace

std::string Expr::to_string() const {
    switch (op()) {
        case Op::Const: return format_number(constant_value());
        case Op::Var: return "x" + std::to_string(variable_index() + 1);
        case Op::Add: return wrap(lhs(), 1) + " + " + wrap(rhs(), 2);
        case Op::Sub: return wrap(lhs(), 1) + " - " + wrap(rhs(), 2);
        case Op::Mul: return wrap(lhs(), 2) + "*" + wrap(rhs(), 3);
        case Op::Div: return wrap(lhs(), 2) + "/" + wrap(rhs(), 3);
        case Op::Neg: return "-" + wrap(lhs(), 3);
        case Op::Pow: return wrap(lhs(), 5) + "^" + std::to_string(exponent());
        default: return std::string(function_name(op())) + "(" + lhs().to_string() + ")";
    }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse() {
        Expr e = sum();
        skip_space();
        if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr sum() {
        Expr e = product();
        for (;;) {
            if (accept('+'))
                e = Expr::binary(Op::Add, e, product());
            else if (accept('-'))
                e = Expr::binary(Op::Sub, e, product());
            else
                return e;
        }
    }

    Expr product() {
        Expr e = unary();
        for (;;) {
            if (accept('*'))
                e = Expr::binary(Op::Mul, e, unary());
            else if (accept('/'))
                e = Expr::binary(Op::Div, e, unary());
            else
                return e;
        }
    }

    Expr unary() {
        if (accept('-')) return Expr::unary(Op::Neg, unary());
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return Expr::power(base, exponent());
        return base;
    }

    // Integer literal exponent, right associative: 2^3^2 folds to 2^(3^2).
    int exponent() {
        skip_space();
        bool negative = false;
        if (pos_ < src_.size() && src_[pos_] == '-') {
            negative = true;
            ++pos_;
            skip_space();
        }
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be an integer literal");
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
            fail("exponent must be an integer literal");
        long value = std::strtol(std::string(src_.substr(start, pos_ - start)).c_str(), nullptr, 10);
        if (accept('^')) {
            const int inner = exponent();
            if (inner < 0) fail("nested negative exponent is not an integer");
            long folded = 1;
            for (int i = 0; i < inner; ++i) {
                folded *= value;
                if (folded > 1'000'000) fail("exponent too large");
            }
            value = folded;
        }
        if (value > 1'000'000) fail("exponent too large");
        return static_cast<int>(negative ? -value : value);
    }

    Expr primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (accept('(')) {
            Expr e = sum();
            expect(')');
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            const std::size_t s = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return pos_ - s;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) fail("malformed number");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail("malformed exponent in number");
        }
        const std::string text(src_.substr(start, pos_ - start));
        const double v = std::strtod(text.c_str(), nullptr);
        if (!std::isfinite(v)) {
            pos_ = start;
            fail("number out of range");
        }
        return Expr::constant(v);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "x1") return Expr::variable(0);
        if (name == "x2") return Expr::variable(1);
        if (name == "x3") return Expr::variable(2);
        Op f;
        if (name == "exp")
            f = Op::Exp;
        else if (name == "sin")
            f = Op::Sin;
        else if (name == "cos")
            f = Op::Cos;
        else if (name == "sqrt")
            f = Op::Sqrt;
        else if (name == "tanh")
            f = Op::Tanh;
        else
            throw UnknownIdentifier(start, name);
        expect('(');
        Expr arg = sum();
        expect(')');
        return Expr::unary(f, arg);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view source) { return Parser(source).parse(); }

FlowExpression parse_flow(std::string_view src1, std::string_view src2, std::string_view src3) {
    return FlowExpression{{parse_expression(src1), parse_expression(src2), parse_expression(src3)}};
}

}  // namespace flowshoot
