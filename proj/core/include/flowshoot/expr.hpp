#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "flowshoot/vec3.hpp"

namespace flowshoot {

/// Immutable expression tree over x1, x2, x3.
///
/// Grammar (lowest to highest precedence):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' integer-literal-power)?      right associative
///   primary := number | x1 | x2 | x3 | func '(' sum ')' | '(' sum ')'
///   func    := exp | sin | cos | sqrt | tanh
///
/// `^` binds tighter than unary minus, so -x1^2 is -(x1^2). Exponents must be
/// integer literals, optionally negated (x1^-2).
class Expr {
public:
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Sqrt, Tanh };

    /// The constant 0.
    Expr();

    static Expr constant(double value);
    static Expr variable(int index);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr unary(Op op, Expr arg);
    static Expr power(Expr base, int exponent);

    Op op() const { return node_->op; }
    double constant_value() const { return node_->value; }
    int variable_index() const { return node_->index; }
    int exponent() const { return node_->index; }
    const Expr& lhs() const { return *node_->lhs; }
    const Expr& rhs() const { return *node_->rhs; }

    /// Throws EvalError on division by zero, sqrt of a negative number or a
    /// non-finite result.
    double evaluate(const Vec3& x) const;

    /// Symbolic partial derivative with respect to x_{index+1}, lightly simplified.
    Expr derivative(int index) const;

    /// Fully parenthesized-where-needed text that parses back to the same tree.
    std::string to_string() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node {
        Op op = Op::Const;
        double value = 0.0;
        int index = 0;
        std::shared_ptr<const Expr> lhs;
        std::shared_ptr<const Expr> rhs;
    };

    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Parses one component. Throws SyntaxError or UnknownIdentifier.
Expr parse_expression(std::string_view source);

/// Three component expressions defining a flow v(x).
struct FlowExpression {
    std::array<Expr, 3> components;

    friend bool operator==(const FlowExpression&, const FlowExpression&) = default;
};

FlowExpression parse_flow(std::string_view src1, std::string_view src2, std::string_view src3);

}  // namespace flowshoot
