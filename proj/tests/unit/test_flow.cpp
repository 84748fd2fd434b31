#include <doctest.h>

#include <cmath>

#include "flowshoot/errors.hpp"
#include "flowshoot/expr.hpp"
#include "flowshoot/flow.hpp"
#include "sampling.hpp"

using namespace flowshoot;

namespace {

FlowExpression shear_expr() { return parse_flow("0", "0", "x1^2 + x2^2"); }

FlowExpression vortex_expr() {
    return parse_flow("4/(1+exp(-6*x2)) - 2", "-4/(1+exp(-6*x1)) + 2", "0");
}

double max_fd_error(const FlowField& f, const Vec3& x) {
    const Mat3 j = f.jacobian(x);
    const Mat3 fd = finite_difference_jacobian(f, x, 1e-6);
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) e = std::max(e, std::abs(j(i, k) - fd(i, k)));
    return e;
}

}  // namespace

TEST_CASE("shear flow") {
    const FlowField f = builtin_shear();
    const Vec3 v = f.value({0.2, -0.5, 0});
    CHECK(v.c1 == 0.0);
    CHECK(v.c2 == 0.0);
    CHECK(v.c3 == doctest::Approx(0.29).epsilon(1e-15));
    CHECK(f.value({1, 0, 123.0}) == Vec3{0, 0, 1});
    const Mat3 j = f.jacobian({1, 0, 0});
    CHECK(j(2, 0) == 2.0);
    CHECK(j(2, 1) == 0.0);
    CHECK(j(2, 2) == 0.0);
    for (int k = 0; k < 3; ++k) {
        CHECK(j(0, k) == 0.0);
        CHECK(j(1, k) == 0.0);
    }
}

TEST_CASE("vortex flow") {
    const FlowField f = builtin_vortex();
    CHECK(f.value({0, 0, 0}) == Vec3{0, 0, 0});
    CHECK(std::abs(f.value({0, 10, 0}).c1 - 2.0) < 1e-8);
    CHECK(f.jacobian({0, 0, 0})(0, 1) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(f.jacobian({0, 0, 0})(1, 0) == doctest::Approx(-6.0).epsilon(1e-15));
}

TEST_CASE("builtin lookup by name") {
    CHECK(builtin_flow("shear-paraboloid").label() == "shear-paraboloid");
    CHECK(builtin_flow("sigmoid-vortex").label() == "sigmoid-vortex");
    CHECK_THROWS_AS(builtin_flow("whirlpool"), InvalidArgument);
}

TEST_CASE("parsed shear matches the builtin") {
    const FlowExpression e = shear_expr();
    CHECK(e.components[2].evaluate({1, 1, 0}) == 2.0);
    const FlowField f = expression_flow(e);
    const FlowField b = builtin_shear();
    testing::Sampler rng(21);
    for (int k = 0; k < 100; ++k) {
        const Vec3 x = rng.box(1.0);
        CHECK(f.value(x) == b.value(x));
        CHECK(f.jacobian(x) == b.jacobian(x));
    }
    const Mat3 j = f.jacobian({1, 0, 0});
    CHECK(j(2, 0) == 2.0);
    CHECK(j(2, 1) == 0.0);
    CHECK(j(2, 2) == 0.0);
}

TEST_CASE("parsed vortex") {
    const FlowField f = expression_flow(vortex_expr());
    CHECK(f.value({0, 0, 0}) == Vec3{0, 0, 0});
    const FlowField fd = expression_flow(vortex_expr(), JacobianMode::FiniteDifference);
    testing::Sampler rng(22);
    for (int k = 0; k < 100; ++k) {
        const Vec3 x = rng.in_ball(1.0);
        const Mat3 a = f.jacobian(x), n = fd.jacobian(x);
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 3; ++c) CHECK(std::abs(a(i, c) - n(i, c)) < 1e-6);
        CHECK(norm(f.value(x) - builtin_vortex().value(x)) < 1e-14);
    }
}

TEST_CASE("linear field jacobian is the cyclic permutation") {
    const FlowField f = expression_flow(parse_flow("x3", "x1", "x2"));
    const Mat3 j = f.jacobian({0.3, -2, 7});
    const Mat3 expected{{{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}}};
    CHECK(j == expected);
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_expression("x1 +");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(parse_expression(""), SyntaxError);
    CHECK_THROWS_AS(parse_expression("(x1"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1 ^ 1.5"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("2 3"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("0x1F"), SyntaxError);
}

TEST_CASE("unknown identifiers are rejected") {
    CHECK_THROWS_AS(parse_expression("x4 + 1"), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expression("log(x1)"), UnknownIdentifier);
    try {
        parse_expression("1 + y");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "y");
    }
}

TEST_CASE("operator precedence and associativity") {
    const Vec3 x{2, 3, 0.5};
    CHECK(parse_expression("1 - 2 - 3").evaluate(x) == -4.0);
    CHECK(parse_expression("8 / 4 / 2").evaluate(x) == 1.0);
    CHECK(parse_expression("2 ^ 3 ^ 2").evaluate(x) == 512.0);
    CHECK(parse_expression("-x1^2").evaluate(x) == -4.0);
    CHECK(parse_expression("2 * x1 + x2 * 3").evaluate(x) == 13.0);
    CHECK(parse_expression("x1^-1").evaluate(x) == 0.5);
    CHECK(parse_expression("1.5e1 + 2E-1").evaluate(x) == doctest::Approx(15.2));
    CHECK(parse_expression("sqrt(x1 + 2) * cos(0) + tanh(0) + sin(0) + exp(0)").evaluate(x) == 3.0);
}

TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(parse_expression("1 / x3").evaluate({1, 1, 0}), EvalError);
    CHECK_THROWS_AS(parse_expression("sqrt(x1)").evaluate({-1, 0, 0}), EvalError);
    CHECK_THROWS_AS(parse_expression("x1^-2").evaluate({0, 0, 0}), EvalError);
    CHECK_THROWS_AS(parse_expression("exp(x1)").evaluate({1000, 0, 0}), EvalError);
    const FlowField f = expression_flow(parse_flow("1/x1", "0", "0"));
    CHECK_THROWS_AS(f.value({0, 1, 1}), EvalError);
}

TEST_CASE("print and reparse is stable") {
    for (const char* src : {"x1^2 + x2^2", "4/(1+exp(-6*x2)) - 2", "-(x1 - x2) * -x3", "2^3^2", "1 - (2 - 3)",
                            "sqrt(tanh(x1)^2 + 1) / (x2 - -x3)", "x1^-3 * 1e-7", "-4/(1+exp(-6*x1)) + 2",
                            "0.1 * (x1^2 + x2^2)", "sin(cos(x3)) - 1.25e10"}) {
        const Expr a = parse_expression(src);
        const Expr b = parse_expression(a.to_string());
        CHECK_MESSAGE(a == b, src);
        CHECK(parse_expression(b.to_string()) == b);
    }
}

TEST_CASE("symbolic derivatives match finite differences") {
    testing::Sampler rng(23);
    const FlowField f = testing::dense_test_flow();
    const FlowField v = expression_flow(vortex_expr());
    for (int k = 0; k < 100; ++k) {
        const Vec3 x = rng.in_ball(1.0);
        CHECK(max_fd_error(f, x) < 1e-5);
        CHECK(max_fd_error(v, x) < 1e-5);
        CHECK(max_fd_error(builtin_shear(), x) < 1e-5);
        CHECK(max_fd_error(builtin_vortex(), x) < 1e-5);
    }
}

TEST_CASE("vortex speed bound") {
    testing::Sampler rng(24);
    const FlowField f = builtin_vortex();
    double vmax = 0.0;
    for (int k = 0; k < 10000; ++k) vmax = std::max(vmax, norm(f.value(rng.in_ball(1.0))));
    CHECK(vmax < 2.0 * std::sqrt(2.0) + 1e-9);
    CHECK(vmax > 1.0);
}
