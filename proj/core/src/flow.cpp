#include "flowshoot/flow.hpp"

#include <array>
#include <cmath>

#include "flowshoot/errors.hpp"

namespace flowshoot {

namespace {

class FunctionFlow final : public FlowField::Impl {
public:
    FunctionFlow(std::function<Vec3(const Vec3&)> v, std::function<Mat3(const Vec3&)> j)
        : v_(std::move(v)), j_(std::move(j)) {}
    Vec3 value(const Vec3& x) const override { return v_(x); }
    Mat3 jacobian(const Vec3& x) const override { return j_(x); }

private:
    std::function<Vec3(const Vec3&)> v_;
    std::function<Mat3(const Vec3&)> j_;
};

class ShearFlow final : public FlowField::Impl {
public:
    Vec3 value(const Vec3& x) const override { return {0.0, 0.0, x.c1 * x.c1 + x.c2 * x.c2}; }
    Mat3 jacobian(const Vec3& x) const override {
        Mat3 j;
        j(2, 0) = 2.0 * x.c1;
        j(2, 1) = 2.0 * x.c2;
        return j;
    }
};

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

class VortexFlow final : public FlowField::Impl {
public:
    Vec3 value(const Vec3& x) const override {
        return {4.0 * logistic(6.0 * x.c2) - 2.0, -4.0 * logistic(6.0 * x.c1) + 2.0, 0.0};
    }
    Mat3 jacobian(const Vec3& x) const override {
        const double s2 = logistic(6.0 * x.c2);
        const double s1 = logistic(6.0 * x.c1);
        Mat3 j;
        j(0, 1) = 24.0 * s2 * (1.0 - s2);
        j(1, 0) = -24.0 * s1 * (1.0 - s1);
        return j;
    }
};

class ExpressionFlow final : public FlowField::Impl {
public:
    ExpressionFlow(const FlowExpression& e, JacobianMode mode) : e_(e), mode_(mode) {
        if (mode_ == JacobianMode::Analytic)
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k) d_[i][k] = e_.components[i].derivative(k);
    }

    Vec3 value(const Vec3& x) const override {
        return {e_.components[0].evaluate(x), e_.components[1].evaluate(x), e_.components[2].evaluate(x)};
    }

    Mat3 jacobian(const Vec3& x) const override {
        Mat3 j;
        if (mode_ == JacobianMode::Analytic) {
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k) j(i, k) = d_[i][k].evaluate(x);
            return j;
        }
        const double h = kFlowFiniteDifferenceStep;
        for (int k = 0; k < 3; ++k) {
            Vec3 xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            const Vec3 dv = (1.0 / (2.0 * h)) * (value(xp) - value(xm));
            for (int i = 0; i < 3; ++i) j(i, k) = dv[i];
        }
        return j;
    }

private:
    FlowExpression e_;
    JacobianMode mode_;
    std::array<std::array<Expr, 3>, 3> d_;
};

}  // namespace

FlowField FlowField::from_functions(std::string label, std::function<Vec3(const Vec3&)> value,
                                    std::function<Mat3(const Vec3&)> jacobian) {
    return FlowField(std::move(label), std::make_shared<FunctionFlow>(std::move(value), std::move(jacobian)));
}

FlowField builtin_shear() { return FlowField("shear-paraboloid", std::make_shared<ShearFlow>()); }

FlowField builtin_vortex() { return FlowField("sigmoid-vortex", std::make_shared<VortexFlow>()); }

FlowField builtin_flow(const std::string& name) {
    if (name == "shear-paraboloid") return builtin_shear();
    if (name == "sigmoid-vortex") return builtin_vortex();
    throw InvalidArgument("unknown builtin flow '" + name + "'");
}

FlowField expression_flow(const FlowExpression& e, JacobianMode mode, std::string label) {
    return FlowField(std::move(label), std::make_shared<ExpressionFlow>(e, mode));
}

Mat3 finite_difference_jacobian(const FlowField& f, const Vec3& x, double step) {
    Mat3 j;
    for (int k = 0; k < 3; ++k) {
        Vec3 xp = x, xm = x;
        xp[k] += step;
        xm[k] -= step;
        const Vec3 dv = (1.0 / (2.0 * step)) * (f.value(xp) - f.value(xm));
        for (int i = 0; i < 3; ++i) j(i, k) = dv[i];
    }
    return j;
}

}  // namespace flowshoot
