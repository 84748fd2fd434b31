#pragma once

#include <functional>
#include <memory>
#include <string>

#include "flowshoot/expr.hpp"
#include "flowshoot/vec3.hpp"

namespace flowshoot {

/// Steady flow field v(x) together with its Jacobian Dv(x) (row i = ∇v_i).
/// Cheap to copy; the underlying definition is shared and immutable.
class FlowField {
public:
    class Impl {
    public:
        virtual ~Impl() = default;
        virtual Vec3 value(const Vec3& x) const = 0;
        virtual Mat3 jacobian(const Vec3& x) const = 0;
    };

    FlowField(std::string label, std::shared_ptr<const Impl> impl) : label_(std::move(label)), impl_(std::move(impl)) {}

    /// Flow from plain callables, mostly for tests and ad-hoc fields.
    static FlowField from_functions(std::string label, std::function<Vec3(const Vec3&)> value,
                                    std::function<Mat3(const Vec3&)> jacobian);

    Vec3 value(const Vec3& x) const { return impl_->value(x); }
    Mat3 jacobian(const Vec3& x) const { return impl_->jacobian(x); }
    const std::string& label() const { return label_; }

private:
    std::string label_;
    std::shared_ptr<const Impl> impl_;
};

/// v = (0, 0, x1² + x2²): axial flow, fastest on the unit cylinder wall.
FlowField builtin_shear();

/// v = (4σ(6x2) − 2, −4σ(6x1) + 2, 0) with σ the logistic function: a
/// horizontal vortex around the x3 axis, saturating at speed 2 per component.
FlowField builtin_vortex();

/// Looks up "shear-paraboloid" or "sigmoid-vortex". Throws InvalidArgument.
FlowField builtin_flow(const std::string& name);

enum class JacobianMode { Analytic, FiniteDifference };

/// Step used by JacobianMode::FiniteDifference (central differences).
inline constexpr double kFlowFiniteDifferenceStep = 1e-6;

/// Flow evaluating three parsed expressions. The Jacobian is either the
/// symbolic derivative of each component or central finite differences.
FlowField expression_flow(const FlowExpression& e, JacobianMode mode = JacobianMode::Analytic,
                          std::string label = "expression");

/// Central-difference Jacobian of `f` at `x` with the given step.
Mat3 finite_difference_jacobian(const FlowField& f, const Vec3& x, double step);

}  // namespace flowshoot
