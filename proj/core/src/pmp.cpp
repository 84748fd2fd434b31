#include "flowshoot/pmp.hpp"

#include <algorithm>
#include <cmath>

namespace flowshoot {

Vec3 control_direction(const Surface& s, const Vec3& x, const Vec3& psi, double mu) {
    if (mu == 0.0) return psi;
    return psi - mu * s.gradient(x);
}

Vec3 extremal_control(const Surface& s, const ExtendedState& st) {
    const Vec3 d = control_direction(s, st.x, st.psi, st.mu);
    const double n = norm(d);
    if (!(n > kNontrivialityThreshold)) throw NontrivialityViolation("|psi - mu grad g| vanished");
    return (1.0 / n) * d;
}

double tangency(const Surface& s, const FlowField& f, const Vec3& x, const Vec3& u) {
    return dot(s.gradient(x), u + f.value(x));
}

double extended_hamiltonian(const Surface& s, const FlowField& f, const Vec3& x, const Vec3& u, const Vec3& psi,
                            double mu) {
    const Vec3 xdot = u + f.value(x);
    return dot(psi, xdot) - mu * dot(s.gradient(x), xdot);
}

double boundary_mu(const Surface& s, const Vec3& x, const Vec3& psi, const Vec3& v) {
    const Vec3 grad = s.gradient(x);
    const double gnorm = norm(grad);
    if (!(gnorm > 0.0)) throw RegularityViolation("constraint gradient vanished");
    const Vec3 n = (1.0 / gnorm) * grad;
    const double p = dot(n, psi);
    const double q = dot(n, v);
    if (!(std::abs(q) < 1.0 - kRegularityGuard))
        throw RegularityViolation("|<grad g, v>| reached the boundary gradient norm");
    // |ψ|² − p² ≥ 0 by Cauchy–Schwarz; clamp rounding noise.
    const double tangential = std::max(0.0, dot(psi, psi) - p * p);
    const double root = std::sqrt(tangential / (1.0 - q * q));
    // Expressed per unit normal; on g = 0 the factor 2/gnorm is exactly 1.
    return (p + q * root) / gnorm;
}

namespace {

Derivative rhs_with_mu(const Surface& s, const FlowField& f, const Vec3& x, const Vec3& psi, double mu,
                       const Vec3& v) {
    const Mat3 dv = f.jacobian(x);
    Derivative d;
    d.mu = mu;
    if (mu == 0.0) {
        const double n = norm(psi);
        if (!(n > kNontrivialityThreshold)) throw NontrivialityViolation("|psi| vanished");
        d.u = (1.0 / n) * psi;
        d.dx = d.u + v;
        d.dpsi = -transpose_apply(dv, psi);
        return d;
    }
    const Vec3 grad = s.gradient(x);
    const Vec3 dir = psi - mu * grad;
    const double n = norm(dir);
    if (!(n > kNontrivialityThreshold)) throw NontrivialityViolation("|psi - mu grad g| vanished");
    d.u = (1.0 / n) * dir;
    d.dx = d.u + v;
    d.dpsi = -transpose_apply(dv, dir) + mu * apply(s.hessian(x), d.dx);
    return d;
}

}  // namespace

Derivative interior_rhs(const Surface& s, const FlowField& f, const ExtendedState& st) {
    return rhs_with_mu(s, f, st.x, st.psi, st.mu, f.value(st.x));
}

Derivative boundary_rhs(const Surface& s, const FlowField& f, const Vec3& x, const Vec3& psi) {
    const Vec3 v = f.value(x);
    Derivative d = rhs_with_mu(s, f, x, psi, boundary_mu(s, x, psi, v), v);
    // The multiplier is built to make Γ vanish; anything else is a formula bug.
    if (!(std::abs(dot(s.gradient(x), d.dx)) < kTangencyCheckTolerance))
        throw NumericalFailure("boundary multiplier failed to produce a tangent control");
    return d;
}

double hamiltonian_level(const Surface& s, const FlowField& f, const ExtendedState& st) {
    return extended_hamiltonian(s, f, st.x, extremal_control(s, st), st.psi, st.mu);
}

}  // namespace flowshoot
