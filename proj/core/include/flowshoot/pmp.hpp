#pragma once

#include "flowshoot/flow.hpp"
#include "flowshoot/surface.hpp"
#include "flowshoot/vec3.hpp"

namespace flowshoot {

/// State of the coupled (x, ψ) system plus the measure multiplier μ.
/// On interior arcs μ is a frozen parameter; on boundary arcs it is
/// recomputed from (x, ψ) and the stored value is the latest one.
struct ExtendedState {
    Vec3 x;
    Vec3 psi;
    double mu = 0.0;
    bool on_boundary = false;
};

/// Smallest admissible |ψ − μ∇g| for the control law.
inline constexpr double kNontrivialityThreshold = 1e-12;

/// |q| at or above 1 − kRegularityGuard is treated as a regularity failure.
inline constexpr double kRegularityGuard = 1e-9;

/// boundary_rhs rejects |Γ| above this as an internal inconsistency.
inline constexpr double kTangencyCheckTolerance = 1e-7;

/// ψ − μ∇g(x): the vector the extremal control aligns with.
Vec3 control_direction(const Surface& s, const Vec3& x, const Vec3& psi, double mu);

/// Maximizer of ⟨ψ − μ∇g(x), u⟩ over |u| ≤ 1.
/// Throws NontrivialityViolation when |ψ − μ∇g(x)| ≤ 1e-12.
Vec3 extremal_control(const Surface& s, const ExtendedState& st);

/// Γ(x, u) = ⟨∇g(x), u + v(x)⟩, the rate of change of g along the dynamics.
double tangency(const Surface& s, const FlowField& f, const Vec3& x, const Vec3& u);

/// H̄(x, u, ψ, μ) = ⟨ψ, u + v(x)⟩ − μ Γ(x, u).
double extended_hamiltonian(const Surface& s, const FlowField& f, const Vec3& x, const Vec3& u, const Vec3& psi,
                            double mu);

/// Multiplier that keeps the extremal control tangent to the boundary:
///
///   μ = ½ p + ½ q √((|ψ|² − p²)/(1 − q²)),   p = ⟨n, ψ⟩, q = ⟨n, v⟩,
///
/// with n = ∇g/|∇g| the outward unit normal (so p = ⟨∇g, ψ⟩/2 on g = 0).
/// For q ≥ 0 this is the larger root of
///   μ² − μ p + (p² − |ψ|² q²)/(4(1 − q²)) = 0;
/// for q < 0 the larger root is not tangent and the smaller one is returned.
/// Throws RegularityViolation when |q| ≥ 1 − 1e-9.
double boundary_mu(const Surface& s, const Vec3& x, const Vec3& psi, const Vec3& v);

/// Time derivative of (x, ψ) together with the control that produced it.
struct Derivative {
    Vec3 dx;
    Vec3 dpsi;
    Vec3 u;
    double mu = 0.0;
};

/// ẋ = u* + v(x),  ψ̇ = −(Dv)ᵀ(ψ − μ∇g) + μ ∇²g (u* + v), with μ = st.mu.
Derivative interior_rhs(const Surface& s, const FlowField& f, const ExtendedState& st);

/// Same dynamics with μ = boundary_mu(x, ψ, v(x)).
Derivative boundary_rhs(const Surface& s, const FlowField& f, const Vec3& x, const Vec3& psi);

/// max over |u| ≤ 1 of H̄, i.e. H̄ evaluated at the extremal control.
double hamiltonian_level(const Surface& s, const FlowField& f, const ExtendedState& st);

}  // namespace flowshoot
