#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowshoot/pmp.hpp"

namespace flowshoot {

struct IntegrationConfig {
    double step = 1e-3;
    double t_max = 10.0;
    /// |g| accuracy of a localized boundary contact.
    double boundary_tol = 1e-9;
    /// Closest approach to the target below this counts as reaching it.
    double target_tol = 1e-3;
    /// Boundary arcs are projected back onto g = 0 once |g| exceeds this.
    double drift_tol = 1e-7;

    /// Throws InvalidArgument on non-positive values or step > t_max.
    void validate() const;
};

struct Sample {
    double t = 0.0;
    ExtendedState state;
    Vec3 u;
};

enum class ArcEvent { TargetReached, BoundaryContact, HorizonExpired, RegularityLost, NumericalFailure };

const char* to_string(ArcEvent e);

/// Closest approach of an arc to the target.
struct Approach {
    double distance = 0.0;
    double t = 0.0;
    Vec3 x;
};

struct ArcResult {
    /// Includes the initial state. Times strictly increase with spacing ≤ step.
    std::vector<Sample> samples;
    ArcEvent event = ArcEvent::HorizonExpired;
    std::string reason;
    /// Global closest approach over the whole arc (only when a target was given).
    std::optional<Approach> closest;

    const Sample& back() const { return samples.back(); }
};

/// Classical four-stage Runge–Kutta step applied jointly to (x, ψ). μ and the
/// phase flag pass through. `rhs` maps an ExtendedState to a Derivative.
/// Throws NumericalFailure when a stage or the result is not finite.
template <class Rhs>
ExtendedState rk4_step(Rhs&& rhs, const ExtendedState& st, double h) {
    auto shifted = [&](const Derivative& d, double a) {
        ExtendedState s = st;
        s.x += a * d.dx;
        s.psi += a * d.dpsi;
        return s;
    };
    const Derivative k1 = rhs(st);
    const Derivative k2 = rhs(shifted(k1, 0.5 * h));
    const Derivative k3 = rhs(shifted(k2, 0.5 * h));
    const Derivative k4 = rhs(shifted(k3, h));
    ExtendedState out = st;
    out.x += (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    out.psi += (h / 6.0) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    if (!is_finite(out.x) || !is_finite(out.psi)) throw NumericalFailure("non-finite Runge-Kutta stage");
    return out;
}

struct InteriorOptions {
    /// Closest-approach target; without one only contact and horizon end the arc.
    std::optional<Vec3> target;
    /// Stop at the first local minimum of |x − B| that is below target_tol.
    bool stop_at_target = true;
    double t0 = 0.0;
};

/// Interior phase with frozen μ. Ends on
///   BoundaryContact  g crosses zero upward (localized by bisection to |g| < boundary_tol),
///   TargetReached    a local minimum of |x − B| below target_tol (localized by
///                    bisection on d/dt |x − B|²),
///   HorizonExpired   t reaches t_max.
/// Failures of the control law end the arc with NumericalFailure.
ArcResult integrate_interior(const Surface& s, const FlowField& f, const ExtendedState& st0,
                             const IntegrationConfig& cfg, const InteriorOptions& opt = {});

/// Boundary phase: μ recomputed from (x, ψ) at every stage; x re-projected
/// onto g = 0 when |g| exceeds drift_tol. ψ is never modified. Ends on
/// HorizonExpired, RegularityLost or NumericalFailure (samples so far are kept).
ArcResult integrate_boundary(const Surface& s, const FlowField& f, const ExtendedState& st0,
                             const IntegrationConfig& cfg, double t0 = 0.0);

/// State on a boundary arc at time t between two samples, advanced from the
/// earlier sample by a partial step. Requires samples.front().t ≤ t ≤ samples.back().t.
ExtendedState boundary_state_at(const Surface& s, const FlowField& f, const ArcResult& arc, double t);

}  // namespace flowshoot
