#include "flowshoot/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace flowshoot {

void IntegrationConfig::validate() const {
    if (!(step > 0.0) || !(t_max > 0.0) || !(boundary_tol > 0.0) || !(target_tol > 0.0) || !(drift_tol > 0.0))
        throw InvalidArgument("integration step, horizon and tolerances must be positive");
    if (step > t_max) throw InvalidArgument("integration step exceeds the horizon");
}

const char* to_string(ArcEvent e) {
    switch (e) {
        case ArcEvent::TargetReached: return "target-reached";
        case ArcEvent::BoundaryContact: return "boundary-contact";
        case ArcEvent::HorizonExpired: return "horizon-expired";
        case ArcEvent::RegularityLost: return "regularity-lost";
        case ArcEvent::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

namespace {

constexpr int kMaxBisections = 100;

/// RK4 step reusing an already evaluated first stage.
template <class Rhs>
ExtendedState rk4_from(Rhs&& rhs, const ExtendedState& st, const Derivative& k1, double h) {
    auto shifted = [&](const Derivative& d, double a) {
        ExtendedState s = st;
        s.x += a * d.dx;
        s.psi += a * d.dpsi;
        return s;
    };
    const Derivative k2 = rhs(shifted(k1, 0.5 * h));
    const Derivative k3 = rhs(shifted(k2, 0.5 * h));
    const Derivative k4 = rhs(shifted(k3, h));
    ExtendedState out = st;
    out.x += (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    out.psi += (h / 6.0) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    if (!is_finite(out.x) || !is_finite(out.psi)) throw NumericalFailure("non-finite Runge-Kutta stage");
    return out;
}

int step_count(double span, double h) {
    if (!(span > 0.0)) return 0;
    return static_cast<int>(std::ceil(span / h - 1e-9));
}

double step_end(double t0, int k, int n, double h, double t_end) { return k + 1 == n ? t_end : t0 + (k + 1) * h; }

void note_approach(std::optional<Approach>& best, double d, double t, const Vec3& x) {
    if (!best || d < best->distance) best = Approach{d, t, x};
}

}  // namespace

ArcResult integrate_interior(const Surface& s, const FlowField& f, const ExtendedState& st0,
                             const IntegrationConfig& cfg, const InteriorOptions& opt) {
    cfg.validate();
    auto rhs = [&](const ExtendedState& e) { return interior_rhs(s, f, e); };

    ArcResult arc;
    ExtendedState st = st0;
    st.on_boundary = false;
    double t = opt.t0;

    Derivative d;
    try {
        d = rhs(st);
    } catch (const Error& e) {
        arc.samples.push_back({t, st, {}});
        arc.event = ArcEvent::NumericalFailure;
        arc.reason = e.what();
        return arc;
    }
    arc.samples.push_back({t, st, d.u});

    const bool has_target = opt.target.has_value();
    const Vec3 target = opt.target.value_or(Vec3{});
    auto slope_of = [&](const ExtendedState& e, const Derivative& de) { return dot(e.x - target, de.dx); };

    double g = s.value(st.x);
    double slope = has_target ? slope_of(st, d) : 0.0;
    if (has_target) note_approach(arc.closest, norm(st.x - target), t, st.x);

    const double t_end = cfg.t_max;
    const int n = step_count(t_end - opt.t0, cfg.step);
    try {
        for (int k = 0; k < n; ++k) {
            const double tn = step_end(opt.t0, k, n, cfg.step, t_end);
            const double h = tn - t;
            ExtendedState next = rk4_from(rhs, st, d, h);
            const double gn = s.value(next.x);

            if (gn > 0.0 && gn > g) {
                if (g >= 0.0) {
                    // Already on (or marginally beyond) the wall and moving outward.
                    arc.event = ArcEvent::BoundaryContact;
                    return arc;
                }
                double lo = 0.0, hi = h, th = h;
                ExtendedState hit = next;
                for (int i = 0; i < kMaxBisections; ++i) {
                    th = 0.5 * (lo + hi);
                    hit = rk4_from(rhs, st, d, th);
                    const double gm = s.value(hit.x);
                    if (std::abs(gm) < cfg.boundary_tol) break;
                    (gm < 0.0 ? lo : hi) = th;
                }
                const Derivative dh = rhs(hit);
                if (has_target) note_approach(arc.closest, norm(hit.x - target), t + th, hit.x);
                arc.samples.push_back({t + th, hit, dh.u});
                arc.event = ArcEvent::BoundaryContact;
                return arc;
            }

            const Derivative dn = rhs(next);
            if (has_target) {
                const double slope_n = slope_of(next, dn);
                note_approach(arc.closest, norm(next.x - target), tn, next.x);
                if (slope < 0.0 && slope_n >= 0.0) {
                    double a = 0.0, b = h;
                    ExtendedState probe = next;
                    Derivative dp = dn;
                    for (int i = 0; i < kMaxBisections && b - a > 1e-14; ++i) {
                        const double mid = 0.5 * (a + b);
                        probe = rk4_from(rhs, st, d, mid);
                        dp = rhs(probe);
                        (slope_of(probe, dp) < 0.0 ? a : b) = mid;
                    }
                    const double tm = t + 0.5 * (a + b);
                    probe = rk4_from(rhs, st, d, 0.5 * (a + b));
                    dp = rhs(probe);
                    const double dist = norm(probe.x - target);
                    note_approach(arc.closest, dist, tm, probe.x);
                    if (opt.stop_at_target && dist < cfg.target_tol) {
                        arc.samples.push_back({tm, probe, dp.u});
                        arc.event = ArcEvent::TargetReached;
                        return arc;
                    }
                }
                slope = slope_n;
            }
            arc.samples.push_back({tn, next, dn.u});
            st = next;
            d = dn;
            g = gn;
            t = tn;
        }
    } catch (const Error& e) {
        arc.event = ArcEvent::NumericalFailure;
        arc.reason = e.what();
        return arc;
    }
    arc.event = ArcEvent::HorizonExpired;
    return arc;
}

ArcResult integrate_boundary(const Surface& s, const FlowField& f, const ExtendedState& st0,
                             const IntegrationConfig& cfg, double t0) {
    cfg.validate();
    auto rhs = [&](const ExtendedState& e) { return boundary_rhs(s, f, e.x, e.psi); };

    ArcResult arc;
    ExtendedState st = st0;
    st.on_boundary = true;
    double t = t0;
    try {
        Derivative d = rhs(st);
        st.mu = d.mu;
        arc.samples.push_back({t, st, d.u});
        const int n = step_count(cfg.t_max - t0, cfg.step);
        for (int k = 0; k < n; ++k) {
            const double tn = step_end(t0, k, n, cfg.step, cfg.t_max);
            ExtendedState next = rk4_from(rhs, st, d, tn - t);
            if (std::abs(s.value(next.x)) > cfg.drift_tol) next.x = s.project(next.x);
            const Derivative dn = rhs(next);
            next.mu = dn.mu;
            arc.samples.push_back({tn, next, dn.u});
            st = next;
            d = dn;
            t = tn;
        }
    } catch (const RegularityViolation& e) {
        arc.event = ArcEvent::RegularityLost;
        arc.reason = e.what();
        return arc;
    } catch (const Error& e) {
        arc.event = ArcEvent::NumericalFailure;
        arc.reason = e.what();
        return arc;
    }
    arc.event = ArcEvent::HorizonExpired;
    return arc;
}

ExtendedState boundary_state_at(const Surface& s, const FlowField& f, const ArcResult& arc, double t) {
    if (arc.samples.empty()) throw InvalidArgument("empty boundary arc");
    if (t < arc.samples.front().t || t > arc.samples.back().t) throw InvalidArgument("time outside the boundary arc");
    auto it = std::upper_bound(arc.samples.begin(), arc.samples.end(), t,
                               [](double v, const Sample& smp) { return v < smp.t; });
    const Sample& base = *std::prev(it);
    if (t == base.t) return base.state;
    auto rhs = [&](const ExtendedState& e) { return boundary_rhs(s, f, e.x, e.psi); };
    ExtendedState out = rk4_from(rhs, base.state, rhs(base.state), t - base.t);
    out.mu = rhs(out).mu;
    out.on_boundary = true;
    return out;
}

}  // namespace flowshoot
