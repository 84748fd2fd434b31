#include "flowshoot/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace flowshoot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kContinuityTol = 1e-9;

std::pair<double, double> endpoint_slab(const Vec3& a, const Vec3& b) {
    return {std::min(a[2], b[2]) - 1.0, std::max(a[2], b[2]) + 1.0};
}

}  // namespace

double check_regularity(const Surface& s, const FlowField& f, int n_samples, double z_lo, double z_hi) {
    if (n_samples < 100) throw InvalidArgument("regularity check needs at least 100 boundary samples");
    double margin = kInf;
    for (const Vec3& x : s.boundary_samples(n_samples, z_lo, z_hi))
        margin = std::min(margin, 2.0 - std::abs(dot(s.gradient(x), f.value(x))));
    return margin;
}

FeasibilityReport check_feasibility(const Surface& s, const FlowField& f, const Vec3& a, const Vec3& b,
                                    int n_samples) {
    FeasibilityReport r;
    auto feasible = [&](const Vec3& x) {
        try {
            return s.value(x) <= 0.0;
        } catch (const Error&) {
            return false;
        }
    };
    r.start_feasible = feasible(a);
    r.target_feasible = feasible(b);

    Vec3 half = s.bounding_half_extent();
    Vec3 centre;
    if (half[2] == 0.0) {
        const auto [lo, hi] = endpoint_slab(a, b);
        centre[2] = 0.5 * (lo + hi);
        half[2] = 0.5 * (hi - lo);
    }
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double margin = kInf;
    int accepted = 0;
    for (int tries = 0; accepted < n_samples && tries < 50 * n_samples; ++tries) {
        const Vec3 x{centre[0] + half[0] * unit(rng), centre[1] + half[1] * unit(rng), centre[2] + half[2] * unit(rng)};
        try {
            if (!(s.value(x) < 0.0)) continue;
            margin = std::min(margin, 1.0 - norm(f.value(x)));
            ++accepted;
        } catch (const Error&) {
        }
    }
    r.interior_speed_margin = margin;
    return r;
}

ExtremalDiagnostics verify_extremal(const Scenario& sc, const Extremal& e) {
    if (e.arcs.empty()) throw MalformedExtremal("extremal has no arcs");
    for (size_t k = 0; k < e.arcs.size(); ++k) {
        const auto& arc = e.arcs[k].samples;
        if (arc.empty()) throw MalformedExtremal("arc " + std::to_string(k) + " has no samples");
        for (size_t i = 1; i < arc.size(); ++i)
            if (!(arc[i].t > arc[i - 1].t)) throw MalformedExtremal("sample times do not increase in arc " + std::to_string(k));
        if (k == 0) continue;
        const Sample& prev = e.arcs[k - 1].samples.back();
        const Sample& next = arc.front();
        if (std::abs(prev.t - next.t) > kContinuityTol || norm(prev.state.x - next.state.x) > kContinuityTol ||
            norm(prev.state.psi - next.state.psi) > kContinuityTol)
            throw MalformedExtremal("arcs " + std::to_string(k - 1) + " and " + std::to_string(k) + " do not join");
    }

    const Surface& s = sc.surface;
    const FlowField& f = sc.flow;
    ExtremalDiagnostics d;
    d.nontriviality_min = kInf;
    d.constraint_max = -kInf;
    std::vector<double> levels;

    for (size_t k = 0; k < e.arcs.size(); ++k) {
        const ExtremalArc& arc = e.arcs[k];
        const double mu0 = arc.samples.front().state.mu;
        for (size_t i = 0; i < arc.samples.size(); ++i) {
            const Sample& smp = arc.samples[i];
            const ExtendedState& st = smp.state;
            if (arc.phase == ArcPhase::Interior && st.mu != mu0) d.mu_constant_on_interior = false;
            if (arc.phase == ArcPhase::Boundary && i > 0 && st.mu > arc.samples[i - 1].state.mu) d.mu_monotone = false;
            d.control_norm_deviation = std::max(d.control_norm_deviation, std::abs(norm(smp.u) - 1.0));
            d.constraint_max = std::max(d.constraint_max, s.value(st.x));

            const Vec3 dir = control_direction(s, st.x, st.psi, st.mu);
            const double n = norm(dir);
            d.nontriviality_min = std::min(d.nontriviality_min, n);
            if (!(n > kNontrivialityThreshold)) continue;
            const Vec3 u = (1.0 / n) * dir;
            d.control_deviation = std::max(d.control_deviation, norm(u - smp.u));
            levels.push_back(extended_hamiltonian(s, f, st.x, u, st.psi, st.mu));
        }
        if (k > 0 && arc.phase == ArcPhase::Boundary && e.arcs[k - 1].phase == ArcPhase::Interior)
            d.mu_junction_jumps.push_back(std::abs(mu0 - e.arcs[k - 1].samples.back().state.mu));
    }

    if (!levels.empty()) {
        double sum = 0.0;
        for (double h : levels) sum += h;
        d.hamiltonian_mean = sum / static_cast<double>(levels.size());
        for (double h : levels) d.hamiltonian_drift = std::max(d.hamiltonian_drift, std::abs(h - d.hamiltonian_mean));
    }
    d.endpoint_miss = norm(e.final_sample().state.x - sc.target);
    return d;
}

std::vector<std::string> threshold_violations(const ExtremalDiagnostics& d, const ExtremalThresholds& th) {
    std::vector<std::string> out;
    if (!(d.endpoint_miss < th.endpoint)) out.emplace_back("endpoint");
    if (!(d.control_norm_deviation <= th.control_norm)) out.emplace_back("control-norm");
    if (!(d.constraint_max <= th.constraint)) out.emplace_back("constraint");
    if (!(d.hamiltonian_drift < th.hamiltonian_drift)) out.emplace_back("hamiltonian-drift");
    if (!(d.nontriviality_min > th.nontriviality)) out.emplace_back("nontriviality");
    if (!d.mu_constant_on_interior) out.emplace_back("mu-interior-constancy");
    for (double j : d.mu_junction_jumps)
        if (!(j < th.junction_jump)) {
            out.emplace_back("junction-jump");
            break;
        }
    return out;
}

DiagnosticsReport admission_report(const Scenario& sc, int n_samples) {
    DiagnosticsReport r;
    const auto [lo, hi] = endpoint_slab(sc.start, sc.target);
    r.regularity_margin = check_regularity(sc.surface, sc.flow, n_samples, lo, hi);
    r.feasibility = check_feasibility(sc.surface, sc.flow, sc.start, sc.target, n_samples);
    return r;
}

}  // namespace flowshoot
