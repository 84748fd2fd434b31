#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flowshoot/integrator.hpp"
#include "flowshoot/scenario.hpp"

namespace flowshoot {

/// ψ(0) = (sin θ cos φ, sin θ sin φ, cos θ).
Vec3 initial_costate(double theta, double phi);

struct Contact {
    double t = 0.0;
    ExtendedState state;
    /// Boundary multiplier evaluated at the contact point (infinite if irregular).
    double mu = 0.0;
};

/// Outcome of one interior shot from the start point with μ(0) = 0.
struct ShootingPoint {
    double theta = 0.0;
    double phi = 0.0;
    ArcEvent event = ArcEvent::HorizonExpired;
    /// Closest approach to the target before the arc ended.
    double miss = 0.0;
    double t_closest = 0.0;
    std::optional<Contact> contact;

    Vec3 psi0() const { return initial_costate(theta, phi); }
};

/// Integrates the interior extremal with ψ(0) from (θ, φ) until contact or
/// horizon. With `stop_at_target` the arc also ends at a target hit.
ShootingPoint shoot(const Scenario& sc, double theta, double phi, bool stop_at_target = false,
                    ArcResult* arc = nullptr);

/// Regular grid θ_i = (i + ½)π/nθ, φ_j = 2πj/nφ stored row-major (i, j).
struct ShootingGrid {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<ShootingPoint> nodes;

    const ShootingPoint& at(int i, int j) const { return nodes[static_cast<size_t>(i) * n_phi + j]; }
    /// Node indices by ascending miss distance (ties by index).
    std::vector<size_t> ranked() const;
    /// Indices of nodes whose miss is no larger than any of their 8 neighbours
    /// (φ wraps around), in ascending miss order.
    std::vector<size_t> local_minima() const;
};

ShootingGrid scan_interior(const Scenario& sc, int n_theta, int n_phi);

enum class ArcPhase { Interior = 0, Boundary = 1 };

struct ExtremalArc {
    ArcPhase phase = ArcPhase::Interior;
    std::vector<Sample> samples;
};

enum class Classification { Interior, Boundary };

const char* to_string(Classification c);

struct Extremal {
    double theta = 0.0;
    double phi = 0.0;
    Classification classification = Classification::Interior;
    std::vector<ExtremalArc> arcs;
    /// (entry, exit) times of each boundary arc.
    std::vector<std::pair<double, double>> junctions;
    double T = 0.0;
    double miss = 0.0;

    const Sample& final_sample() const { return arcs.back().samples.back(); }
};

/// Polishes an interior near-hit by alternating golden-section line searches
/// in θ and φ over a bracket that halves every level. Throws NoConvergence
/// when no level brings the miss below target_tol.
Extremal refine_hit(const Scenario& sc, const ShootingPoint& seed);

/// Two shots on either side of a tangential grazing: the contact side first
/// touches the wall before `t_split`, the other side does not. φ values are
/// taken literally (no wrapping), so a bracket may straddle φ = 0.
struct JunctionBracket {
    double theta_contact = 0.0;
    double phi_contact = 0.0;
    double theta_other = 0.0;
    double phi_other = 0.0;
    double t_split = 0.0;
};

struct Junction {
    double theta = 0.0;
    double phi = 0.0;
    /// Interior arc from the start up to and including the contact sample.
    ArcResult entry;

    const Sample& contact() const { return entry.back(); }
};

/// Bisection along the bracket segment towards the grazing shot. Throws NoConvergence when the
/// entry multiplier never falls below junction_tol.
Junction refine_junction(const Scenario& sc, const JunctionBracket& bracket);

/// Brackets between grid neighbours along θ and along φ.
std::vector<JunctionBracket> junction_brackets(const Scenario& sc, const ShootingGrid& grid);

/// Interior continuation leaving the boundary arc at time t. Its miss is
/// infinite unless the closest approach is a genuine interior minimum (not the
/// contact or horizon end of the continuation).
struct Departure {
    double t = 0.0;
    double miss = 0.0;
    ArcResult continuation;
};

struct BoundaryTrace {
    ArcResult boundary;
    /// Refined local minima of the departure miss, best first.
    std::vector<Departure> minima;
    /// Best departure found, if any continuation stays feasible.
    std::optional<Departure> best;
};

/// Slides along the boundary from the junction and launches frozen-μ
/// continuations. Departures within [t_lo, t_hi] (clamped to the arc) are
/// scanned every `stride` samples, then refined to sub-step resolution.
BoundaryTrace trace_boundary(const Scenario& sc, const Junction& j, int stride,
                             std::optional<std::pair<double, double>> window = std::nullopt);

/// Boundary extremals through one junction that reach the target.
std::vector<Extremal> trace_boundary_and_depart(const Scenario& sc, const Junction& j);

/// Assembles an extremal from a junction, its boundary arc and a departure.
Extremal assemble_boundary_extremal(const Scenario& sc, const Junction& j, const ArcResult& boundary,
                                    const Departure& dep);

struct ExtremalField {
    std::vector<Extremal> extremals;
    /// Index of the minimum-time extremal.
    size_t optimal = 0;
    ShootingGrid grid;
    size_t junctions_examined = 0;
};

/// Grid scan, interior refinement and junction-branch search. Extremals are
/// deduplicated, sorted by T and the first one is flagged optimal.
/// Throws EmptyField when nothing reaches the target.
ExtremalField solve(const Scenario& sc);

}  // namespace flowshoot
