#pragma once

#include <vector>

#include "flowshoot/shooting.hpp"

namespace flowshoot {

/// Minimum of 2 − |⟨∇g, v⟩| over a quasi-uniform boundary sample. For the
/// cylinder the sample covers z in [z_lo, z_hi]. Requires n_samples ≥ 100.
double check_regularity(const Surface& s, const FlowField& f, int n_samples, double z_lo = -1.0, double z_hi = 1.0);

struct FeasibilityReport {
    /// min over sampled interior points of 1 − |v|; negative means the
    /// speed hypothesis of the existence result fails somewhere.
    double interior_speed_margin = 0.0;
    bool start_feasible = false;
    bool target_feasible = false;
};

/// Rejection-samples the interior with a fixed seed. Connectivity of the
/// endpoints inside the feasible set is not examined.
FeasibilityReport check_feasibility(const Surface& s, const FlowField& f, const Vec3& a, const Vec3& b,
                                    int n_samples);

struct ExtremalDiagnostics {
    double hamiltonian_mean = 0.0;
    double hamiltonian_drift = 0.0;
    /// μ non-increasing along every boundary arc.
    bool mu_monotone = true;
    /// μ identical at all samples of each interior arc.
    bool mu_constant_on_interior = true;
    /// |μ jump| at each interior-to-boundary join.
    std::vector<double> mu_junction_jumps;
    double nontriviality_min = 0.0;
    /// max |u_stored − u*(x, ψ, μ)|.
    double control_deviation = 0.0;
    /// max ||u| − 1|.
    double control_norm_deviation = 0.0;
    /// max g(x) over all samples.
    double constraint_max = 0.0;
    double endpoint_miss = 0.0;
};

/// Thresholds every solver-produced extremal is expected to satisfy.
struct ExtremalThresholds {
    double endpoint = 1e-3;
    double control_norm = 1e-12;
    double constraint = 1e-7;
    double hamiltonian_drift = 1e-2;
    double nontriviality = 1e-6;
    double junction_jump = 1e-3;
};

/// Names of the thresholds `d` violates; empty when all hold.
std::vector<std::string> threshold_violations(const ExtremalDiagnostics& d, const ExtremalThresholds& th = {});

/// Recomputes the maximum-principle conditions along a stored extremal.
/// Throws MalformedExtremal when arcs are empty or not time-contiguous.
ExtremalDiagnostics verify_extremal(const Scenario& sc, const Extremal& e);

struct DiagnosticsReport {
    double regularity_margin = 0.0;
    FeasibilityReport feasibility;
    std::vector<ExtremalDiagnostics> extremals;
};

/// Admission checks for a scenario (regularity and feasibility sampling).
DiagnosticsReport admission_report(const Scenario& sc, int n_samples = 10000);

}  // namespace flowshoot
