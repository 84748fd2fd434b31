#pragma once

#include <string>

#include "flowshoot/flow.hpp"
#include "flowshoot/integrator.hpp"
#include "flowshoot/surface.hpp"

namespace flowshoot {

/// Knobs of the extremal-field search.
struct SearchConfig {
    int grid_theta = 64;
    int grid_phi = 128;
    /// |μ| at an entry junction must be below this for μ to count as continuous.
    double junction_tol = 1e-3;
    /// Coarse departure scan visits every n-th boundary sample before refining.
    int departure_stride = 16;
    /// Grid minima / branch minima with miss above this are not refined.
    double seed_miss_max = 0.5;
    /// Neighbouring grid nodes whose first contacts differ by more than this
    /// (or where only one contacts) bracket a grazing junction.
    double contact_jump = 0.1;
    /// Refinement keeps going until the miss distance drops below this.
    double refine_tol = 1e-7;
    int max_refine_levels = 60;
    bool search_boundary = true;
    /// Worker threads for grid scans; 0 = hardware concurrency.
    int threads = 0;
};

/// Complete problem instance: reach `target` from `start` in minimum time
/// under ẋ = u + v(x), |u| ≤ 1, g(x) ≤ 0.
struct Scenario {
    Surface surface = Surface::sphere();
    FlowField flow = builtin_shear();
    Vec3 start;
    Vec3 target;
    IntegrationConfig integration;
    SearchConfig search;
};

/// Default horizon: 4·|B − A| / (1 − sup|v|) over interior samples, clamped
/// to [1, 100]; 100 when the sampled speed reaches 1.
double default_horizon(const Surface& s, const FlowField& f, const Vec3& a, const Vec3& b, int n_samples = 2000);

}  // namespace flowshoot
