#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "flowshoot/scenario.hpp"

namespace flowshoot::app {

/// Validated contents of a scenario file. Optional numerics are filled with
/// their defaults; t_max stays empty when the horizon is to be derived.
struct ScenarioConfig {
    SurfaceKind surface_kind = SurfaceKind::Sphere;
    double major_radius = 0.0;
    std::optional<std::string> flow_builtin;
    std::optional<std::array<std::string, 3>> flow_expressions;
    Vec3 start;
    Vec3 target;
    double step = 1e-3;
    std::optional<double> t_max;
    double target_tol = 1e-3;
    double junction_tol = 1e-3;
    int grid_theta = 64;
    int grid_phi = 128;
    std::string output_dir;
};

/// Parses `key = value` lines (dotted keys, `#` comments, vectors as
/// comma-separated triples). Throws ConfigError naming the offending key.
ScenarioConfig parse_scenario_text(const std::string& text);

/// Reads and parses a scenario file; unreadable files raise ConfigError.
ScenarioConfig parse_scenario(const std::filesystem::path& path);

/// Builds the solver input, deriving t_max when it was not given.
Scenario to_scenario(const ScenarioConfig& cfg);

FlowField make_flow(const ScenarioConfig& cfg);

}  // namespace flowshoot::app
