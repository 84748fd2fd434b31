#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "flowshoot/app/config.hpp"
#include "flowshoot/diagnostics.hpp"

namespace flowshoot::app {

inline constexpr const char* kTrajectoryHeader = "t,x1,x2,x3,psi1,psi2,psi3,mu,u1,u2,u3,phase";

/// 17 significant digits, C locale.
std::string format_real(double v);

void write_trajectory_csv(std::ostream& out, const Extremal& e);

/// Rebuilds an extremal from trajectory CSV; a change of the phase column
/// starts a new arc. Throws MalformedExtremal on unreadable rows.
Extremal read_trajectory_csv(std::istream& in);

std::string trajectory_file_name(size_t id);

nlohmann::json scenario_json(const ScenarioConfig& cfg, const Scenario& sc);

/// Inverse of scenario_json; the horizon is taken as recorded.
ScenarioConfig scenario_config_from_json(const nlohmann::json& j);

nlohmann::json extremal_diagnostics_json(const ExtremalDiagnostics& d);

nlohmann::json diagnostics_json(const DiagnosticsReport& r);

/// Extremal ids are 1-based positions in the T-sorted field.
nlohmann::json summary_json(const ScenarioConfig& cfg, const Scenario& sc, const ExtremalField& field,
                            const DiagnosticsReport& report, double wall_clock_seconds);

}  // namespace flowshoot::app
