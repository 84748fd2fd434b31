#include "flowshoot/app/output.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "flowshoot/version.hpp"

namespace flowshoot::app {

using nlohmann::json;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Extremal& e) {
    out << kTrajectoryHeader << '\n';
    for (const ExtremalArc& arc : e.arcs) {
        const int phase = arc.phase == ArcPhase::Boundary ? 1 : 0;
        for (const Sample& s : arc.samples) {
            const ExtendedState& st = s.state;
            const double row[] = {s.t,        st.x[0],   st.x[1],   st.x[2],  st.psi[0], st.psi[1],
                                  st.psi[2], st.mu,     s.u[0],    s.u[1],   s.u[2]};
            for (double v : row) out << format_real(v) << ',';
            out << phase << '\n';
        }
    }
}

Extremal read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader) throw MalformedExtremal("missing trajectory header");
    Extremal e;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            char* end = nullptr;
            const double d = std::strtod(cell.c_str(), &end);
            if (cell.empty() || *end != '\0') throw MalformedExtremal("bad number on line " + std::to_string(line_no));
            v.push_back(d);
        }
        if (v.size() != 12 || (v[11] != 0.0 && v[11] != 1.0))
            throw MalformedExtremal("line " + std::to_string(line_no) + " does not have 12 columns");
        const ArcPhase phase = v[11] == 1.0 ? ArcPhase::Boundary : ArcPhase::Interior;
        if (e.arcs.empty() || e.arcs.back().phase != phase) e.arcs.push_back({phase, {}});
        Sample s;
        s.t = v[0];
        s.state = {{v[1], v[2], v[3]}, {v[4], v[5], v[6]}, v[7], phase == ArcPhase::Boundary};
        s.u = {v[8], v[9], v[10]};
        e.arcs.back().samples.push_back(s);
    }
    if (e.arcs.empty()) throw MalformedExtremal("trajectory has no samples");
    e.classification = Classification::Interior;
    for (const ExtremalArc& a : e.arcs)
        if (a.phase == ArcPhase::Boundary) {
            e.classification = Classification::Boundary;
            e.junctions.emplace_back(a.samples.front().t, a.samples.back().t);
        }
    const Vec3 psi0 = e.arcs.front().samples.front().state.psi;
    const double n = norm(psi0);
    if (n > 0.0) {
        e.theta = std::acos(std::clamp(psi0[2] / n, -1.0, 1.0));
        e.phi = std::atan2(psi0[1], psi0[0]);
        if (e.phi < 0.0) e.phi += 2.0 * std::acos(-1.0);
    }
    e.T = e.final_sample().t;
    return e;
}

std::string trajectory_file_name(size_t id) { return "extremal_" + std::to_string(id) + ".csv"; }

namespace {

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

json scenario_json(const ScenarioConfig& cfg, const Scenario& sc) {
    json j;
    j["surface"]["kind"] = to_string(cfg.surface_kind);
    if (cfg.surface_kind == SurfaceKind::Torus) j["surface"]["major_radius"] = cfg.major_radius;
    if (cfg.flow_builtin) {
        j["flow"]["builtin"] = *cfg.flow_builtin;
    } else {
        j["flow"]["v1"] = (*cfg.flow_expressions)[0];
        j["flow"]["v2"] = (*cfg.flow_expressions)[1];
        j["flow"]["v3"] = (*cfg.flow_expressions)[2];
    }
    j["endpoints"]["A"] = vec_json(cfg.start);
    j["endpoints"]["B"] = vec_json(cfg.target);
    j["numerics"]["step"] = sc.integration.step;
    j["numerics"]["t_max"] = sc.integration.t_max;
    j["numerics"]["target_tol"] = sc.integration.target_tol;
    j["numerics"]["junction_tol"] = sc.search.junction_tol;
    j["search"]["grid_theta"] = sc.search.grid_theta;
    j["search"]["grid_phi"] = sc.search.grid_phi;
    return j;
}

ScenarioConfig scenario_config_from_json(const json& j) {
    ScenarioConfig cfg;
    cfg.surface_kind = parse_surface_kind(j.at("surface").at("kind").get<std::string>());
    if (cfg.surface_kind == SurfaceKind::Torus) cfg.major_radius = j.at("surface").at("major_radius").get<double>();
    const json& f = j.at("flow");
    if (f.contains("builtin"))
        cfg.flow_builtin = f.at("builtin").get<std::string>();
    else
        cfg.flow_expressions = std::array<std::string, 3>{f.at("v1").get<std::string>(), f.at("v2").get<std::string>(),
                                                          f.at("v3").get<std::string>()};
    cfg.start = vec_from(j.at("endpoints").at("A"));
    cfg.target = vec_from(j.at("endpoints").at("B"));
    cfg.step = j.at("numerics").at("step").get<double>();
    cfg.t_max = j.at("numerics").at("t_max").get<double>();
    cfg.target_tol = j.at("numerics").at("target_tol").get<double>();
    cfg.junction_tol = j.at("numerics").at("junction_tol").get<double>();
    cfg.grid_theta = j.at("search").at("grid_theta").get<int>();
    cfg.grid_phi = j.at("search").at("grid_phi").get<int>();
    return cfg;
}

json extremal_diagnostics_json(const ExtremalDiagnostics& d) {
    json j;
    j["hamiltonian_mean"] = d.hamiltonian_mean;
    j["hamiltonian_drift"] = d.hamiltonian_drift;
    j["mu_monotone"] = d.mu_monotone;
    j["mu_constant_on_interior"] = d.mu_constant_on_interior;
    j["mu_junction_jumps"] = d.mu_junction_jumps;
    j["nontriviality_min"] = d.nontriviality_min;
    j["control_deviation"] = d.control_deviation;
    j["control_norm_deviation"] = d.control_norm_deviation;
    j["constraint_max"] = d.constraint_max;
    j["endpoint_miss"] = d.endpoint_miss;
    j["violations"] = threshold_violations(d);
    return j;
}

json diagnostics_json(const DiagnosticsReport& r) {
    json j;
    j["regularity_margin"] = r.regularity_margin;
    j["interior_speed_margin"] = r.feasibility.interior_speed_margin;
    j["start_feasible"] = r.feasibility.start_feasible;
    j["target_feasible"] = r.feasibility.target_feasible;
    j["extremals"] = json::array();
    for (size_t k = 0; k < r.extremals.size(); ++k) {
        json e = extremal_diagnostics_json(r.extremals[k]);
        e["id"] = k + 1;
        j["extremals"].push_back(std::move(e));
    }
    return j;
}

json summary_json(const ScenarioConfig& cfg, const Scenario& sc, const ExtremalField& field,
                  const DiagnosticsReport& report, double wall_clock_seconds) {
    json j;
    j["solver"] = {{"name", "flowshoot"}, {"version", kVersion}};
    j["scenario"] = scenario_json(cfg, sc);
    j["extremals"] = json::array();
    for (size_t k = 0; k < field.extremals.size(); ++k) {
        const Extremal& e = field.extremals[k];
        json x;
        x["id"] = k + 1;
        x["file"] = trajectory_file_name(k + 1);
        x["classification"] = to_string(e.classification);
        x["T"] = e.T;
        x["theta"] = e.theta;
        x["phi"] = e.phi;
        x["miss"] = e.miss;
        x["junction_times"] = json::array();
        for (const auto& [t1, t2] : e.junctions) x["junction_times"].push_back({t1, t2});
        if (k < report.extremals.size()) x["lambda"] = report.extremals[k].hamiltonian_mean;
        j["extremals"].push_back(std::move(x));
    }
    j["optimal_id"] = field.optimal + 1;
    j["diagnostics"] = diagnostics_json(report);
    j["wall_clock_seconds"] = wall_clock_seconds;
    return j;
}

}  // namespace flowshoot::app
