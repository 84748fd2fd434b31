#include "flowshoot/app/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "flowshoot/expr.hpp"

namespace flowshoot::app {

namespace {

const std::vector<std::string> kKnownKeys = {
    "surface.kind",        "surface.major_radius", "flow.builtin",      "flow.v1",         "flow.v2",
    "flow.v3",             "endpoints.A",          "endpoints.B",       "numerics.step",   "numerics.t_max",
    "numerics.target_tol", "numerics.junction_tol", "search.grid_theta", "search.grid_phi", "output.dir"};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

double to_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError(key, "expected a real number, got '" + t + "'");
    return v;
}

double to_positive(const std::string& key, const std::string& text) {
    const double v = to_real(key, text);
    if (!(v > 0.0)) throw ConfigError(key, "must be positive");
    return v;
}

int to_int(const std::string& key, const std::string& text, int min_value) {
    const std::string t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(key, "expected an integer, got '" + t + "'");
    if (v < min_value) throw ConfigError(key, "must be at least " + std::to_string(min_value));
    return v;
}

Vec3 to_vec3(const std::string& key, const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError(key, "expected three comma-separated numbers");
    return {to_real(key, parts[0]), to_real(key, parts[1]), to_real(key, parts[2])};
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(trim(line), "line " + std::to_string(line_no) + " is not of the form key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw ConfigError(key, "unknown key");
        if (!kv.emplace(key, value).second) throw ConfigError(key, "given more than once");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& key) -> const std::string& {
        if (const std::string* v = get(key)) return *v;
        throw ConfigError(key, "missing required key");
    };

    ScenarioConfig cfg;
    try {
        cfg.surface_kind = parse_surface_kind(require("surface.kind"));
    } catch (const InvalidArgument&) {
        throw ConfigError("surface.kind", "unknown surface '" + require("surface.kind") + "'");
    }
    if (cfg.surface_kind == SurfaceKind::Torus) {
        cfg.major_radius = to_real("surface.major_radius", require("surface.major_radius"));
        if (!(cfg.major_radius > 1.0)) throw ConfigError("surface.major_radius", "torus needs R > 1");
    } else if (get("surface.major_radius")) {
        throw ConfigError("surface.major_radius", "only valid for a torus");
    }

    const bool has_builtin = get("flow.builtin") != nullptr;
    const bool has_expr = get("flow.v1") || get("flow.v2") || get("flow.v3");
    if (has_builtin && has_expr) throw ConfigError("flow.builtin", "both a builtin flow and flow expressions given");
    if (has_builtin) {
        cfg.flow_builtin = require("flow.builtin");
        try {
            builtin_flow(*cfg.flow_builtin);
        } catch (const InvalidArgument&) {
            throw ConfigError("flow.builtin", "unknown builtin flow '" + *cfg.flow_builtin + "'");
        }
    } else if (has_expr) {
        std::array<std::string, 3> e{require("flow.v1"), require("flow.v2"), require("flow.v3")};
        for (int i = 0; i < 3; ++i) {
            try {
                parse_flow(e[i], "0", "0");
            } catch (const Error& err) {
                throw ConfigError("flow.v" + std::to_string(i + 1), err.what());
            }
        }
        cfg.flow_expressions = e;
    } else {
        throw ConfigError("flow.builtin", "missing required key (or flow.v1, flow.v2, flow.v3)");
    }

    cfg.start = to_vec3("endpoints.A", require("endpoints.A"));
    cfg.target = to_vec3("endpoints.B", require("endpoints.B"));
    if (cfg.start == cfg.target) throw ConfigError("endpoints.B", "coincides with endpoints.A");

    if (auto v = get("numerics.step")) cfg.step = to_positive("numerics.step", *v);
    if (auto v = get("numerics.t_max")) cfg.t_max = to_positive("numerics.t_max", *v);
    if (auto v = get("numerics.target_tol")) cfg.target_tol = to_positive("numerics.target_tol", *v);
    if (auto v = get("numerics.junction_tol")) cfg.junction_tol = to_positive("numerics.junction_tol", *v);
    if (cfg.t_max && cfg.step > *cfg.t_max) throw ConfigError("numerics.step", "exceeds numerics.t_max");
    if (auto v = get("search.grid_theta")) cfg.grid_theta = to_int("search.grid_theta", *v, 8);
    if (auto v = get("search.grid_phi")) cfg.grid_phi = to_int("search.grid_phi", *v, 16);

    cfg.output_dir = require("output.dir");
    if (cfg.output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
    return cfg;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read scenario file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

FlowField make_flow(const ScenarioConfig& cfg) {
    if (cfg.flow_builtin) return builtin_flow(*cfg.flow_builtin);
    const auto& e = *cfg.flow_expressions;
    return expression_flow(parse_flow(e[0], e[1], e[2]));
}

Scenario to_scenario(const ScenarioConfig& cfg) {
    Scenario sc;
    sc.surface = cfg.surface_kind == SurfaceKind::Cylinder ? Surface::cylinder()
                 : cfg.surface_kind == SurfaceKind::Sphere ? Surface::sphere()
                                                           : Surface::torus(cfg.major_radius);
    sc.flow = make_flow(cfg);
    sc.start = cfg.start;
    sc.target = cfg.target;
    sc.integration.step = cfg.step;
    sc.integration.target_tol = cfg.target_tol;
    sc.integration.t_max = cfg.t_max ? *cfg.t_max : default_horizon(sc.surface, sc.flow, sc.start, sc.target);
    sc.search.junction_tol = cfg.junction_tol;
    sc.search.grid_theta = cfg.grid_theta;
    sc.search.grid_phi = cfg.grid_phi;
    return sc;
}

}  // namespace flowshoot::app
