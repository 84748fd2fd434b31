#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "flowshoot/diagnostics.hpp"
#include "flowshoot/errors.hpp"

using namespace flowshoot;

namespace {

FlowField still_water() {
    return FlowField::from_functions("zero", [](const Vec3&) { return Vec3{}; }, [](const Vec3&) { return Mat3{}; });
}

FlowField radial(double k) {
    return FlowField::from_functions(
        "radial", [k](const Vec3& x) { return k * x; }, [k](const Vec3&) { return Mat3::diagonal(k, k, k); });
}

Scenario line_scenario() {
    Scenario sc;
    sc.surface = Surface::sphere();
    sc.flow = still_water();
    sc.start = {-0.5, 0, 0};
    sc.target = {0.5, 0, 0};
    sc.integration.t_max = 2.0;
    return sc;
}

// Unit-speed straight line from A to B sampled every millisecond.
Extremal straight_line() {
    Extremal e;
    ExtremalArc arc;
    for (int k = 0; k <= 1000; ++k) {
        const double t = k * 1e-3;
        arc.samples.push_back({t, {{-0.5 + t, 0, 0}, {1, 0, 0}, 0.0, false}, {1, 0, 0}});
    }
    e.arcs.push_back(arc);
    e.T = 1.0;
    return e;
}

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST_CASE("regularity margins") {
    CHECK(check_regularity(Surface::cylinder(), builtin_shear(), 10000) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(check_regularity(Surface::sphere(), radial(1.5), 10000) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(check_regularity(Surface::sphere(), builtin_vortex(), 10000) > 0.0);
    CHECK_THROWS_AS(check_regularity(Surface::sphere(), builtin_vortex(), 99), InvalidArgument);
}

TEST_CASE("regularity margin converges with sample count") {
    for (const Surface& s : {Surface::sphere(), Surface::torus(2)}) {
        const FlowField f = builtin_vortex();
        const double a = check_regularity(s, f, 10000), b = check_regularity(s, f, 40000);
        CHECK(std::abs(a - b) < 1e-2);
    }
}

TEST_CASE("feasibility") {
    const FeasibilityReport c =
        check_feasibility(Surface::cylinder(), builtin_shear(), {0.2, -0.5, 0}, {0, 0.5, 5}, 10000);
    CHECK(c.interior_speed_margin > 0.0);
    CHECK(c.start_feasible);
    CHECK(c.target_feasible);

    const FeasibilityReport s =
        check_feasibility(Surface::sphere(), builtin_vortex(), {0.6, 0.6, 0.4}, {-0.6, -0.6, 0}, 10000);
    CHECK(s.interior_speed_margin < 0.0);
    CHECK(s.interior_speed_margin > 1.0 - 2.0 * std::sqrt(2.0));

    const FeasibilityReport out = check_feasibility(Surface::sphere(), still_water(), {1.5, 0, 0}, {0, 0, 0}, 1000);
    CHECK_FALSE(out.start_feasible);
    CHECK(out.target_feasible);
}

TEST_CASE("straight line in still water") {
    const ExtremalDiagnostics d = verify_extremal(line_scenario(), straight_line());
    CHECK(d.hamiltonian_mean == 1.0);
    CHECK(d.hamiltonian_drift == 0.0);
    CHECK(d.nontriviality_min == 1.0);
    CHECK(d.control_deviation == 0.0);
    CHECK(d.endpoint_miss < 1e-12);
    CHECK(d.mu_constant_on_interior);
    CHECK(threshold_violations(d).empty());
}

TEST_CASE("injected faults are reported") {
    Extremal e = straight_line();
    e.arcs[0].samples[500].state.psi = {0, 0, 0};
    const ExtremalDiagnostics d = verify_extremal(line_scenario(), e);
    CHECK(d.nontriviality_min < 1e-12);
    CHECK(has(threshold_violations(d), "nontriviality"));

    Extremal m = straight_line();
    m.arcs[0].samples[300].state.mu = 0.2;
    const ExtremalDiagnostics dm = verify_extremal(line_scenario(), m);
    CHECK_FALSE(dm.mu_constant_on_interior);
    CHECK(has(threshold_violations(dm), "mu-interior-constancy"));

    Extremal far = straight_line();
    for (auto& s : far.arcs[0].samples) s.state.x.c2 += 0.01;
    CHECK(has(threshold_violations(verify_extremal(line_scenario(), far)), "endpoint"));

    Extremal off = straight_line();
    off.arcs[0].samples[10].u = {0.6, 0.8, 0};
    CHECK(verify_extremal(line_scenario(), off).control_deviation > 0.1);
}

TEST_CASE("malformed extremals") {
    CHECK_THROWS_AS(verify_extremal(line_scenario(), Extremal{}), MalformedExtremal);

    Extremal gap = straight_line();
    ExtremalArc tail;
    tail.phase = ArcPhase::Interior;
    tail.samples.push_back({1.5, {{0.5, 0, 0}, {1, 0, 0}, 0, false}, {1, 0, 0}});
    tail.samples.push_back({1.6, {{0.6, 0, 0}, {1, 0, 0}, 0, false}, {1, 0, 0}});
    gap.arcs.push_back(tail);
    CHECK_THROWS_AS(verify_extremal(line_scenario(), gap), MalformedExtremal);

    Extremal back = straight_line();
    back.arcs[0].samples[7].t = back.arcs[0].samples[6].t;
    CHECK_THROWS_AS(verify_extremal(line_scenario(), back), MalformedExtremal);
}

TEST_CASE("admission report") {
    Scenario sc = line_scenario();
    sc.flow = builtin_vortex();
    const DiagnosticsReport r = admission_report(sc, 2000);
    CHECK(r.regularity_margin > 0.0);
    CHECK(r.feasibility.start_feasible);
    CHECK(r.extremals.empty());
}
