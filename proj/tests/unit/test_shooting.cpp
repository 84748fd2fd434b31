#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flowshoot/errors.hpp"
#include "flowshoot/shooting.hpp"
#include "sampling.hpp"

using namespace flowshoot;

namespace {

constexpr double kPi = std::numbers::pi;

FlowField still_water() {
    return FlowField::from_functions("zero", [](const Vec3&) { return Vec3{}; }, [](const Vec3&) { return Mat3{}; });
}

Scenario chord(int n_theta = 16, int n_phi = 32) {
    Scenario sc;
    sc.surface = Surface::sphere();
    sc.flow = still_water();
    sc.start = {-0.5, 0, 0};
    sc.target = {0.5, 0, 0};
    sc.integration.t_max = 2.0;
    sc.search.grid_theta = n_theta;
    sc.search.grid_phi = n_phi;
    sc.search.threads = 2;
    return sc;
}

Scenario cylinder_shear(int n_theta, int n_phi) {
    Scenario sc;
    sc.surface = Surface::cylinder();
    sc.flow = builtin_shear();
    sc.start = {0.2, -0.5, 0};
    sc.target = {0, 0.5, 5};
    sc.integration.t_max = 6.0;
    sc.search.grid_theta = n_theta;
    sc.search.grid_phi = n_phi;
    return sc;
}

FlowField inward(double k) {
    return FlowField::from_functions(
        "inward", [k](const Vec3& x) { return -k * x; }, [k](const Vec3&) { return Mat3::diagonal(-k, -k, -k); });
}

}  // namespace

TEST_CASE("initial costate is a unit vector") {
    testing::Sampler rng(41);
    for (int k = 0; k < 1000; ++k) {
        const double th = rng.uniform(0, kPi), ph = rng.uniform(0, 2 * kPi);
        const Vec3 p = initial_costate(th, ph);
        CHECK(std::abs(norm(p) - 1.0) < 1e-14);
        CHECK(p.c3 == std::cos(th));
    }
}

TEST_CASE("grid layout and local minima") {
    ShootingGrid g;
    g.n_theta = 3;
    g.n_phi = 4;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) g.nodes.push_back({0, 0, ArcEvent::HorizonExpired, 5.0, 0, {}});
    g.nodes[1 * 4 + 0].miss = 1.0;  // minimum on the φ = 0 seam
    g.nodes[1 * 4 + 3].miss = 2.0;  // its wrapped neighbour, not a minimum
    g.nodes[2 * 4 + 2].miss = 3.0;
    const auto minima = g.local_minima();
    REQUIRE(minima.size() == 1);
    CHECK(minima[0] == 4);
    const auto ranked = g.ranked();
    CHECK(ranked[0] == 4);
    CHECK(ranked[1] == 7);
    CHECK(ranked[2] == 10);
    CHECK(&g.at(2, 2) == &g.nodes[10]);
}

TEST_CASE("grid scan finds the chord direction") {
    const Scenario sc = chord();
    const ShootingGrid grid = scan_interior(sc, 16, 32);
    CHECK(grid.nodes.size() == 16 * 32);
    for (int i = 0; i < 16; ++i) CHECK(grid.at(i, 0).theta == doctest::Approx((i + 0.5) * kPi / 16));
    const ShootingPoint& best = grid.nodes[grid.ranked().front()];
    CHECK(dot(best.psi0(), {1, 0, 0}) > 0.98);

    const Extremal e = refine_hit(sc, best);
    CHECK(e.classification == Classification::Interior);
    CHECK(e.T == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(e.miss < 1e-3);
    CHECK(dot(initial_costate(e.theta, e.phi), {1, 0, 0}) > 1 - 1e-6);
}

TEST_CASE("refinement from an off-axis seed") {
    const Scenario sc = chord();
    const ShootingPoint seed = shoot(sc, kPi / 2 + 0.05, 0.03);
    CHECK(seed.miss > 1e-3);
    const Extremal e = refine_hit(sc, seed);
    CHECK(e.T == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(e.miss < sc.integration.target_tol);
}

TEST_CASE("refinement in the wrong hemisphere fails") {
    const Scenario sc = chord();
    const ShootingPoint seed = shoot(sc, kPi / 2, kPi);
    CHECK_THROWS_AS(refine_hit(sc, seed), NoConvergence);
}

TEST_CASE("no grazing junction under a strictly inward flow") {
    Scenario sc;
    sc.surface = Surface::sphere();
    sc.flow = inward(0.5);
    sc.start = {0.5, 0, 0};
    sc.target = {-0.5, 0.2, 0};
    sc.integration.t_max = 3.0;
    // Outward aim meets the wall head-on; the opposite aim stays inside longer.
    const ShootingPoint out = shoot(sc, kPi / 2, 0);
    const ShootingPoint in = shoot(sc, kPi / 2, kPi);
    REQUIRE(out.contact);
    const double split = out.contact->t + 0.05;
    CHECK((!in.contact || in.contact->t > split));
    CHECK(std::abs(out.contact->mu) > 0.1);
    CHECK_THROWS_AS(refine_junction(sc, {kPi / 2, 0, kPi / 2, kPi, split}), NoConvergence);

    sc.search.grid_theta = 8;
    sc.search.grid_phi = 16;
    const ShootingGrid grid = scan_interior(sc, 8, 16);
    for (const JunctionBracket& b : junction_brackets(sc, grid)) CHECK_THROWS_AS(refine_junction(sc, b), NoConvergence);
}

TEST_CASE("grazing junction in the cylinder") {
    const Scenario sc = cylinder_shear(16, 32);
    const ShootingGrid grid = scan_interior(sc, 16, 32);
    const auto brackets = junction_brackets(sc, grid);
    REQUIRE(!brackets.empty());
    int converged = 0;
    for (const JunctionBracket& b : brackets) {
        try {
            const Junction j = refine_junction(sc, b);
            ++converged;
            CHECK(std::abs(j.contact().state.mu) == 0.0);
            const double mu = boundary_mu(sc.surface, j.contact().state.x, j.contact().state.psi,
                                          sc.flow.value(j.contact().state.x));
            CHECK(std::abs(mu) < sc.search.junction_tol);
            CHECK(std::abs(sc.surface.value(j.contact().state.x)) < 1e-9);
        } catch (const NoConvergence&) {
        }
    }
    CHECK(converged > 0);
}

TEST_CASE("boundary departures that never reach the target") {
    Scenario sc = cylinder_shear(16, 32);
    const ShootingGrid grid = scan_interior(sc, 16, 32);
    std::optional<Junction> junction;
    for (const JunctionBracket& b : junction_brackets(sc, grid)) {
        try {
            junction = refine_junction(sc, b);
            break;
        } catch (const NoConvergence&) {
        }
    }
    REQUIRE(junction);
    sc.target = {0, 0.5, 50};
    CHECK(trace_boundary_and_depart(sc, *junction).empty());
}

TEST_CASE("solve on the straight chord") {
    const ExtremalField field = solve(chord());
    REQUIRE(field.extremals.size() == 1);
    CHECK(field.optimal == 0);
    const Extremal& e = field.extremals[0];
    CHECK(e.T == doctest::Approx(1.0).epsilon(1e-3));
    for (const ExtremalArc& arc : e.arcs)
        for (const Sample& s : arc.samples) CHECK(std::hypot(s.state.x.c2, s.state.x.c3) < 1e-6);
}

TEST_CASE("solve is independent of the worker count") {
    Scenario one = chord(12, 24), many = chord(12, 24);
    one.search.threads = 1;
    many.search.threads = 4;
    const ExtremalField a = solve(one), b = solve(many);
    REQUIRE(a.extremals.size() == b.extremals.size());
    for (size_t i = 0; i < a.extremals.size(); ++i) {
        CHECK(a.extremals[i].T == b.extremals[i].T);
        CHECK(a.extremals[i].theta == b.extremals[i].theta);
        CHECK(a.extremals[i].phi == b.extremals[i].phi);
    }
}

TEST_CASE("an unreachable target gives an empty field") {
    Scenario sc = chord();
    sc.integration.t_max = 0.5;
    CHECK_THROWS_AS(solve(sc), EmptyField);
}

TEST_CASE("classification names") {
    CHECK(std::string(to_string(Classification::Interior)) == "interior");
    CHECK(std::string(to_string(Classification::Boundary)) == "boundary");
}
