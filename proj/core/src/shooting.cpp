#include "flowshoot/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "flowshoot/parallel.hpp"

namespace flowshoot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

struct LineMin {
    double x;
    double f;
};

/// Golden-section search on [a, b]. Not guaranteed global; callers compare
/// against the value they already hold.
template <class F>
LineMin golden_min(F&& f, double a, double b, double tol, int max_iter = 200) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && b - a > tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? LineMin{c, fc} : LineMin{d, fd};
}

double contact_mu(const Scenario& sc, const ExtendedState& st) {
    try {
        return boundary_mu(sc.surface, st.x, st.psi, sc.flow.value(st.x));
    } catch (const Error&) {
        return kInf;
    }
}

double grid_theta(int i, int n) { return (i + 0.5) * kPi / n; }
double grid_phi(int j, int n) { return 2.0 * kPi * j / n; }

}  // namespace

Vec3 initial_costate(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

const char* to_string(Classification c) { return c == Classification::Interior ? "interior" : "boundary"; }

ShootingPoint shoot(const Scenario& sc, double theta, double phi, bool stop_at_target, ArcResult* arc_out) {
    ShootingPoint p;
    p.theta = theta;
    p.phi = phi;
    ExtendedState st0{sc.start, initial_costate(theta, phi), 0.0, false};
    InteriorOptions opt;
    opt.target = sc.target;
    opt.stop_at_target = stop_at_target;
    ArcResult arc = integrate_interior(sc.surface, sc.flow, st0, sc.integration, opt);
    p.event = arc.event;
    p.miss = arc.closest ? arc.closest->distance : kInf;
    p.t_closest = arc.closest ? arc.closest->t : 0.0;
    if (arc.event == ArcEvent::BoundaryContact)
        p.contact = Contact{arc.back().t, arc.back().state, contact_mu(sc, arc.back().state)};
    if (arc_out) *arc_out = std::move(arc);
    return p;
}

std::vector<size_t> ShootingGrid::ranked() const {
    std::vector<size_t> idx(nodes.size());
    for (size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return nodes[a].miss < nodes[b].miss; });
    return idx;
}

std::vector<size_t> ShootingGrid::local_minima() const {
    std::vector<size_t> out;
    for (size_t k : ranked()) {
        const int i = static_cast<int>(k) / n_phi, j = static_cast<int>(k) % n_phi;
        const double m = nodes[k].miss;
        if (!std::isfinite(m)) continue;
        bool minimal = true;
        for (int di = -1; di <= 1 && minimal; ++di) {
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                const int ii = i + di;
                if (ii < 0 || ii >= n_theta) continue;
                const int jj = (j + dj + n_phi) % n_phi;
                if (at(ii, jj).miss < m) {
                    minimal = false;
                    break;
                }
            }
        }
        if (minimal) out.push_back(k);
    }
    return out;
}

ShootingGrid scan_interior(const Scenario& sc, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 2) throw InvalidArgument("shooting grid needs at least 2x2 nodes");
    ShootingGrid grid;
    grid.n_theta = n_theta;
    grid.n_phi = n_phi;
    grid.nodes.resize(static_cast<size_t>(n_theta) * n_phi);
    parallel_for(grid.nodes.size(), sc.search.threads, [&](size_t k) {
        const int i = static_cast<int>(k) / n_phi, j = static_cast<int>(k) % n_phi;
        grid.nodes[k] = shoot(sc, grid_theta(i, n_theta), grid_phi(j, n_phi));
    });
    return grid;
}

Extremal refine_hit(const Scenario& sc, const ShootingPoint& seed) {
    double theta = seed.theta, phi = seed.phi;
    double best = shoot(sc, theta, phi).miss;
    double d_theta = kPi / sc.search.grid_theta;
    double d_phi = 2.0 * kPi / sc.search.grid_phi;

    for (int level = 0; level < sc.search.max_refine_levels && best > sc.search.refine_tol; ++level) {
        const LineMin a = golden_min([&](double t) { return shoot(sc, t, phi).miss; }, theta - d_theta,
                                     theta + d_theta, 1e-3 * d_theta);
        const double moved_theta = a.f < best ? std::abs(a.x - theta) : 0.0;
        if (a.f < best) theta = a.x, best = a.f;
        const LineMin b =
            golden_min([&](double p) { return shoot(sc, theta, p).miss; }, phi - d_phi, phi + d_phi, 1e-3 * d_phi);
        const double moved_phi = b.f < best ? std::abs(b.x - phi) : 0.0;
        if (b.f < best) phi = b.x, best = b.f;
        // Keep the bracket while the minimum is still walking; shrink once it settles.
        if (moved_theta < 0.5 * d_theta && moved_phi < 0.5 * d_phi) {
            d_theta *= 0.5;
            d_phi *= 0.5;
        }
        if (d_theta < 1e-14 && d_phi < 1e-14) break;
    }
    if (!(best < sc.integration.target_tol)) throw NoConvergence("interior refinement stalled away from the target");

    ArcResult arc;
    const ShootingPoint hit = shoot(sc, theta, phi, true, &arc);
    if (hit.event != ArcEvent::TargetReached) throw NoConvergence("refined interior shot does not end at the target");
    Extremal e;
    e.theta = theta;
    e.phi = phi;
    e.classification = Classification::Interior;
    e.arcs.push_back({ArcPhase::Interior, std::move(arc.samples)});
    e.T = e.final_sample().t;
    e.miss = norm(e.final_sample().state.x - sc.target);
    return e;
}

constexpr int kJunctionAbortLevel = 20;

Junction refine_junction(const Scenario& sc, const JunctionBracket& br) {
    auto at = [&](double tau) {
        return std::pair{br.theta_contact + tau * (br.theta_other - br.theta_contact),
                         br.phi_contact + tau * (br.phi_other - br.phi_contact)};
    };
    auto on_contact_side = [&](double tau, ArcResult& arc) {
        const auto [theta, phi] = at(tau);
        const ShootingPoint p = shoot(sc, theta, phi, false, &arc);
        return p.contact && p.contact->t < br.t_split;
    };
    ArcResult contact_arc, scratch;
    if (!on_contact_side(0.0, contact_arc) || on_contact_side(1.0, scratch))
        throw NoConvergence("junction bracket does not straddle a grazing");

    double lo = 0.0, hi = 1.0;
    double mu = contact_mu(sc, contact_arc.back().state);
    const double goal = 1e-2 * sc.search.junction_tol;
    for (int level = 0; level < sc.search.max_refine_levels && std::abs(mu) > goal; ++level) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        // A genuine grazing has μ → 0 well before this; a contact-time jump
        // without grazing (e.g. the arc hits a different part of the wall) does not.
        if (level == kJunctionAbortLevel && std::abs(mu) > 100.0 * sc.search.junction_tol) break;
        if (on_contact_side(mid, scratch)) {
            lo = mid;
            contact_arc = std::move(scratch);
            mu = contact_mu(sc, contact_arc.back().state);
        } else {
            hi = mid;
        }
    }
    if (!(std::abs(mu) < sc.search.junction_tol))
        throw NoConvergence("entry multiplier did not vanish at the junction");
    const auto [theta, phi] = at(lo);
    return Junction{theta, phi, std::move(contact_arc)};
}

std::vector<JunctionBracket> junction_brackets(const Scenario& sc, const ShootingGrid& grid) {
    std::vector<JunctionBracket> out;
    auto first_contact = [](const ShootingPoint& p) { return p.contact ? p.contact->t : kInf; };
    const double d_phi = 2.0 * kPi / grid.n_phi;
    auto consider = [&](const ShootingPoint& a, const ShootingPoint& b, double phi_b) {
        if (a.event == ArcEvent::NumericalFailure || b.event == ArcEvent::NumericalFailure) return;
        const double ta = first_contact(a), tb = first_contact(b);
        if (!std::isfinite(std::min(ta, tb))) return;
        if (!(std::abs(ta - tb) > sc.search.contact_jump)) return;
        const double t_late = std::min(std::max(ta, tb), sc.integration.t_max);
        const double split = 0.5 * (std::min(ta, tb) + t_late);
        if (ta < tb)
            out.push_back({a.theta, a.phi, b.theta, phi_b, split});
        else
            out.push_back({b.theta, phi_b, a.theta, a.phi, split});
    };
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const ShootingPoint& a = grid.at(i, j);
            if (i + 1 < grid.n_theta) consider(a, grid.at(i + 1, j), a.phi);
            consider(a, grid.at(i, (j + 1) % grid.n_phi), a.phi + d_phi);
        }
    }
    return out;
}

namespace {

Departure depart(const Scenario& sc, const ArcResult& boundary, double t) {
    Departure dep;
    dep.t = t;
    ExtendedState st = boundary_state_at(sc.surface, sc.flow, boundary, t);
    st.x = sc.surface.project(st.x);
    st.on_boundary = false;
    InteriorOptions opt;
    opt.target = sc.target;
    opt.t0 = t;
    dep.continuation = integrate_interior(sc.surface, sc.flow, st, sc.integration, opt);
    const ArcResult& c = dep.continuation;
    const bool exits = c.event == ArcEvent::BoundaryContact && c.back().t - t <= sc.integration.step;
    const bool failed = c.event == ArcEvent::NumericalFailure;
    const bool at_end = c.closest && ((c.event != ArcEvent::TargetReached && c.closest->t >= c.back().t) ||
                                      c.closest->t <= c.samples.front().t);
    dep.miss = (exits || failed || at_end || !c.closest) ? kInf : c.closest->distance;
    return dep;
}

}  // namespace

BoundaryTrace trace_boundary(const Scenario& sc, const Junction& j, int stride,
                             std::optional<std::pair<double, double>> window) {
    BoundaryTrace tr;
    ExtendedState st = j.contact().state;
    tr.boundary = integrate_boundary(sc.surface, sc.flow, st, sc.integration, j.contact().t);
    const std::vector<Sample>& smp = tr.boundary.samples;
    const int n = static_cast<int>(smp.size());
    if (n < 2) return tr;
    stride = std::max(1, stride);

    int k_lo = 0, k_hi = n - 1;
    if (window) {
        auto index_of = [&](double t) {
            auto it = std::lower_bound(smp.begin(), smp.end(), t, [](const Sample& s, double v) { return s.t < v; });
            return static_cast<int>(std::min<ptrdiff_t>(it - smp.begin(), n - 1));
        };
        k_lo = index_of(window->first);
        k_hi = index_of(window->second);
    }

    std::vector<double> miss(n, std::numeric_limits<double>::quiet_NaN());
    auto miss_at = [&](int k) {
        if (std::isnan(miss[k])) miss[k] = depart(sc, tr.boundary, smp[k].t).miss;
        return miss[k];
    };

    std::vector<int> coarse;
    for (int k = k_lo; k <= k_hi; k += stride) coarse.push_back(k);
    if (coarse.back() != k_hi) coarse.push_back(k_hi);
    std::vector<double> cm(coarse.size());
    parallel_for(coarse.size(), sc.search.threads, [&](size_t c) { cm[c] = depart(sc, tr.boundary, smp[coarse[c]].t).miss; });
    for (size_t c = 0; c < coarse.size(); ++c) miss[coarse[c]] = cm[c];

    std::vector<size_t> minima;
    for (size_t c = 0; c < coarse.size(); ++c) {
        if (!std::isfinite(cm[c])) continue;
        const bool left = c == 0 || cm[c] <= cm[c - 1];
        const bool right = c + 1 == coarse.size() || cm[c] <= cm[c + 1];
        if (left && right) minima.push_back(c);
    }
    std::sort(minima.begin(), minima.end(), [&](size_t a, size_t b) { return cm[a] < cm[b]; });
    if (minima.size() > 4) minima.resize(4);

    for (size_t c : minima) {
        const int lo = std::max(k_lo, coarse[c] - stride + 1), hi = std::min(k_hi, coarse[c] + stride - 1);
        int kb = coarse[c];
        for (int k = lo; k <= hi; ++k)
            if (miss_at(k) < miss_at(kb)) kb = k;
        const double ta = smp[std::max(0, kb - 1)].t, tb = smp[std::min(n - 1, kb + 1)].t;
        const LineMin lm = golden_min([&](double t) { return depart(sc, tr.boundary, t).miss; }, ta, tb, 1e-11);
        const double t_best = lm.f < miss[kb] ? lm.x : smp[kb].t;
        Departure d = depart(sc, tr.boundary, t_best);
        if (std::isfinite(d.miss)) tr.minima.push_back(std::move(d));
    }
    std::stable_sort(tr.minima.begin(), tr.minima.end(),
                     [](const Departure& a, const Departure& b) { return a.miss < b.miss; });
    if (!tr.minima.empty()) tr.best = tr.minima.front();
    return tr;
}

Extremal assemble_boundary_extremal(const Scenario& sc, const Junction& j, const ArcResult& boundary,
                                    const Departure& dep) {
    Extremal e;
    e.theta = j.theta;
    e.phi = j.phi;
    e.classification = Classification::Boundary;
    e.arcs.push_back({ArcPhase::Interior, j.entry.samples});

    ExtremalArc b{ArcPhase::Boundary, {}};
    for (const Sample& s : boundary.samples) {
        if (s.t >= dep.t) break;
        b.samples.push_back(s);
    }
    const Sample& first = dep.continuation.samples.front();
    ExtendedState exit_state = boundary_state_at(sc.surface, sc.flow, boundary, dep.t);
    exit_state.x = first.state.x;
    b.samples.push_back({dep.t, exit_state, first.u});
    e.arcs.push_back(std::move(b));

    e.arcs.push_back({ArcPhase::Interior, dep.continuation.samples});
    e.junctions.emplace_back(j.contact().t, dep.t);
    e.T = e.final_sample().t;
    e.miss = norm(e.final_sample().state.x - sc.target);
    return e;
}

std::vector<Extremal> trace_boundary_and_depart(const Scenario& sc, const Junction& j) {
    const BoundaryTrace tr = trace_boundary(sc, j, sc.search.departure_stride);
    std::vector<Extremal> out;
    if (tr.best && tr.best->miss < sc.integration.target_tol &&
        tr.best->continuation.event == ArcEvent::TargetReached)
        out.push_back(assemble_boundary_extremal(sc, j, tr.boundary, *tr.best));
    return out;
}

namespace {

struct Family {
    double t_depart = 0.0;
    double miss = kInf;
};

struct BranchNode {
    JunctionBracket bracket;
    Junction junction;
    std::vector<Family> families;
    std::vector<size_t> neighbours;
};

/// Miss of the departure family of `node` nearest to t, if one is close enough.
double family_miss(const BranchNode& node, double t) {
    double best = kInf, gap = 0.2;
    for (const Family& f : node.families)
        if (std::abs(f.t_depart - t) < gap) gap = std::abs(f.t_depart - t), best = f.miss;
    return best;
}

JunctionBracket unwrapped_near(const JunctionBracket& b, double phi_ref) {
    JunctionBracket out = b;
    const double shift = 2.0 * kPi * std::round((phi_ref - b.phi_contact) / (2.0 * kPi));
    out.phi_contact += shift;
    out.phi_other += shift;
    return out;
}

/// Junction on the bracket a + s (b − a); the bracket is stretched about its
/// midpoint when the interpolated one does not straddle the grazing.
std::optional<Junction> junction_between(const Scenario& sc, const JunctionBracket& a, const JunctionBracket& b,
                                         double s) {
    auto lerp = [s](double x, double y) { return x + s * (y - x); };
    const JunctionBracket base{lerp(a.theta_contact, b.theta_contact), lerp(a.phi_contact, b.phi_contact),
                               lerp(a.theta_other, b.theta_other), lerp(a.phi_other, b.phi_other),
                               lerp(a.t_split, b.t_split)};
    for (double stretch : {1.0, 2.0, 3.0}) {
        const double tm = 0.5 * (base.theta_contact + base.theta_other);
        const double pm = 0.5 * (base.phi_contact + base.phi_other);
        JunctionBracket br = base;
        br.theta_contact = tm + stretch * (base.theta_contact - tm);
        br.phi_contact = pm + stretch * (base.phi_contact - pm);
        br.theta_other = tm + stretch * (base.theta_other - tm);
        br.phi_other = pm + stretch * (base.phi_other - pm);
        try {
            return refine_junction(sc, br);
        } catch (const NoConvergence&) {
        }
    }
    return std::nullopt;
}

bool same_extremal(const Extremal& a, const Extremal& b) {
    return a.classification == b.classification &&
           norm(initial_costate(a.theta, a.phi) - initial_costate(b.theta, b.phi)) < 1e-6 && std::abs(a.T - b.T) < 1e-6;
}

/// Best boundary extremal along the grazing branch through `n`, searching the
/// bracket line from one cell before n to the neighbour m.
std::optional<Extremal> refine_branch(const Scenario& sc, const BranchNode& n, const BranchNode& m,
                                      double t_center) {
    const JunctionBracket& a = n.bracket;
    const JunctionBracket b = unwrapped_near(m.bracket, a.phi_contact);
    const auto window = std::make_pair(t_center - 0.3, t_center + 0.3);
    std::optional<Junction> j;
    BoundaryTrace tr;
    auto evaluate = [&](double s) {
        j = junction_between(sc, a, b, s);
        if (!j) return kInf;
        tr = trace_boundary(sc, *j, 4, window);
        return tr.best ? tr.best->miss : kInf;
    };
    const LineMin lm = golden_min(evaluate, -1.0, 1.0, 1e-10);
    if (!std::isfinite(lm.f)) return std::nullopt;
    if (!(evaluate(lm.x) < sc.integration.target_tol) || !tr.best) return std::nullopt;
    if (tr.best->continuation.event != ArcEvent::TargetReached) return std::nullopt;
    Extremal e = assemble_boundary_extremal(sc, *j, tr.boundary, *tr.best);
    e.phi -= 2.0 * kPi * std::floor(e.phi / (2.0 * kPi));
    return e;
}

}  // namespace

ExtremalField solve(const Scenario& sc) {
    sc.integration.validate();
    ExtremalField field;
    field.grid = scan_interior(sc, sc.search.grid_theta, sc.search.grid_phi);
    std::vector<Extremal> found;

    std::vector<size_t> seeds;
    for (size_t k : field.grid.local_minima())
        if (field.grid.nodes[k].miss <= sc.search.seed_miss_max) seeds.push_back(k);
    std::vector<std::optional<Extremal>> interior(seeds.size());
    parallel_for(seeds.size(), sc.search.threads, [&](size_t s) {
        try {
            interior[s] = refine_hit(sc, field.grid.nodes[seeds[s]]);
        } catch (const NoConvergence&) {
        }
    });
    for (auto& e : interior)
        if (e) found.push_back(std::move(*e));

    if (sc.search.search_boundary) {
        Scenario serial = sc;
        serial.search.threads = 1;

        const std::vector<JunctionBracket> brackets = junction_brackets(sc, field.grid);
        std::vector<std::optional<BranchNode>> refined(brackets.size());
        parallel_for(brackets.size(), sc.search.threads, [&](size_t b) {
            try {
                BranchNode node{brackets[b], refine_junction(serial, brackets[b]), {}, {}};
                const BoundaryTrace tr = trace_boundary(serial, node.junction, sc.search.departure_stride);
                for (const Departure& d : tr.minima) node.families.push_back({d.t, d.miss});
                refined[b] = std::move(node);
            } catch (const NoConvergence&) {
            }
        });
        std::vector<BranchNode> nodes;
        for (auto& n : refined)
            if (n) nodes.push_back(std::move(*n));
        field.junctions_examined = nodes.size();

        // Junctions close on the ψ(0) sphere with similar entry times lie on the same grazing branch.
        const double reach = 2.5 * kPi / sc.search.grid_theta;
        for (size_t a = 0; a < nodes.size(); ++a)
            for (size_t b = a + 1; b < nodes.size(); ++b) {
                const Junction& ja = nodes[a].junction;
                const Junction& jb = nodes[b].junction;
                if (norm(initial_costate(ja.theta, ja.phi) - initial_costate(jb.theta, jb.phi)) > reach) continue;
                if (std::abs(ja.contact().t - jb.contact().t) > 0.3) continue;
                nodes[a].neighbours.push_back(b);
                nodes[b].neighbours.push_back(a);
            }

        struct Candidate {
            size_t node;
            size_t towards;
            double t_depart;
        };
        std::vector<Candidate> candidates;
        for (size_t k = 0; k < nodes.size(); ++k) {
            const BranchNode& n = nodes[k];
            if (n.neighbours.empty()) continue;
            for (const Family& f : n.families) {
                if (!(f.miss <= sc.search.seed_miss_max)) continue;
                bool minimal = true;
                size_t towards = n.neighbours.front();
                double towards_miss = kInf;
                for (size_t m : n.neighbours) {
                    const double fm = family_miss(nodes[m], f.t_depart);
                    minimal = minimal && !(fm < f.miss);
                    if (fm < towards_miss) towards_miss = fm, towards = m;
                }
                if (minimal) candidates.push_back({k, towards, f.t_depart});
            }
        }

        std::vector<std::optional<Extremal>> boundary(candidates.size());
        parallel_for(candidates.size(), sc.search.threads, [&](size_t c) {
            const Candidate& cd = candidates[c];
            boundary[c] = refine_branch(serial, nodes[cd.node], nodes[cd.towards], cd.t_depart);
        });
        for (auto& e : boundary)
            if (e) found.push_back(std::move(*e));
    }

    std::stable_sort(found.begin(), found.end(), [](const Extremal& a, const Extremal& b) { return a.T < b.T; });
    for (Extremal& e : found) {
        bool dup = false;
        for (const Extremal& kept : field.extremals) dup = dup || same_extremal(kept, e);
        if (!dup) field.extremals.push_back(std::move(e));
    }
    if (field.extremals.empty()) throw EmptyField("no extremal reaches the target");
    field.optimal = 0;
    return field;
}

}  // namespace flowshoot
