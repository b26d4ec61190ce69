#include "prsweep/validate.hpp"

#include "prsweep/sweep.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace prsweep::validate {

using arrangement::CircleConstraint;
using arrangement::CoordinateSlice;
using arrangement::Side;
using numeric::compare;
using numeric::Exact;
using numeric::exact_eq;
using numeric::Rational;
using numeric::rational_to_string;

void ValidationReport::add(CheckResult c) {
    overall = overall && c.pass;
    checks.push_back(std::move(c));
}

const CheckResult* ValidationReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return c.id + (c.witness.empty() ? "" : ": " + c.witness);
    return "";
}

namespace {

std::string point_to_string(const std::vector<Exact>& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += p[i].to_string();
    }
    return s + ")";
}

// slices of every coordinate at one x1 value, with event provenance when the
// value is an event
struct SliceAt {
    std::vector<CoordinateSlice> slices;
    bool nonempty = true;
};

SliceAt slices_at_value(const arrangement::Arrangement& arr,
                        const arrangement::EventSet& ev, const Exact& t) {
    const arrangement::SweepEvent* at = nullptr;
    for (const auto& e : ev.events)
        if (exact_eq(e.t, t)) {
            at = &e;
            break;
        }
    SliceAt out;
    for (int m = 2; m <= arr.ambient_dim; ++m) {
        out.slices.push_back(arrangement::slice(arr, m, t, at));
        if (out.slices.back().empty()) {
            out.nonempty = false;
            break;  // values at empty levels are irrelevant and may be wild
        }
    }
    return out;
}

// representative coordinate inside a slice component (closed, so an endpoint
// serves)
Exact representative(const CoordinateSlice& s) {
    const auto& c = s.components.front();
    if (c.lo.finite()) return c.lo.value;
    if (c.hi.finite()) return c.hi.value;
    return Exact(0L);
}

// full-dimension witness point for an in-plane incidence at (t, coord m -> y)
std::vector<Exact> witness_point(const arrangement::Arrangement& arr, const SliceAt& at,
                                 const Exact& t,
                                 const std::vector<std::pair<int, Exact>>& pinned) {
    std::vector<Exact> p(arr.ambient_dim, Exact(0L));
    p[0] = t;
    for (int m = 2; m <= arr.ambient_dim; ++m) {
        const Exact* fixed = nullptr;
        for (const auto& [coord, v] : pinned)
            if (coord == m) fixed = &v;
        p[m - 1] = fixed ? *fixed : representative(at.slices[m - 2]);
    }
    return p;
}

}  // namespace

ValidationReport transversality(const arrangement::Arrangement& arr) {
    ValidationReport report;
    arrangement::EventSet ev;
    try {
        ev = arrangement::events(arr);
        report.add({"well-formed", true, "", {}});
    } catch (const Error& e) {
        report.add({"well-formed", false, e.what(), {{"code", errc_name(e.code())}}});
        return report;
    }

    // (a) tangent same-coordinate pairs with the tangency point in the closure
    CheckResult tangent{"tangent-pair", true, "", {}};
    for (int m = 2; m <= arr.ambient_dim && tangent.pass; ++m) {
        auto group = arr.constraints_of_coord(m);
        for (std::size_t gi = 0; gi < group.size() && tangent.pass; ++gi) {
            for (std::size_t gj = gi + 1; gj < group.size() && tangent.pass; ++gj) {
                const auto& c1 = arr.constraints[group[gi]];
                const auto& c2 = arr.constraints[group[gj]];
                Rational dx = c2.center_x - c1.center_x;
                Exact dy = c2.center_y - c1.center_y;
                Exact d2 = Exact(Rational(dx * dx)) + dy * dy;
                Rational sum2 = (c1.radius + c2.radius) * (c1.radius + c2.radius);
                Rational diff2 = (c1.radius - c2.radius) * (c1.radius - c2.radius);
                bool ext = compare(d2, Exact(sum2)) == std::strong_ordering::equal;
                bool intl = numeric::sign(d2) != 0 &&
                            compare(d2, Exact(diff2)) == std::strong_ordering::equal;
                if (!ext && !intl) continue;
                Rational denom = ext ? Rational(c1.radius + c2.radius)
                                     : Rational(c1.radius - c2.radius);
                Rational px = ext ? Rational((c1.radius * c2.center_x +
                                              c2.radius * c1.center_x) / denom)
                                  : Rational((c1.radius * c2.center_x -
                                              c2.radius * c1.center_x) / denom);
                Exact py = ext ? (Exact(Rational(c1.radius)) * c2.center_y +
                                  Exact(Rational(c2.radius)) * c1.center_y) /
                                     Exact(denom)
                               : (Exact(Rational(c1.radius)) * c2.center_y -
                                  Exact(Rational(c2.radius)) * c1.center_y) /
                                     Exact(denom);
                SliceAt at = slices_at_value(arr, ev, Exact(px));
                if (!at.nonempty) continue;
                if (arrangement::component_containing(at.slices[m - 2], py) < 0) continue;
                auto point = witness_point(arr, at, Exact(px), {{m, py}});
                tangent.pass = false;
                tangent.witness = "constraints " + c1.id + " and " + c2.id +
                                  " tangent at closure point " + point_to_string(point);
                tangent.data["constraint1"] = c1.id;
                tangent.data["constraint2"] = c2.id;
                tangent.data["point"] = point_to_string(point);
            }
        }
    }
    report.add(std::move(tangent));

    // (b) two vertical tangencies at the same x1 with a common closure point
    CheckResult shared{"shared-vertical-tangency", true, "", {}};
    std::map<Rational, std::vector<int>> tangency_groups;
    for (std::size_t i = 0; i < arr.constraints.size(); ++i) {
        const auto& c = arr.constraints[i];
        tangency_groups[c.center_x - c.radius].push_back(static_cast<int>(i));
        tangency_groups[c.center_x + c.radius].push_back(static_cast<int>(i));
    }
    for (const auto& [t, cs] : tangency_groups) {
        if (!shared.pass) break;
        if (cs.size() < 2) continue;
        SliceAt at = slices_at_value(arr, ev, Exact(t));
        if (!at.nonempty) continue;
        for (std::size_t i = 0; i < cs.size() && shared.pass; ++i) {
            for (std::size_t j = i + 1; j < cs.size() && shared.pass; ++j) {
                const auto& c1 = arr.constraints[cs[i]];
                const auto& c2 = arr.constraints[cs[j]];
                if (c1.coord == c2.coord) continue;  // same plane: covered by (a)
                if (arrangement::component_containing(at.slices[c1.coord - 2], c1.center_y) < 0)
                    continue;
                if (arrangement::component_containing(at.slices[c2.coord - 2], c2.center_y) < 0)
                    continue;
                auto point = witness_point(arr, at, Exact(t),
                                           {{c1.coord, c1.center_y}, {c2.coord, c2.center_y}});
                shared.pass = false;
                shared.witness = "constraints " + c1.id + " and " + c2.id +
                                 " are both vertically tangent at x1 = " +
                                 rational_to_string(t) + ", common closure point " +
                                 point_to_string(point);
                shared.data["constraint1"] = c1.id;
                shared.data["constraint2"] = c2.id;
                shared.data["point"] = point_to_string(point);
            }
        }
    }
    report.add(std::move(shared));

    // points on more than ambient_dim hypersurfaces
    CheckResult bound{"incidence-bound", true, "", {}};
    for (const auto& e : ev.events) {
        if (!bound.pass) break;
        SliceAt at = slices_at_value(arr, ev, e.t);
        if (!at.nonempty) continue;
        int total = 0;
        for (int m = 2; m <= arr.ambient_dim; ++m) {
            // group band endpoints of this coordinate by value
            std::vector<std::pair<Exact, int>> incident;
            for (int idx : arr.constraints_of_coord(m)) {
                arrangement::Band b =
                    arrangement::band(arr.constraints[idx], e.t, &e);
                if (!b.active) continue;
                incident.emplace_back(b.lo, idx);
                if (!b.tangent) incident.emplace_back(b.hi, idx);
            }
            int best = 0;
            for (std::size_t i = 0; i < incident.size(); ++i) {
                if (arrangement::component_containing(at.slices[m - 2], incident[i].first) < 0)
                    continue;
                std::vector<int> cs{incident[i].second};
                for (std::size_t j = 0; j < incident.size(); ++j) {
                    if (j == i || incident[j].second == incident[i].second) continue;
                    if (exact_eq(incident[i].first, incident[j].first) &&
                        std::find(cs.begin(), cs.end(), incident[j].second) == cs.end())
                        cs.push_back(incident[j].second);
                }
                best = std::max(best, static_cast<int>(cs.size()));
            }
            total += best;
        }
        if (total > arr.ambient_dim) {
            bound.pass = false;
            bound.witness = "a closure point at x1 = " + e.t.to_string() + " lies on " +
                            std::to_string(total) + " hypersurfaces in dimension " +
                            std::to_string(arr.ambient_dim);
        }
    }
    report.add(std::move(bound));
    return report;
}

ValidationReport ra_region(const arrangement::Arrangement& arr) {
    ValidationReport report;

    sweep::SweepOptions opts;
    opts.allow_unbounded = true;
    bool structure_ok = false;
    try {
        sweep::PRGraph pr = sweep::reeb(arr, opts);
        structure_ok = true;
        CheckResult ok{"nonempty-connected", true, "", {}};
        ok.data["vertices"] = std::to_string(pr.digraph.graph.vertex_count);
        ok.data["edges"] = std::to_string(pr.digraph.graph.edges.size());
        report.add(std::move(ok));
    } catch (const Error& e) {
        std::string id = e.code() == Errc::EmptyRegion ? "nonempty-connected"
                         : e.code() == Errc::DisconnectedRegion ? "nonempty-connected"
                                                                : "sweepable";
        report.add({id, false, e.what(), {{"code", errc_name(e.code())}}});
    }

    if (structure_ok) {
        // every hypersurface must meet the closure
        sweep::SliceTables tables = sweep::slice_tables(arr);
        CheckResult used{"hypersurfaces-used", true, "", {}};
        for (std::size_t ci = 0; ci < arr.constraints.size(); ++ci) {
            const auto& c = arr.constraints[ci];
            bool touched = false;
            auto probe = [&](const Exact& t, const std::vector<CoordinateSlice>& slices,
                             const arrangement::SweepEvent* at) {
                if (touched) return;
                arrangement::Band b = arrangement::band(c, t, at);
                if (!b.active) return;
                const CoordinateSlice& s = slices[c.coord - 2];
                if (arrangement::component_containing(s, b.lo) >= 0 ||
                    arrangement::component_containing(s, b.hi) >= 0)
                    touched = true;
            };
            for (std::size_t i = 0; i < tables.events.events.size() && !touched; ++i)
                if (tables.event_nonempty[i])
                    probe(tables.events.events[i].t, tables.event_slices[i],
                          &tables.events.events[i]);
            for (std::size_t i = 0; i < tables.gap_samples.size() && !touched; ++i)
                if (tables.gap_nonempty[i])
                    probe(tables.gap_samples[i], tables.gap_slices[i], nullptr);
            if (!touched) {
                used.pass = false;
                used.witness = "hypersurface " + c.id + " does not meet the closure";
                used.data["constraint"] = c.id;
                break;
            }
        }
        report.add(std::move(used));
    }

    for (auto& c : transversality(arr).checks) report.add(std::move(c));

    // condition (1): the region is a full intersection, so U_D = R^k works
    report.add({"open-neighborhood", true,
                "structural: full intersection of constraint sets", {}});
    return report;
}

namespace {

void run_sweep_checks(const digraph::LeveledDigraph& target,
                      const std::vector<Rational>* levels,
                      const arrangement::Arrangement& arr, ValidationReport& report) {
    sweep::PRGraph pr;
    try {
        pr = sweep::reeb(arr);
        CheckResult c{"sweep", true, "", {}};
        c.data["vertices"] = std::to_string(pr.digraph.graph.vertex_count);
        c.data["edges"] = std::to_string(pr.digraph.graph.edges.size());
        c.data["b1"] = std::to_string(pr.b1);
        report.add(std::move(c));
    } catch (const Error& e) {
        report.add({"sweep", false, e.what(), {{"code", errc_name(e.code())}}});
        return;
    }

    auto iso = digraph::leveled_isomorphic(pr.digraph, target);
    CheckResult isoc{"leveled-isomorphic", iso.isomorphic, "", {}};
    if (iso.isomorphic) {
        std::ostringstream os;
        for (std::size_t v = 0; v < iso.witness.size(); ++v) {
            if (v) os << " ";
            os << pr.digraph.ids[v] << "->" << target.ids[iso.witness[v]];
        }
        isoc.data["witness"] = os.str();
    } else {
        isoc.witness = "computed Poincare-Reeb digraph is not leveled-isomorphic to the target";
        isoc.data["computed_vertices"] = std::to_string(pr.digraph.graph.vertex_count);
        isoc.data["target_vertices"] = std::to_string(target.graph.vertex_count);
    }
    report.add(std::move(isoc));

    if (levels) {
        CheckResult lv{"vertex-level-set", true, "", {}};
        auto distinct = pr.digraph.distinct_levels();
        if (distinct.size() != levels->size()) {
            lv.pass = false;
            lv.witness = "computed " + std::to_string(distinct.size()) +
                         " distinct levels, expected " + std::to_string(levels->size());
        } else {
            for (std::size_t i = 0; i < distinct.size(); ++i) {
                if (!exact_eq(distinct[i], Exact((*levels)[i]))) {
                    lv.pass = false;
                    lv.witness = "level " + distinct[i].to_string() +
                                 " differs from expected " +
                                 rational_to_string((*levels)[i]);
                    break;
                }
            }
        }
        report.add(std::move(lv));
    }
}

}  // namespace

ValidationReport verify_theorem(const synthesis::TheoremInstance& inst,
                                const arrangement::Arrangement& arr) {
    ValidationReport report;
    digraph::LeveledDigraph target;
    try {
        target = inst.target();
    } catch (const Error& e) {
        report.add({"instance", false, e.what(), {{"code", errc_name(e.code())}}});
        return report;
    }
    report.add({"instance", true, "", {}});
    for (auto& c : ra_region(arr).checks) report.add(std::move(c));
    if (!report.overall) return report;
    run_sweep_checks(target, &inst.levels, arr, report);
    return report;
}

ValidationReport verify_against(const digraph::LeveledDigraph& target,
                                const std::vector<Rational>* levels,
                                const arrangement::Arrangement& arr) {
    ValidationReport report;
    run_sweep_checks(target, levels, arr, report);
    return report;
}

}  // namespace prsweep::validate
