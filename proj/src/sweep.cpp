#include "prsweep/sweep.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace prsweep::sweep {

using arrangement::SliceEnd;
using numeric::compare;
using numeric::exact_eq;
using numeric::exact_lt;
using numeric::Rational;

numeric::Rational rational_between(const Exact& a, const Exact& b) {
    if (compare(a, b) != std::strong_ordering::less)
        throw Error(Errc::Internal, "rational_between needs a < b");
    if (a.is_rational() && b.is_rational()) return (a.rational() + b.rational()) / 2;
    for (unsigned bits = 32;; bits *= 2) {
        numeric::Interval ia = a.enclosure(bits);
        numeric::Interval ib = b.enclosure(bits);
        if (ia.hi < ib.lo) {
            numeric::Dyadic mid = ia.hi + ib.lo;
            Rational r = mid.to_rational() / 2;
            if (exact_lt(a, Exact(r)) && exact_lt(Exact(r), b)) return r;
        }
        if (bits > numeric::max_precision_bits())
            throw Error(Errc::PrecisionExhausted, "cannot separate adjacent event values");
    }
}

namespace {

// one-sided rational points outside all events
Rational rational_below(const Exact& a) {
    numeric::Interval ia = a.enclosure(32);
    return ia.lo.to_rational() - 1;
}
Rational rational_above(const Exact& a) {
    numeric::Interval ia = a.enclosure(32);
    return ia.hi.to_rational() + 1;
}

struct GapInfo {
    Exact sample{0L};
    std::vector<CoordinateSlice> slices;  // per coordinate, index m-2
    bool nonempty = false;
    long long product = 0;
};

struct EventInfo {
    std::vector<CoordinateSlice> slices;  // filled only within the extent run
    bool sliced = false;
};

struct PositionTable {
    EventSet ev;
    std::vector<GapInfo> gaps;   // ev.events.size() + 1
    std::vector<EventInfo> evs;  // ev.events.size(), lazily sliced
    // maximal run of nonempty gaps; the extent boundary events are the ones
    // just outside it
    int first_gap = -1, last_gap = -1;
    bool contiguous = true;
    int coords = 0;
};

long long checked_product(const std::vector<CoordinateSlice>& slices) {
    long long p = 1;
    for (const auto& s : slices) {
        p *= static_cast<long long>(s.components.size());
        if (p > 1'000'000) throw Error(Errc::InvalidInput, "component product cap exceeded");
        if (p == 0) return 0;
    }
    return p;
}

// slices of every coordinate, stopping at the first empty one (slicing far
// coordinates at degenerate values is wasted work and can be ill-conditioned)
std::vector<CoordinateSlice> slices_at(const Arrangement& arr, const Exact& t,
                                       const SweepEvent* at_event, bool* nonempty) {
    std::vector<CoordinateSlice> out;
    out.reserve(arr.ambient_dim - 1);
    *nonempty = true;
    for (int m = 2; m <= arr.ambient_dim; ++m) {
        out.push_back(arrangement::slice(arr, m, t, at_event));
        if (out.back().empty()) {
            *nonempty = false;
            break;
        }
    }
    return out;
}

PositionTable compute_positions(const Arrangement& arr) {
    PositionTable table;
    table.ev = arrangement::events(arr);
    table.coords = arr.ambient_dim - 1;
    std::size_t n = table.ev.events.size();
    if (n == 0) throw Error(Errc::InvalidInput, "arrangement with no constraints");
    table.gaps.resize(n + 1);
    table.evs.resize(n);

    for (std::size_t i = 0; i <= n; ++i) {
        Rational sample;
        if (i == 0) sample = rational_below(table.ev.events.front().t);
        else if (i == n) sample = rational_above(table.ev.events.back().t);
        else sample = rational_between(table.ev.events[i - 1].t, table.ev.events[i].t);
        GapInfo& g = table.gaps[i];
        g.sample = Exact(sample);
        g.slices = slices_at(arr, g.sample, nullptr, &g.nonempty);
        g.product = g.nonempty ? checked_product(g.slices) : 0;
        if (g.product == 0) g.nonempty = false;
    }

    for (std::size_t i = 0; i <= n; ++i) {
        if (!table.gaps[i].nonempty) continue;
        if (table.first_gap < 0) table.first_gap = static_cast<int>(i);
        table.last_gap = static_cast<int>(i);
    }
    if (table.first_gap >= 0)
        for (int i = table.first_gap; i <= table.last_gap; ++i)
            if (!table.gaps[i].nonempty) table.contiguous = false;

    // event slices only where the region lives: the closure of a nonempty gap
    // meets both bounding events
    if (table.first_gap >= 0 && table.contiguous) {
        int e_lo = std::max(0, table.first_gap - 1);
        int e_hi = std::min(static_cast<int>(n) - 1, table.last_gap);
        for (int e = e_lo; e <= e_hi; ++e) {
            bool nonempty = true;
            table.evs[e].slices =
                slices_at(arr, table.ev.events[e].t, &table.ev.events[e], &nonempty);
            table.evs[e].sliced = true;
            if (!nonempty)
                throw Error(Errc::Internal,
                            "empty slice at an event adjacent to a nonempty gap: " +
                                table.ev.events[e].describe());
        }
    }
    return table;
}

std::string run_description(const PositionTable& t) {
    std::ostringstream os;
    bool in_run = false;
    for (std::size_t i = 0; i < t.gaps.size(); ++i) {
        if (t.gaps[i].nonempty && !in_run) {
            os << " [around " << t.gaps[i].sample.to_string();
            in_run = true;
        } else if (!t.gaps[i].nonempty && in_run) {
            os << " .. " << t.gaps[i].sample.to_string() << "]";
            in_run = false;
        }
    }
    if (in_run) os << " ..]";
    return os.str();
}

}  // namespace

SliceTables slice_tables(const Arrangement& arr) {
    PositionTable table = compute_positions(arr);
    SliceTables out;
    out.events = std::move(table.ev);
    for (auto& g : table.gaps) {
        out.gap_samples.push_back(g.sample);
        out.gap_slices.push_back(std::move(g.slices));
        out.gap_nonempty.push_back(g.nonempty);
    }
    for (auto& e : table.evs) {
        out.event_slices.push_back(std::move(e.slices));
        out.event_nonempty.push_back(e.sliced);
    }
    return out;
}

Extent region_extent(const Arrangement& arr) {
    PositionTable table = compute_positions(arr);
    if (table.first_gap < 0) throw Error(Errc::EmptyRegion, "region is empty");
    Extent ext;
    ext.unbounded_left = table.first_gap == 0;
    ext.unbounded_right = table.last_gap == static_cast<int>(table.ev.events.size());
    // the extent is delimited by the events bounding the nonempty gap run
    if (!ext.unbounded_left) ext.lo = table.ev.events[table.first_gap - 1].t;
    if (!ext.unbounded_right) ext.hi = table.ev.events[table.last_gap].t;
    return ext;
}

namespace {

// closed-interval membership with infinite ends
bool end_le(const SliceEnd& lo, const Exact& v) {
    if (lo.kind == SliceEnd::Kind::NegInf) return true;
    if (lo.kind == SliceEnd::Kind::PosInf) return false;
    return compare(lo.value, v) != std::strong_ordering::greater;
}
bool end_ge(const SliceEnd& hi, const Exact& v) {
    if (hi.kind == SliceEnd::Kind::PosInf) return true;
    if (hi.kind == SliceEnd::Kind::NegInf) return false;
    return compare(hi.value, v) != std::strong_ordering::less;
}

using arrangement::component_containing;

// evaluate a gap component endpoint at the event value (one-sided limit)
SliceEnd limit_end(const Arrangement& arr, const SliceEnd& end, const Exact& t,
                   const SweepEvent& ev) {
    if (!end.finite()) return end;
    arrangement::Band b = arrangement::band(arr.constraints[end.constraint], t, &ev);
    // inactive cannot happen: the band was active through the adjacent gap
    if (!b.active)
        throw Error(Errc::Internal, "limit of a band that is inactive at the event");
    return SliceEnd::at(end.arc < 0 ? b.lo : b.hi, end.constraint, end.arc);
}

// map each gap-slice component to the event-slice component containing its
// one-sided limit
std::vector<int> match_components(const Arrangement& arr, const CoordinateSlice& gap_slice,
                                  const CoordinateSlice& event_slice, const Exact& t,
                                  const SweepEvent& ev) {
    std::vector<int> out(gap_slice.components.size(), -1);
    for (std::size_t i = 0; i < gap_slice.components.size(); ++i) {
        SliceEnd lo = limit_end(arr, gap_slice.components[i].lo, t, ev);
        SliceEnd hi = limit_end(arr, gap_slice.components[i].hi, t, ev);
        for (std::size_t j = 0; j < event_slice.components.size(); ++j) {
            const auto& c = event_slice.components[j];
            bool lo_in = lo.finite() ? end_le(c.lo, lo.value)
                                     : c.lo.kind == SliceEnd::Kind::NegInf;
            bool hi_in = hi.finite() ? end_ge(c.hi, hi.value)
                                     : c.hi.kind == SliceEnd::Kind::PosInf;
            if (lo_in && hi_in) {
                out[i] = static_cast<int>(j);
                break;
            }
        }
        if (out[i] < 0)
            throw Error(Errc::NonGenericEvent,
                        "gap component has no containing component at " + ev.describe());
    }
    return out;
}

// enumerate index vectors of a product of per-coordinate component lists
void enumerate_products(const std::vector<CoordinateSlice>& slices,
                        const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> key(slices.size(), 0);
    for (const auto& s : slices)
        if (s.components.empty()) return;
    for (;;) {
        visit(key);
        int i = static_cast<int>(key.size()) - 1;
        while (i >= 0 &&
               key[i] + 1 == static_cast<int>(slices[i].components.size()))
            key[i--] = 0;
        if (i < 0) break;
        key[i]++;
    }
}

void write_trace_header(std::ostream* os, int coords) {
    if (!os) return;
    *os << "row,index,t_or_range,sample";
    for (int m = 0; m < coords; ++m) *os << ",count_x" << (m + 2);
    *os << ",product\n";
}

void write_gap_trace(std::ostream* os, int index, const std::string& range, const GapInfo& g) {
    if (!os) return;
    *os << "gap," << index << "," << range << "," << g.sample.to_string();
    for (const auto& s : g.slices) *os << "," << s.components.size();
    *os << "," << g.product << "\n";
}

}  // namespace

std::vector<SingularPoint> singular_points_at(const Arrangement& arr, const SweepEvent& event) {
    bool nonempty = true;
    std::vector<CoordinateSlice> slices = slices_at(arr, event.t, &event, &nonempty);
    std::vector<SingularPoint> out;
    if (!nonempty) return out;
    auto add = [&](int coord, const Exact& value, std::vector<int> cs) {
        if (component_containing(slices[coord - 2], value) < 0) return;  // not in closure
        for (auto& sp : out)
            if (sp.coord == coord && exact_eq(sp.value, value)) {
                for (int c : cs)
                    if (std::find(sp.constraints.begin(), sp.constraints.end(), c) ==
                        sp.constraints.end())
                        sp.constraints.push_back(c);
                return;
            }
        out.push_back({coord, value, std::move(cs)});
    };
    for (const auto& tg : event.tangencies) {
        const auto& c = arr.constraints[tg.constraint];
        add(c.coord, c.center_y, {tg.constraint});
    }
    for (const auto& cr : event.crossings) {
        int coord = arr.constraints[cr.c1].coord;
        for (const auto& y : cr.ys) add(coord, y, {cr.c1, cr.c2});
    }
    return out;
}

PRGraph reeb(const Arrangement& arr, const SweepOptions& options) {
    PositionTable table = compute_positions(arr);
    if (table.first_gap < 0) throw Error(Errc::EmptyRegion, "region is empty");
    if (!table.contiguous)
        throw Error(Errc::DisconnectedRegion,
                    "region splits along x1:" + run_description(table));
    std::size_t n = table.ev.events.size();
    bool unb_left = table.first_gap == 0;
    bool unb_right = table.last_gap == static_cast<int>(n);
    if ((unb_left || unb_right) && !options.allow_unbounded)
        throw Error(Errc::UnboundedRegion,
                    "region extends beyond all events; rerun with --allow-unbounded");

    // degree-4 crossing positions must be provably outside the extent
    for (const auto& ic : table.ev.irrational) {
        bool outside = false;
        if (!unb_left)
            outside = compare(ic.t, table.ev.events[table.first_gap - 1].t) ==
                      std::strong_ordering::less;
        if (!outside && !unb_right)
            outside = compare(ic.t, table.ev.events[table.last_gap].t) ==
                      std::strong_ordering::greater;
        if (!outside)
            throw Error(Errc::UnrepresentableEvent,
                        "crossing of constraints " + arr.constraints[ic.c1].id + "/" +
                            arr.constraints[ic.c2].id +
                            " has a degree-4 x1 coordinate inside the extent");
    }

    write_trace_header(options.trace, table.coords);

    PRGraph pr;
    // live gap components, keyed by per-coordinate component indices
    std::map<std::vector<int>, int> live;  // key -> origin vertex

    auto add_vertex = [&](const Exact& level, VertexKind kind,
                          std::vector<SingularPoint> wit) {
        int v = pr.digraph.add_vertex(level, kind);
        pr.witnesses.push_back(std::move(wit));
        return v;
    };

    // unbounded tail on the left: synthetic origins one unit below the run
    if (unb_left) {
        const GapInfo& g0 = table.gaps[0];
        Exact level = g0.sample;  // already one unit below the first event
        enumerate_products(g0.slices, [&](const std::vector<int>& key) {
            live[key] = add_vertex(level, VertexKind::Regular, {});
        });
    }

    // gap i precedes event i; events adjacent to the run carry slices
    int first_event = std::max(0, table.first_gap - 1);
    int last_event = std::min(static_cast<int>(n) - 1, table.last_gap);

    for (int e = first_event; e <= last_event; ++e) {
        const SweepEvent& ev = table.ev.events[e];
        const EventInfo& info = table.evs[e];
        const GapInfo* left = table.gaps[e].nonempty ? &table.gaps[e] : nullptr;
        const GapInfo* right = table.gaps[e + 1].nonempty ? &table.gaps[e + 1] : nullptr;

        // per-coordinate matching maps
        std::vector<std::vector<int>> phi_left(table.coords), phi_right(table.coords);
        for (int m = 0; m < table.coords; ++m) {
            if (left)
                phi_left[m] =
                    match_components(arr, left->slices[m], info.slices[m], ev.t, ev);
            if (right)
                phi_right[m] =
                    match_components(arr, right->slices[m], info.slices[m], ev.t, ev);
        }

        struct Node {
            std::vector<int> left_origins;
            std::vector<std::vector<int>> right_keys;
            std::vector<SingularPoint> witnesses;
        };
        std::map<std::vector<int>, Node> nodes;

        for (auto& [key, origin] : live) {
            std::vector<int> ek(key.size());
            for (std::size_t m = 0; m < key.size(); ++m) ek[m] = phi_left[m][key[m]];
            nodes[ek].left_origins.push_back(origin);
        }
        if (right) {
            enumerate_products(right->slices, [&](const std::vector<int>& key) {
                std::vector<int> ek(key.size());
                for (std::size_t m = 0; m < key.size(); ++m) ek[m] = phi_right[m][key[m]];
                nodes[ek].right_keys.push_back(key);
            });
        }
        for (auto& sp : singular_points_at(arr, ev)) {
            int comp = component_containing(info.slices[sp.coord - 2], sp.value);
            if (comp < 0) continue;
            for (auto& [ek, node] : nodes)
                if (ek[sp.coord - 2] == comp) node.witnesses.push_back(sp);
        }

        std::map<std::vector<int>, int> next_live;
        for (auto& [ek, node] : nodes) {
            std::size_t in = node.left_origins.size(), out = node.right_keys.size();
            if (in == 1 && out == 1 && node.witnesses.empty()) {
                next_live[node.right_keys.front()] = node.left_origins.front();
                continue;
            }
            VertexKind kind;
            if (in == 0 && out == 0) kind = VertexKind::SingularFlat;
            else if (in == 0) kind = VertexKind::Birth;
            else if (out == 0) kind = VertexKind::Death;
            else if (in == 1 && out == 1) kind = VertexKind::SingularFlat;
            else if (in > 1 && out > 1) kind = VertexKind::Cross;
            else if (in > 1) kind = VertexKind::Merge;
            else kind = VertexKind::Branch;
            int v = add_vertex(ev.t, kind, std::move(node.witnesses));
            for (int origin : node.left_origins) pr.digraph.graph.add_edge(origin, v);
            for (auto& rk : node.right_keys) next_live[rk] = v;
        }
        live = std::move(next_live);

        if (options.trace && right) {
            std::string range = ev.t.to_string() + "..";
            write_gap_trace(options.trace, e + 1, range, *right);
        }
    }

    // unbounded tail on the right: close the open edges at a synthetic level
    if (unb_right && !live.empty()) {
        const GapInfo& gn = table.gaps[n];
        for (auto& [key, origin] : live) {
            int v = add_vertex(gn.sample, VertexKind::Regular, {});
            pr.digraph.graph.add_edge(origin, v);
        }
        live.clear();
    }
    if (!live.empty())
        throw Error(Errc::Internal, "live components left after the final event");

    pr.digraph.check_invariants();
    if (pr.digraph.graph.vertex_count == 0)
        throw Error(Errc::EmptyRegion, "no vertices produced");
    if (!pr.digraph.graph.connected()) {
        std::ostringstream os;
        os << "Poincare-Reeb graph is disconnected (" << pr.digraph.graph.vertex_count
           << " vertices); the region has multiple components";
        throw Error(Errc::DisconnectedRegion, os.str());
    }
    pr.b1 = pr.digraph.graph.first_betti();
    return pr;
}

}  // namespace prsweep::sweep
