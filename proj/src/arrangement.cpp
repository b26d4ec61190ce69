#include "prsweep/arrangement.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace prsweep::arrangement {

using numeric::compare;
using numeric::exact_eq;
using numeric::exact_lt;
using numeric::sign;
using numeric::sqrt_exact;

void Arrangement::validate_shape() const {
    if (ambient_dim < 2 || ambient_dim > 64)
        throw Error(Errc::InvalidInput, "ambient dimension must be in [2, 64]");
    if (constraints.size() > 512) throw Error(Errc::InvalidInput, "more than 512 constraints");
    std::set<std::string> ids;
    for (const auto& c : constraints) {
        if (c.coord < 2 || c.coord > ambient_dim)
            throw Error(Errc::InvalidInput, "constraint coordinate out of range: " + c.id);
        if (!(c.radius > 0)) throw Error(Errc::InvalidInput, "non-positive radius: " + c.id);
        if (c.id.empty() || !ids.insert(c.id).second)
            throw Error(Errc::InvalidInput, "constraint ids must be unique and non-empty");
        if (c.center_y.is_certified())
            throw Error(Errc::InvalidInput, "center must be rational or surd: " + c.id);
    }
}

std::vector<int> Arrangement::constraints_of_coord(int m) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < constraints.size(); ++i)
        if (constraints[i].coord == m) out.push_back(static_cast<int>(i));
    return out;
}

bool SweepEvent::has_tangency(int constraint) const {
    for (const auto& tg : tangencies)
        if (tg.constraint == constraint) return true;
    return false;
}

std::optional<Exact> SweepEvent::crossing_value_for(int constraint) const {
    for (const auto& cr : crossings)
        if (cr.c1 == constraint || cr.c2 == constraint)
            if (!cr.ys.empty()) return cr.ys.front();
    return std::nullopt;
}

std::string SweepEvent::describe() const {
    std::ostringstream os;
    os << "t=" << t.to_string();
    for (const auto& tg : tangencies)
        os << " tangency(c" << tg.constraint << (tg.side < 0 ? ",left)" : ",right)");
    for (const auto& cr : crossings) os << " crossing(c" << cr.c1 << ",c" << cr.c2 << ")";
    for (const auto& l : labels) os << " " << l;
    return os.str();
}

namespace {

Band band_impl(const CircleConstraint& c, const Exact& t, const SweepEvent* ev, int self) {
    Band out;
    Exact dt = t - Exact(c.center_x);
    Exact sq = Exact(Rational(c.radius * c.radius)) - dt * dt;
    int s = sign(sq);
    if (s < 0) return out;  // inactive
    out.active = true;
    if (s == 0) {
        out.tangent = true;
        out.lo = out.hi = c.center_y;
        return out;
    }
    Exact w = sqrt_exact(sq);
    if (w.is_certified() && ev && self >= 0) {
        // an incident crossing fixes the endpoints symbolically
        for (const auto& cr : ev->crossings) {
            if (cr.c1 != self && cr.c2 != self) continue;
            if (cr.ys.size() > 1) {
                out.lo = cr.ys.front();
                out.hi = cr.ys.back();
            } else {
                const Exact& y = cr.ys.front();
                Exact mirrored = Exact(2L) * c.center_y - y;
                if (compare(y, c.center_y) > 0) {
                    out.lo = std::move(mirrored);
                    out.hi = y;
                } else {
                    out.lo = y;
                    out.hi = std::move(mirrored);
                }
            }
            return out;
        }
    }
    out.lo = c.center_y - w;
    out.hi = c.center_y + w;
    return out;
}

}  // namespace

Band band(const CircleConstraint& c, const Exact& t, const SweepEvent* at_event) {
    return band_impl(c, t, at_event, -1);
}

namespace {

struct Forbidden {
    SliceEnd lo, hi;  // open interval (lo, hi), both finite
};

// Value equality among endpoints of different constraints is generic only
// when the two circles genuinely meet there, which the event's merged
// provenance records.
void check_generic(const std::vector<std::pair<Exact, int>>& endpoint_values,
                   const SweepEvent& ev) {
    if (endpoint_values.size() > 64) return;
    for (std::size_t i = 0; i < endpoint_values.size(); ++i) {
        for (std::size_t j = i + 1; j < endpoint_values.size(); ++j) {
            int ci = endpoint_values[i].second, cj = endpoint_values[j].second;
            if (ci == cj) continue;
            bool explained = false;
            for (const auto& cr : ev.crossings)
                if ((cr.c1 == ci && cr.c2 == cj) || (cr.c1 == cj && cr.c2 == ci)) {
                    explained = true;
                    break;
                }
            if (explained) continue;  // the circles genuinely meet at this t
            if (exact_eq(endpoint_values[i].first, endpoint_values[j].first))
                throw Error(Errc::NonGenericEvent,
                            "coincident band endpoints of constraints " + std::to_string(ci) +
                                " and " + std::to_string(cj) + " at " + ev.describe());
        }
    }
}

}  // namespace

CoordinateSlice slice(const Arrangement& arr, int coord, const Exact& t,
                      const SweepEvent* at_event) {
    if (coord < 2 || coord > arr.ambient_dim)
        throw Error(Errc::InvalidInput, "slice coordinate out of range");
    CoordinateSlice out;
    out.coord = coord;
    out.t = t;

    SliceEnd window_lo = SliceEnd::neg_inf(), window_hi = SliceEnd::pos_inf();
    std::vector<Forbidden> forbidden;
    std::vector<std::pair<Exact, int>> endpoint_values;

    for (int idx : arr.constraints_of_coord(coord)) {
        const CircleConstraint& c = arr.constraints[idx];
        Band b = band_impl(c, t, at_event, idx);
        if (c.side == Side::Inside) {
            if (!b.active) return out;  // empty slice
            SliceEnd lo = SliceEnd::at(b.lo, idx, -1), hi = SliceEnd::at(b.hi, idx, +1);
            if (window_lo.kind == SliceEnd::Kind::NegInf || exact_lt(window_lo.value, lo.value))
                window_lo = lo;
            if (window_hi.kind == SliceEnd::Kind::PosInf || exact_lt(hi.value, window_hi.value))
                window_hi = hi;
            if (at_event) {
                endpoint_values.emplace_back(b.lo, idx);
                if (!b.tangent) endpoint_values.emplace_back(b.hi, idx);
            }
        } else {
            if (!b.active || b.tangent) continue;  // forbids nothing of the closed region
            forbidden.push_back({SliceEnd::at(b.lo, idx, -1), SliceEnd::at(b.hi, idx, +1)});
            if (at_event) {
                endpoint_values.emplace_back(b.lo, idx);
                endpoint_values.emplace_back(b.hi, idx);
            }
        }
    }
    if (at_event) check_generic(endpoint_values, *at_event);

    if (window_lo.finite() && window_hi.finite() &&
        compare(window_lo.value, window_hi.value) == std::strong_ordering::greater)
        return out;  // empty

    std::sort(forbidden.begin(), forbidden.end(), [](const Forbidden& a, const Forbidden& b) {
        return exact_lt(a.lo.value, b.lo.value);
    });
    // merge strictly overlapping forbidden intervals; touching ones stay
    // separate so the shared endpoint survives as a point component
    std::vector<Forbidden> merged;
    for (const auto& f : forbidden) {
        if (!merged.empty() && exact_lt(f.lo.value, merged.back().hi.value)) {
            if (exact_lt(merged.back().hi.value, f.hi.value)) merged.back().hi = f.hi;
        } else {
            merged.push_back(f);
        }
    }

    SliceEnd cur = window_lo;
    for (const auto& f : merged) {
        // forbidden intervals entirely below the pending start have no effect
        if (cur.finite() && !exact_lt(cur.value, f.hi.value)) continue;
        if (window_hi.finite() && !exact_lt(f.lo.value, window_hi.value)) break;
        bool starts_at_or_after_cur = !cur.finite() || !exact_lt(f.lo.value, cur.value);
        if (starts_at_or_after_cur) out.components.push_back({cur, f.lo});
        cur = f.hi;
    }
    bool tail_nonempty =
        !cur.finite() || !window_hi.finite() || !exact_lt(window_hi.value, cur.value);
    if (tail_nonempty) out.components.push_back({cur, window_hi});
    if (out.components.size() > 4096)
        throw Error(Errc::InvalidInput, "slice component cap exceeded");
    return out;
}

// --- events -------------------------------------------------------------------

namespace {

struct RawEvent {
    Exact t;
    std::optional<SweepEvent::Tangency> tangency;
    std::optional<SweepEvent::Crossing> crossing;
};

bool same_circle(const CircleConstraint& a, const CircleConstraint& b) {
    return a.coord == b.coord && a.center_x == b.center_x && a.radius == b.radius &&
           exact_eq(a.center_y, b.center_y);
}

}  // namespace

EventSet events(const Arrangement& arr) {
    arr.validate_shape();
    EventSet out;
    std::vector<RawEvent> raw;

    for (std::size_t i = 0; i < arr.constraints.size(); ++i) {
        const auto& c = arr.constraints[i];
        raw.push_back({Exact(Rational(c.center_x - c.radius)),
                       SweepEvent::Tangency{static_cast<int>(i), -1}, std::nullopt});
        raw.push_back({Exact(Rational(c.center_x + c.radius)),
                       SweepEvent::Tangency{static_cast<int>(i), +1}, std::nullopt});
    }

    for (int m = 2; m <= arr.ambient_dim; ++m) {
        auto group = arr.constraints_of_coord(m);
        for (std::size_t gi = 0; gi < group.size(); ++gi) {
            for (std::size_t gj = gi + 1; gj < group.size(); ++gj) {
                int i = group[gi], j = group[gj];
                const auto& c1 = arr.constraints[i];
                const auto& c2 = arr.constraints[j];
                if (same_circle(c1, c2))
                    throw Error(Errc::IdenticalCircles, "constraints " + c1.id + " and " +
                                                            c2.id + " are the same circle");
                Rational dx = c2.center_x - c1.center_x;
                Exact dy = c2.center_y - c1.center_y;
                Exact d2 = Exact(Rational(dx * dx)) + dy * dy;
                Rational sum2 = (c1.radius + c2.radius) * (c1.radius + c2.radius);
                Rational diff2 = (c1.radius - c2.radius) * (c1.radius - c2.radius);
                auto vs_sum = compare(d2, Exact(sum2));
                if (vs_sum == std::strong_ordering::greater) continue;
                if (sign(d2) == 0) continue;  // concentric, different radii
                auto vs_diff = compare(d2, Exact(diff2));
                if (vs_diff == std::strong_ordering::less) continue;
                if (vs_sum == std::strong_ordering::equal ||
                    vs_diff == std::strong_ordering::equal) {
                    // tangent circles: a single common point on the center line
                    bool external = vs_sum == std::strong_ordering::equal;
                    Rational denom = external ? Rational(c1.radius + c2.radius)
                                              : Rational(c1.radius - c2.radius);
                    Exact px, py;
                    if (external) {
                        px = Exact(Rational(
                            (c1.radius * c2.center_x + c2.radius * c1.center_x) / denom));
                        py = (Exact(Rational(c1.radius)) * c2.center_y +
                              Exact(Rational(c2.radius)) * c1.center_y) /
                             Exact(denom);
                    } else {
                        px = Exact(Rational(
                            (c1.radius * c2.center_x - c2.radius * c1.center_x) / denom));
                        py = (Exact(Rational(c1.radius)) * c2.center_y -
                              Exact(Rational(c2.radius)) * c1.center_y) /
                             Exact(denom);
                    }
                    raw.push_back({px, std::nullopt, SweepEvent::Crossing{i, j, {py}}});
                    continue;
                }
                // proper crossing: chord midpoint plus offset tau along the
                // perpendicular of the center line
                Exact alpha =
                    (d2 + Exact(Rational(c1.radius * c1.radius - c2.radius * c2.radius))) /
                    (Exact(2L) * d2);
                Exact mx = Exact(c1.center_x) + alpha * Exact(dx);
                Exact my = c1.center_y + alpha * dy;
                Exact tau2 = (Exact(Rational(c1.radius * c1.radius)) - alpha * alpha * d2) / d2;
                Exact tau = sqrt_exact(tau2);
                if (sign(dy) == 0) {
                    // vertical radical line: both common points share x1
                    Exact y1 = my - tau * Exact(dx);
                    Exact y2 = my + tau * Exact(dx);
                    if (!y1.is_certified() && !y2.is_certified() && exact_lt(y2, y1))
                        std::swap(y1, y2);
                    if (mx.is_certified()) {
                        out.irrational.push_back({i, j, mx});
                    } else {
                        raw.push_back({mx, std::nullopt, SweepEvent::Crossing{i, j, {y1, y2}}});
                    }
                    continue;
                }
                Exact x_plus = mx - tau * dy, y_plus = my + tau * Exact(dx);
                Exact x_minus = mx + tau * dy, y_minus = my - tau * Exact(dx);
                for (auto& [x, y] : {std::pair{x_plus, y_plus}, std::pair{x_minus, y_minus}}) {
                    if (x.is_certified()) out.irrational.push_back({i, j, x});
                    else raw.push_back({x, std::nullopt, SweepEvent::Crossing{i, j, {y}}});
                }
            }
        }
    }

    std::sort(raw.begin(), raw.end(),
              [](const RawEvent& a, const RawEvent& b) { return exact_lt(a.t, b.t); });
    for (auto& r : raw) {
        if (out.events.empty() || !exact_eq(out.events.back().t, r.t))
            out.events.push_back({r.t, {}, {}, {}});
        if (r.tangency) out.events.back().tangencies.push_back(*r.tangency);
        if (r.crossing) out.events.back().crossings.push_back(std::move(*r.crossing));
    }
    return out;
}

int component_containing(const CoordinateSlice& s, const Exact& value) {
    auto le = [](const SliceEnd& lo, const Exact& v) {
        if (lo.kind == SliceEnd::Kind::NegInf) return true;
        if (lo.kind == SliceEnd::Kind::PosInf) return false;
        return compare(lo.value, v) != std::strong_ordering::greater;
    };
    auto ge = [](const SliceEnd& hi, const Exact& v) {
        if (hi.kind == SliceEnd::Kind::PosInf) return true;
        if (hi.kind == SliceEnd::Kind::NegInf) return false;
        return compare(hi.value, v) != std::strong_ordering::less;
    };
    for (std::size_t i = 0; i < s.components.size(); ++i)
        if (le(s.components[i].lo, value) && ge(s.components[i].hi, value))
            return static_cast<int>(i);
    return -1;
}

ContainsResult contains(const Arrangement& arr, const std::vector<Exact>& point) {
    if (static_cast<int>(point.size()) != arr.ambient_dim)
        throw Error(Errc::InvalidInput, "point dimension mismatch");
    ContainsResult res;
    bool boundary = false;
    for (std::size_t i = 0; i < arr.constraints.size(); ++i) {
        const auto& c = arr.constraints[i];
        Exact dx = point[0] - Exact(c.center_x);
        Exact dy = point[c.coord - 1] - c.center_y;
        Exact v = dx * dx + dy * dy - Exact(Rational(c.radius * c.radius));
        int s = sign(v);
        if (s == 0) {
            boundary = true;
            res.on_constraints.push_back(static_cast<int>(i));
            continue;
        }
        bool ok = c.side == Side::Inside ? s < 0 : s > 0;
        if (!ok) res.violated.push_back(static_cast<int>(i));
    }
    if (!res.violated.empty()) res.membership = Membership::Outside;
    else res.membership = boundary ? Membership::Boundary : Membership::Interior;
    return res;
}

}  // namespace prsweep::arrangement
