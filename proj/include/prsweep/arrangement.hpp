#pragma once

#include "prsweep/exact.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prsweep::arrangement {

using numeric::Exact;
using numeric::Rational;

enum class Side { Inside, Outside };

/// One circle-cylinder: the circle (x1-a)^2 + (x_m-b)^2 = R^2 in the (1, m)
/// coordinate plane, swept along every other axis. Inside keeps the disk,
/// Outside keeps the complement. The first center coordinate is rational so
/// tangency events stay rational; the second may be a surd.
struct CircleConstraint {
    std::string id;
    int coord = 2;      // m in [2, ambient_dim]
    Rational center_x;  // a
    Exact center_y;     // b
    Rational radius;    // R > 0
    Side side = Side::Inside;
};

struct Arrangement {
    int ambient_dim = 2;
    std::vector<CircleConstraint> constraints;

    void validate_shape() const;  // field ranges and caps; throws InvalidInput
    std::vector<int> constraints_of_coord(int m) const;
};

/// Per-coordinate cross-section of one constraint at sweep value t.
struct Band {
    bool active = false;   // |t - a| <= R
    bool tangent = false;  // |t - a| == R (then lo == hi == b)
    Exact lo, hi;          // b -/+ w(t) when active
};

/// Where a slice-component endpoint comes from; used to evaluate one-sided
/// limits at events exactly.
struct SliceEnd {
    enum class Kind { Finite, NegInf, PosInf } kind = Kind::Finite;
    Exact value;         // Finite only
    int constraint = -1; // index into Arrangement::constraints, -1 if infinite
    int arc = 0;         // +1: value = b + w, -1: value = b - w

    static SliceEnd neg_inf() { return {Kind::NegInf, Exact(0L), -1, 0}; }
    static SliceEnd pos_inf() { return {Kind::PosInf, Exact(0L), -1, 0}; }
    static SliceEnd at(Exact v, int c, int arc) { return {Kind::Finite, std::move(v), c, arc}; }
    bool finite() const { return kind == Kind::Finite; }
};

struct SliceComponent {
    SliceEnd lo, hi;  // closed [lo, hi]; lo == hi encodes a point
};

/// The allowed subset of coordinate axis m at fixed x1 = t: pairwise disjoint
/// closed intervals sorted increasingly.
struct CoordinateSlice {
    int coord = 2;
    Exact t;
    std::vector<SliceComponent> components;
    bool empty() const { return components.empty(); }
};

struct SweepEvent {
    struct Tangency {
        int constraint;
        int side;  // -1: t = a - R, +1: t = a + R
    };
    struct Crossing {
        int c1, c2;
        std::vector<Exact> ys;  // x_m values of the common points at this t
    };
    Exact t;  // always Rational or Surd
    std::vector<Tangency> tangencies;
    std::vector<Crossing> crossings;
    std::vector<std::string> labels;  // synthetic provenance

    bool has_tangency(int constraint) const;
    /// The crossing value y* for a constraint incident to a crossing here, if
    /// any (used to evaluate its band exactly at a surd-valued event).
    std::optional<Exact> crossing_value_for(int constraint) const;
    std::string describe() const;
};

/// Same-coordinate circle pair crossings whose x1 coordinates are not
/// representable as rational or quadratic-surd values (they are degree-4
/// algebraic). They carry certified enclosures; the sweep verifies they lie
/// outside the region's extent and otherwise refuses to proceed.
struct IrrationalCrossing {
    int c1, c2;
    Exact t;  // certified
};

struct EventSet {
    std::vector<SweepEvent> events;  // sorted increasing, values deduplicated
    std::vector<IrrationalCrossing> irrational;
};

/// All sweep events of the arrangement: every tangency t = a -/+ R and every
/// same-coordinate pair crossing, exactly sorted and merged by value.
EventSet events(const Arrangement& arr);

/// Cross-section of a single constraint at x1 = t. `at_event` supplies
/// provenance so tangencies and incident crossings evaluate symbolically.
Band band(const CircleConstraint& c, const Exact& t, const SweepEvent* at_event = nullptr);

/// Intersection of all coordinate-m constraints' allowed sets at x1 = t.
CoordinateSlice slice(const Arrangement& arr, int coord, const Exact& t,
                      const SweepEvent* at_event = nullptr);

enum class Membership { Interior, Boundary, Outside };
struct ContainsResult {
    Membership membership = Membership::Outside;
    std::vector<int> on_constraints;   // constraints satisfied with equality
    std::vector<int> violated;         // constraints strictly violated
};

/// Closed-region membership of a point with exact coordinates (size must be
/// ambient_dim); reports which hypersurfaces pass through the point.
ContainsResult contains(const Arrangement& arr, const std::vector<Exact>& point);

/// Index of the slice component containing the value, or -1.
int component_containing(const CoordinateSlice& s, const Exact& value);

}  // namespace prsweep::arrangement
