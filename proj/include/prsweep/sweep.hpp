#pragma once

#include "prsweep/arrangement.hpp"
#include "prsweep/digraph.hpp"

#include <iosfwd>
#include <vector>

namespace prsweep::sweep {

using arrangement::Arrangement;
using arrangement::CoordinateSlice;
using arrangement::EventSet;
using arrangement::SweepEvent;
using digraph::LeveledDigraph;
using digraph::VertexKind;
using numeric::Exact;

/// A point (or product stratum) of the closure lying on one or more
/// hypersurfaces with vertical tangent or corner behaviour at a sweep event.
struct SingularPoint {
    int coord;                      // the coordinate plane of the witness
    Exact value;                    // its x_m position
    std::vector<int> constraints;   // incident constraint indices
};

/// The computed Poincare-Reeb V-digraph: leveled vertices with kinds plus the
/// singular points witnessing each vertex.
struct PRGraph {
    LeveledDigraph digraph;
    std::vector<std::vector<SingularPoint>> witnesses;  // per vertex
    int b1 = 0;  // independently computed cycle count
};

struct Extent {
    bool unbounded_left = false;
    bool unbounded_right = false;
    Exact lo, hi;  // event values; valid on the bounded sides
};

struct SweepOptions {
    bool allow_unbounded = false;
    std::ostream* trace = nullptr;  // per-gap component tables as CSV
};

/// x1 range over which the region is nonempty. Throws EmptyRegion.
Extent region_extent(const Arrangement& arr);

/// Singular points at one sweep event, filtered by closure membership.
std::vector<SingularPoint> singular_points_at(const Arrangement& arr, const SweepEvent& event);

/// Sweep the arrangement and assemble its Poincare-Reeb digraph. The
/// arrangement is expected to pass validate::ra_region first; structural
/// failures surface as EmptyRegion / DisconnectedRegion / NonGenericEvent /
/// UnrepresentableEvent / PrecisionExhausted errors.
PRGraph reeb(const Arrangement& arr, const SweepOptions& options = {});

/// Rational strictly between two exact values (used for gap samples).
numeric::Rational rational_between(const Exact& a, const Exact& b);

/// Slice tables at every event and gap sample (the sweep's working data),
/// exposed for validation scans.
struct SliceTables {
    EventSet events;
    std::vector<Exact> gap_samples;                        // one per gap
    std::vector<std::vector<CoordinateSlice>> gap_slices;  // per gap, per coord
    std::vector<std::vector<CoordinateSlice>> event_slices;
    std::vector<bool> gap_nonempty, event_nonempty;
};
SliceTables slice_tables(const Arrangement& arr);

}  // namespace prsweep::sweep
