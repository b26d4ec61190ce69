#pragma once

#include "prsweep/arrangement.hpp"
#include "prsweep/digraph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prsweep::synthesis {

using numeric::Exact;
using numeric::Rational;

enum class Mode { Bounded, ComplementOnly };

/// A realization task: which theorem, the balanced-tree parameters, the
/// prescribed vertex levels, the circle radius (or automatic search), and the
/// construction mode.
struct TheoremInstance {
    int theorem = 1;
    digraph::BalancedTreeSpec spec1;  // the only spec for theorem 1
    digraph::BalancedTreeSpec spec2;  // theorem 2 only
    std::vector<Rational> levels;
    std::optional<Rational> radius;   // nullopt: search automatically
    Mode mode = Mode::Bounded;

    void validate() const;  // throws InvalidInstance / LevelCountMismatch
    digraph::LeveledDigraph target() const;
};

/// One blocking/bounding family: the circles realizing one tree depth.
struct FamilyReport {
    int coord;
    Rational branch_level;  // where the family's tangencies sit
    int direction;          // +1 branch (tangencies open rightward), -1 merge
    int blocking_count;
    Rational delta;         // chosen blocking spacing (0 when no blocking)
    std::string delta_bound;  // the exact bound the spacing exceeds
};

struct SynthesisReport {
    Rational radius;
    int attempts = 0;
    Mode mode = Mode::Bounded;
    std::vector<FamilyReport> families;
    std::vector<std::string> notes;
};

struct SynthesisResult {
    arrangement::Arrangement arr;
    SynthesisReport report;
};

/// Explicit starting radius for the automatic search: large enough that the
/// main lens, the corner exclusion and the blocking-band stacking all fit.
/// Every verified radius is re-verified after doubling by the search itself,
/// not assumed.
Rational lower_bound_radius(const TheoremInstance& inst);

/// Build the arrangement for one radius without verifying it.
arrangement::Arrangement build_arrangement(const TheoremInstance& inst, const Rational& radius,
                                           SynthesisReport* report = nullptr);

/// Construct an arrangement realizing the instance. Automatic radius search
/// doubles from lower_bound_radius until full verification passes (at most 16
/// doublings); explicit radii are verified once.
SynthesisResult synthesize(const TheoremInstance& inst);

}  // namespace prsweep::synthesis
