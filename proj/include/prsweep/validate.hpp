#pragma once

#include "prsweep/arrangement.hpp"
#include "prsweep/digraph.hpp"
#include "prsweep/synthesis.hpp"

#include <map>
#include <string>
#include <vector>

namespace prsweep::validate {

using arrangement::Arrangement;

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string witness;  // concrete violation data when failing
    std::map<std::string, std::string> data;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool overall = true;

    void add(CheckResult c);
    const CheckResult* find(const std::string& id) const;
    std::string first_failure() const;
};

/// Normal independence at every closure point on two or more hypersurfaces.
/// With circle-cylinder constraints, rank deficiency happens exactly for
/// tangent same-coordinate circles or for two simultaneous vertical
/// tangencies at one closure point; points on more than ambient_dim
/// hypersurfaces are rejected as well.
ValidationReport transversality(const Arrangement& arr);

/// The region conditions: nonempty, connected, every hypersurface meets the
/// closure, transversality. The open-neighborhood condition holds structurally
/// for full intersections and is recorded as such.
ValidationReport ra_region(const Arrangement& arr);

/// Full theorem verification: ra_region, then the sweep, then leveled
/// isomorphism against the instance target plus exact vertex-level equality.
ValidationReport verify_theorem(const synthesis::TheoremInstance& inst, const Arrangement& arr);

/// Same, but against a caller-supplied target digraph (levels optional).
ValidationReport verify_against(const digraph::LeveledDigraph& target,
                                const std::vector<numeric::Rational>* levels,
                                const Arrangement& arr);

}  // namespace prsweep::validate
