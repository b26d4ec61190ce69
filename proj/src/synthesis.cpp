#include "prsweep/synthesis.hpp"

#include "prsweep/validate.hpp"

#include <sstream>

namespace prsweep::synthesis {

using arrangement::Arrangement;
using arrangement::CircleConstraint;
using arrangement::Side;
using numeric::compare;
using numeric::sqrt_exact;

void TheoremInstance::validate() const {
    if (theorem != 1 && theorem != 2)
        throw Error(Errc::InvalidInstance, "theorem must be 1 or 2");
    spec1.validate();
    if (theorem == 2) spec2.validate();
    std::size_t want = theorem == 1 ? spec1.depth() + 2 : spec1.depth() + spec2.depth() + 1;
    if (levels.size() != want)
        throw Error(Errc::LevelCountMismatch,
                    "instance needs " + std::to_string(want) + " levels, got " +
                        std::to_string(levels.size()));
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i - 1] < levels[i]))
            throw Error(Errc::InvalidInstance, "levels must be strictly increasing");
    if (radius && !(*radius > 0))
        throw Error(Errc::InvalidInstance, "radius must be positive");
}

digraph::LeveledDigraph TheoremInstance::target() const {
    validate();
    if (theorem == 1) return digraph::target_theorem1(spec1, levels);
    return digraph::target_theorem2(spec1, spec2, levels);
}

namespace {

// one blocking family: circles for one tree depth
struct Family {
    int coord;
    Rational branch_level;
    int direction;  // +1: tangencies open rightward (branch), -1: merge
    int n;          // children count; n-1 blocking circles
    bool offset_grid = false;  // second family in a shared coordinate
};

// Theorem 2 note: the root-level merge family (tree 1, depth 1) and branch
// family (tree 2, depth 1) are both vertically tangent at the root level. In
// separate coordinates their tangency strata would intersect in the closure
// with parallel normals, so the two families must live in one coordinate
// plane, where the tangency points are disjoint.
std::vector<Family> families_of(const TheoremInstance& inst) {
    std::vector<Family> fams;
    if (inst.theorem == 1) {
        int d = inst.spec1.depth();
        for (int i = 1; i <= d; ++i)
            fams.push_back({i + 2, inst.levels[i], +1, inst.spec1.children[i - 1], false});
    } else {
        int d1 = inst.spec1.depth(), d2 = inst.spec2.depth();
        // tree 1 reversed: depth-j family merges at levels[d1+1-j] (0-based)
        fams.push_back({3, inst.levels[d1], -1, inst.spec1.children[0], false});
        for (int j = 2; j <= d1; ++j)
            fams.push_back({2 + j, inst.levels[d1 + 1 - j], -1, inst.spec1.children[j - 1],
                            false});
        fams.push_back({3, inst.levels[d1], +1, inst.spec2.children[0], true});
        for (int i = 2; i <= d2; ++i)
            fams.push_back(
                {1 + d1 + i, inst.levels[d1 + i - 1], +1, inst.spec2.children[i - 1], false});
    }
    return fams;
}

int ambient_dim_of(const TheoremInstance& inst) {
    return inst.theorem == 1 ? 2 + inst.spec1.depth()
                             : 1 + inst.spec1.depth() + inst.spec2.depth();
}

// x1 distance from the family's tangency level to the far end of the extent
Rational family_span(const TheoremInstance& inst, const Family& f) {
    return f.direction > 0 ? Rational(inst.levels.back() - f.branch_level)
                           : Rational(f.branch_level - inst.levels.front());
}

// bound under which blocking bands could overlap inside the extent (and
// blocking-blocking crossings could enter it): 2*sqrt(span*(2R - span))
Exact delta_bound(const Rational& span, const Rational& radius) {
    return sqrt_exact(Rational(4 * span * (2 * radius - span)));
}

// smallest multiple of 1/64 that exceeds the bound by at least 5%
Rational choose_delta(const Exact& bound) {
    Exact padded = Exact(Rational(21, 20)) * bound;
    numeric::Interval iv = padded.enclosure(64);
    Rational scaled = iv.hi.to_rational() * 64;
    numeric::BigInt k = boost::multiprecision::numerator(scaled) /
                        boost::multiprecision::denominator(scaled);
    Rational candidate(k, 64);
    while (compare(Exact(candidate), padded) != std::strong_ordering::greater)
        candidate += Rational(1, 64);
    return candidate;
}

}  // namespace

Rational lower_bound_radius(const TheoremInstance& inst) {
    inst.validate();
    Rational w_main = (inst.levels.back() - inst.levels.front()) / 2;
    auto fams = families_of(inst);

    // base: main-lens reality (R > w), corner exclusion (R/2 > w)
    Rational base = 2 * w_main + 1;
    numeric::BigInt num = boost::multiprecision::numerator(base);
    numeric::BigInt den = boost::multiprecision::denominator(base);
    Rational r(num / den + 1);  // integral start

    for (int step = 0; step < 64; ++step, r *= 2) {
        if (!(r > 2 * w_main)) continue;
        if (inst.mode == Mode::ComplementOnly) return r;
        // capacity: per family the blocking stack plus its top band must fit
        // strictly inside the bounding lens at the extent ends, with margin
        Exact h_bnd = sqrt_exact(Rational(r * r - r * r / 4));            // sqrt(R^2 - (R/2)^2)
        Exact lens_min = sqrt_exact(Rational(r * r - w_main * w_main)) - h_bnd;
        bool ok = true;
        for (const auto& f : fams) {
            if (f.n < 2) continue;
            Rational span = family_span(inst, f);
            if (!(2 * r > span + 1)) { ok = false; break; }
            Exact bound = delta_bound(span, r);
            Rational delta = choose_delta(bound);
            Exact stack = Exact(Rational(delta * (f.n - 2) / 2)) + bound / Exact(2L);
            if (compare(Exact(Rational(21, 20)) * stack, lens_min) !=
                std::strong_ordering::less) {
                ok = false;
                break;
            }
        }
        if (ok) return r;
    }
    throw Error(Errc::SynthesisFailed, "no feasible starting radius found");
}

arrangement::Arrangement build_arrangement(const TheoremInstance& inst, const Rational& radius,
                                           SynthesisReport* report) {
    inst.validate();
    Rational t_first = inst.levels.front(), t_last = inst.levels.back();
    Rational c = (t_first + t_last) / 2;
    Rational w_main = (t_last - t_first) / 2;
    if (!(radius > w_main))
        throw Error(Errc::SynthesisFailed, "radius does not span the level range");

    Arrangement arr;
    arr.ambient_dim = ambient_dim_of(inst);

    // main pair: the lens whose corners sit exactly at t_first and t_last
    Exact h_main = sqrt_exact(Rational(radius * radius - w_main * w_main));
    arr.constraints.push_back({"main+", 2, c, h_main, radius, Side::Inside});
    arr.constraints.push_back({"main-", 2, c, -h_main, radius, Side::Inside});

    Exact h_bnd = sqrt_exact(Rational(radius * radius - radius * radius / 4));

    for (const auto& f : families_of(inst)) {
        std::string mtag = std::to_string(f.coord);
        if (inst.mode == Mode::Bounded) {
            arr.constraints.push_back({"bnd" + mtag + "+", f.coord, c, h_bnd, radius,
                                       Side::Inside});
            arr.constraints.push_back({"bnd" + mtag + "-", f.coord, c, -h_bnd, radius,
                                       Side::Inside});
        }
        FamilyReport fr{f.coord, f.branch_level, f.direction, f.n - 1, Rational(0), ""};
        if (f.n >= 2) {
            Rational span = family_span(inst, f);
            Exact bound = delta_bound(span, radius);
            Rational delta = choose_delta(bound);
            fr.delta = delta;
            fr.delta_bound = bound.to_string();
            Rational a = f.direction > 0 ? Rational(f.branch_level + radius)
                                         : Rational(f.branch_level - radius);
            for (int j = 1; j <= f.n - 1; ++j) {
                Rational b = delta * Rational(2 * j - f.n, 2);
                arr.constraints.push_back({"blk" + mtag + "_" + std::to_string(j), f.coord, a,
                                           Exact(b), radius, Side::Outside});
            }
        }
        if (report) report->families.push_back(std::move(fr));
    }
    if (report) {
        report->radius = radius;
        report->mode = inst.mode;
    }
    arr.validate_shape();
    return arr;
}

SynthesisResult synthesize(const TheoremInstance& inst) {
    inst.validate();
    SynthesisResult result;
    Rational r = inst.radius ? *inst.radius : lower_bound_radius(inst);
    int max_attempts = inst.radius ? 1 : 17;  // the start plus 16 doublings
    std::string last_failure;
    for (int attempt = 1; attempt <= max_attempts; ++attempt, r *= 2) {
        SynthesisReport report;
        Arrangement arr = build_arrangement(inst, r, &report);
        report.attempts = attempt;
        validate::ValidationReport check = validate::verify_theorem(inst, arr);
        if (check.overall) {
            result.arr = std::move(arr);
            result.report = std::move(report);
            std::ostringstream note;
            note << "verified at radius " << numeric::rational_to_string(
                result.report.radius);
            result.report.notes.push_back(note.str());
            return result;
        }
        last_failure = check.first_failure();
    }
    throw Error(Errc::SynthesisFailed,
                "no radius up to the doubling cap verifies; last failure: " + last_failure);
}

}  // namespace prsweep::synthesis
