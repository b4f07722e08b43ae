// Money lotteries over a finite prize set, with exact first- and second-order
// stochastic dominance computations. All arithmetic is rational; the CDF is a
// right-continuous step function and its running integral is piecewise linear,
// so every comparison can be decided exactly at finitely many breakpoints.
#pragma once

#include "revpref/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace revpref {

struct Lottery {
    std::string id;
    // (prize, mass) atoms with strictly ascending nonnegative prizes and
    // strictly positive masses summing to exactly 1.
    std::vector<std::pair<Rat, Rat>> support;

    // Sorts atoms, merges duplicate prizes, drops zero-mass atoms, then
    // validates the invariants above. Throws ValidationError.
    static Lottery make(std::string id, std::vector<std::pair<Rat, Rat>> atoms);

    const Rat& low() const { return support.front().first; }
    const Rat& high() const { return support.back().first; }
    // True when the two lotteries assign identical mass to identical prizes.
    bool same_distribution(const Lottery& other) const;
};

Rat expected_value(const Lottery& p);

// F_p(x) = total mass on prizes <= x (right-continuous).
Rat cdf_at(const Lottery& p, const Rat& x);

// Exact integral of F_p over [0, x].
Rat cdf_area_at(const Lottery& p, const Rat& x);

enum class DominanceKind { None, Fosd, Sosd };

struct DominanceRelation {
    DominanceKind kind = DominanceKind::None;
    std::string dominant;  // empty when kind == None
    std::string dominated; // empty when kind == None
    // A point where the defining inequality is strict, as a witness.
    std::optional<Rat> strict_at;
};

// First-order: dominant's CDF <= dominated's everywhere, strictly somewhere.
// Both directions are tested; identical distributions yield None because no
// strict point exists.
DominanceRelation check_fosd(const Lottery& p, const Lottery& q);

// Second-order: the integral of (F_dominant - F_dominated) over [0, x] stays
// <= 0 for every x in [0, M], M = max joint prize, and is < 0 somewhere.
// The integrand is piecewise linear, so checking its vertices is exact.
DominanceRelation check_sosd(const Lottery& p, const Lottery& q);

// FOSD when present, else SOSD, else None. Used to recompute taxonomy labels.
DominanceRelation classify_dominance(const Lottery& p, const Lottery& q);

// How far a (possibly failed) dominance relation extends from 0 upward, with
// exact crossing points and weighted mass differences. The comparison
// direction is fixed: p is the candidate dominant.
struct NearDominanceReport {
    DominanceKind kind = DominanceKind::None;
    std::string p_id, q_id;
    Rat range_top; // M = max joint prize

    // Largest x* with the pointwise condition holding on [0, x*]. For FOSD
    // the condition is F_p <= F_q; it can fail exactly AT a breakpoint, in
    // which case x_star is that breakpoint and x_star_attained is false
    // (holds on [0, x*) only). For SOSD the gap is continuous, so x_star is
    // always attained.
    Rat x_star;
    bool x_star_attained = true;
    bool full_range = false; // condition holds on all of [0, M]
    bool proper = false;     // full_range plus a strict point: actual dominance

    // Points where the pointwise condition flips, solved exactly.
    std::vector<Rat> crossings;

    // Integral of (F_q - F_p) over [0, M] divided by M; positive favours p.
    // Equals (EV(p) - EV(q)) / M.
    Rat net_weighted_gap;

    // Maximal intervals on which one side dominates pointwise, with the
    // average gap over the interval. favours: +1 for p, -1 for q, 0 for ties.
    struct Segment {
        Rat from, to;
        int favours = 0;
        Rat avg_gap; // average |gap| over the segment
    };
    std::vector<Segment> segments;
};

NearDominanceReport near_dominance_report(const Lottery& p, const Lottery& q,
                                          DominanceKind kind);

// Convex combination alpha*p + (1-alpha)*q over the union support.
// Requires 0 < alpha < 1.
Lottery mix(const Rat& alpha, const Lottery& p, const Lottery& q,
            std::string id = std::string());

// True when [p.low, p.high] and [q.low, q.high] intersect in a
// non-degenerate interval (more than a single point).
bool overlapping_range(const Lottery& p, const Lottery& q);

} // namespace revpref
