#include "revpref/lottery.hpp"

#include "revpref/errors.hpp"

#include <algorithm>
#include <map>

namespace revpref {

Lottery Lottery::make(std::string id, std::vector<std::pair<Rat, Rat>> atoms) {
    if (atoms.empty())
        throw ValidationError("lottery '" + id + "' has no outcomes");
    std::map<Rat, Rat> merged;
    for (const auto& [prize, mass] : atoms) merged[prize] += mass;

    Lottery out;
    out.id = std::move(id);
    Rat total(0);
    for (const auto& [prize, mass] : merged) {
        if (mass == 0) continue;
        if (mass < 0)
            throw ValidationError("lottery '" + out.id + "' has negative mass at prize " +
                                  rat_to_string(prize));
        if (prize < 0)
            throw ValidationError("lottery '" + out.id + "' has negative prize " +
                                  rat_to_string(prize));
        out.support.emplace_back(prize, mass);
        total += mass;
    }
    if (out.support.empty())
        throw ValidationError("lottery '" + out.id + "' has no positive mass");
    if (total != 1)
        throw ValidationError("lottery '" + out.id + "' has total mass " +
                              rat_to_string(total) + ", expected 1");
    return out;
}

bool Lottery::same_distribution(const Lottery& other) const {
    return support == other.support;
}

Rat expected_value(const Lottery& p) {
    Rat ev(0);
    for (const auto& [prize, mass] : p.support) ev += prize * mass;
    return ev;
}

Rat cdf_at(const Lottery& p, const Rat& x) {
    Rat f(0);
    for (const auto& [prize, mass] : p.support) {
        if (prize > x) break;
        f += mass;
    }
    return f;
}

Rat cdf_area_at(const Lottery& p, const Rat& x) {
    // F is a step function, so the integral accumulates rectangle by
    // rectangle between consecutive breakpoints below x.
    if (x <= 0) return Rat(0);
    Rat area(0);
    Rat level(0);
    Rat last(0);
    for (const auto& [prize, mass] : p.support) {
        if (prize >= x) break;
        area += level * (prize - last);
        level += mass;
        last = prize;
    }
    area += level * (x - last);
    return area;
}

namespace {

// Sorted union of both supports' prizes, the breakpoints of every piecewise
// comparison below.
std::vector<Rat> joint_breakpoints(const Lottery& p, const Lottery& q) {
    std::vector<Rat> xs;
    for (const auto& [prize, mass] : p.support) xs.push_back(prize);
    for (const auto& [prize, mass] : q.support) xs.push_back(prize);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// One-directional FOSD test: F_a <= F_b everywhere, strictly somewhere.
// Step CDFs only change at breakpoints, so those decide.
std::optional<Rat> fosd_one_way(const Lottery& a, const Lottery& b) {
    std::optional<Rat> strict;
    for (const Rat& x : joint_breakpoints(a, b)) {
        Rat fa = cdf_at(a, x), fb = cdf_at(b, x);
        if (fa > fb) return std::nullopt;
        if (fa < fb && !strict) strict = x;
    }
    return strict ? strict : std::optional<Rat>();
}

// One-directional SOSD test on [0, M]: the area gap G(x) = area_a - area_b
// must stay <= 0 with a strict point. G is piecewise linear with vertices at
// the breakpoints, so checking vertices plus the right end is exact.
std::optional<Rat> sosd_one_way(const Lottery& a, const Lottery& b) {
    Rat top = std::max(a.high(), b.high());
    std::vector<Rat> xs = joint_breakpoints(a, b);
    if (xs.empty() || xs.back() != top) xs.push_back(top);
    std::optional<Rat> strict;
    for (const Rat& x : xs) {
        Rat gap = cdf_area_at(a, x) - cdf_area_at(b, x);
        if (gap > 0) return std::nullopt;
        if (gap < 0 && !strict) strict = x;
    }
    return strict ? strict : std::optional<Rat>();
}

DominanceRelation one_way_to_relation(const Lottery& p, const Lottery& q,
                                      DominanceKind kind,
                                      const std::optional<Rat>& forward,
                                      const std::optional<Rat>& backward) {
    DominanceRelation rel;
    if (forward) {
        rel.kind = kind;
        rel.dominant = p.id;
        rel.dominated = q.id;
        rel.strict_at = forward;
    } else if (backward) {
        rel.kind = kind;
        rel.dominant = q.id;
        rel.dominated = p.id;
        rel.strict_at = backward;
    }
    return rel;
}

} // namespace

DominanceRelation check_fosd(const Lottery& p, const Lottery& q) {
    return one_way_to_relation(p, q, DominanceKind::Fosd, fosd_one_way(p, q),
                               fosd_one_way(q, p));
}

DominanceRelation check_sosd(const Lottery& p, const Lottery& q) {
    return one_way_to_relation(p, q, DominanceKind::Sosd, sosd_one_way(p, q),
                               sosd_one_way(q, p));
}

DominanceRelation classify_dominance(const Lottery& p, const Lottery& q) {
    DominanceRelation f = check_fosd(p, q);
    if (f.kind == DominanceKind::Fosd) return f;
    return check_sosd(p, q);
}

namespace {

// The pointwise gap whose sign the near report tracks: F_p - F_q for FOSD,
// the area difference for SOSD. Piecewise constant in the first case,
// piecewise linear in the second.
Rat gap_at(const Lottery& p, const Lottery& q, DominanceKind kind, const Rat& x) {
    if (kind == DominanceKind::Fosd) return cdf_at(p, x) - cdf_at(q, x);
    return cdf_area_at(p, x) - cdf_area_at(q, x);
}

int sign_of(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

} // namespace

NearDominanceReport near_dominance_report(const Lottery& p, const Lottery& q,
                                          DominanceKind kind) {
    if (kind == DominanceKind::None)
        throw ValidationError("near-dominance report needs a dominance order");

    NearDominanceReport rep;
    rep.kind = kind;
    rep.p_id = p.id;
    rep.q_id = q.id;
    rep.range_top = std::max(p.high(), q.high());

    std::vector<Rat> xs = joint_breakpoints(p, q);
    if (xs.empty() || xs.front() != 0) xs.insert(xs.begin(), Rat(0));
    if (xs.back() != rep.range_top) xs.push_back(rep.range_top);

    const Rat& top = rep.range_top;

    if (kind == DominanceKind::Fosd) {
        // Step gap: constant on [x_i, x_{i+1}). Scan intervals left to right.
        rep.x_star = top;
        rep.x_star_attained = true;
        rep.full_range = true;
        bool strict = false;
        int prev_sign = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const Rat& x = xs[i];
            if (x > top) break;
            Rat g = gap_at(p, q, kind, x);
            int s = sign_of(g);
            if (s > 0 && rep.full_range) {
                // First failure happens exactly at this breakpoint.
                rep.x_star = x;
                rep.x_star_attained = false;
                rep.full_range = false;
            }
            if (s < 0) strict = true;

            // Segment bookkeeping: the gap is constant on [x, next).
            Rat next = (i + 1 < xs.size()) ? xs[i + 1] : top;
            if (next > top) next = top;
            if (next > x) {
                if (!rep.segments.empty() && rep.segments.back().favours == -s) {
                    rep.segments.back().to = next;
                } else {
                    NearDominanceReport::Segment seg;
                    seg.from = x;
                    seg.to = next;
                    seg.favours = -s; // gap < 0 means F_p below, favouring p
                    rep.segments.push_back(seg);
                }
            }
            if (s != 0 && prev_sign != 0 && s != prev_sign) rep.crossings.push_back(x);
            if (s != 0) prev_sign = s;
        }
        rep.proper = rep.full_range && strict;

        // Average |gap| per segment: integrate the step gap over the segment.
        for (auto& seg : rep.segments) {
            Rat mass(0);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const Rat& x = xs[i];
                Rat next = (i + 1 < xs.size()) ? xs[i + 1] : top;
                if (next > top) next = top;
                Rat from = std::max(x, seg.from);
                Rat to = std::min(next, seg.to);
                if (to > from) {
                    Rat g = gap_at(p, q, kind, x);
                    mass += (g < 0 ? -g : g) * (to - from);
                }
            }
            seg.avg_gap = mass / (seg.to - seg.from);
        }
    } else {
        // Piecewise-linear gap. Evaluate at the vertices; crossings can fall
        // between them and are solved linearly.
        std::vector<std::pair<Rat, Rat>> pts;
        for (const Rat& x : xs)
            if (x <= top) pts.emplace_back(x, gap_at(p, q, kind, x));

        rep.x_star = top;
        rep.x_star_attained = true;
        rep.full_range = true;
        bool strict = false;
        for (std::size_t i = 0; i + 1 < pts.size() && rep.full_range; ++i) {
            const auto& [x0, g0] = pts[i];
            const auto& [x1, g1] = pts[i + 1];
            if (g0 > 0) {
                rep.x_star = x0;
                rep.full_range = false;
                break;
            }
            if (g1 > 0) {
                // Linear crossing inside (x0, x1].
                rep.x_star = x0 + (x1 - x0) * (-g0) / (g1 - g0);
                rep.full_range = false;
            }
        }
        if (rep.full_range && !pts.empty() && pts.back().second > 0) {
            rep.x_star = pts.back().first;
            rep.full_range = false;
        }
        for (const auto& [x, g] : pts)
            if (g < 0) strict = true;
        rep.proper = rep.full_range && strict;

        // Crossings and segments from the sign profile of the linear pieces.
        struct Piece {
            Rat from, to;
            int favours;
            Rat mass; // integral of |gap|
        };
        std::vector<Piece> pieces;
        auto add_piece = [&](const Rat& from, const Rat& to, int fav, const Rat& mass) {
            if (to <= from) return;
            if (!pieces.empty() && pieces.back().favours == fav) {
                pieces.back().to = to;
                pieces.back().mass += mass;
            } else {
                pieces.push_back({from, to, fav, mass});
            }
        };
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            Rat x0 = pts[i].first, g0 = pts[i].second;
            Rat x1 = pts[i + 1].first, g1 = pts[i + 1].second;
            if (x1 <= x0) continue;
            int s0 = sign_of(g0), s1 = sign_of(g1);
            if (s0 * s1 < 0) {
                Rat xc = x0 + (x1 - x0) * (-g0) / (g1 - g0);
                rep.crossings.push_back(xc);
                Rat m0 = (g0 < 0 ? -g0 : g0) * (xc - x0) / 2;
                Rat m1 = (g1 < 0 ? -g1 : g1) * (x1 - xc) / 2;
                add_piece(x0, xc, -s0, m0);
                add_piece(xc, x1, -s1, m1);
            } else {
                int fav = s0 != 0 ? -s0 : -s1;
                Rat a0 = g0 < 0 ? -g0 : g0;
                Rat a1 = g1 < 0 ? -g1 : g1;
                Rat mass = (a0 + a1) * (x1 - x0) / 2;
                add_piece(x0, x1, fav, mass);
            }
        }
        for (const auto& piece : pieces) {
            NearDominanceReport::Segment seg;
            seg.from = piece.from;
            seg.to = piece.to;
            seg.favours = piece.favours;
            seg.avg_gap = piece.mass / (piece.to - piece.from);
            rep.segments.push_back(seg);
        }
    }

    // Integral of (F_q - F_p) over [0, M], normalized by M. Equivalent to
    // the expected-value difference scaled the same way.
    rep.net_weighted_gap = (cdf_area_at(q, top) - cdf_area_at(p, top)) / top;
    return rep;
}

Lottery mix(const Rat& alpha, const Lottery& p, const Lottery& q, std::string id) {
    if (!(alpha > 0 && alpha < 1))
        throw ValidationError("mixture weight must lie strictly between 0 and 1, got " +
                              rat_to_string(alpha));
    std::vector<std::pair<Rat, Rat>> atoms;
    for (const auto& [prize, mass] : p.support) atoms.emplace_back(prize, alpha * mass);
    for (const auto& [prize, mass] : q.support)
        atoms.emplace_back(prize, (Rat(1) - alpha) * mass);
    if (id.empty()) id = "mix(" + rat_to_string(alpha) + "," + p.id + "," + q.id + ")";
    return Lottery::make(std::move(id), std::move(atoms));
}

bool overlapping_range(const Lottery& p, const Lottery& q) {
    Rat lo = std::max(p.low(), q.low());
    Rat hi = std::min(p.high(), q.high());
    return lo < hi;
}

} // namespace revpref
