#include "revpref/audit.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace revpref {

namespace {

using nlohmann::ordered_json;

// The CDF-area column printed in the reference tabulation for each lottery
// that appears in a second-order claim, at integer evaluation points 1..24,
// digit for digit as distributed. The B2 column is defective: row 10 repeats
// the row-9 value and every later row lags the exact area by one row. The
// audit parses these literals exactly and reports the defect; it never
// repairs the data in place.
struct PrintedColumn {
    const char* id;
    std::array<const char*, 24> values;
};

constexpr PrintedColumn kPrintedAreas[] = {
    {"A1",
     {"0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8",
      "0.9", "1.0", "1.7", "2.4", "3.1", "3.8", "4.5", "5.2",
      "5.9", "6.6", "7.3", "8.0", "9.0", "10.0", "11.0", "12.0"}},
    {"B1",
     {"0.25", "0.50", "0.75", "1.00", "1.25", "1.50", "1.75", "2.00",
      "2.25", "2.50", "3.05", "3.60", "4.15", "4.70", "5.25", "5.80",
      "6.35", "6.90", "7.45", "8.0", "9.0", "10.0", "11.0", "12.0"}},
    {"B2",
     {"0.25", "0.50", "0.75", "1.00", "1.25", "1.50", "1.75", "2.00",
      "2.25", "2.25", "2.90", "3.55", "4.20", "4.85", "5.50", "6.15",
      "6.80", "7.45", "8.10", "8.75", "9.40", "10.05", "10.70", "11.35"}},
    {"D",
     {"0.15", "0.30", "0.45", "0.60", "0.75", "0.90", "1.05", "1.20",
      "1.35", "1.50", "2.15", "2.80", "3.45", "4.10", "4.75", "5.40",
      "6.05", "6.70", "7.35", "8.0", "9.0", "10.0", "11.0", "12.0"}},
};

const char* kind_str(DominanceKind k) {
    switch (k) {
    case DominanceKind::Fosd: return "fosd";
    case DominanceKind::Sosd: return "sosd";
    case DominanceKind::None: break;
    }
    return "none";
}

const char* claim_str(ReferenceClaim::Kind k) {
    switch (k) {
    case ReferenceClaim::Kind::Fosd: return "fosd";
    case ReferenceClaim::Kind::Sosd: return "sosd";
    case ReferenceClaim::Kind::NearFosd: return "near-fosd";
    case ReferenceClaim::Kind::NearSosd: return "near-sosd";
    case ReferenceClaim::Kind::Unranked: break;
    }
    return "unranked";
}

// Nonnegative rational rounded half-up to three decimals, as "w.ddd".
std::string round3(const Rat& r, Rat* rounded_value) {
    const Rat scaled = r * 1000;
    BigInt q = numerator(scaled) / denominator(scaled);
    const BigInt rem = numerator(scaled) % denominator(scaled);
    if (rem * 2 >= denominator(scaled)) ++q;
    if (rounded_value != nullptr) *rounded_value = Rat(q, BigInt(1000));
    const BigInt whole = q / 1000;
    std::string frac = BigInt(q % 1000).str();
    frac.insert(frac.begin(), 3 - frac.size(), '0');
    return whole.str() + "." + frac;
}

// The reference sections apply only when the analyzed lotteries are, id for
// id and atom for atom, the ones the tabulation was printed for.
bool matches_builtin(const ExperimentDesign& design) {
    const ExperimentDesign& ref = built_in_design();
    if (design.lotteries.size() != ref.lotteries.size()) return false;
    for (const Lottery& want : ref.lotteries) {
        auto it = design.lottery_index.find(want.id);
        if (it == design.lottery_index.end()) return false;
        if (!design.lotteries[it->second].same_distribution(want)) return false;
    }
    return true;
}

int integer_top(const ExperimentDesign& design) {
    const Rat top = design.max_prize();
    BigInt q = numerator(top) / denominator(top);
    if (q * denominator(top) < numerator(top)) ++q;
    return static_cast<int>(q);
}

DominanceRelation recompute(const ExperimentDesign& design, const std::string& p,
                            const std::string& q, DominanceKind level) {
    const Lottery& lp = design.lottery(design.require_lottery(p));
    const Lottery& lq = design.lottery(design.require_lottery(q));
    return level == DominanceKind::Fosd ? check_fosd(lp, lq) : check_sosd(lp, lq);
}

bool claim_agrees(const ReferenceClaim& claim, const DominanceRelation& rel) {
    switch (claim.kind) {
    case ReferenceClaim::Kind::Fosd:
    case ReferenceClaim::Kind::Sosd:
        return rel.kind == claim.level && rel.dominant == claim.p;
    case ReferenceClaim::Kind::NearFosd:
    case ReferenceClaim::Kind::NearSosd:
    case ReferenceClaim::Kind::Unranked:
        // Near dominance and unrankedness both assert that the proper
        // relation fails over the full range.
        return rel.kind == DominanceKind::None;
    }
    return false;
}

} // namespace

std::vector<Rat> reference_area_column(const std::string& lottery_id) {
    for (const PrintedColumn& col : kPrintedAreas) {
        if (lottery_id != col.id) continue;
        std::vector<Rat> out;
        out.reserve(col.values.size());
        for (const char* v : col.values) out.push_back(rat_from_string(v));
        return out;
    }
    return {};
}

const std::vector<ReferenceClaim>& builtin_reference_claims() {
    using K = ReferenceClaim::Kind;
    static const std::vector<ReferenceClaim> claims = {
        {"A1", "A2", K::Fosd, DominanceKind::Fosd, std::nullopt},
        {"A1", "C1", K::Fosd, DominanceKind::Fosd, std::nullopt},
        {"A1", "C2", K::NearFosd, DominanceKind::Fosd, Rat(20)},
        {"A2", "C2", K::NearFosd, DominanceKind::Fosd, Rat(20)},
        {"A1", "D", K::Unranked, DominanceKind::Fosd, std::nullopt},
        {"A1", "D", K::Sosd, DominanceKind::Sosd, std::nullopt},
        {"D", "B1", K::Sosd, DominanceKind::Sosd, std::nullopt},
        {"A1", "B1", K::Sosd, DominanceKind::Sosd, std::nullopt},
        {"A1", "B2", K::NearSosd, DominanceKind::Sosd, rat_from_string("22.143")},
        {"D", "B2", K::NearSosd, DominanceKind::Sosd, rat_from_string("22.143")},
        {"B1", "B2", K::Unranked, DominanceKind::Sosd, std::nullopt},
        {"C1", "C2", K::Unranked, DominanceKind::Sosd, std::nullopt},
    };
    return claims;
}

nlohmann::ordered_json run_dominance_audit(const ExperimentDesign& design) {
    ordered_json doc;
    const bool builtin = matches_builtin(design);
    doc["builtin_reference"] = builtin;

    // CDF table at the design's prize breakpoints, plus expected values.
    const std::vector<Rat> breakpoints = design.prize_set();
    ordered_json cdf;
    cdf["breakpoints"] = ordered_json::array();
    for (const Rat& b : breakpoints) cdf["breakpoints"].push_back(rat_to_string(b));
    cdf["rows"] = ordered_json::object();
    for (const Lottery& lot : design.lotteries) {
        ordered_json row = ordered_json::array();
        for (const Rat& b : breakpoints) row.push_back(rat_to_string(cdf_at(lot, b)));
        cdf["rows"][lot.id] = std::move(row);
    }
    doc["cdf_table"] = std::move(cdf);

    doc["expected_values"] = ordered_json::object();
    for (const Lottery& lot : design.lotteries) {
        doc["expected_values"][lot.id] = rat_to_string(expected_value(lot));
    }

    // Exact CDF areas at every integer point up to the top prize.
    const int top = integer_top(design);
    ordered_json area;
    area["points"] = ordered_json::array();
    for (int x = 1; x <= top; ++x) area["points"].push_back(x);
    area["rows"] = ordered_json::object();
    for (const Lottery& lot : design.lotteries) {
        ordered_json row = ordered_json::array();
        for (int x = 1; x <= top; ++x) {
            row.push_back(rat_to_string(cdf_area_at(lot, Rat(x))));
        }
        area["rows"][lot.id] = std::move(row);
    }
    doc["area_table"] = std::move(area);

    // Every unordered lottery pair once, first order preferred.
    doc["pairwise"] = ordered_json::array();
    for (std::size_t i = 0; i < design.lotteries.size(); ++i) {
        for (std::size_t j = i + 1; j < design.lotteries.size(); ++j) {
            const DominanceRelation rel =
                classify_dominance(design.lotteries[i], design.lotteries[j]);
            doc["pairwise"].push_back(ordered_json{
                {"p", design.lotteries[i].id},
                {"q", design.lotteries[j].id},
                {"relation", kind_str(rel.kind)},
                {"dominant", rel.dominant},
            });
        }
    }

    // Declared menu labels against the exact recomputation.
    std::vector<std::string> taxonomy_notes;
    doc["taxonomy"] = ordered_json::array();
    for (const TaxonomyEntry& e : taxonomy_comparison(design)) {
        doc["taxonomy"].push_back(ordered_json{
            {"menu", e.menu},
            {"declared", ordered_json{{"kind", kind_str(e.declared.kind)},
                                      {"dominant", e.declared.dominant},
                                      {"near", e.declared.near}}},
            {"computed", ordered_json{{"kind", kind_str(e.computed.kind)},
                                      {"dominant", e.computed.dominant}}},
            {"agree", e.agree},
        });
        if (!e.agree) {
            std::string note = "menu '" + e.menu + "': declared " +
                               kind_str(e.declared.kind);
            if (!e.declared.dominant.empty()) {
                note += std::string(e.declared.near ? " near " : " with dominant ") +
                        "'" + e.declared.dominant + "'";
            }
            note += std::string(", recomputed ") + kind_str(e.computed.kind);
            if (!e.computed.dominant.empty()) {
                note += " with dominant '" + e.computed.dominant + "'";
            }
            taxonomy_notes.push_back(std::move(note));
        }
    }

    std::vector<std::pair<std::string, std::string>> discrepancies;
    for (const std::string& note : taxonomy_notes) {
        discrepancies.emplace_back("taxonomy", note);
    }

    if (builtin) {
        ordered_json ref;

        // Printed area columns against the exact recomputation.
        ref["area_comparison"] = ordered_json::array();
        for (const PrintedColumn& col : kPrintedAreas) {
            const std::vector<Rat> printed = reference_area_column(col.id);
            const Lottery& lot = design.lottery(design.require_lottery(col.id));
            std::vector<int> mismatched;
            bool shifted = true;
            for (int x = 1; x <= 24; ++x) {
                if (printed[x - 1] == cdf_area_at(lot, Rat(x))) continue;
                mismatched.push_back(x);
                if (printed[x - 1] != cdf_area_at(lot, Rat(x - 1))) shifted = false;
            }
            const bool matches = mismatched.empty();
            ref["area_comparison"].push_back(ordered_json{
                {"lottery", col.id},
                {"matches", matches},
                {"shifted_by_one", !matches && shifted},
                {"mismatched_points", mismatched},
            });
            if (!matches) {
                discrepancies.emplace_back(
                    "reference-area-column",
                    "the printed '" + std::string(col.id) + "' area column differs " +
                        "from the exact areas at " + std::to_string(mismatched.size()) +
                        " of 24 points" +
                        (shifted ? "; every defective row holds the exact value of "
                                   "the previous point"
                                 : ""));
            }
        }

        // Reproduce each printed near-dominance bound from the printed
        // columns themselves: interpolate both area columns linearly between
        // integer points and solve for the first crossing.
        ref["crossing_reproductions"] = ordered_json::array();
        for (const ReferenceClaim& claim : builtin_reference_claims()) {
            if (!claim.bound.has_value() || claim.level != DominanceKind::Sosd) continue;
            const std::vector<Rat> pc = reference_area_column(claim.p);
            const std::vector<Rat> qc = reference_area_column(claim.q);
            if (pc.empty() || qc.empty()) continue;
            for (std::size_t x = 1; x < pc.size(); ++x) {
                if (pc[x] <= qc[x]) continue;
                const Rat p0 = pc[x - 1], q0 = qc[x - 1];
                const Rat cross =
                    Rat(x) + (q0 - p0) / ((pc[x] - p0) - (qc[x] - q0));
                Rat rounded_value;
                const std::string rounded = round3(cross, &rounded_value);
                ref["crossing_reproductions"].push_back(ordered_json{
                    {"p", claim.p},
                    {"q", claim.q},
                    {"printed_bound", rat_to_string(*claim.bound)},
                    {"from_printed_table", rat_to_string(cross)},
                    {"rounded", rounded},
                    {"agree", rounded_value == *claim.bound},
                });
                break;
            }
        }

        // Every documented pairwise claim against the exact recomputation.
        ref["claim_checks"] = ordered_json::array();
        for (const ReferenceClaim& claim : builtin_reference_claims()) {
            const DominanceRelation rel =
                recompute(design, claim.p, claim.q, claim.level);
            const bool agree = claim_agrees(claim, rel);
            ref["claim_checks"].push_back(ordered_json{
                {"p", claim.p},
                {"q", claim.q},
                {"claim", claim_str(claim.kind)},
                {"level", kind_str(claim.level)},
                {"bound", claim.bound.has_value() ? ordered_json(rat_to_string(*claim.bound))
                                                  : ordered_json(nullptr)},
                {"recomputed", ordered_json{{"kind", kind_str(rel.kind)},
                                            {"dominant", rel.dominant}}},
                {"agree", agree},
            });
            if (!agree) {
                std::string note = claim.p + "/" + claim.q + ": documented as " +
                                   claim_str(claim.kind) + " at level " +
                                   kind_str(claim.level) + ", recomputed as " +
                                   kind_str(rel.kind);
                if (!rel.dominant.empty()) {
                    note += " with dominant '" + rel.dominant + "'";
                }
                discrepancies.emplace_back("reference-claim", std::move(note));
            }
        }

        // The C gap is a half mixture of the B gap, so their area gaps must
        // halve exactly at every integer point.
        bool halving = true;
        const Lottery& b1 = design.lottery(design.require_lottery("B1"));
        const Lottery& b2 = design.lottery(design.require_lottery("B2"));
        const Lottery& c1 = design.lottery(design.require_lottery("C1"));
        const Lottery& c2 = design.lottery(design.require_lottery("C2"));
        for (int x = 1; x <= 24; ++x) {
            const Rat gb = cdf_area_at(b1, Rat(x)) - cdf_area_at(b2, Rat(x));
            const Rat gc = cdf_area_at(c1, Rat(x)) - cdf_area_at(c2, Rat(x));
            if (gc * 2 != gb) {
                halving = false;
                break;
            }
        }
        ref["halving_identity"] = ordered_json{
            {"statement", "area(C1) - area(C2) = (area(B1) - area(B2)) / 2 "
                          "at every integer point"},
            {"holds", halving},
        };

        doc["reference"] = std::move(ref);
    }

    doc["discrepancies"] = ordered_json::array();
    for (const auto& [kind, detail] : discrepancies) {
        doc["discrepancies"].push_back(ordered_json{{"kind", kind}, {"detail", detail}});
    }
    return doc;
}

} // namespace revpref
