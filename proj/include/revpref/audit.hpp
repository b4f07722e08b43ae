// Dominance audit: recomputes every pairwise relation, the CDF table and the
// CDF-area table with exact arithmetic, and compares the results against the
// design's declared taxonomy and, for the built-in design, against the
// reference tabulation distributed with it. Known reference discrepancies are
// reported, never silently adopted on either side.
#pragma once

#include "revpref/design.hpp"

#include <json.hpp>

namespace revpref {

// Printed reference materials for the built-in design: the CDF-area column
// tabulated for a lottery at integer evaluation points 1..24, exactly as
// distributed (including its known defects), parsed into exact rationals.
// Returns an empty vector for lotteries outside the tabulated set
// (A1, B1, B2, D).
std::vector<Rat> reference_area_column(const std::string& lottery_id);

// The documented pairwise dominance claims for the built-in design, used by
// the audit's discrepancy section.
struct ReferenceClaim {
    enum class Kind { Fosd, Sosd, NearFosd, NearSosd, Unranked };
    std::string p, q;        // p is the claimed (near-)dominant for ranked kinds
    Kind kind;
    DominanceKind level;     // the dominance order the claim speaks about
    std::optional<Rat> bound; // documented prefix bound, when stated
};
const std::vector<ReferenceClaim>& builtin_reference_claims();

// Full audit document (JSON). Works for any design; reference-tabulation
// sections appear only when the design's lottery ids and distributions match
// the built-in ones.
nlohmann::ordered_json run_dominance_audit(const ExperimentDesign& design);

} // namespace revpref
