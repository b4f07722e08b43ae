// Houtman-Maks scoring over strict linear orders (per-round data) and weak
// orders (merged data, where indifference is meaningful), utility-maximizer
// and expected-utility-maximizer classification, and an independent
// linear-programming oracle for expected-utility rationalizability.
#pragma once

#include "revpref/axioms.hpp"
#include "revpref/choices.hpp"
#include "revpref/orders.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace revpref {

enum class HmMode { Strict, Weak };
// Penalize: menus with an empty choice count as mistakes (a maximizer never
// defers). ActiveOnly: such menus are excluded from evaluation.
enum class HmPolicy { Penalize, ActiveOnly };

// Precomputed per-order maximizers for a fixed design and menu subset.
// Building one costs a full enumeration; scoring a subject against it is a
// linear scan. Reused across subjects within an analysis run.
class ScoringTable {
public:
    ScoringTable(const ExperimentDesign& design, HmMode mode,
                 std::vector<int> menu_subset);

    HmMode mode() const { return mode_; }
    const std::vector<int>& menus() const { return menu_subset_; }
    std::size_t order_count() const { return orders_.size(); }
    // Order repr: permutation (Strict) or class-rank vector (Weak).
    const std::vector<std::uint8_t>& order(std::size_t i) const { return orders_[i]; }
    // Maximal set of menu m (local index into menus()) under order i, as a
    // bitmask over lottery indices. Strict orders give singleton masks.
    std::uint32_t max_set(std::size_t i, std::size_t m) const {
        return max_sets_[i * menu_subset_.size() + m];
    }

private:
    HmMode mode_;
    std::vector<int> menu_subset_;
    std::vector<std::vector<std::uint8_t>> orders_;
    std::vector<std::uint32_t> max_sets_;
};

struct HmResult {
    int score = 0;
    HmMode mode = HmMode::Strict;
    HmPolicy policy = HmPolicy::Penalize;
    int evaluated_menus = 0;           // menus that entered the count
    std::uint64_t orders_considered = 0;
    std::uint64_t witness_count = 0;   // number of minimizing orders
    // All minimizing orders in enumeration order; the first is the canonical
    // witness (enumeration order is lexicographic, see orders.hpp).
    std::vector<std::vector<std::uint8_t>> witnesses;
    // Design menu indices mistaken under the canonical witness.
    std::vector<int> mistake_menus;
};

// Minimum number of evaluated menus whose observation must be discarded for
// the rest to be consistent with maximization of some order. Consistency at a
// menu: Strict mode requires the choice to be the singleton maximum; Weak
// mode requires the choice SET to equal the order's full maximal set (a
// proper subset is a mistake). menu_subset empty means all design menus.
// Passing a prebuilt `table` (matching mode and subset) skips re-enumeration.
HmResult hm_score(const ExperimentDesign& design, const ChoiceCorrespondence& C,
                  HmMode mode, HmPolicy policy,
                  const std::vector<int>& menu_subset = {},
                  const ScoringTable* table = nullptr);

// Score only, with early exit once `stop_at` is reached (used by bulk
// simulation scoring where witnesses are not needed).
int hm_score_only(const ExperimentDesign& design, const ChoiceCorrespondence& C,
                  HmPolicy policy, const ScoringTable& table, int stop_at = 0);

struct EumResult {
    int hm = 0;
    bool is_um = false;        // hm == 0
    bool is_approx_um = false; // hm <= threshold (default 1)
    bool is_eum_binary = false; // the three fixture gates all pass
    bool is_eum_all = false;    // is_um && is_eum_binary
    bool fosd_ok = false;
    bool independence_ok = false;
    bool star_ok = false;
    RiskAttitude attitude = RiskAttitude::Unclassified;
};

// The operational expected-utility test: ordinal consistency via hm_score
// plus the FOSD / Independence / StAR gates on their binary fixture menus.
// The FOSD gate always uses the strict-axiom form (exactly {dominant}), and
// the gates always run under the Strict deferral policy; `policy` governs the
// HM component only.
EumResult classify_eum(const ExperimentDesign& design,
                       const ChoiceCorrespondence& C, HmMode mode,
                       HmPolicy policy,
                       TaxonomyMode taxonomy = TaxonomyMode::Declared,
                       int approx_threshold = 1,
                       const ScoringTable* table = nullptr);

struct EuRationalizeResult {
    bool feasible = false;
    // Witness utility values per prize (normalized: u(min)=0, u(max)=1).
    std::vector<std::pair<Rat, Rat>> utility;
    // When infeasible and conflict search was requested: tags of an
    // irreducible conflicting constraint subset.
    std::vector<std::string> conflict;
};

// Independent oracle: is there a strictly increasing utility on the design's
// prize set (margin eps between consecutive prizes) whose expected utility
// weakly rationalizes every non-empty choice, with margin eps against
// rejected alternatives and exact ties inside the chosen set? Under Penalize
// an empty menu is unrationalizable by definition (the result is infeasible
// with the deferral named in `conflict`); under ActiveOnly empty menus are
// skipped.
EuRationalizeResult eu_rationalizable(const ExperimentDesign& design,
                                      const ChoiceCorrespondence& C,
                                      HmPolicy policy,
                                      const Rat& eps = Rat(1, 1000000),
                                      bool find_conflict = false);

} // namespace revpref
