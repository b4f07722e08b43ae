// Violation detectors for the seven deterministic choice axioms. Every
// detector works on a ChoiceCorrespondence, which covers both merged data and
// single rounds (singleton-or-empty values), and reports reconstructible
// witnesses.
#pragma once

#include "revpref/choices.hpp"

#include <string>
#include <vector>

namespace revpref {

enum class Axiom {
    Decisiveness,
    Transitivity,
    Contraction,
    Warp,
    FosdChoice,
    Independence,
    Star,
};

const char* axiom_name(Axiom a);

// Strict: empty values participate in the set-equality tests (a deferral is
// data). Lenient: fixtures involving an empty value are skipped.
enum class DeferralPolicy { Strict, Lenient };

// StrictAxiom: violation unless the choice set is exactly {dominant}.
// DominatedChoice: violation only when the dominated lottery was chosen.
enum class FosdMode { StrictAxiom, DominatedChoice };

struct AxiomViolation {
    Axiom axiom;
    std::vector<std::string> menus;    // witness menus
    std::vector<std::string> lotteries; // witness lotteries
    std::string detail;
    bool strict_subkind = false; // FOSD: the choice was exactly {dominated}
    int fixture_index = -1;      // triple/pair index where applicable
};

// One violation per menu with an empty value.
std::vector<AxiomViolation> check_decisiveness(const ExperimentDesign& design,
                                               const ChoiceCorrespondence& C);

// For each ordered arrangement (p,q,r) of each triple: p chosen at {p,q} and
// q chosen at {q,r} requires p chosen at {p,r}; an empty C({p,r}) counts as a
// failure of the consequent. Every violating arrangement is reported;
// fixture_index identifies the triple so tallies can count it once.
std::vector<AxiomViolation> check_transitivity(const ExperimentDesign& design,
                                               const ChoiceCorrespondence& C,
                                               const std::vector<TransitivityTriple>& triples);

// Menu pairs (B subset of A): p chosen at A with p in B requires p chosen at
// B. C(B) empty with the antecedent true is a violation here (though not of
// WARP).
std::vector<AxiomViolation> check_contraction(const ExperimentDesign& design,
                                              const ChoiceCorrespondence& C,
                                              const std::vector<std::pair<int, int>>& nested_pairs);

// No direct reversals: p chosen at A with q rejected there, while q is chosen
// at some B containing p.
std::vector<AxiomViolation> check_warp(const ExperimentDesign& design,
                                       const ChoiceCorrespondence& C);

// fosd_menus: (menu id, dominant lottery id) pairs under the active taxonomy.
std::vector<AxiomViolation> check_fosd_choice(
    const ExperimentDesign& design, const ChoiceCorrespondence& C,
    const std::vector<std::pair<std::string, std::string>>& fosd_menus,
    FosdMode mode);

// Consistency cases per pair: both empty; both pick the base index-1 lottery
// and its mixture; both pick the index-2 side; or both pick everything.
// Anything else violates. Lenient skips pairs where either value is empty.
std::vector<AxiomViolation> check_independence(const ExperimentDesign& design,
                                               const ChoiceCorrespondence& C,
                                               const std::vector<IndependencePair>& pairs,
                                               DeferralPolicy policy);

enum class RiskAttitude { RiskAverse, RiskSeeking, RiskNeutral, Unclassified };
const char* risk_attitude_name(RiskAttitude a);

struct StarOutcome {
    std::vector<AxiomViolation> violations;
    RiskAttitude attitude = RiskAttitude::Unclassified;
};

// Stability of attitudes to risk: across every pair of SOSD-ranked menus the
// same pattern must hold (all empty, all dominant, all dominated, or all
// both). The attitude is assigned only when the check passes: dominant =>
// averse, dominated => seeking, both => neutral; all-empty stays
// Unclassified. Lenient drops empty-valued pairs from the uniformity
// requirement.
StarOutcome check_star(const ExperimentDesign& design,
                       const ChoiceCorrespondence& C,
                       const std::vector<StarPair>& star_pairs,
                       DeferralPolicy policy);

} // namespace revpref
