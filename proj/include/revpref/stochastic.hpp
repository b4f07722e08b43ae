// Random-utility implications tested on empirical choice frequencies:
// regularity, the three stochastic-transitivity strengths, and stochastic
// decisiveness. All comparisons are exact rational; there are no tolerance
// thresholds.
#pragma once

#include "revpref/choices.hpp"

#include <string>
#include <vector>

namespace revpref {

enum class StochAxiom { Regularity, WST, MST, SST, StochasticDecisiveness };
const char* stoch_axiom_name(StochAxiom a);

enum class StVariant { Weak, Moderate, Strong };

struct StochasticViolation {
    StochAxiom axiom;
    std::vector<std::string> menus;
    std::vector<std::string> lotteries;
    std::vector<Rat> values; // the probabilities compared
    std::string detail;
};

// Pr(p, A) <= Pr(p, B) whenever p in B and B is a subset of A.
std::vector<StochasticViolation> check_regularity(
    const ExperimentDesign& design, const ChoiceProbabilities& P,
    const std::vector<std::pair<int, int>>& nested_pairs);

// For each ordered arrangement (p,q,r): when Pr(p,{p,q}) >= 1/2 and
// Pr(q,{q,r}) >= 1/2 (ties satisfy the antecedent), the conclusion
// Pr(p,{p,r}) must reach 1/2 (Weak), the smaller antecedent (Moderate), or
// the larger one (Strong). Frequencies are raw by default, so deferral mass
// weakens antecedents; renormalize divides by the active-choice mass instead
// (menus with no active choice then never fire an antecedent).
std::vector<StochasticViolation> check_stochastic_transitivity(
    const ExperimentDesign& design, const ChoiceProbabilities& P,
    const std::vector<TransitivityTriple>& triples, StVariant variant,
    bool renormalize = false);

// Pr(A, A) = 1 for every menu.
std::vector<StochasticViolation> check_stochastic_decisiveness(
    const ExperimentDesign& design, const ChoiceProbabilities& P);

} // namespace revpref
