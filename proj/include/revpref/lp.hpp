// Exact rational linear feasibility via a dense phase-1 simplex with Bland's
// rule. Problem sizes here are tiny (a handful of utility variables, at most
// a few hundred constraints), so simplicity and exactness win over sparse
// cleverness.
#pragma once

#include "revpref/rational.hpp"

#include <string>
#include <vector>

namespace revpref {

// sum_j a[j] * x_j  >=  b   (or == b), over variables x_j >= 0.
struct LinearConstraint {
    std::vector<Rat> coeffs;
    Rat rhs;
    bool equality = false;
    std::string tag; // provenance for conflict reporting
};

struct LpFeasibility {
    bool feasible = false;
    std::vector<Rat> point; // a feasible assignment when feasible
};

// Decides feasibility of {x >= 0 : constraints hold}. Exact; no tolerances.
LpFeasibility lp_feasible(int nvars, const std::vector<LinearConstraint>& rows);

// Greedy deletion filter: returns indices of an irreducible infeasible
// subset of `rows` (every proper subset of the returned set is feasible).
// Only call on infeasible systems; cost is one solve per constraint.
std::vector<int> lp_infeasible_core(int nvars, const std::vector<LinearConstraint>& rows);

} // namespace revpref
