// The significance tests used by the reports, implemented from first
// principles: Fisher's exact test on 2x2 tables (exact big-integer
// hypergeometric mass), the Mann-Whitney U test (midrank ties, tie-corrected
// normal approximation, continuity correction), and Spearman rank correlation
// (Pearson on midranks, t approximation).
#pragma once

#include <string>
#include <vector>

namespace revpref {

struct TestResult {
    bool ok = true;          // false when the test is undefined on the input
    std::string error;
    std::string method;
    double statistic = 0.0;
    double p_value = 1.0;    // two-sided
    long n1 = 0, n2 = 0;
};

// Table rows (a, b) and (c, d). Two-sided p-value by the probability-mass
// rule: the total probability of all tables with the observed margins whose
// hypergeometric probability does not exceed the observed table's. Computed
// with exact integer arithmetic; `statistic` is the observed table's
// probability. A degenerate margin yields p = 1.
TestResult fisher_exact_2x2(long long a, long long b, long long c, long long d);

// U statistic of the first sample. Zero variance (all pooled values tied)
// yields p = 1.
TestResult mann_whitney_u(const std::vector<double>& sample1,
                          const std::vector<double>& sample2);

// Requires n >= 3 pairs; zero rank variance on either side is an error.
TestResult spearman_rho(const std::vector<double>& xs,
                        const std::vector<double>& ys);

} // namespace revpref
