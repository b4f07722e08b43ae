// Statistical tests against independent oracles: a direct big-integer
// hypergeometric summation for Fisher, the classical no-ties formula for
// Spearman, and hand-computable rank cases for Mann-Whitney.
#include <doctest.h>

#include "revpref/rational.hpp"
#include "revpref/rng.hpp"
#include "revpref/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace revpref;

namespace {

// Oracle: two-sided Fisher p by direct enumeration of the hypergeometric
// distribution with exact rationals, comparing probabilities exactly.
double fisher_oracle(long long a, long long b, long long c, long long d) {
    const long long r1 = a + b, r2 = c + d, c1 = a + c, n = a + b + c + d;
    if (r1 == 0 || r2 == 0 || c1 == 0 || c1 == n) return 1.0;
    auto binom = [](long long top, long long k) {
        BigInt out = 1;
        for (long long i = 0; i < k; ++i) {
            out *= (top - i);
            out /= (i + 1);
        }
        return out;
    };
    const BigInt denom = binom(n, c1);
    const long long lo = std::max(0LL, c1 - r2), hi = std::min(r1, c1);
    const BigInt observed = binom(r1, a) * binom(r2, c1 - a);
    BigInt mass = 0;
    for (long long x = lo; x <= hi; ++x) {
        BigInt w = binom(r1, x) * binom(r2, c1 - x);
        if (w <= observed) mass += w;
    }
    return rat_to_double(Rat(mass, denom));
}

} // namespace

TEST_CASE("fisher: the frozen acceptance table is significant") {
    auto res = fisher_exact_2x2(106, 202, 177, 131);
    REQUIRE(res.ok);
    CHECK(res.p_value < 0.001);
    CHECK(res.p_value == doctest::Approx(fisher_oracle(106, 202, 177, 131)).epsilon(1e-9));
}

TEST_CASE("fisher: symmetric tables are maximally insignificant") {
    auto res = fisher_exact_2x2(10, 10, 10, 10);
    REQUIRE(res.ok);
    CHECK(res.p_value == doctest::Approx(1.0));
    auto res2 = fisher_exact_2x2(3, 7, 3, 7);
    CHECK(res2.p_value == doctest::Approx(1.0));
}

TEST_CASE("fisher: small extreme tables") {
    // Complete separation of 5 vs 5: p = 2 / C(10,5) = 1/126.
    auto res = fisher_exact_2x2(5, 0, 0, 5);
    REQUIRE(res.ok);
    CHECK(res.p_value == doctest::Approx(2.0 / 252.0).epsilon(1e-12));
    CHECK(res.p_value == doctest::Approx(fisher_oracle(5, 0, 0, 5)).epsilon(1e-12));
}

TEST_CASE("fisher: degenerate margins give p = 1") {
    CHECK(fisher_exact_2x2(0, 0, 3, 4).p_value == doctest::Approx(1.0));
    CHECK(fisher_exact_2x2(3, 0, 4, 0).p_value == doctest::Approx(1.0));
    CHECK(fisher_exact_2x2(0, 3, 0, 4).p_value == doctest::Approx(1.0));
}

TEST_CASE("fisher: negative cells are rejected") {
    auto res = fisher_exact_2x2(-1, 2, 3, 4);
    CHECK_FALSE(res.ok);
    CHECK(!res.error.empty());
}

TEST_CASE("fisher matches the summation oracle on random tables") {
    Rng rng(97531);
    for (int trial = 0; trial < 80; ++trial) {
        long long a = rng.uniform_int(12), b = rng.uniform_int(12);
        long long c = rng.uniform_int(12), d = rng.uniform_int(12);
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        CAPTURE(d);
        auto res = fisher_exact_2x2(a, b, c, d);
        REQUIRE(res.ok);
        CHECK(res.p_value == doctest::Approx(fisher_oracle(a, b, c, d)).epsilon(1e-9));
    }
}

TEST_CASE("fisher is invariant under the symmetries of the table") {
    auto base = fisher_exact_2x2(106, 202, 177, 131);
    CHECK(fisher_exact_2x2(177, 131, 106, 202).p_value ==
          doctest::Approx(base.p_value).epsilon(1e-12)); // swap rows
    CHECK(fisher_exact_2x2(202, 106, 131, 177).p_value ==
          doctest::Approx(base.p_value).epsilon(1e-12)); // swap columns
    CHECK(fisher_exact_2x2(106, 177, 202, 131).p_value ==
          doctest::Approx(base.p_value).epsilon(1e-12)); // transpose
}

TEST_CASE("mann-whitney: identical samples are indistinguishable") {
    std::vector<double> xs = {1, 2, 3, 4, 5};
    auto res = mann_whitney_u(xs, xs);
    REQUIRE(res.ok);
    CHECK(res.p_value == doctest::Approx(1.0));
    // U of the first sample against itself: n*n/2 by midranks.
    CHECK(res.statistic == doctest::Approx(12.5));
}

TEST_CASE("mann-whitney: hand-ranked cases") {
    // {1,2} vs {3,4}: every first-sample value loses, U1 = 0.
    auto res = mann_whitney_u({1, 2}, {3, 4});
    REQUIRE(res.ok);
    CHECK(res.statistic == doctest::Approx(0.0));
    CHECK(res.p_value > 0.0);
    CHECK(res.p_value < 1.0);

    // Midranks with ties: {1,1,2} vs {1,2,2}.
    // Pooled sorted: 1,1,1,2,2,2 with midranks 2,2,2,5,5,5.
    // R1 = 2 + 2 + 5 = 9, U1 = R1 - n1(n1+1)/2 = 9 - 6 = 3.
    auto tie = mann_whitney_u({1, 1, 2}, {1, 2, 2});
    REQUIRE(tie.ok);
    CHECK(tie.statistic == doctest::Approx(3.0));

    // A clear separation is more significant than a mild one.
    auto strong = mann_whitney_u({1, 2, 3, 4, 5, 6, 7, 8}, {11, 12, 13, 14, 15, 16, 17, 18});
    auto weak = mann_whitney_u({1, 2, 3, 4, 5, 6, 7, 18}, {5.5, 6.5, 11, 12, 13, 3.2, 2.1, 1.7});
    CHECK(strong.p_value < weak.p_value);
    CHECK(strong.p_value < 0.001);
}

TEST_CASE("mann-whitney: degenerate inputs") {
    CHECK_FALSE(mann_whitney_u({}, {1, 2}).ok);
    CHECK_FALSE(mann_whitney_u({1, 2}, {}).ok);
    // All pooled values tied: zero variance, p = 1 by convention.
    auto res = mann_whitney_u({3, 3, 3}, {3, 3});
    REQUIRE(res.ok);
    CHECK(res.p_value == doctest::Approx(1.0));
}

TEST_CASE("spearman: the frozen hand case") {
    auto res = spearman_rho({1, 2, 3, 4}, {2, 1, 4, 3});
    REQUIRE(res.ok);
    CHECK(res.statistic == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("spearman: perfect monotone association") {
    auto up = spearman_rho({1, 2, 3, 4, 5}, {10, 20, 30, 40, 50});
    REQUIRE(up.ok);
    CHECK(up.statistic == doctest::Approx(1.0));
    CHECK(up.p_value < 0.05);

    auto down = spearman_rho({1, 2, 3, 4, 5}, {50, 40, 30, 20, 10});
    CHECK(down.statistic == doctest::Approx(-1.0));
    // Monotone transformation leaves rho untouched.
    auto warped = spearman_rho({1, 2, 3, 4, 5}, {1, 8, 27, 64, 125});
    CHECK(warped.statistic == doctest::Approx(1.0));
}

TEST_CASE("spearman matches the classical formula on tie-free data") {
    Rng rng(1357);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 5 + static_cast<int>(rng.uniform_int(5));
        std::vector<double> xs(n), ys(n);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.uniform_int(static_cast<std::uint32_t>(i + 1))]);
        for (int i = 0; i < n; ++i) {
            xs[i] = i + 1;
            ys[i] = perm[i] + 1;
        }
        // rho = 1 - 6 sum d^2 / (n (n^2 - 1)), valid without ties.
        double d2 = 0;
        for (int i = 0; i < n; ++i) d2 += (xs[i] - ys[i]) * (xs[i] - ys[i]);
        double expected = 1.0 - 6.0 * d2 / (n * (double(n) * n - 1.0));
        auto res = spearman_rho(xs, ys);
        REQUIRE(res.ok);
        CHECK(res.statistic == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("spearman: ties go through midranks") {
    // xs ranks: 1, 2.5, 2.5, 4; ys ranks: 1, 2, 3, 4.
    auto res = spearman_rho({10, 20, 20, 30}, {1, 2, 3, 4});
    REQUIRE(res.ok);
    // Pearson on those midranks: cov = 4.5/..., work it out directly:
    // mean 2.5 both; centered x: -1.5, 0, 0, 1.5; centered y: -1.5,-0.5,0.5,1.5
    // cov = (2.25 + 0 + 0 + 2.25)/3; varx = (2.25+2.25)/3; vary = 5/3
    // rho = 4.5 / sqrt(4.5 * 5) = 0.94868...
    CHECK(res.statistic == doctest::Approx(4.5 / std::sqrt(4.5 * 5.0)).epsilon(1e-12));
}

TEST_CASE("spearman: undefined inputs") {
    CHECK_FALSE(spearman_rho({1, 2}, {1, 2}).ok);          // n < 3
    CHECK_FALSE(spearman_rho({5, 5, 5}, {1, 2, 3}).ok);    // zero rank variance
    CHECK_FALSE(spearman_rho({1, 2, 3}, {1, 2}).ok);       // length mismatch
}
