#include "revpref/stats.hpp"

#include "revpref/rational.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace revpref {

namespace {

TestResult fail(const std::string& method, const std::string& why) {
    TestResult res;
    res.ok = false;
    res.method = method;
    res.error = why;
    return res;
}

BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    BigInt out = 1;
    for (long long i = 0; i < k; ++i) {
        out *= (n - i);
        out /= (i + 1);
    }
    return out;
}

// Midranks of the pooled positions of `values`, 1-based.
std::vector<double> midranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

double normal_two_sided(double z) {
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

} // namespace

TestResult fisher_exact_2x2(long long a, long long b, long long c, long long d) {
    TestResult res;
    res.method = "fisher-exact";
    if (a < 0 || b < 0 || c < 0 || d < 0)
        return fail(res.method, "negative cell count");
    res.n1 = a + b;
    res.n2 = c + d;

    const long long r1 = a + b, r2 = c + d, c1 = a + c, n = a + b + c + d;
    if (r1 == 0 || r2 == 0 || c1 == 0 || c1 == n) {
        res.statistic = 1.0;
        res.p_value = 1.0;
        return res;
    }

    // Hypergeometric weights share the denominator C(n, c1), so comparing
    // integer weights compares probabilities exactly.
    const BigInt denom = binomial(n, c1);
    const BigInt observed = binomial(r1, a) * binomial(r2, c1 - a);
    const long long lo = std::max(0LL, c1 - r2), hi = std::min(r1, c1);
    BigInt mass = 0;
    for (long long x = lo; x <= hi; ++x) {
        BigInt w = binomial(r1, x) * binomial(r2, c1 - x);
        if (w <= observed) mass += w;
    }
    res.statistic = rat_to_double(Rat(observed, denom));
    res.p_value = rat_to_double(Rat(mass, denom));
    return res;
}

TestResult mann_whitney_u(const std::vector<double>& sample1,
                          const std::vector<double>& sample2) {
    TestResult res;
    res.method = "mann-whitney-u";
    if (sample1.empty() || sample2.empty())
        return fail(res.method, "both samples must be non-empty");
    const double n1 = static_cast<double>(sample1.size());
    const double n2 = static_cast<double>(sample2.size());
    res.n1 = static_cast<long>(sample1.size());
    res.n2 = static_cast<long>(sample2.size());

    std::vector<double> pooled = sample1;
    pooled.insert(pooled.end(), sample2.begin(), sample2.end());
    std::vector<double> ranks = midranks(pooled);

    double r1 = 0.0;
    for (std::size_t i = 0; i < sample1.size(); ++i) r1 += ranks[i];
    const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    res.statistic = u1;

    // Tie-corrected variance over the pooled tie-group sizes.
    const double total = n1 + n2;
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const double variance =
        n1 * n2 / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if (variance <= 0.0) {
        res.p_value = 1.0; // every pooled value tied; nothing to distinguish
        return res;
    }

    const double mu = n1 * n2 / 2.0;
    double diff = u1 - mu;
    // Continuity correction pulls the statistic half a unit toward the mean.
    if (std::fabs(diff) <= 0.5)
        diff = 0.0;
    else
        diff += diff > 0 ? -0.5 : 0.5;
    res.p_value = std::min(1.0, normal_two_sided(diff / std::sqrt(variance)));
    return res;
}

TestResult spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    TestResult res;
    res.method = "spearman-rho";
    if (xs.size() != ys.size()) return fail(res.method, "paired samples differ in length");
    if (xs.size() < 3) return fail(res.method, "need at least 3 pairs");
    const std::size_t n = xs.size();
    res.n1 = res.n2 = static_cast<long>(n);

    std::vector<double> rx = midranks(xs);
    std::vector<double> ry = midranks(ys);
    const double mean = (static_cast<double>(n) + 1.0) / 2.0; // midranks always average this
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
        sxy += (rx[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0)
        return fail(res.method, "zero rank variance");
    const double rho = sxy / std::sqrt(sxx * syy);
    res.statistic = rho;

    const double df = static_cast<double>(n) - 2.0;
    const double denom = 1.0 - rho * rho;
    if (denom <= 0.0) {
        res.p_value = 0.0; // perfect monotone association
        return res;
    }
    const double t = rho * std::sqrt(df / denom);
    boost::math::students_t dist(df);
    res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    res.p_value = std::min(1.0, res.p_value);
    return res;
}

} // namespace revpref
