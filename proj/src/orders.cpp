#include "revpref/orders.hpp"

#include "revpref/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace revpref {

void enumerate_linear_orders(int n,
                             const std::function<void(const std::vector<std::uint8_t>&)>& fn) {
    if (n < 1 || n > 12)
        throw ValidationError("linear-order enumeration supports 1..12 elements, got " +
                              std::to_string(n));
    std::vector<std::uint8_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        fn(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

namespace {

// A class-rank vector is valid when the set of used ranks is exactly
// {0..k-1} for some k. Unlike restricted-growth strings (which fix the first
// element to 0 and count set partitions), ordered partitions allow any
// element to open a later class first, e.g. (1,0). The recursion tries every
// rank 0..n-1 at each position in ascending order, which yields global
// lexicographic order, and prunes a prefix as soon as the ranks still
// missing below the current maximum cannot all be placed in the remaining
// positions. The prune is exact: surviving prefixes are always extendable.
void weak_orders_rec(int n, int pos, std::uint32_t used,
                     std::vector<std::uint8_t>& ranks,
                     const std::function<void(const std::vector<std::uint8_t>&)>& fn) {
    if (pos == n) {
        fn(ranks);
        return;
    }
    int remaining = n - pos - 1;
    for (std::uint8_t r = 0; r < static_cast<std::uint8_t>(n); ++r) {
        std::uint32_t next_used = used | (1u << r);
        int max_rank = 31 - __builtin_clz(next_used);
        int missing = max_rank + 1 - __builtin_popcount(next_used & ((2u << max_rank) - 1));
        if (missing > remaining) continue;
        ranks[pos] = r;
        weak_orders_rec(n, pos + 1, next_used, ranks, fn);
    }
}

} // namespace

void enumerate_weak_orders(int n,
                           const std::function<void(const std::vector<std::uint8_t>&)>& fn) {
    if (n < 1 || n > 9)
        throw ValidationError("weak-order enumeration supports 1..9 elements, got " +
                              std::to_string(n));
    std::vector<std::uint8_t> ranks(n, 0);
    weak_orders_rec(n, 0, 0u, ranks, fn);
}

std::uint64_t ordered_bell(int n) {
    if (n < 0 || n > 9)
        throw ValidationError("ordered Bell numbers supported for 0..9, got " +
                              std::to_string(n));
    // a(n) = sum_k C(n,k) a(n-k), a(0) = 1.
    std::array<std::uint64_t, 10> a{};
    a[0] = 1;
    for (int m = 1; m <= n; ++m) {
        std::uint64_t total = 0;
        std::uint64_t binom = 1; // C(m, k), updated multiplicatively
        for (int k = 1; k <= m; ++k) {
            binom = binom * static_cast<std::uint64_t>(m - k + 1) / static_cast<std::uint64_t>(k);
            total += binom * a[m - k];
        }
        a[m] = total;
    }
    return a[n];
}

std::uint64_t factorial(int n) {
    if (n < 0 || n > 20)
        throw ValidationError("factorial supported for 0..20, got " + std::to_string(n));
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::vector<std::vector<int>> weak_order_classes(const std::vector<std::uint8_t>& ranks) {
    std::uint8_t top = 0;
    for (std::uint8_t r : ranks) top = std::max(top, r);
    std::vector<std::vector<int>> classes(ranks.empty() ? 0 : top + 1);
    for (std::size_t e = 0; e < ranks.size(); ++e)
        classes[ranks[e]].push_back(static_cast<int>(e));
    return classes;
}

} // namespace revpref
