// Enumeration of strict linear orders (permutations) and weak orders
// (ordered set partitions) over small universes. Enumeration order is
// deterministic and documented, because the lexicographically first
// minimizing order serves as the canonical witness in HM scoring.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace revpref {

// Streams every permutation of {0..n-1} in lexicographic order. The vector
// lists elements best-first.
void enumerate_linear_orders(int n,
                             const std::function<void(const std::vector<std::uint8_t>&)>& fn);

// Streams every weak order as a class-rank vector f, where f[e] is the rank
// of element e's indifference class (0 = best) and the ranks used form a
// contiguous block {0..k-1}. Vectors are produced in lexicographic order,
// which interleaves class counts but is a total order, so "first minimizer"
// is well defined. Guarded to 1 <= n <= 9.
void enumerate_weak_orders(int n,
                           const std::function<void(const std::vector<std::uint8_t>&)>& fn);

// Number of weak orders on n elements by the classical recurrence
// a(n) = sum_k C(n,k) a(n-k); used as the enumeration count oracle.
std::uint64_t ordered_bell(int n);

std::uint64_t factorial(int n);

// Human-readable form of a class-rank vector: indifference classes
// best-first, elements named through `names`.
std::vector<std::vector<int>> weak_order_classes(const std::vector<std::uint8_t>& ranks);

} // namespace revpref
