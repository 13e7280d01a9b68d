#pragma once

#include <compare>
#include <vector>

#include "wsc/common.hpp"

namespace wsc {

// Exponent tuple (i_1,...,i_d) of a monomial x^i; weight |i| is the total degree.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exps);

    int dims() const { return static_cast<int>(e.size()); }
    int weight() const;

    bool operator==(const MultiIndex&) const = default;
    // canonical order: weight ascending, then lexicographically descending,
    // so e.g. (1,0) precedes (0,1) and all weight-1 indices precede weight-2
    bool operator<(const MultiIndex& other) const;

    std::string to_string() const;
};

// exact binomial coefficient; throws std::overflow_error if it exceeds u64
u64 binomial(u64 n, u64 k);

// r = C(k+d,d) - 1: the number of multi-indices with 1 <= |i| <= k
u64 index_count(int k, int d);

// K = sum of |i| over 1 <= |i| <= k. Evaluated both as the direct sum and as
// the closed form d*k*C(k+d,d)/(d+1); throws InvariantViolation on mismatch.
u64 weight_sum(int k, int d);

// all multi-indices with 1 <= |i| <= k in canonical order (exactly index_count entries)
std::vector<MultiIndex> iter_multiindices(int k, int d);

}  // namespace wsc
