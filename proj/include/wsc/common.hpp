#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wsc {

using u32 = uint32_t;
using u64 = uint64_t;
using i64 = int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Exit-code-mapped error categories (0 ok, 1 invariant, 2 usage/parse, 3 budget).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    // callers keep m < 2^31 so a*b fits in 64 bits once reduced
    return (a % m) * (b % m) % m;
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = r * base % m;
        base = base * base % m;
        exp >>= 1;
    }
    return r;
}

inline u64 reduce_mod(i64 v, u64 m) {
    i64 r = v % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

// overflow-checked products for exact inequality chains
inline u128 checked_mul_u128(u128 a, u128 b) {
    if (a != 0 && b > static_cast<u128>(-1) / a)
        throw std::overflow_error("u128 product overflow");
    return a * b;
}

std::string u128_to_string(u128 v);

}  // namespace wsc
