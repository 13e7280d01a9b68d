#include "wsc/kernels.hpp"

namespace wsc::kernels {

namespace {

// Horner over u64: m < 2^31 keeps acc*x + c below 2^63.
inline u64 eval_one(const u64* coeffs, int deg, u64 m, u64 x) {
    u64 acc = coeffs[deg];
    for (int j = deg - 1; j >= 0; --j) acc = (acc * x + coeffs[j]) % m;
    return acc;
}

void eval_run_scalar(const u64* coeffs, int deg, u64 m, u64 x0, u32* out, size_t n) {
    u64 x = x0 % m;
    for (size_t i = 0; i < n; ++i) {
        out[i] = static_cast<u32>(eval_one(coeffs, deg, m, x));
        if (++x == m) x = 0;
    }
}

u64 count_roots_scalar(const u64* coeffs, int deg, u64 m, u64 x0, size_t n) {
    u64 x = x0 % m;
    u64 count = 0;
    for (size_t i = 0; i < n; ++i) {
        count += eval_one(coeffs, deg, m, x) == 0;
        if (++x == m) x = 0;
    }
    return count;
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{"scalar", eval_run_scalar, count_roots_scalar};
    return b;
}

}  // namespace wsc::kernels
