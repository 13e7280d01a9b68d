#pragma once

#include <cstddef>

#include "wsc/common.hpp"

namespace wsc::kernels {

inline constexpr int kMaxDegree = 16;

// Residues out[i] = p(x0 + i) mod m for i = 0..n-1, where p has coefficients
// coeffs[0..deg] (constant term first), all already reduced mod m, and x0 is
// the starting point reduced mod m. Requires 3 <= m < 2^31.
using EvalRunFn = void (*)(const u64* coeffs, int deg, u64 m, u64 x0, u32* out, size_t n);

// Number of i in 0..n-1 with p(x0 + i) ≡ 0 (mod m). Same contract as eval_run.
using CountRootsFn = u64 (*)(const u64* coeffs, int deg, u64 m, u64 x0, size_t n);

struct Backend {
    const char* name;
    EvalRunFn eval_run;
    CountRootsFn count_roots;
};

// Scalar reference backend (always available).
const Backend& scalar_backend();

// AVX2 backend, or nullptr when unsupported by the CPU or not compiled in.
const Backend* avx2_backend();

// Runtime-selected backend: AVX2 when available, else scalar. The environment
// variable WSCOUNT_KERNEL=scalar|avx2|auto overrides the choice.
const Backend& active();

}  // namespace wsc::kernels
