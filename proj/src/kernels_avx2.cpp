#include <immintrin.h>

#include "wsc/kernels.hpp"

// 4-lane Horner evaluation in double precision. Exactness window: for
// m < 2^26 every intermediate (acc*x + c, q*m) is an integer below 2^52,
// so FMA arithmetic is exact and the floor-based reduction is off by at
// most one, fixed by two conditional corrections. Larger moduli delegate
// to the scalar backend.

namespace wsc::kernels {

namespace {

constexpr u64 kDoubleSafeModulus = 1ULL << 26;

struct LaneState {
    __m256d x;       // current points, reduced mod m
    __m256d vm;      // m broadcast
    __m256d inv_m;   // 1/m
    __m256d step;    // 4.0
};

inline __m256d reduce(__m256d acc, const LaneState& st) {
    __m256d q = _mm256_floor_pd(_mm256_mul_pd(acc, st.inv_m));
    acc = _mm256_fnmadd_pd(q, st.vm, acc);
    __m256d neg = _mm256_cmp_pd(acc, _mm256_setzero_pd(), _CMP_LT_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(neg, st.vm));
    __m256d ge = _mm256_cmp_pd(acc, st.vm, _CMP_GE_OQ);
    acc = _mm256_sub_pd(acc, _mm256_and_pd(ge, st.vm));
    return acc;
}

inline __m256d horner(const double* c, int deg, const LaneState& st) {
    __m256d acc = _mm256_set1_pd(c[deg]);
    for (int j = deg - 1; j >= 0; --j) {
        acc = _mm256_fmadd_pd(acc, st.x, _mm256_set1_pd(c[j]));
        acc = reduce(acc, st);
    }
    return acc;
}

inline void advance(LaneState& st) {
    st.x = _mm256_add_pd(st.x, st.step);
    __m256d ge = _mm256_cmp_pd(st.x, st.vm, _CMP_GE_OQ);
    st.x = _mm256_sub_pd(st.x, _mm256_and_pd(ge, st.vm));
}

inline LaneState init_lanes(u64 m, u64 x0) {
    LaneState st;
    double lanes[4];
    u64 x = x0 % m;
    for (int i = 0; i < 4; ++i) {
        lanes[i] = static_cast<double>(x);
        if (++x == m) x = 0;
    }
    st.x = _mm256_loadu_pd(lanes);
    st.vm = _mm256_set1_pd(static_cast<double>(m));
    st.inv_m = _mm256_set1_pd(1.0 / static_cast<double>(m));
    st.step = _mm256_set1_pd(4.0);
    return st;
}

void eval_run_avx2(const u64* coeffs, int deg, u64 m, u64 x0, u32* out, size_t n) {
    if (m >= kDoubleSafeModulus || m <= 8 || deg == 0 || n < 8) {
        scalar_backend().eval_run(coeffs, deg, m, x0, out, n);
        return;
    }
    double c[kMaxDegree + 1];
    for (int j = 0; j <= deg; ++j) c[j] = static_cast<double>(coeffs[j]);
    LaneState st = init_lanes(m, x0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = horner(c, deg, st);
        __m128i r = _mm256_cvttpd_epi32(acc);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), r);
        advance(st);
    }
    if (i < n) scalar_backend().eval_run(coeffs, deg, m, (x0 + i) % m, out + i, n - i);
}

u64 count_roots_avx2(const u64* coeffs, int deg, u64 m, u64 x0, size_t n) {
    if (m >= kDoubleSafeModulus || m <= 8 || deg == 0 || n < 8)
        return scalar_backend().count_roots(coeffs, deg, m, x0, n);
    double c[kMaxDegree + 1];
    for (int j = 0; j <= deg; ++j) c[j] = static_cast<double>(coeffs[j]);
    LaneState st = init_lanes(m, x0);
    u64 count = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = horner(c, deg, st);
        __m256d z = _mm256_cmp_pd(acc, _mm256_setzero_pd(), _CMP_EQ_OQ);
        count += static_cast<u64>(__builtin_popcount(_mm256_movemask_pd(z)));
        advance(st);
    }
    if (i < n) count += scalar_backend().count_roots(coeffs, deg, m, (x0 + i) % m, n - i);
    return count;
}

}  // namespace

const Backend* avx2_backend_impl() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
    static const Backend b{"avx2", eval_run_avx2, count_roots_avx2};
    return &b;
}

}  // namespace wsc::kernels
