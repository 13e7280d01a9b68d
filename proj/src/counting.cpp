#include "wsc/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "wsc/kernels.hpp"
#include "wsc/parallel.hpp"

namespace wsc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

u128 pow_u128_checked(u64 base, int exp, const char* what) {
    u128 r = 1;
    for (int i = 0; i < exp; ++i) r = checked_mul_u128(r, base);
    (void)what;
    return r;
}

// flattened view of a polynomial for hot loops
struct FlatPoly {
    u64 m;
    int d, k;
    std::vector<std::vector<int>> exps;  // per term
    std::vector<u64> coeffs;

    explicit FlatPoly(const Polynomial& F)
        : m(F.modulus()), d(F.dims()), k(F.degree()) {
        for (const auto& [mi, c] : F.terms()) {
            exps.push_back(mi.e);
            coeffs.push_back(c);
        }
    }
};

// residue^e lookup; tabulated when small, powmod otherwise
struct PowOracle {
    u64 m;
    int k;
    std::vector<u64> table;  // [x*(k+1)+e] when enabled

    PowOracle(u64 m_, int k_) : m(m_), k(k_) {
        u128 cells = static_cast<u128>(m) * static_cast<u128>(k + 1);
        if (cells <= 30'000'000) {
            table.resize(static_cast<size_t>(cells));
            for (u64 x = 0; x < m; ++x) {
                u64 p = 1 % m;
                for (int e = 0; e <= k; ++e) {
                    table[x * (k + 1) + e] = p;
                    p = p * x % m;
                }
            }
        }
    }

    u64 pow(u64 x, int e) const {
        if (!table.empty()) return table[x * (k + 1) + e];
        return pow_mod(x, e, m);
    }
};

// collapse F(prefix, t) to univariate coefficients in t (constant first)
void collapse_last(const FlatPoly& fp, const PowOracle& pow, std::span<const u64> prefix,
                   std::span<u64> out) {
    std::fill(out.begin(), out.end(), 0);
    for (size_t t = 0; t < fp.coeffs.size(); ++t) {
        u64 v = fp.coeffs[t];
        const auto& e = fp.exps[t];
        for (int i = 0; i + 1 < fp.d; ++i)
            if (e[i]) v = v * pow.pow(prefix[i], e[i]) % fp.m;
        out[e[fp.d - 1]] = (out[e[fp.d - 1]] + v) % fp.m;
    }
}

// odometer over {0,...,base-1}^len; returns false after the last tuple
bool advance_odometer(std::span<u64> idx, u64 base) {
    for (size_t i = idx.size(); i-- > 0;) {
        if (++idx[i] < base) return true;
        idx[i] = 0;
    }
    return false;
}

std::string describe_poly_domain(const Polynomial& F, const std::string& what) {
    std::ostringstream os;
    os << what << " m=" << F.modulus() << " F=" << F.to_string();
    return os.str();
}

// binary search for the integer membership interval along the last axis;
// convexity makes the contained t contiguous
struct SliceRange {
    i64 lo = 0, hi = -1;  // empty when lo > hi
};

SliceRange integer_slice(const Region& region, std::span<const double> prefix_pt, double flo,
                         double fhi, u64 m, std::vector<double>& pt_scratch) {
    SliceRange out;
    i64 mm = static_cast<i64>(m);
    if (flo > fhi + 3.0 / static_cast<double>(m)) return out;
    i64 cand_lo = static_cast<i64>(std::floor(std::min(flo, fhi) * static_cast<double>(m))) - 2;
    i64 cand_hi = static_cast<i64>(std::ceil(std::max(flo, fhi) * static_cast<double>(m))) + 2;
    cand_lo = std::max<i64>(cand_lo, 0);
    cand_hi = std::min<i64>(cand_hi, mm - 1);
    if (cand_lo > cand_hi) return out;

    int d = static_cast<int>(prefix_pt.size()) + 1;
    auto member = [&](i64 t) {
        for (int i = 0; i + 1 < d; ++i) pt_scratch[i] = prefix_pt[i];
        pt_scratch[d - 1] = static_cast<double>(t) / static_cast<double>(m);
        return region.contains(std::span<const double>(pt_scratch.data(), d));
    };

    i64 mid = static_cast<i64>(std::llround(0.5 * (flo + fhi) * static_cast<double>(m)));
    mid = std::clamp(mid, cand_lo, cand_hi);
    if (!member(mid)) {
        // the analytic interval is at most a couple of points wide here
        bool found = false;
        for (i64 t = cand_lo; t <= cand_hi && t <= cand_lo + 16; ++t)
            if (member(t)) {
                mid = t;
                found = true;
                break;
            }
        if (!found) return out;
    }
    i64 lo = cand_lo, hi = mid;
    while (lo < hi) {  // smallest contained
        i64 half = lo + (hi - lo) / 2;
        if (member(half))
            hi = half;
        else
            lo = half + 1;
    }
    out.lo = lo;
    lo = mid;
    hi = cand_hi;
    while (lo < hi) {  // largest contained
        i64 half = hi - (hi - lo) / 2;
        if (member(half))
            lo = half;
        else
            hi = half - 1;
    }
    out.hi = lo;
    return out;
}

CountResult count_nf_impl(const Polynomial& F, const Region& region, const BudgetCaps& caps,
                          bool allow_slice) {
    auto t0 = Clock::now();
    if (F.dims() != region.dims())
        throw DimensionMismatch("count_nf: polynomial and region dimension differ");
    const u64 m = F.modulus();
    const int d = F.dims();
    u128 total_points = pow_u128_checked(m, d, "m^d");
    if (total_points > caps.points)
        throw BudgetExceeded("count_nf: m^d exceeds the point budget");

    FlatPoly fp(F);
    PowOracle pow(m, std::max(1, F.degree()));
    const auto& kern = kernels::active();

    double probe_lo, probe_hi;
    std::vector<double> zero_prefix(static_cast<size_t>(d) - 1, 0.0);
    bool use_slice = allow_slice && region.convex() &&
                     region.slice_last(zero_prefix, probe_lo, probe_hi);

    const u64 blocks = m;  // chunked over the leading coordinate
    std::vector<u64> partial(blocks, 0);
    parallel_blocks(blocks, [&](u64 x1) {
        std::vector<u64> prefix(static_cast<size_t>(std::max(d - 1, 1)), 0);
        std::vector<double> prefix_pt(static_cast<size_t>(std::max(d - 1, 0)), 0.0);
        std::vector<double> pt(static_cast<size_t>(d), 0.0);
        std::vector<u64> uni(static_cast<size_t>(fp.k) + 1, 0);
        std::vector<u32> buf;
        u64 count = 0;

        auto process_prefix = [&]() {
            for (int i = 0; i + 1 < d; ++i)
                prefix_pt[i] = static_cast<double>(prefix[i]) / static_cast<double>(m);
            collapse_last(fp, pow, prefix, uni);
            int deg = fp.k;
            while (deg > 0 && uni[deg] == 0) --deg;
            if (use_slice) {
                double flo, fhi;
                region.slice_last(prefix_pt, flo, fhi);
                if (flo > fhi) return;
                SliceRange sr = integer_slice(region, prefix_pt, flo, fhi, m, pt);
                if (sr.lo > sr.hi) return;
                count += kern.count_roots(uni.data(), deg, m, static_cast<u64>(sr.lo),
                                          static_cast<size_t>(sr.hi - sr.lo + 1));
            } else {
                constexpr size_t kChunk = 1 << 14;
                buf.resize(std::min<size_t>(kChunk, m));
                for (u64 t0i = 0; t0i < m; t0i += kChunk) {
                    size_t n = static_cast<size_t>(std::min<u64>(kChunk, m - t0i));
                    kern.eval_run(uni.data(), deg, m, t0i, buf.data(), n);
                    for (size_t i = 0; i < n; ++i) {
                        if (buf[i] != 0) continue;
                        for (int j = 0; j + 1 < d; ++j) pt[j] = prefix_pt[j];
                        pt[d - 1] = static_cast<double>(t0i + i) / static_cast<double>(m);
                        if (region.contains(pt)) ++count;
                    }
                }
            }
        };

        if (d == 1) {
            // single axis: the "prefix" is empty and x1 indexes kernel chunks
            if (x1 == 0) {
                std::vector<u64> none;
                prefix.assign(1, 0);  // unused by collapse when d == 1
                // collapse_last with d == 1 only uses e[d-1]
                collapse_last(fp, pow, none, uni);
                int deg = fp.k;
                while (deg > 0 && uni[deg] == 0) --deg;
                if (use_slice) {
                    double flo, fhi;
                    region.slice_last(std::span<const double>{}, flo, fhi);
                    if (flo <= fhi) {
                        SliceRange sr = integer_slice(region, {}, flo, fhi, m, pt);
                        if (sr.lo <= sr.hi)
                            count += kern.count_roots(uni.data(), deg, m,
                                                      static_cast<u64>(sr.lo),
                                                      static_cast<size_t>(sr.hi - sr.lo + 1));
                    }
                } else {
                    constexpr size_t kChunk = 1 << 14;
                    buf.resize(std::min<size_t>(kChunk, m));
                    for (u64 t0i = 0; t0i < m; t0i += kChunk) {
                        size_t n = static_cast<size_t>(std::min<u64>(kChunk, m - t0i));
                        kern.eval_run(uni.data(), deg, m, t0i, buf.data(), n);
                        for (size_t i = 0; i < n; ++i) {
                            if (buf[i] != 0) continue;
                            pt[0] = static_cast<double>(t0i + i) / static_cast<double>(m);
                            if (region.contains(pt)) ++count;
                        }
                    }
                }
            }
        } else {
            prefix[0] = x1;
            std::fill(prefix.begin() + 1, prefix.end(), 0);
            // odometer over x2..x_{d-1}
            for (;;) {
                process_prefix();
                if (d == 2) break;
                std::span<u64> rest(prefix.data() + 1, static_cast<size_t>(d - 2));
                if (!advance_odometer(rest, m)) break;
            }
        }
        partial[x1] = count;
    });

    u64 total = 0;
    for (u64 c : partial) total += c;
    CountResult res;
    res.count = total;
    res.domain = describe_poly_domain(F, "NF") + " region=[" + region.describe() + "]";
    res.seconds = elapsed_since(t0);
    return res;
}

}  // namespace

CountResult count_nf(const Polynomial& F, const Region& region, const BudgetCaps& caps) {
    return count_nf_impl(F, region, caps, true);
}

CountResult count_nf_scan(const Polynomial& F, const Region& region, const BudgetCaps& caps) {
    return count_nf_impl(F, region, caps, false);
}

CountResult count_mf(const Polynomial& F, std::span<const i64> K, i64 L, u64 H, u64 R,
                     const BudgetCaps& caps) {
    auto t0 = Clock::now();
    const int d = F.dims();
    const u64 m = F.modulus();
    if (static_cast<int>(K.size()) != d) throw DimensionMismatch("count_mf: offsets size != d");
    for (i64 k : K)
        if (k < 0) throw std::invalid_argument("count_mf: offsets must be >= 0");
    if (L < 0) throw std::invalid_argument("count_mf: L must be >= 0");
    if (H < 1 || R < 1) throw std::invalid_argument("count_mf: H and R must be >= 1");
    u128 total_points = pow_u128_checked(H, d, "H^d");
    if (total_points > caps.points) throw BudgetExceeded("count_mf: H^d exceeds the point budget");

    FlatPoly fp(F);
    PowOracle pow(m, std::max(1, F.degree()));
    const auto& kern = kernels::active();
    const u64 y0 = reduce_mod(L + 1, m);

    // #y in [L+1, L+R] with y ≡ res (mod m)
    auto window_count = [&](u64 res) -> u64 {
        u64 t = (res + m - y0) % m;
        return t <= R - 1 ? 1 + (R - 1 - t) / m : 0;
    };

    const u64 blocks = H;
    std::vector<u64> partial(blocks, 0);
    parallel_blocks(blocks, [&](u64 b) {
        std::vector<u64> prefix(static_cast<size_t>(std::max(d - 1, 1)), 0);
        std::vector<u64> idx(static_cast<size_t>(std::max(d - 2, 0)), 0);
        std::vector<u64> uni(static_cast<size_t>(fp.k) + 1, 0);
        std::vector<u32> buf(static_cast<size_t>(H));
        u64 count = 0;
        u64 xd0 = reduce_mod(K[d - 1] + 1, m);

        auto run_last_axis = [&]() {
            collapse_last(fp, pow, prefix, uni);
            int deg = fp.k;
            while (deg > 0 && uni[deg] == 0) --deg;
            kern.eval_run(uni.data(), deg, m, xd0, buf.data(), static_cast<size_t>(H));
            for (u64 i = 0; i < H; ++i) count += window_count(buf[i]);
        };

        if (d == 1) {
            if (b == 0) {
                std::vector<u64> none;
                collapse_last(fp, pow, none, uni);
                int deg = fp.k;
                while (deg > 0 && uni[deg] == 0) --deg;
                kern.eval_run(uni.data(), deg, m, xd0, buf.data(), static_cast<size_t>(H));
                for (u64 i = 0; i < H; ++i) count += window_count(buf[i]);
            }
        } else {
            prefix[0] = reduce_mod(K[0] + 1 + static_cast<i64>(b), m);
            for (;;) {
                for (int i = 1; i + 1 < d; ++i)
                    prefix[i] = reduce_mod(K[i] + 1 + static_cast<i64>(idx[i - 1]), m);
                run_last_axis();
                if (d == 2) break;
                if (!advance_odometer(idx, H)) break;
            }
        }
        partial[b] = count;
    });

    u64 total = 0;
    for (u64 c : partial) total += c;
    CountResult res;
    res.count = total;
    std::ostringstream os;
    os << describe_poly_domain(F, "MF") << " H=" << H << " R=" << R << " L=" << L;
    res.domain = os.str();
    res.seconds = elapsed_since(t0);
    return res;
}

std::vector<i64> lambda_vector(std::span<const std::vector<i64>> tuple, int k) {
    if (tuple.empty() || tuple.size() % 2 != 0)
        throw std::invalid_argument("lambda_vector: tuple length must be even and positive");
    int d = static_cast<int>(tuple[0].size());
    size_t s = tuple.size() / 2;
    auto indices = iter_multiindices(k, d);
    std::vector<i64> lambda(indices.size(), 0);
    for (size_t j = 0; j < tuple.size(); ++j) {
        if (static_cast<int>(tuple[j].size()) != d)
            throw DimensionMismatch("lambda_vector: point dimension mismatch");
        for (size_t t = 0; t < indices.size(); ++t) {
            i128 p = 1;
            for (int i = 0; i < d; ++i)
                for (int e = 0; e < indices[t].e[i]; ++e) {
                    p *= tuple[j][i];
                    if (p > i128(INT64_MAX) || p < -i128(INT64_MAX))
                        throw std::overflow_error("lambda_vector: power overflow");
                }
            lambda[t] += (j < s) ? static_cast<i64>(p) : -static_cast<i64>(p);
        }
    }
    return lambda;
}

namespace {

// per-point power products for all multi-indices with 1 <= |i| <= k
struct SignatureTable {
    int d, k;
    u64 H;
    size_t r;
    u64 n_points;             // H^d
    std::vector<i64> values;  // n_points * r

    SignatureTable(int s, int k_, int d_, u64 H_) : d(d_), k(k_), H(H_) {
        auto indices = iter_multiindices(k, d);
        r = indices.size();
        u128 np = 1;
        for (int i = 0; i < d; ++i) np = checked_mul_u128(np, H);
        n_points = static_cast<u64>(np);
        values.resize(static_cast<size_t>(n_points) * r);
        std::vector<u64> idx(static_cast<size_t>(d), 0);
        size_t row = 0;
        for (;;) {
            for (size_t t = 0; t < r; ++t) {
                i128 p = 1;
                for (int i = 0; i < d; ++i)
                    for (int e = 0; e < indices[t].e[i]; ++e) p *= static_cast<i64>(idx[i] + 1);
                if (checked_mul_u128(static_cast<u128>(p), static_cast<u128>(2 * s)) >
                    static_cast<u128>(INT64_MAX))
                    throw std::overflow_error("signature power overflow");
                values[row * r + t] = static_cast<i64>(p);
            }
            ++row;
            if (!advance_odometer(idx, H)) break;
        }
    }

    std::span<const i64> sig(u64 point) const { return {values.data() + point * r, r}; }
};

struct VecHash {
    size_t operator()(const std::vector<i64>& v) const {
        u64 h = 1469598103934665603ULL;
        for (i64 x : v) {
            u64 u = static_cast<u64>(x);
            for (int b = 0; b < 8; ++b) {
                h ^= (u >> (8 * b)) & 0xff;
                h *= 1099511628211ULL;
            }
        }
        return static_cast<size_t>(h);
    }
};

using SigCounts = std::unordered_map<std::vector<i64>, u64, VecHash>;

// counts of positive-part signatures over all ordered s-tuples of points
SigCounts half_tuple_signatures(int s, const SignatureTable& tab, const BudgetCaps& caps) {
    u128 leaves = 1;
    for (int i = 0; i < s; ++i) leaves = checked_mul_u128(leaves, tab.n_points);
    if (leaves > caps.direct_tuples)
        throw BudgetExceeded("convolution: H^{sd} exceeds the tuple budget");
    SigCounts counts;
    std::vector<i64> partial(tab.r, 0);
    std::vector<u64> idx(static_cast<size_t>(s), 0);
    for (;;) {
        std::fill(partial.begin(), partial.end(), 0);
        for (int j = 0; j < s; ++j) {
            auto sg = tab.sig(idx[j]);
            for (size_t t = 0; t < tab.r; ++t) partial[t] += sg[t];
        }
        auto [it, fresh] = counts.try_emplace(partial, 0);
        ++it->second;
        if (counts.size() > caps.conv_entries)
            throw BudgetExceeded("convolution: signature map exceeds the entry budget");
        if (!advance_odometer(idx, tab.n_points)) break;
    }
    return counts;
}

u128 tuple_space_size(int s, int d, u64 H) {
    u128 leaves = 1;
    for (int i = 0; i < 2 * s * d; ++i) leaves = checked_mul_u128(leaves, H);
    return leaves;
}

void validate_skd(int s, int k, int d, u64 H) {
    if (s < 1) throw std::invalid_argument("s must be >= 1");
    if (k < 1 || d < 1) throw std::invalid_argument("k and d must be >= 1");
    if (H < 1) throw std::invalid_argument("H must be >= 1");
}

std::string jd_domain(const char* what, int s, int k, int d, u64 H, std::span<const i64> U) {
    std::ostringstream os;
    os << what << " s=" << s << " k=" << k << " d=" << d << " H=" << H << " U=";
    if (U.empty())
        os << "0";
    else
        for (size_t i = 0; i < U.size(); ++i) os << (i ? "," : "") << U[i];
    return os.str();
}

}  // namespace

CountResult count_j(int s, int k, int d, std::span<const i64> U, u64 H, const BudgetCaps& caps) {
    auto t0 = Clock::now();
    validate_skd(s, k, d, H);
    u64 r = index_count(k, d);
    if (!U.empty() && U.size() != r)
        throw std::invalid_argument("count_j: U must have index_count(k,d) entries");
    if (tuple_space_size(s, d, H) > caps.direct_tuples)
        throw BudgetExceeded("count_j: H^{2sd} exceeds the tuple budget");

    SignatureTable tab(s, k, d, H);
    std::vector<i64> target(r, 0);
    if (!U.empty()) target.assign(U.begin(), U.end());

    std::vector<i64> partial(r, 0);
    u64 count = 0;
    int levels = 2 * s;
    // depth-first over the 2s points with incremental partial sums
    std::vector<u64> idx(static_cast<size_t>(levels), 0);
    int level = 0;
    auto apply = [&](int lvl, u64 point, i64 sign) {
        auto sg = tab.sig(point);
        for (size_t t = 0; t < tab.r; ++t) partial[t] += sign * sg[t];
        (void)lvl;
    };
    while (level >= 0) {
        if (level == levels) {
            if (std::equal(partial.begin(), partial.end(), target.begin())) ++count;
            --level;
            if (level >= 0) {
                i64 sign = level < s ? 1 : -1;
                apply(level, idx[level], -sign);
            }
            while (level >= 0 && idx[level] + 1 == tab.n_points) {
                --level;
                if (level >= 0) {
                    i64 sign = level < s ? 1 : -1;
                    apply(level, idx[level], -sign);
                }
            }
            if (level >= 0) {
                ++idx[level];
                i64 sign = level < s ? 1 : -1;
                apply(level, idx[level], sign);
                ++level;
                if (level < levels) idx[level] = 0;
            }
        } else {
            idx[level] = 0;
            i64 sign = level < s ? 1 : -1;
            apply(level, 0, sign);
            ++level;
        }
    }

    CountResult res;
    res.count = count;
    res.domain = jd_domain("J", s, k, d, H, U);
    res.seconds = elapsed_since(t0);
    return res;
}

CountResult count_j_convolution(int s, int k, int d, std::span<const i64> U, u64 H,
                                const BudgetCaps& caps) {
    auto t0 = Clock::now();
    validate_skd(s, k, d, H);
    u64 r = index_count(k, d);
    if (!U.empty() && U.size() != r)
        throw std::invalid_argument("count_j_convolution: U must have index_count(k,d) entries");

    SignatureTable tab(s, k, d, H);
    SigCounts counts = half_tuple_signatures(s, tab, caps);

    std::vector<i64> target(r, 0);
    if (!U.empty()) target.assign(U.begin(), U.end());

    u64 total = 0;
    std::vector<i64> other(r);
    for (const auto& [v, c] : counts) {
        for (size_t t = 0; t < r; ++t) other[t] = v[t] - target[t];
        auto it = counts.find(other);
        if (it != counts.end()) total += c * it->second;
    }

    CountResult res;
    res.count = total;
    res.domain = jd_domain("Jconv", s, k, d, H, U);
    res.seconds = elapsed_since(t0);
    return res;
}

std::vector<u64> count_t_all(const Polynomial& F, u64 H, int s, const BudgetCaps& caps) {
    const int d = F.dims();
    const u64 m = F.modulus();
    if (s < 1) throw std::invalid_argument("count_t: s must be >= 1");
    if (H < 1) throw std::invalid_argument("count_t: H must be >= 1");
    if (tuple_space_size(s, d, H) > caps.direct_tuples)
        throw BudgetExceeded("count_t: H^{2sd} exceeds the tuple budget");

    // residue histogram of F over [1,H]^d
    std::vector<u64> hist(m, 0);
    std::vector<u64> idx(static_cast<size_t>(d), 0);
    std::vector<i64> pt(static_cast<size_t>(d));
    for (;;) {
        for (int i = 0; i < d; ++i) pt[i] = static_cast<i64>(idx[i] + 1);
        ++hist[F.evaluate(pt)];
        if (!advance_odometer(idx, H)) break;
    }

    // s-fold convolution over residues: distribution of F(x_1)+...+F(x_s)
    std::vector<u64> P = hist;
    for (int step = 1; step < s; ++step) {
        std::vector<u64> next(m, 0);
        for (u64 a = 0; a < m; ++a) {
            if (!P[a]) continue;
            for (u64 b = 0; b < m; ++b) next[(a + b) % m] += P[a] * hist[b];
        }
        P = std::move(next);
    }
    // T[u] = sum_a P[a] * P[(a-u) mod m]
    std::vector<u64> T(m, 0);
    for (u64 u = 0; u < m; ++u) {
        u64 acc = 0;
        for (u64 a = 0; a < m; ++a) acc += P[a] * P[(a + m - u) % m];
        T[u] = acc;
    }
    return T;
}

CountResult count_t(const Polynomial& F, u64 u, u64 H, int s, const BudgetCaps& caps) {
    auto t0 = Clock::now();
    if (u >= F.modulus()) throw std::invalid_argument("count_t: residue u out of range");
    auto T = count_t_all(F, H, s, caps);
    CountResult res;
    res.count = T[u];
    std::ostringstream os;
    os << describe_poly_domain(F, "T") << " u=" << u << " H=" << H << " s=" << s;
    res.domain = os.str();
    res.seconds = elapsed_since(t0);
    return res;
}

USetResult uset_cardinality(const Polynomial& F, u64 u, u64 H, int s, const BudgetCaps& caps) {
    const int d = F.dims();
    const int k = F.degree();
    const u64 m = F.modulus();
    if (k < 2) throw std::invalid_argument("uset_cardinality: requires degree k >= 2");
    if (F.leading_gcd() != 1) throw std::invalid_argument("uset_cardinality: requires g_F = 1");
    if (s < 1 || H < 1) throw std::invalid_argument("uset_cardinality: s and H must be >= 1");
    if (u >= m) throw std::invalid_argument("uset_cardinality: residue u out of range");

    auto indices = iter_multiindices(k, d);
    const size_t r = indices.size();
    const u64 K = weight_sum(k, d);

    // admissible box |u_i| <= s H^{|i|}
    std::vector<u64> widths(r);
    std::vector<i64> lows(r);
    u128 cells = 1;
    for (size_t t = 0; t < r; ++t) {
        u128 b = static_cast<u128>(s);
        for (int e = 0; e < indices[t].weight(); ++e) b = checked_mul_u128(b, H);
        if (b > static_cast<u128>(INT64_MAX / 4))
            throw BudgetExceeded("uset_cardinality: lambda bound too large");
        u64 bound = static_cast<u64>(b);
        lows[t] = -static_cast<i64>(bound);
        widths[t] = 2 * bound + 1;
        cells = checked_mul_u128(cells, widths[t]);
        if (cells > caps.direct_tuples)
            throw BudgetExceeded("uset_cardinality: admissible box exceeds the tuple budget");
    }

    std::vector<u64> beta(r);
    for (size_t t = 0; t < r; ++t) beta[t] = F.coeff(indices[t]);

    // depth-first with partial congruence sums
    u64 exact = 0;
    std::vector<u64> idx(r, 0);
    std::vector<u64> partial(r + 1, 0);
    size_t level = 0;
    while (true) {
        if (level == r) {
            if (partial[r] == u) ++exact;
            // backtrack
            while (level > 0 && idx[level - 1] + 1 == widths[level - 1]) --level;
            if (level == 0) break;
            ++idx[level - 1];
            u64 val_mod =
                reduce_mod(lows[level - 1] + static_cast<i64>(idx[level - 1]), m);
            partial[level] = (partial[level - 1] + beta[level - 1] * val_mod) % m;
        } else {
            idx[level] = 0;
            u64 val_mod = reduce_mod(lows[level], m);
            partial[level + 1] = (partial[level] + beta[level] * val_mod) % m;
            ++level;
        }
    }

    // bound (2s+1)^{r-1} H^{K-k} (1 + (2s+1) H^k / m), compared exactly via *m
    u128 lhs = checked_mul_u128(exact, m);
    u128 rhs = 1;
    for (size_t i = 0; i + 1 < r; ++i) rhs = checked_mul_u128(rhs, 2 * s + 1);
    for (u64 i = 0; i < K - static_cast<u64>(k); ++i) rhs = checked_mul_u128(rhs, H);
    u128 hk = 1;
    for (int i = 0; i < k; ++i) hk = checked_mul_u128(hk, H);
    rhs = checked_mul_u128(rhs, static_cast<u128>(m) + checked_mul_u128(2 * s + 1, hk));

    USetResult out;
    out.exact = exact;
    out.bound = std::pow(2.0 * s + 1.0, static_cast<double>(r) - 1.0) *
                std::pow(static_cast<double>(H), static_cast<double>(K - k)) *
                (1.0 + (2.0 * s + 1.0) * std::pow(static_cast<double>(H), k) /
                           static_cast<double>(m));
    out.within = lhs <= rhs;
    std::ostringstream os;
    os << describe_poly_domain(F, "Uset") << " u=" << u << " H=" << H << " s=" << s;
    out.domain = os.str();
    return out;
}

LambdaMap build_lambda_map(int s, int k, int d, u64 H, const BudgetCaps& caps) {
    validate_skd(s, k, d, H);
    SignatureTable tab(s, k, d, H);
    SigCounts half = half_tuple_signatures(s, tab, caps);

    // deterministic entry order: sort the half signatures first
    std::vector<const std::vector<i64>*> keys;
    keys.reserve(half.size());
    for (const auto& [v, c] : half) keys.push_back(&v);
    std::sort(keys.begin(), keys.end(),
              [](const auto* a, const auto* b) { return *a < *b; });

    u128 pair_count = checked_mul_u128(half.size(), half.size());
    if (pair_count > caps.conv_entries)
        throw BudgetExceeded("lambda map: pairing exceeds the entry budget");

    const size_t r = tab.r;
    SigCounts pairs;
    std::vector<i64> diff(r);
    for (const auto* a : keys) {
        u64 ca = half.at(*a);
        for (const auto* b : keys) {
            for (size_t t = 0; t < r; ++t) diff[t] = (*a)[t] - (*b)[t];
            pairs[diff] += ca * half.at(*b);
        }
    }

    std::vector<const std::vector<i64>*> order;
    order.reserve(pairs.size());
    for (const auto& [v, c] : pairs) order.push_back(&v);
    std::sort(order.begin(), order.end(),
              [](const auto* a, const auto* b) { return *a < *b; });

    LambdaMap map;
    map.s = s;
    map.k = k;
    map.d = d;
    map.H = H;
    map.r = r;
    map.keys.reserve(order.size() * r);
    map.counts.reserve(order.size());
    auto indices = iter_multiindices(k, d);
    for (const auto* v : order) {
        u64 c = pairs.at(*v);
        bool zero = true;
        for (size_t t = 0; t < r; ++t) {
            map.keys.push_back((*v)[t]);
            if ((*v)[t] != 0) zero = false;
            i128 lim = static_cast<i128>(s);
            for (int e = 0; e < indices[t].weight(); ++e) lim *= static_cast<i128>(H);
            if (static_cast<i128>((*v)[t]) > lim || static_cast<i128>((*v)[t]) < -lim)
                map.lambda_range_ok = false;
        }
        map.counts.push_back(c);
        if (zero) map.j_zero = c;
        map.max_count = std::max(map.max_count, c);
    }
    return map;
}

LambdaMapResidues LambdaMapResidues::build(const LambdaMap& map, u64 m) {
    LambdaMapResidues out;
    out.map = &map;
    out.m = m;
    out.reduced.resize(map.keys.size());
    for (size_t i = 0; i < map.keys.size(); ++i)
        out.reduced[i] = static_cast<uint32_t>(reduce_mod(map.keys[i], m));
    return out;
}

std::vector<u64> LambdaMapResidues::congruence_histogram(std::span<const u64> beta) const {
    const size_t r = map->r;
    if (beta.size() != r)
        throw std::invalid_argument("congruence_histogram: beta size mismatch");
    std::vector<u64> G(m, 0);
    const uint32_t* red = reduced.data();
    for (size_t e = 0; e < map->size(); ++e, red += r) {
        u64 acc = 0;
        for (size_t t = 0; t < r; ++t) acc += beta[t] * red[t];
        G[acc % m] += map->counts[e];
    }
    return G;
}

}  // namespace wsc
