#pragma once

#include <unordered_map>

#include "wsc/polynomial.hpp"
#include "wsc/region.hpp"

namespace wsc {

struct BudgetCaps {
    u64 direct_tuples = 100'000'000;    // direct tuple/T/U-set enumeration leaves
    u64 conv_entries = 10'000'000;      // convolution signature-map entries
    u64 points = 30'000'000'000ULL;     // lattice points for N_F / M_F scans
};

struct CountResult {
    u64 count = 0;
    std::string domain;
    double seconds = 0.0;
};

// N_F(region): x over {0,...,m-1}^d with F(x) ≡ 0 (mod m) and x/m in the region.
// Convex analytic regions are enumerated by slicing the last axis; other kinds
// fall back to testing membership at every congruence root.
CountResult count_nf(const Polynomial& F, const Region& region, const BudgetCaps& caps = {});
// test hook: force the per-root membership scan (must agree with count_nf)
CountResult count_nf_scan(const Polynomial& F, const Region& region, const BudgetCaps& caps = {});

// M_F(H,R): (x,y) with F(x) ≡ y (mod m), x in Π[K_i+1, K_i+H], y in [L+1, L+R]
CountResult count_mf(const Polynomial& F, std::span<const i64> K, i64 L, u64 H, u64 R,
                     const BudgetCaps& caps = {});

// power-sum difference vector of a 2s-tuple of points, indexed by
// iter_multiindices(k, d) in canonical order
std::vector<i64> lambda_vector(std::span<const std::vector<i64>> tuple, int k);

// T(u,H): 2s-tuples of points in [1,H]^d with alternating F-sum ≡ u (mod m);
// count_t_all returns the counts for every residue u at once
std::vector<u64> count_t_all(const Polynomial& F, u64 H, int s, const BudgetCaps& caps = {});
CountResult count_t(const Polynomial& F, u64 u, u64 H, int s, const BudgetCaps& caps = {});

// J_{s,k,d}(U,H): 2s-tuples with lambda vector equal to U (empty U means 0).
// count_j enumerates all H^{2sd} tuples; count_j_convolution pairs the
// H^{sd} half-tuple signatures through a hash map. They must agree.
CountResult count_j(int s, int k, int d, std::span<const i64> U, u64 H,
                    const BudgetCaps& caps = {});
CountResult count_j_convolution(int s, int k, int d, std::span<const i64> U, u64 H,
                                const BudgetCaps& caps = {});

struct USetResult {
    u64 exact = 0;      // #U by enumeration over the admissible lambda box
    double bound = 0;   // (2s+1)^{r-1} H^{K-k} (1 + (2s+1) H^k / m)
    bool within = false;  // exact <= bound, compared exactly over a common denominator
    std::string domain;
};
// requires degree >= 2 and g_F = 1
USetResult uset_cardinality(const Polynomial& F, u64 u, u64 H, int s,
                            const BudgetCaps& caps = {});

// Aggregated lambda targets of all 2s-tuples: J(U,H) for every achieved U.
// Entries are sorted by key, so iteration order is canonical.
struct LambdaMap {
    int s = 0, k = 0, d = 0;
    u64 H = 0;
    size_t r = 0;                 // key width (multi-index count)
    std::vector<i64> keys;        // size() * r, canonical multi-index order
    std::vector<u64> counts;      // J(U,H) per entry
    u64 j_zero = 0;               // J(0,H)
    u64 max_count = 0;            // max over entries
    bool lambda_range_ok = true;  // every |U_i| <= s H^{|i|}

    size_t size() const { return counts.size(); }
    std::span<const i64> key(size_t idx) const { return {keys.data() + idx * r, r}; }
};
LambdaMap build_lambda_map(int s, int k, int d, u64 H, const BudgetCaps& caps = {});

// lambda-map keys reduced mod m, for congruence grouping at fixed modulus
struct LambdaMapResidues {
    const LambdaMap* map = nullptr;
    u64 m = 0;
    std::vector<uint32_t> reduced;  // size() * r

    static LambdaMapResidues build(const LambdaMap& map, u64 m);
    // G[u] = sum of J(U,H) over entries with Σ beta_i U_i ≡ u (mod m);
    // beta in canonical multi-index order, reduced mod m
    std::vector<u64> congruence_histogram(std::span<const u64> beta) const;
};

}  // namespace wsc
