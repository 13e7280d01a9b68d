#include "wsc/multiindex.hpp"

#include <numeric>
#include <stdexcept>

namespace wsc {

MultiIndex::MultiIndex(std::vector<int> exps) : e(std::move(exps)) {
    if (e.empty()) throw std::invalid_argument("multi-index needs d >= 1");
    for (int v : e)
        if (v < 0) throw std::invalid_argument("multi-index exponents must be nonnegative");
}

int MultiIndex::weight() const { return std::accumulate(e.begin(), e.end(), 0); }

bool MultiIndex::operator<(const MultiIndex& other) const {
    int wa = weight(), wb = other.weight();
    if (wa != wb) return wa < wb;
    return e > other.e;  // lexicographically descending within a weight class
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < e.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(e[i]);
    }
    return s + ")";
}

u64 binomial(u64 n, u64 k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    u64 r = 1;
    for (u64 i = 1; i <= k; ++i) {
        u64 num = n - k + i;
        // multiply first, divide by i afterwards; r*(num) stays integral step by step
        u64 g = std::gcd(num, i);
        u64 num2 = num / g, den = i / g;
        u64 g2 = std::gcd(r, den);
        u64 r2 = r / g2;
        den /= g2;
        if (den != 1) throw std::logic_error("binomial internal");
        if (num2 != 0 && r2 > UINT64_MAX / num2) throw std::overflow_error("binomial overflow");
        r = r2 * num2;
    }
    return r;
}

u64 index_count(int k, int d) {
    if (k < 1 || d < 1) throw std::invalid_argument("index_count requires k,d >= 1");
    return binomial(static_cast<u64>(k) + static_cast<u64>(d), static_cast<u64>(d)) - 1;
}

u64 weight_sum(int k, int d) {
    if (k < 1 || d < 1) throw std::invalid_argument("weight_sum requires k,d >= 1");
    u64 direct = 0;
    for (const auto& mi : iter_multiindices(k, d)) direct += static_cast<u64>(mi.weight());
    // closed form: (d/(d+1)) * (r+1) * k  with  r+1 = C(k+d,d)
    u64 rp1 = index_count(k, d) + 1;
    u64 num = static_cast<u64>(d) * rp1 * static_cast<u64>(k);
    if (num % static_cast<u64>(d + 1) != 0)
        throw InvariantViolation("weight_sum closed form not integral");
    u64 closed = num / static_cast<u64>(d + 1);
    if (direct != closed)
        throw InvariantViolation("weight_sum: direct sum " + std::to_string(direct) +
                                 " != closed form " + std::to_string(closed));
    return direct;
}

namespace {
void gen_weight(int d, int w, std::vector<int>& cur, std::vector<MultiIndex>& out) {
    if (d == 1) {
        cur.push_back(w);
        out.push_back(MultiIndex(cur));
        cur.pop_back();
        return;
    }
    for (int first = w; first >= 0; --first) {
        cur.push_back(first);
        gen_weight(d - 1, w - first, cur, out);
        cur.pop_back();
    }
}
}  // namespace

std::vector<MultiIndex> iter_multiindices(int k, int d) {
    if (k < 1 || d < 1) throw std::invalid_argument("iter_multiindices requires k,d >= 1");
    std::vector<MultiIndex> out;
    std::vector<int> cur;
    for (int w = 1; w <= k; ++w) gen_weight(d, w, cur, out);
    return out;
}

}  // namespace wsc
