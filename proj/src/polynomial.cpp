#include "wsc/polynomial.hpp"

#include <cctype>
#include <numeric>

namespace wsc {

Polynomial::Polynomial(u64 modulus, int dims) : m_(modulus), d_(dims) {
    if (modulus < 3 || modulus > kMaxModulus)
        throw ParseError("modulus must satisfy 3 <= m < 2^31");
    if (dims < 1) throw ParseError("polynomial needs d >= 1");
}

u64 Polynomial::coeff(const MultiIndex& mi) const {
    auto it = terms_.find(mi);
    return it == terms_.end() ? 0 : it->second;
}

void Polynomial::add_to_coeff(const MultiIndex& mi, i64 delta) {
    if (mi.dims() != d_) throw DimensionMismatch("multi-index dimension mismatch");
    u64 v = (coeff(mi) + reduce_mod(delta, m_)) % m_;
    if (v == 0)
        terms_.erase(mi);
    else
        terms_[mi] = v;
    recompute_degree();
}

void Polynomial::recompute_degree() {
    int k = 0;
    for (const auto& [mi, c] : terms_)
        if (mi.weight() > k) k = mi.weight();
    degree_ = k;
}

u64 Polynomial::evaluate(std::span<const i64> x) const {
    if (static_cast<int>(x.size()) != d_) throw DimensionMismatch("evaluate: point dimension");
    u64 acc = 0;
    for (const auto& [mi, c] : terms_) {
        u64 t = c;
        for (int i = 0; i < d_; ++i)
            if (mi.e[i]) t = t * pow_mod(reduce_mod(x[i], m_), mi.e[i], m_) % m_;
        acc = (acc + t) % m_;
    }
    return acc;
}

u64 Polynomial::leading_gcd() const {
    if (degree_ < 1) throw std::invalid_argument("leading_gcd: polynomial is constant");
    u64 g = 0;
    bool found = false;
    for (const auto& [mi, c] : terms_) {
        if (mi.weight() != degree_) continue;
        u64 gi = std::gcd(m_, c);
        g = found ? std::min(g, gi) : gi;
        found = true;
    }
    return g;
}

Polynomial Polynomial::plus(const Polynomial& other) const {
    if (other.m_ != m_ || other.d_ != d_)
        throw DimensionMismatch("plus: modulus/dimension mismatch");
    Polynomial r = *this;
    for (const auto& [mi, c] : other.terms_) r.add_to_coeff(mi, static_cast<i64>(c));
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [mi, c] : terms_) {
        if (!s.empty()) s += " + ";
        std::string mono;
        for (int i = 0; i < d_; ++i) {
            if (!mi.e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += "x" + std::to_string(i + 1);
            if (mi.e[i] > 1) mono += "^" + std::to_string(mi.e[i]);
        }
        if (mono.empty())
            s += std::to_string(c);
        else if (c == 1)
            s += mono;
        else
            s += std::to_string(c) + "*" + mono;
    }
    return s;
}

namespace {

struct Lexer {
    std::string_view src;
    size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    char take() {
        char c = peek();
        if (c) ++pos;
        return c;
    }
    bool take_if(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    u64 take_uint() {
        skip_ws();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw ParseError("expected integer at position " + std::to_string(pos));
        u64 v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + static_cast<u64>(src[pos] - '0');
            if (v > (1ULL << 62)) throw ParseError("integer literal too large");
            ++pos;
        }
        return v;
    }
};

struct RawTerm {
    i64 sign = 1;
    u64 coeff = 1;
    bool has_coeff = false;
    std::vector<std::pair<int, int>> vars;  // (index, exponent)
};

RawTerm parse_term(Lexer& lx) {
    RawTerm t;
    if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
        t.coeff = lx.take_uint();
        t.has_coeff = true;
        lx.take_if('*');
    }
    while (lx.peek() == 'x') {
        lx.take();
        u64 idx = lx.take_uint();
        if (idx < 1) throw ParseError("variable indices start at 1");
        int exp = 1;
        if (lx.take_if('^')) {
            u64 e = lx.take_uint();
            if (e > 64) throw ParseError("exponent too large");
            exp = static_cast<int>(e);
        }
        t.vars.emplace_back(static_cast<int>(idx), exp);
        lx.take_if('*');
    }
    if (!t.has_coeff && t.vars.empty()) throw ParseError("empty term");
    return t;
}

}  // namespace

Polynomial Polynomial::parse(std::string_view text, u64 modulus, int dims) {
    if (modulus < 3 || modulus > kMaxModulus)
        throw ParseError("modulus must satisfy 3 <= m < 2^31");
    Lexer lx{text};
    std::vector<RawTerm> raw;
    i64 sign = 1;
    if (lx.take_if('-')) sign = -1;
    for (;;) {
        RawTerm t = parse_term(lx);
        t.sign = sign;
        raw.push_back(std::move(t));
        char c = lx.peek();
        if (c == '+') {
            lx.take();
            sign = 1;
        } else if (c == '-') {
            lx.take();
            sign = -1;
        } else if (c == '\0') {
            break;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "' in polynomial");
        }
    }
    int max_idx = 1;
    for (const auto& t : raw)
        for (auto [idx, exp] : t.vars) {
            (void)exp;
            if (dims > 0 && idx > dims)
                throw ParseError("variable x" + std::to_string(idx) + " exceeds declared d=" +
                                 std::to_string(dims));
            max_idx = std::max(max_idx, idx);
        }
    int d = dims > 0 ? dims : max_idx;

    Polynomial p(modulus, d);
    for (const auto& t : raw) {
        std::vector<int> exps(d, 0);
        for (auto [idx, exp] : t.vars) exps[idx - 1] += exp;
        i64 c = t.sign * static_cast<i64>(t.coeff % modulus);
        p.add_to_coeff(MultiIndex(exps), c);
    }
    return p;
}

}  // namespace wsc
