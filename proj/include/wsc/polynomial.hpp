#pragma once

#include <map>
#include <span>
#include <string_view>

#include "wsc/multiindex.hpp"

namespace wsc {

// Sparse multivariate polynomial over Z_m. Coefficients are stored canonically
// in {0,...,m-1}; zero coefficients are never stored; the zero polynomial has
// degree 0 by convention.
class Polynomial {
  public:
    static constexpr u64 kMaxModulus = (1ULL << 31) - 1;

    Polynomial(u64 modulus, int dims);

    // Grammar: term (("+"|"-") term)*, term = [int] ("*"? var)*, var = x<idx>("^"<exp>)?.
    // Whitespace is insignificant. dims = 0 infers the dimension from the largest
    // variable index; a positive dims rejects larger indices.
    static Polynomial parse(std::string_view text, u64 modulus, int dims = 0);

    u64 modulus() const { return m_; }
    int dims() const { return d_; }
    int degree() const { return degree_; }
    const std::map<MultiIndex, u64>& terms() const { return terms_; }

    u64 coeff(const MultiIndex& mi) const;
    void add_to_coeff(const MultiIndex& mi, i64 delta);  // reduces mod m, drops zeros

    // F(x) mod m; coordinates are reduced mod m first, every product is reduced
    u64 evaluate(std::span<const i64> x) const;

    // g_F = min over weight-k terms of gcd(m, coefficient); requires degree >= 1
    u64 leading_gcd() const;

    Polynomial plus(const Polynomial& other) const;

    std::string to_string() const;

  private:
    void recompute_degree();

    u64 m_;
    int d_;
    int degree_ = 0;
    std::map<MultiIndex, u64> terms_;
};

}  // namespace wsc
