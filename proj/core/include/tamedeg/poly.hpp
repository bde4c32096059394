#pragma once

#include <string>
#include <vector>

#include "tamedeg/rational.hpp"

namespace tamedeg {

// Univariate polynomial over Q, dense coefficients, index = exponent.
// Invariant: coeffs.empty() for the zero polynomial, otherwise the leading
// coefficient is nonzero. Exponents are nonnegative only; callers that need
// q^{-k} clear denominators first (see ratfun.hpp).
class PolyQ {
  public:
    PolyQ() = default;
    explicit PolyQ(const Rational& c);
    explicit PolyQ(std::vector<Rational> coeffs);

    static PolyQ variable();                 // the monomial q
    static PolyQ monomial(long exp, const Rational& c = Rational(1));

    bool is_zero() const { return c_.empty(); }
    long degree() const;                     // degree of 0 is -1
    const Rational& coeff(long exp) const;   // 0 beyond the stored range
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& leading() const;

    PolyQ operator-() const;
    PolyQ operator+(const PolyQ& o) const;
    PolyQ operator-(const PolyQ& o) const;
    PolyQ operator*(const PolyQ& o) const;
    PolyQ operator*(const Rational& s) const;
    bool operator==(const PolyQ& o) const { return c_ == o.c_; }
    bool operator!=(const PolyQ& o) const { return !(*this == o); }

    PolyQ pow(long e) const;
    Rational eval(const Rational& x) const;
    PolyQ monic() const;                     // divide by leading coefficient
    PolyQ derivative() const;

    // Euclidean division; throws on zero divisor.
    static void divmod(const PolyQ& a, const PolyQ& b, PolyQ& q, PolyQ& r);
    PolyQ operator/(const PolyQ& o) const;   // exact division, throws if remainder != 0
    PolyQ operator%(const PolyQ& o) const;

    static PolyQ gcd(PolyQ a, PolyQ b);      // monic gcd, gcd(0,0) = 0

    std::string str(const std::string& var = "q") const;

  private:
    void trim();
    std::vector<Rational> c_;
};

PolyQ operator*(const Rational& s, const PolyQ& p);

// x^m - 1 and the m-th cyclotomic polynomial (integer coefficients, computed
// by the recursive exact division x^m-1 = prod_{d|m} Phi_d).
PolyQ cyclotomic_polynomial(long m);

}  // namespace tamedeg
