#pragma once

#include <string>

#include "tamedeg/poly.hpp"

namespace tamedeg {

// Rational function in one variable over Q, kept reduced: gcd(num, den) = 1
// and den monic. The zero function is 0/1. All verification-path identities
// in the formal-degree checks are decided on this type, never numerically.
class RationalFunctionQ {
  public:
    RationalFunctionQ() : num_(), den_(Rational(1)) {}
    RationalFunctionQ(const Rational& c) : num_(c), den_(Rational(1)) {}
    RationalFunctionQ(PolyQ num, PolyQ den);

    static RationalFunctionQ variable() { return RationalFunctionQ(PolyQ::variable(), PolyQ(Rational(1))); }
    // q^k for k of either sign; negative k lands in the denominator.
    static RationalFunctionQ q_pow(long k);

    const PolyQ& num() const { return num_; }
    const PolyQ& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunctionQ operator-() const;
    RationalFunctionQ operator+(const RationalFunctionQ& o) const;
    RationalFunctionQ operator-(const RationalFunctionQ& o) const;
    RationalFunctionQ operator*(const RationalFunctionQ& o) const;
    RationalFunctionQ operator/(const RationalFunctionQ& o) const;
    RationalFunctionQ pow(long e) const;

    bool operator==(const RationalFunctionQ& o) const;
    bool operator!=(const RationalFunctionQ& o) const { return !(*this == o); }

    std::string str(const std::string& var = "q") const;

    PolyQ num_;
    PolyQ den_;
};

// Exact equality decided by the cross-multiplied polynomial identity
// a.num * b.den == b.num * a.den.
bool rf_equal(const RationalFunctionQ& a, const RationalFunctionQ& b);

// Exact evaluation; throws std::domain_error at a pole.
Rational rf_eval(const RationalFunctionQ& f, const Rational& x);

}  // namespace tamedeg
