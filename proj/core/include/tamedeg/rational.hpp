#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tamedeg {

// Arbitrary-precision rational scalar. mpq_class keeps the canonical form we
// rely on everywhere: gcd(num, den) = 1 and den >= 1.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline long to_long(const Rational& r) {
    if (!is_integer(r)) throw std::domain_error("rational is not an integer");
    if (!r.get_num().fits_slong_p()) throw std::domain_error("integer out of long range");
    return r.get_num().get_si();
}

inline Rational pow_rat(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0 && e < 0) throw std::domain_error("zero to negative power");
    Rational acc(1);
    Rational b = e > 0 ? base : Rational(1) / base;
    for (long k = e > 0 ? e : -e; k > 0; --k) acc *= b;
    return acc;
}

// p-adic valuation of a nonzero rational.
inline long valuation(const Rational& r, long p) {
    if (r == 0) throw std::domain_error("valuation of zero");
    long v = 0;
    Integer n = r.get_num();
    Integer d = r.get_den();
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { n /= p; ++v; }
    while (mpz_divisible_ui_p(d.get_mpz_t(), p)) { d /= p; --v; }
    return v;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace tamedeg
