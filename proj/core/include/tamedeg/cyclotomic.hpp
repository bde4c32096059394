#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tamedeg/poly.hpp"

namespace tamedeg {

long gcd_long(long a, long b);
long lcm_long(long a, long b);
long euler_phi(long m);

// Element of the cyclotomic field Q(zeta_m), coordinates over the power basis
// 1, zeta, ..., zeta^{phi(m)-1}, always reduced mod the m-th cyclotomic
// polynomial. Mixed-order operands are lifted to the lcm order first, so
// equality across presentations (e.g. zeta_6^2 vs zeta_3) is decidable.
class Cyclotomic {
  public:
    Cyclotomic() : order_(1), c_(1, Rational(0)) {}
    explicit Cyclotomic(const Rational& r) : order_(1), c_(1, r) {}

    static Cyclotomic zeta(long m, long k = 1);
    // Coefficients of powers zeta^0..zeta^{d} (any d); reduced mod Phi_m.
    static Cyclotomic from_powers(long m, const std::vector<Rational>& powers);

    long order() const { return order_; }
    const std::vector<Rational>& coords() const { return c_; }
    bool is_zero() const;
    bool is_rational() const;
    Rational rational_value() const;  // throws if not rational

    Cyclotomic to_order(long M) const;  // requires order | M

    Cyclotomic operator-() const;
    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator/(const Cyclotomic& o) const;
    Cyclotomic operator*(const Rational& s) const;
    Cyclotomic inverse() const;
    Cyclotomic conj() const;  // complex conjugation zeta -> zeta^{-1}
    Cyclotomic pow(long e) const;

    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    std::string str() const;

  private:
    long order_;
    std::vector<Rational> c_;
};

struct RootOfUnity {
    long order;  // smallest N with value = zeta_N^exp, gcd(exp, N) = 1 or exp = 0
    long exp;
};

// Detects whether z is a root of unity (roots of unity of Q(zeta_m) have
// order dividing m resp. 2m); returns its exact expression if so.
std::optional<RootOfUnity> as_root_of_unity(const Cyclotomic& z);

// sqrt(n) for a nonzero integer n, expressed exactly via quadratic Gauss sums
// inside a cyclotomic field (principal branch: positive real for n > 0,
// positive imaginary part for n < 0).
Cyclotomic sqrt_integer_cyclo(long n);

// A k-th root of c for c of the special shape rho * omega with rho a positive
// rational whose k-th root lies in a real cyclotomic field and omega a root of
// unity. This covers every finite-order intertwiner normalization that can
// exist at all; anything else throws std::domain_error.
Cyclotomic kth_root_finite(const Cyclotomic& c, long k);

// Dense square matrix over the cyclotomic field, used for the projective
// Weil-side matrices and the finite Schroedinger-model operators.
using CycMat = std::vector<std::vector<Cyclotomic>>;

CycMat cyc_mat_zero(long n);
CycMat cyc_mat_identity(long n);
CycMat cyc_mat_scalar(long n, const Cyclotomic& s);
CycMat cyc_mat_mul(const CycMat& a, const CycMat& b);
CycMat cyc_mat_scale(const Cyclotomic& s, const CycMat& a);
bool cyc_mat_equal(const CycMat& a, const CycMat& b);
Cyclotomic cyc_mat_trace(const CycMat& a);
// Gaussian inversion over the field; throws std::domain_error on a singular input.
CycMat cyc_mat_inverse(const CycMat& a);

}  // namespace tamedeg
