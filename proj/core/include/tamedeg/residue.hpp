#pragma once

#include <cstdint>
#include <vector>

#include "tamedeg/rational.hpp"

namespace tamedeg {

bool is_prime(long n);

// Z/p^r for an odd prime p. Representatives live in [0, p^r).
class BaseRing {
  public:
    BaseRing(long p, long r);

    long p() const { return p_; }
    long r() const { return r_; }
    std::uint64_t mod() const { return mod_; }

    std::uint64_t reduce(long x) const;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % mod_; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + mod_ - b) % mod_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % mod_; }
    std::uint64_t neg(std::uint64_t a) const { return (mod_ - a) % mod_; }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    bool is_unit(std::uint64_t a) const { return a % p_ != 0; }
    std::uint64_t inv(std::uint64_t a) const;  // throws on non-unit
    std::uint64_t unit_count() const;          // p^{r-1}(p-1)

  private:
    long p_, r_;
    std::uint64_t mod_;
};

// Galois ring GR(p^r, f) = (Z/p^r)[x]/(modulus), modulus monic of degree f
// and irreducible mod p (first such in lexicographic coefficient order).
// Elements are coefficient vectors of length f over the base ring.
class GaloisRing {
  public:
    using Elt = std::vector<std::uint64_t>;

    GaloisRing(BaseRing base, long f);

    const BaseRing& base() const { return base_; }
    long f() const { return f_; }
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }
    std::uint64_t size() const;  // p^{rf}
    std::uint64_t unit_count() const;

    Elt zero() const { return Elt(static_cast<size_t>(f_), 0); }
    Elt one() const;
    Elt from_base(std::uint64_t a) const;
    Elt gen() const;  // the class of x

    Elt add(const Elt& a, const Elt& b) const;
    Elt sub(const Elt& a, const Elt& b) const;
    Elt neg(const Elt& a) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt scalar_mul(std::uint64_t s, const Elt& a) const;
    Elt pow(const Elt& a, std::uint64_t e) const;
    bool is_zero(const Elt& a) const;
    bool is_unit(const Elt& a) const;  // nonzero in the residue field
    Elt inv(const Elt& a) const;

    bool in_base(const Elt& a) const;
    std::uint64_t to_base(const Elt& a) const;

    // The unique automorphism lifting x -> x^p on the residue field.
    Elt frobenius(const Elt& a) const;
    // Teichmuller representative: the limit of a^{p^f}-iteration.
    Elt teichmuller(const Elt& a) const;
    // A generator of the cyclic group of Teichmuller units, order p^f - 1.
    Elt teichmuller_generator() const;

    std::uint64_t encode(const Elt& a) const;
    Elt decode(std::uint64_t code) const;
    std::vector<Elt> all_elements() const;

  private:
    Elt reduce_poly(std::vector<std::uint64_t> conv) const;
    BaseRing base_;
    long f_;
    std::vector<std::uint64_t> modulus_;  // c_0..c_f, c_f = 1
    Elt frob_gen_;                        // image of gen under Frobenius
};

// O_K / p_K^{er} for the tame extension K = F(zeta, y), y^e = p*w, realized as
// gr[y]/(y^e - p w) over gr = GR(p^r, f). The ideal (y) is nilpotent of index
// er and plays the role of the prime of K. The Galois action exists iff
// e | p^f - 1; then tau0: y -> zeta_e y fixes gr, and sigma0 is Frobenius on
// gr with y -> zeta_e^{c'} y. Derived metacyclic data: m = p mod e and
// c = c'(p^f-1)/(p-1) mod e.
class TameRing {
  public:
    // element: coefficients of y^0..y^{e-1}, each a GaloisRing element
    using Elt = std::vector<GaloisRing::Elt>;

    TameRing(BaseRing base, long f, long e, long w, long cprime = 0);

    const GaloisRing& gr() const { return gr_; }
    const BaseRing& base() const { return gr_.base(); }
    long e() const { return e_; }
    long f() const { return gr_.f(); }
    long n() const { return e_ * gr_.f(); }
    std::uint64_t size() const;
    bool galois_enabled() const { return galois_ok_; }
    long derived_m() const;
    long derived_c() const;
    long cprime() const { return cprime_; }

    Elt zero() const;
    Elt one() const;
    Elt from_base(std::uint64_t a) const;
    Elt from_gr(const GaloisRing::Elt& a) const;
    Elt y() const;  // uniformizer when e > 1; equals p*w when e = 1

    Elt add(const Elt& a, const Elt& b) const;
    Elt sub(const Elt& a, const Elt& b) const;
    Elt neg(const Elt& a) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt pow(const Elt& a, std::uint64_t e) const;
    bool is_zero(const Elt& a) const;
    bool is_unit(const Elt& a) const;
    Elt inv(const Elt& a) const;
    bool equal(const Elt& a, const Elt& b) const { return a == b; }

    Elt tau0(const Elt& a) const;
    Elt sigma0(const Elt& a) const;
    // Galois element tau0^i sigma0^j applied to a.
    Elt galois(const Elt& a, long i, long j) const;

    Elt norm(const Elt& a) const;   // product over all ef conjugates
    Elt trace(const Elt& a) const;  // sum over all ef conjugates
    std::uint64_t norm_base(const Elt& a) const;   // asserts the result lies in Z/p^r
    std::uint64_t trace_base(const Elt& a) const;

    bool in_base(const Elt& a) const;

    // p_K-adic valuation: largest j <= er with a in p_K^j (er for a = 0).
    long valuation(const Elt& a) const;
    bool in_ideal(const Elt& a, long j) const;  // a in p_K^j

    std::uint64_t encode(const Elt& a) const;
    Elt decode(std::uint64_t code) const;
    std::vector<Elt> all_elements() const;
    // All elements of the subgroup 1 + p_K^j (j >= 1) of the unit group.
    std::vector<Elt> one_plus_ideal(long j) const;

  private:
    GaloisRing gr_;
    long e_;
    GaloisRing::Elt w_;
    long cprime_;
    bool galois_ok_;
    GaloisRing::Elt zeta_e_;  // primitive e-th root of unity (Galois case)
    GaloisRing::Elt pw_;      // p * w
};

// Invariant-factor description of a finite abelian group: d_1 | d_2 | ... | d_k
// with independent generators of exactly those orders.
struct AbelianStructure {
    std::vector<long> invariant_factors;
    std::vector<std::uint64_t> generators;
    long order() const {
        long n = 1;
        for (long d : invariant_factors) n *= d;
        return n;
    }
    long exponent() const {
        return invariant_factors.empty() ? 1 : invariant_factors.back();
    }
};

// Unit group of a TameRing (covers GaloisRing via e = 1), by enumeration.
// Enforces the |ring| <= 10^6 budget.
AbelianStructure unit_group(const TameRing& ring);

// Index of the norm image N(R^x) inside (Z/p^r)^x, by enumeration.
long norm_index(const TameRing& ring);

}  // namespace tamedeg
