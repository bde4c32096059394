#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tamedeg/matgroup.hpp"
#include "tamedeg/params.hpp"
#include "tamedeg/residue.hpp"

namespace tamedeg {

// A regular generator of the tame degree-n extension inside M_n(O/p^r):
// the companion matrix of an integer polynomial passing the three
// regularity conditions, together with the ring it generates.
struct BetaData {
    std::vector<long> charpoly;  // c_0..c_n, monic (c_n = 1), trace zero (c_{n-1} = 0)
    MatRing ring;                // ambient M_n(O/p^r)
    MatModPR beta;               // companion matrix mod p^r
    TameRing ext;                // O_K/p_K^{er} with the requested (e, f, w)
    TameRing::Elt gamma;         // root of charpoly generating ext over O/p^r
};

// Condition: char poly mod p is a power of a single irreducible of degree f.
bool charpoly_inertial_shape(const std::vector<long>& cp, long p, long e, long f);

// Condition: char poly mod p^2 has no monic factorization into lower degrees.
bool charpoly_irreducible_mod_psq(const std::vector<long>& cp, long p);

// Condition: min poly of x mod p has full degree n (x is non-derogatory).
bool matrix_nonderogatory_mod_p(const MatRing& ring, const MatModPR& x);

// Flatten a tame-ring element to its n coordinates over O/p^r (y-slot major).
std::vector<std::uint64_t> flatten_coords(const TameRing& ring, const TameRing::Elt& x);

// Exponent (mod p^{l'}) of the additive character at x = 1 mod p_K^{el}:
// tr_{K/F}( (x - 1)/p^l * gamma ) read off mod p^{l'}.
long beta_additive_exponent(const TameRing& ring, const TameRing::Elt& gamma,
                            const TameRing::Elt& x, long l, long lp);

// Deterministic search for the first trace-zero monic integer polynomial
// (constant term varied first, values ordered 0, 1, -1, 2, -2, ... up to p^2)
// meeting all three regularity conditions and possessing a generating root
// in the tame ring selected by params.w; throws std::runtime_error if the
// coefficient box is exhausted.
BetaData build_beta(const TameParams& params, std::int64_t budget = 1000000);

}  // namespace tamedeg
