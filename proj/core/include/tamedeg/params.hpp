#pragma once

#include <stdexcept>
#include <vector>

#include "tamedeg/cyclotomic.hpp"

namespace tamedeg {

// Instance descriptor: everything else is derived from these numbers.
// q = p for concrete instances; symbolic sweeps carry q as a formal variable
// and use only (n, e, f, r, m, c).
struct TameParams {
    long p = 0;  // 0 means "symbolic q"
    long n = 0;
    long e = 1;
    long f = 1;
    long r = 2;
    long m = 1;  // sigma0 tau0 sigma0^{-1} = tau0^m
    long c = 0;  // sigma0^f = tau0^c
    long w = 1;  // unit selecting the tame extension (y^e = p*w)

    bool concrete() const { return p != 0; }
    long l_prime() const { return r / 2; }
    long l() const { return r - r / 2; }

    bool operator==(const TameParams&) const = default;
};

// Group-theoretic consistency of (e, f, m, c); throws std::domain_error
// with a reason when violated.
inline void validate_group_relations(const TameParams& t) {
    if (t.n != t.e * t.f) throw std::domain_error("n must equal e*f");
    if (t.e < 1 || t.f < 1) throw std::domain_error("e and f must be positive");
    if (t.r < 2) throw std::domain_error("level r must be >= 2");
    long m = ((t.m % t.e) + t.e) % t.e;
    if (t.e > 1 && gcd_long(m, t.e) != 1) throw std::domain_error("m must be prime to e");
    long mf = 1 % t.e;
    for (long j = 0; j < t.f; ++j) mf = (mf * m) % t.e;
    if (mf != 1 % t.e) throw std::domain_error("m^f must be 1 mod e");
    long c = ((t.c % t.e) + t.e) % t.e;
    if ((c * (m - 1)) % t.e != 0) throw std::domain_error("c(m-1) must be 0 mod e");
}

// Concrete-instance validity (p odd prime not dividing n, tameness, Galois
// compatibility e | p^f - 1, m = p mod e).
inline void validate_concrete(const TameParams& t) {
    validate_group_relations(t);
    if (t.p < 3) throw std::domain_error("p must be an odd prime >= 3");
    if (t.n < 2) throw std::domain_error("n must be >= 2");
    if (t.n % t.p == 0) throw std::domain_error("p must not divide n");
    if (t.e % t.p == 0) throw std::domain_error("tameness requires p not dividing e");
    if (t.e > 1) {
        long pf = 1;
        for (long j = 0; j < t.f; ++j) pf = (pf * (t.p % t.e)) % t.e;
        if (pf != 1 % t.e) throw std::domain_error("e must divide p^f - 1");
        if (t.m % t.e != t.p % t.e)
            throw std::domain_error("m must be p mod e for a concrete instance");
    }
    long w = ((t.w % t.p) + t.p) % t.p;
    if (w == 0) throw std::domain_error("w must be a unit");
}

// Ring twist exponent c' realizing the presentation parameter c: the folding
// relation sends c' to c'(1 + p + ... + p^{f-1}) mod e.
inline long derive_cprime_for(const TameParams& t) {
    if (t.e == 1) return 0;
    long s = 0, pj = 1 % t.e;
    for (long j = 0; j < t.f; ++j) {
        s = (s + pj) % t.e;
        pj = (pj * (t.p % t.e)) % t.e;
    }
    const long c = ((t.c % t.e) + t.e) % t.e;
    for (long cp = 0; cp < t.e; ++cp)
        if ((cp * s) % t.e == c) return cp;
    throw std::domain_error("c is not realizable by a ring twist for this (p, e, f)");
}

// All (m, c) pairs consistent with the metacyclic relations for given (e, f).
inline std::vector<std::pair<long, long>> admissible_mc(long e, long f) {
    std::vector<std::pair<long, long>> out;
    for (long m = 1; m <= (e == 1 ? 1 : e - 1); ++m) {
        if (gcd_long(m, e) != 1) continue;
        long mf = 1 % e;
        for (long j = 0; j < f; ++j) mf = (mf * m) % e;
        if (mf != 1 % e) continue;
        for (long c = 0; c < e; ++c)
            if ((c * (m - 1)) % e == 0) out.push_back({m % e, c});
    }
    if (out.empty()) out.push_back({1 % e == 0 ? 0 : 1, 0});
    return out;
}

}  // namespace tamedeg
