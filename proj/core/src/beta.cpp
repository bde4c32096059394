#include "tamedeg/beta.hpp"

#include <cmath>
#include <stdexcept>

namespace tamedeg {

namespace {

using FpPoly = std::vector<long>;  // coefficients in [0, p), index = degree

FpPoly fp_reduce(const std::vector<long>& cp, long p) {
    FpPoly out(cp.size());
    for (std::size_t i = 0; i < cp.size(); ++i) out[i] = ((cp[i] % p) + p) % p;
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long p) {
    FpPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return c;
}

// Remainder of a mod monic b over F_p.
FpPoly fp_rem(FpPoly a, const FpPoly& b, long p) {
    const long db = static_cast<long>(b.size()) - 1;
    while (static_cast<long>(a.size()) - 1 >= db) {
        const long lead = a.back();
        const long shift = static_cast<long>(a.size()) - 1 - db;
        if (lead != 0)
            for (long i = 0; i <= db; ++i)
                a[i + shift] = ((a[i + shift] - lead * b[i]) % p + p * p) % p;
        a.pop_back();
        while (a.size() > 1 && a.back() == 0) a.pop_back();
    }
    return a;
}

bool fp_is_zero(const FpPoly& a) { return a.size() == 1 && a[0] == 0; }

bool fp_irreducible(const FpPoly& a, long p) {
    const long d = static_cast<long>(a.size()) - 1;
    if (d < 1) return false;
    if (d == 1) return true;
    // trial division by all monic polynomials of degree 1..d/2
    for (long deg = 1; deg * 2 <= d; ++deg) {
        std::vector<long> digits(static_cast<std::size_t>(deg), 0);
        while (true) {
            FpPoly cand(static_cast<std::size_t>(deg) + 1, 0);
            for (long i = 0; i < deg; ++i) cand[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(i)];
            cand[static_cast<std::size_t>(deg)] = 1;
            if (fp_is_zero(fp_rem(a, cand, p))) return false;
            std::size_t carry = 0;
            while (carry < digits.size()) {
                if (++digits[carry] < p) break;
                digits[carry++] = 0;
            }
            if (carry == digits.size()) break;
        }
    }
    return true;
}

// Remainder of a mod monic b over Z/p^2, entries canonical in [0, p^2).
std::vector<long> psq_rem(std::vector<long> a, const std::vector<long>& b, long psq) {
    const long db = static_cast<long>(b.size()) - 1;
    while (static_cast<long>(a.size()) - 1 >= db) {
        const long lead = a.back();
        const long shift = static_cast<long>(a.size()) - 1 - db;
        if (lead != 0)
            for (long i = 0; i <= db; ++i) {
                long v = (a[i + shift] - lead % psq * b[i]) % psq;
                a[i + shift] = (v % psq + psq) % psq;
            }
        a.pop_back();
        while (a.size() > 1 && a.back() == 0) a.pop_back();
    }
    return a;
}

}  // namespace

bool charpoly_inertial_shape(const std::vector<long>& cp, long p, long e, long f) {
    FpPoly chi = fp_reduce(cp, p);
    if (static_cast<long>(chi.size()) - 1 != e * f) return false;
    // search for an irreducible monic of degree f with chi = irr^e
    std::vector<long> digits(static_cast<std::size_t>(f), 0);
    while (true) {
        FpPoly cand(static_cast<std::size_t>(f) + 1, 0);
        for (long i = 0; i < f; ++i) cand[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(i)];
        cand[static_cast<std::size_t>(f)] = 1;
        if (fp_irreducible(cand, p)) {
            FpPoly power{1};
            for (long k = 0; k < e; ++k) power = fp_mul(power, cand, p);
            if (power == chi) return true;
        }
        std::size_t carry = 0;
        while (carry < digits.size()) {
            if (++digits[carry] < p) break;
            digits[carry++] = 0;
        }
        if (carry == digits.size()) break;
    }
    return false;
}

bool charpoly_irreducible_mod_psq(const std::vector<long>& cp, long p) {
    const long psq = p * p;
    const long n = static_cast<long>(cp.size()) - 1;
    std::vector<long> chi(cp.size());
    for (std::size_t i = 0; i < cp.size(); ++i) chi[i] = ((cp[i] % psq) + psq) % psq;
    for (long deg = 1; deg < n; ++deg) {
        std::vector<long> digits(static_cast<std::size_t>(deg), 0);
        while (true) {
            std::vector<long> cand(static_cast<std::size_t>(deg) + 1, 0);
            for (long i = 0; i < deg; ++i) cand[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(i)];
            cand[static_cast<std::size_t>(deg)] = 1;
            std::vector<long> rem = psq_rem(chi, cand, psq);
            bool zero = true;
            for (long v : rem) zero = zero && v == 0;
            if (zero) return false;
            std::size_t carry = 0;
            while (carry < digits.size()) {
                if (++digits[carry] < psq) break;
                digits[carry++] = 0;
            }
            if (carry == digits.size()) break;
        }
    }
    return true;
}

bool matrix_nonderogatory_mod_p(const MatRing& ring, const MatModPR& x) {
    const long p = ring.base().p();
    const long n = ring.n();
    // Krylov: rank over F_p of {I, x, x^2, ..., x^{n-1}} must be n
    std::vector<std::vector<long>> rows;
    MatModPR cur = ring.identity();
    for (long k = 0; k < n; ++k) {
        std::vector<long> row(static_cast<std::size_t>(n * n));
        for (std::size_t t = 0; t < row.size(); ++t) row[t] = static_cast<long>(cur.a[t] % static_cast<std::uint64_t>(p));
        rows.push_back(row);
        cur = ring.mul(cur, x);
    }
    // Gaussian elimination over F_p
    long rank = 0;
    std::size_t cols = rows[0].size();
    for (std::size_t col = 0; col < cols && rank < n; ++col) {
        long piv = -1;
        for (long i = rank; i < n; ++i)
            if (rows[static_cast<std::size_t>(i)][col] % p != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(piv)]);
        // normalize pivot row
        long inv = 1;
        const long pv = rows[static_cast<std::size_t>(rank)][col] % p;
        for (long t = 1; t < p; ++t)
            if ((pv * t) % p == 1) { inv = t; break; }
        for (std::size_t t = 0; t < cols; ++t)
            rows[static_cast<std::size_t>(rank)][t] = rows[static_cast<std::size_t>(rank)][t] * inv % p;
        for (long i = 0; i < n; ++i) {
            if (i == rank) continue;
            const long c = rows[static_cast<std::size_t>(i)][col] % p;
            if (c == 0) continue;
            for (std::size_t t = 0; t < cols; ++t)
                rows[static_cast<std::size_t>(i)][t] =
                    ((rows[static_cast<std::size_t>(i)][t] - c * rows[static_cast<std::size_t>(rank)][t]) % p + p) % p;
        }
        ++rank;
    }
    return rank == n;
}

std::vector<std::uint64_t> flatten_coords(const TameRing& ring, const TameRing::Elt& x) {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(ring.n()));
    for (const auto& slot : x)
        for (const std::uint64_t c : slot) out.push_back(c);
    return out;
}

long beta_additive_exponent(const TameRing& ring, const TameRing::Elt& gamma,
                            const TameRing::Elt& x, long l, long lp) {
    const long p = ring.base().p();
    std::uint64_t pl = 1;
    for (long i = 0; i < l; ++i) pl *= static_cast<std::uint64_t>(p);
    std::uint64_t plp = 1;
    for (long i = 0; i < lp; ++i) plp *= static_cast<std::uint64_t>(p);
    // u = (x - 1) / p^l, well defined mod p^{r-l} coordinatewise
    TameRing::Elt diff = ring.sub(x, ring.one());
    TameRing::Elt u = diff;
    for (auto& slot : u)
        for (auto& coord : slot) {
            if (coord % pl != 0) throw std::domain_error("element is not 1 mod p_K^{el}");
            coord /= pl;
        }
    const std::uint64_t t = ring.trace_base(ring.mul(u, gamma));
    return static_cast<long>(t % plp);
}

namespace {

// value sequence 0, 1, -1, 2, -2, ...
long signed_value(long idx) { return idx % 2 == 1 ? (idx + 1) / 2 : -idx / 2; }

MatModPR companion(const MatRing& ring, const std::vector<long>& cp) {
    const long n = ring.n();
    MatModPR m = ring.zero();
    for (long i = 0; i + 1 < n; ++i) m.at(i + 1, i) = 1 % ring.base().mod();
    for (long i = 0; i < n; ++i) m.at(i, n - 1) = ring.base().reduce(-cp[static_cast<std::size_t>(i)]);
    return m;
}

// Try to find a root of cp in ext whose power basis spans; returns true on success.
bool find_generating_root(const TameRing& ext, const std::vector<long>& cp, long p, long r,
                          std::int64_t budget, TameRing::Elt* root_out) {
    const long n = ext.n();
    double size_bits = n * r * std::log2(static_cast<double>(p));
    if (size_bits > std::log2(static_cast<double>(budget)))
        throw std::length_error("tame ring too large for root search");
    BaseRing base(p, r);
    MatRing coord_ring(base, n);
    for (const TameRing::Elt& x : ext.all_elements()) {
        // Horner evaluation of cp at x
        TameRing::Elt acc = ext.from_base(base.reduce(cp.back()));
        for (std::size_t i = cp.size() - 1; i-- > 0;) {
            acc = ext.mul(acc, x);
            acc = ext.add(acc, ext.from_base(base.reduce(cp[i])));
        }
        if (!ext.is_zero(acc)) continue;
        // power basis must span the ring over O/p^r
        MatModPR basis = coord_ring.zero();
        TameRing::Elt power = ext.one();
        for (long k = 0; k < n; ++k) {
            const std::vector<std::uint64_t> coords = flatten_coords(ext, power);
            for (long i = 0; i < n; ++i) basis.at(i, k) = coords[static_cast<std::size_t>(i)];
            power = ext.mul(power, x);
        }
        if (coord_ring.is_invertible(basis)) {
            *root_out = x;
            return true;
        }
    }
    return false;
}

}  // namespace

BetaData build_beta(const TameParams& params, std::int64_t budget) {
    validate_concrete(params);
    const long p = params.p, n = params.n, r = params.r;
    BaseRing base(p, r);
    MatRing ring(base, n);
    TameRing ext(base, params.f, params.e, params.w,
                 params.e > 1 ? derive_cprime_for(params) : 0);
    const long bound = p * p;
    const long seq_len = 2 * bound + 1;
    // odometer over the free coefficients c_0..c_{n-2}; c_0 varies first
    std::vector<long> idx(static_cast<std::size_t>(n - 1), 0);
    while (true) {
        std::vector<long> cp(static_cast<std::size_t>(n) + 1, 0);
        cp[static_cast<std::size_t>(n)] = 1;
        for (long i = 0; i + 1 < n; ++i) cp[static_cast<std::size_t>(i)] = signed_value(idx[static_cast<std::size_t>(i)]);
        if (charpoly_inertial_shape(cp, p, params.e, params.f) &&
            charpoly_irreducible_mod_psq(cp, p)) {
            MatModPR beta = companion(ring, cp);
            if (matrix_nonderogatory_mod_p(ring, beta)) {
                TameRing::Elt gamma;
                if (find_generating_root(ext, cp, p, r, budget, &gamma))
                    return BetaData{cp, ring, beta, ext, gamma};
            }
        }
        std::size_t carry = 0;
        while (carry < idx.size()) {
            if (++idx[carry] < seq_len) break;
            idx[carry++] = 0;
        }
        if (carry == idx.size()) break;
    }
    throw std::runtime_error("no regular generator found in the coefficient box");
}

}  // namespace tamedeg
