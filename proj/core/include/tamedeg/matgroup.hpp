#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tamedeg/rational.hpp"
#include "tamedeg/residue.hpp"

namespace tamedeg {

// Square matrix over O/p^r, entries stored row-major as canonical residues.
struct MatModPR {
    long n = 0;
    std::vector<std::uint64_t> a;

    std::uint64_t at(long i, long j) const { return a[static_cast<std::size_t>(i * n + j)]; }
    std::uint64_t& at(long i, long j) { return a[static_cast<std::size_t>(i * n + j)]; }
};

// Arithmetic context for n x n matrices over a fixed O/p^r.
class MatRing {
  public:
    MatRing(BaseRing base, long n);

    const BaseRing& base() const { return base_; }
    long n() const { return n_; }

    MatModPR zero() const;
    MatModPR identity() const;
    MatModPR scalar(std::uint64_t c) const;
    MatModPR from_rows(const std::vector<std::vector<long>>& rows) const;

    MatModPR add(const MatModPR& x, const MatModPR& y) const;
    MatModPR sub(const MatModPR& x, const MatModPR& y) const;
    MatModPR neg(const MatModPR& x) const;
    MatModPR mul(const MatModPR& x, const MatModPR& y) const;
    MatModPR scalar_mul(std::uint64_t c, const MatModPR& x) const;
    MatModPR pow(const MatModPR& x, long k) const;  // k >= 0
    std::uint64_t trace(const MatModPR& x) const;

    // Determinant as a canonical residue (exact integer expansion reduced mod p^r).
    std::uint64_t det(const MatModPR& x) const;
    bool is_invertible(const MatModPR& x) const;
    MatModPR inverse(const MatModPR& x) const;  // throws std::domain_error if det is not a unit

    bool equal(const MatModPR& x, const MatModPR& y) const { return x.a == y.a; }
    // Entrywise congruence mod p^k (k <= r).
    bool equal_mod(const MatModPR& x, const MatModPR& y, long k) const;

    // Mixed-radix code over p^r with n^2 digits; requires (p^r)^(n^2) < 2^63.
    bool encodable() const;
    std::uint64_t encode(const MatModPR& x) const;
    MatModPR decode(std::uint64_t code) const;

  private:
    BaseRing base_;
    long n_;
};

// Materialized finite matrix group: element codes, index lookup, generators,
// and (once materialize_classes has run) conjugacy class data.
struct FiniteMatrixGroup {
    MatRing ring;
    std::vector<MatModPR> gens;
    std::vector<std::uint64_t> elements;             // BFS discovery order, elements[0] = id
    std::unordered_map<std::uint64_t, std::int32_t> index;

    std::vector<std::int32_t> class_of;              // element slot -> class id (after materialize)
    std::vector<std::int32_t> class_reps;            // class id -> element slot
    std::vector<std::int64_t> class_sizes;

    bool contains(std::uint64_t code) const { return index.find(code) != index.end(); }
    std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }
    bool classes_ready() const { return !class_reps.empty(); }
};

// Closure of the generators under multiplication (BFS); throws std::length_error
// if the group exceeds `budget` elements.
FiniteMatrixGroup bfs_closure(const MatRing& ring, std::vector<MatModPR> gens,
                              std::int64_t budget);

// SL_n(O/p^r) from elementary generators.
FiniteMatrixGroup sl_enumerate(long n, long p, long r, std::int64_t budget);

// |SL_n(O/p^r)| by the reduction fibration: p^{(r-1)(n^2-1)} * |SL_n(F_p)|.
Integer sl_group_order(long n, long p, long r);

// Conjugation-orbit partition of `g` under its own generators.
void materialize_classes(FiniteMatrixGroup& g);

// Trace-zero matrices over O/p^k, enumerated as lifts into the ambient ring
// scaled by nothing (entries are residues mod p^k embedded in [0, p^k)).
std::vector<MatModPR> sl_lie_enumerate(const MatRing& ring, long k);

// Principal congruence level-l subgroup G(p^l/p^r) = {g = 1 mod p^l, det g = 1},
// as codes in `ring` (enumerated directly, no BFS).
std::vector<std::uint64_t> congruence_subgroup(const MatRing& ring, long l);

// x -> 1 + p^l x (bijection onto G(p^l/p^r) when r <= 2l).
MatModPR congruence_exp_ii(const MatRing& ring, const MatModPR& x, long l);

// x -> 1 + p^{l-1} x + (1/2) p^{2l-2} x^2 for odd r = 2l - 1 (requires trace-zero
// lift x; lands in G(p^{l-1}/p^r)).
MatModPR congruence_exp_iii(const MatRing& ring, const MatModPR& x, long l);

// Elements of `g` commuting with `beta` (mod p^r), as codes.
std::vector<std::uint64_t> centralizer_of(const FiniteMatrixGroup& g, const MatModPR& beta);

// Elements with Ad(g) beta = beta mod p^k, as codes.
std::vector<std::uint64_t> ad_stabilizer_mod(const FiniteMatrixGroup& g, const MatModPR& beta,
                                             long k);

// Cartan decomposition a = k1 * diag(p^{m_1},...,p^{m_n}) * k2 of an invertible
// rational matrix, with k1, k2 p-integral of unit determinant and m_1 >= ... >= m_n.
struct CartanDecomposition {
    std::vector<std::vector<Rational>> k1;
    std::vector<long> m;
    std::vector<std::vector<Rational>> k2;
};
CartanDecomposition cartan_decompose(const std::vector<std::vector<Rational>>& a, long p);

}  // namespace tamedeg
