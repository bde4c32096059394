#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tamedeg/abelian.hpp"
#include "tamedeg/beta.hpp"
#include "tamedeg/cyclotomic.hpp"
#include "tamedeg/matgroup.hpp"
#include "tamedeg/params.hpp"
#include "tamedeg/ratfun.hpp"

namespace tamedeg {

// The character psi on the level subquotient G(p^l/p^r): h = 1 + p^l X maps
// to zeta_{p^{l'}}^{tr(X beta)}, with r = l + l' and l' = floor(r/2).
struct PsiBeta {
    MatRing ring;
    MatModPR beta;
    long r = 2, l = 1, lp = 1;
    long plp = 1;  // p^{l'}

    // requires h = 1 mod p^l; the result is tr(X beta) mod p^{l'}
    long exponent(const MatModPR& h) const;
    Cyclotomic value(const MatModPR& h) const;
};
PsiBeta make_psi_beta(const BetaData& bd, long r);

// The stabilizer of psi inside SL_n(O/p^r), with the commutant subgroup
// G_beta, the congruence subgroups of both levels, and the abelian structure
// of G_beta. Construction verifies the product decomposition
// stabilizer = G_beta * G(p^{l'}/p^r) exhaustively.
struct IsotropyData {
    BetaData bd;
    long r = 2, l = 1, lp = 1;
    PsiBeta psi;
    FiniteMatrixGroup group;                     // the full SL_n(O/p^r)
    std::vector<std::uint64_t> stabilizer;       // isotropy subgroup codes
    std::vector<std::uint64_t> g_beta;           // centralizer of beta, det 1
    std::vector<std::uint64_t> congruence_lp;    // G(p^{l'}/p^r)
    std::vector<std::uint64_t> congruence_l;     // G(p^l/p^r)
    std::vector<std::uint64_t> overlap_l;        // G_beta intersect G(p^l/p^r)
    std::vector<std::uint64_t> overlap_lp;       // G_beta intersect G(p^{l'}/p^r)
    AbelianStructure s;                          // structure of G_beta
    std::unordered_map<std::uint64_t, std::vector<long>> coords;
};
IsotropyData isotropy_group(const BetaData& bd, long r, std::int64_t budget);

// All characters of G_beta restricting to psi on the level-l overlap; the
// count always equals |G_beta| / |overlap|.
std::vector<AbelianCharacter> theta_extensions(const IsotropyData& iso);

// Symplectic module carrying the odd-level construction: the quotient
// V = sl_n(F) / (trace-zero part of F[beta]) with the pairing
// <u, v> = tr([u, v] beta) mod p, a symplectic basis splitting V = W + W',
// and coordinates for arbitrary trace-zero matrices.
struct HeisenbergData {
    long p = 3, n = 2;
    long m = 1;           // n(n-1)/2 = dim W = dim W'
    long inv2 = 2;        // 2^{-1} mod p
    MatRing ringp = MatRing(BaseRing(3, 1), 2);  // matrices over F_p
    MatModPR beta_p;      // the generator reduced mod p
    std::vector<MatModPR> gbeta_basis;   // trace-adjusted powers of beta mod p
    std::vector<MatModPR> wprime_basis;  // spans W' (function-space directions)
    std::vector<MatModPR> w_basis;       // spans W, <wprime_i, w_j> = delta_ij
    // inverse of the full basis matrix (g_beta ++ wprime ++ w), for coordinates
    std::vector<std::vector<long>> solve_rows;

    long pair(const MatModPR& u, const MatModPR& v) const;  // tr([u,v] beta) mod p
    // coordinates (gbeta part, wprime part, w part) of a trace-zero matrix mod p
    void coordinates(const MatModPR& x, std::vector<long>* gb, std::vector<long>* wm,
                     std::vector<long>* wp) const;
    // the polarization-adapted linear section of V: the matrix with the given
    // W'- and W-coordinates and zero g_beta component
    MatModPR section(const std::vector<long>& wm, const std::vector<long>& wp) const;
};
// swap_polarization exchanges the roles of W and W' (for the independence test).
HeisenbergData make_heisenberg(const BetaData& bd, bool swap_polarization = false);

// Schroedinger operator pi(u, s) on functions on W': W'-translation by the
// W'-part of u, modulated by the pairing against the W-part; s is a scalar.
CycMat schrodinger_op(const HeisenbergData& h, const std::vector<long>& u_wprime,
                      const std::vector<long>& u_w, const Cyclotomic& s);

// Full odd-level model attached to one theta: the twisted projective action
// pi_{theta} of G(p^{l-1}/p^r), the normalized intertwiners U at the abelian
// generators of G_beta, and the correcting character mu making
// g h -> theta(g) mu(g) U(g) pi_{theta}(h) a well-defined homomorphism.
struct OddLevelModel {
    HeisenbergData heis;
    AbelianCharacter theta;
    AbelianCharacter mu;
    std::vector<CycMat> u_gens;
    // cache of theta(g) mu(g) U(g) for every g in G_beta, by code
    std::unordered_map<std::uint64_t, CycMat> left_factor;
};

// pi_{theta}(h) for h in G(p^{l-1}/p^r): the scalar
// tau(p^{-l} tr(T beta) - 2^{-1} p^{-1} tr(T^2 beta)) times rho(Y) times the
// Schroedinger operator of the V-component of T.
CycMat pi_beta_theta(const IsotropyData& iso, const HeisenbergData& h,
                     const AbelianCharacter& theta, const MatModPR& hmat);

OddLevelModel build_odd_model(const IsotropyData& iso, const AbelianCharacter& theta,
                              bool swap_polarization = false);

// Trace function of the irreducible representation of the stabilizer attached
// to theta (dimension 1 at even level, q^{n(n-1)/2} at odd level).
struct SigmaRep {
    long dim = 1;
    std::unordered_map<std::uint64_t, Cyclotomic> traces;  // on the stabilizer
};
SigmaRep sigma_even(const IsotropyData& iso, const AbelianCharacter& theta);
SigmaRep sigma_odd(const IsotropyData& iso, const AbelianCharacter& theta,
                   OddLevelModel* model_out = nullptr);

// sigma evaluated at an arbitrary stabilizer element through the product
// decomposition (odd level; used by the well-definedness and homomorphism tests).
CycMat sigma_odd_matrix(const IsotropyData& iso, const OddLevelModel& model,
                        std::uint64_t code);

// The induced representation of the full group: character values per
// conjugacy class, dimension, irreducibility, and the multiplicity of psi in
// the restriction to G(p^l/p^r).
struct DeltaData {
    Integer group_order = 0;
    long dim = 0;
    long orbit_size = 0;  // index of the stabilizer
    long b = 0;           // multiplicity of each conjugate of psi in the restriction
    bool irreducible = false;
    std::vector<Cyclotomic> class_values;  // indexed like group.class_reps
};
DeltaData induce_delta(IsotropyData& iso, const SigmaRep& sigma);

// dim delta = q^{rn(n-1)/2}/normidx * prod_{k=1}^n (1-q^{-k}) / (1-q^{-f}),
// as an exact rational function of q.
RationalFunctionQ dim_delta_formula(const TameParams& params, long normidx);
// Evaluation at a concrete prime power; throws if the value is not integral.
Integer dim_delta_at(const TameParams& params, long normidx, long q);

// Multiplication transport between the abstract ring O_K/p_K^{er} and the
// matrix model: x = sum a_i gamma^i maps to sum a_i beta^i, the regular
// representation in the power basis of the generator.
struct PowerBasisTransport {
    MatRing nring;   // n x n matrices over O/p^r
    MatModPR minv;   // inverse of the power-basis coordinate matrix
    MatModPR to_matrix(const BetaData& bd, const TameRing::Elt& x) const;
    TameRing::Elt to_ring(const BetaData& bd, const MatModPR& g) const;
};
PowerBasisTransport make_transport(const BetaData& bd);

}  // namespace tamedeg
