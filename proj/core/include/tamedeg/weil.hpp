#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tamedeg/abelian.hpp"
#include "tamedeg/beta.hpp"
#include "tamedeg/cyclotomic.hpp"
#include "tamedeg/params.hpp"
#include "tamedeg/residue.hpp"

namespace tamedeg {

// <tau, sigma | tau^e = 1, sigma tau sigma^{-1} = tau^m, sigma^f = tau^c>,
// elements tau^i sigma^j with 0 <= i < e, 0 <= j < f; overflow of the sigma
// exponent folds back through sigma^f = tau^c.
struct MetacyclicGroup {
    long e = 1, f = 1, m = 1, c = 0;

    std::pair<long, long> mul(std::pair<long, long> a, std::pair<long, long> b) const;
    std::pair<long, long> inverse(std::pair<long, long> a) const;
    long code(std::pair<long, long> a) const { return a.first + e * a.second; }
    std::pair<long, long> decode(long code) const { return {code % e, code / e}; }
    long order() const { return e * f; }
};

// Validates the presentation relations and checks associativity on all triples.
MetacyclicGroup build_metacyclic(long e, long f, long m, long c);

struct AbelianizationResult {
    long commutator_order = 1;
    long ab_order = 1;
    long normidx = 1;  // |G^ab| / f = ramification degree of the maximal abelian subextension
};
AbelianizationResult abelianization(const MetacyclicGroup& g);

// Number of characters of the relative Weil group trivial on K^x: |G^ab|.
long a_theta_count(const MetacyclicGroup& g);

// Unit group of a tame ring with per-element coordinates, shared by character
// construction, the Weil model, and the level-structure scan.
struct UnitGroupData {
    TameRing ring;
    std::vector<std::uint64_t> units;
    AbelianStructure s;
    std::unordered_map<std::uint64_t, std::vector<long>> coords;
};
UnitGroupData unit_group_data(const TameRing& ring);

Cyclotomic unit_char_value(const UnitGroupData& u, const AbelianCharacter& chi,
                           const TameRing::Elt& x);

// Character of the unit group determined by prescribed value exponents on the
// abelian generators (exponents mod s.exponent(); must be compatible with the
// generator orders).
AbelianCharacter character_from_generator_exponents(const AbelianStructure& s,
                                                    const std::vector<long>& v);

// First character (in enumeration order) matching all (element, exponent mod D)
// constraints; nullopt if none exists.
std::optional<AbelianCharacter> constrained_character(
    const UnitGroupData& u, const std::vector<std::pair<std::uint64_t, long>>& constraints);

// First unit character restricting, on the norm-one part of 1 + p_K^{e l},
// to the additive character cut out by the regular generator.
AbelianCharacter theta_from_beta(const UnitGroupData& u, const BetaData& bd, long r);

// theta moved by every nontrivial Galois element (full-level genericity).
bool theta_is_generic(const UnitGroupData& u, const AbelianCharacter& theta);

// Finite model of the relative Weil group in the unramified case: pairs
// (sigma^j, x) with x a unit times a power of the uniformizer; the cocycle is
// alpha(sigma^i, sigma^j) = pi^{[i + j >= f]}.
struct UnramifiedWeilModel {
    UnitGroupData units;
    long f = 1;
};
UnramifiedWeilModel build_unramified_model(long p, long f, long r);

long cocycle_exponent(long f, long i, long j);  // pi-exponent of alpha(sigma^i, sigma^j)
bool cocycle_identity_holds(long f);            // checked on all triples

// theta on K^x in the finite model: a unit character plus the value at pi.
struct WeilTheta {
    AbelianCharacter chi;
    long pi_order = 1;  // theta(pi) = zeta_{pi_order}^{pi_exp}
    long pi_exp = 0;
};

// Projective generator matrices of the induced Weil-group representation in
// the basis psi_{sigma^j}: one diagonal matrix per abelian unit generator, the
// monomial matrix of sigma_0, and the scalar at pi. Throws std::domain_error
// if theta fails the genericity precheck.
struct ThetaMatrices {
    CycMat sigma;
    std::vector<CycMat> unit_gens;
    Cyclotomic pi_scalar;
};
ThetaMatrices build_theta_matrices(const UnramifiedWeilModel& w, const WeilTheta& theta);

// Diagonal matrix of theta acting at an arbitrary unit.
CycMat theta_unit_action(const UnramifiedWeilModel& w, const WeilTheta& theta,
                         const TameRing::Elt& alpha);

// |A_phi|: number of characters lambda of the finite model admitting an
// invertible T with g T = lambda(g) T g for all g; every counted T is
// re-verified as an exact matrix identity.
long centralizer_in_pgl(const UnramifiedWeilModel& w, const WeilTheta& theta);

// Twisted character theta' = theta * (chi_base after the norm); chi_pi_* give
// the extension of chi_base to F^x at the uniformizer.
WeilTheta twist_by_base_character(const UnramifiedWeilModel& w, const WeilTheta& theta,
                                  const UnitGroupData& base_units,
                                  const AbelianCharacter& chi_base, long chi_pi_order,
                                  long chi_pi_exp);

// Verifies that the generator matrices of theta and of the twisted theta' are
// conjugate by the explicit diagonal built from gamma(sigma^j) = pi^j.
bool twist_conjugacy_holds(const UnramifiedWeilModel& w, const WeilTheta& theta,
                           const UnitGroupData& base_units, const AbelianCharacter& chi_base,
                           long chi_pi_order, long chi_pi_exp);

// Inertia-fixed subspace of the adjoint representation: dimension f - 1 with
// the explicit Frobenius matrix (first column -1, superdiagonal 1).
struct InertiaFixedSpace {
    long dim = 0;
    std::vector<std::vector<long>> frobenius;
};
InertiaFixedSpace inertia_fixed_space(long e, long f);

// Stabilizer bands: for each 0 <= k <= e+1 with er - k >= 1, the Galois
// elements fixing theta on 1 + p_K^{er-k}, as metacyclic codes i + e * j.
std::map<long, std::vector<long>> level_structure_check(const UnitGroupData& u,
                                                        const AbelianCharacter& theta);

}  // namespace tamedeg
