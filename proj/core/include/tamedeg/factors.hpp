#pragma once

#include <string>
#include <vector>

#include "tamedeg/params.hpp"
#include "tamedeg/ratfun.hpp"

namespace tamedeg {

// One band of the ramification filtration of the parameter restricted to the
// adjoint representation. Band k >= 1 collects the jumps t with
// q^{f(k-1)} - 1 < t <= q^{fk} - 1, where the filtration subgroup has constant
// order q^{f(er-k)}; band k = 0 is the single jump t = 0. `card` is that
// constant order as a function of q, `dim_fixed` the dimension of the
// band-subgroup invariants in the adjoint space, and `weight` the band's total
// contribution to the conductor: (number of jumps) * card / |D_0| * codim.
// Every weight reduces to a q-free nonnegative integer.
struct ConductorBand {
    long k = 0;
    long dim_fixed = 0;
    RationalFunctionQ card;
    RationalFunctionQ weight;
};

struct ConductorBreakdown {
    TameParams params;
    long total = 0;  // sum of the band weights; the conductor of the adjoint
    std::vector<ConductorBand> bands;
};

// Conductor of the adjoint of the tame discrete parameter attached to
// (n, e, f, r), band by band. Throws std::logic_error if any band weight
// fails to reduce to an integer constant or the weights disagree with the
// closed per-band values.
ConductorBreakdown artin_conductor(const TameParams& params);

// The same sum with q specialized to a concrete prime: exact big-integer
// jump counts per band instead of the reduced symbolic weights.
Rational conductor_total_at(const ConductorBreakdown& b, long q);

// L- and epsilon-data of one parameter under the adjoint representation,
// everything exact in q. gamma_abs is always recomputed as
// eps_abs * l_at_1 / l_at_0, never stored independently.
struct LocalFactorReport {
    RationalFunctionQ l_at_0;    // L(Ad, s) at s = 0
    RationalFunctionQ l_at_1;    // L(Ad, s) at s = 1
    RationalFunctionQ eps_abs;   // |epsilon(Ad, 0)|, a power of q
    RationalFunctionQ gamma_abs; // |gamma(Ad, 0)|
    long conductor = 0;          // conductor of the adjoint
};

// Factors of the principal (Steinberg-type) parameter: the adjoint Frobenius
// acts on the centralizer of a regular nilpotent. The kernel of ad(N0) on
// trace-zero matrices is computed by exact rational elimination, certified to
// be spanned by the powers N0^k with Frobenius eigenvalue q^{-k}, and the
// L-factor is assembled from those certified eigenvalues. |epsilon| is the
// absolute value of the Frobenius determinant on the complement of the kernel.
LocalFactorReport principal_parameter_factors(long n);

// Factors of the tame parameter attached to (n, e, f, r): L from the
// determinant of (I - q^{-s} Frobenius) on the inertia-fixed space of the
// adjoint, |epsilon| = q^{conductor/2} from the band sum.
LocalFactorReport tame_parameter_factors(const TameParams& params);

// Hypothesis of the formal-degree closed form: the level r is at least twice
// the ramification index.
bool formal_degree_hypothesis(const TameParams& params);

// Formal degree of the induced supercuspidal with respect to the
// Euler-Poincare measure, as an exact function of q:
//   q^{(r-1)n(n-1)/2} / normidx * (1 - q^{-n}) / (1 - q^{-f}).
// Recomputed internally along a second route from the finite-level dimension
// divided by the q-volume factor q^{n(n-1)/2} prod_{k<n}(1 - q^{-k});
// throws std::logic_error if the two routes disagree.
RationalFunctionQ formal_degree(const TameParams& params, long normidx);

// Outcome of the gamma-ratio identity check: lhs is
// 1/(normidx * f) * |gamma(phi)| / |gamma(phi0)| assembled from the two
// factor reports, rhs the formal degree. `notes` records any discrepancy
// between the assembled |gamma(phi)| and its closed-form display.
struct HiiVerdict {
    bool holds = false;
    RationalFunctionQ lhs;
    RationalFunctionQ rhs;
    std::string notes;
};

HiiVerdict verify_hii(const TameParams& params, long normidx);

// One cell of the identity sweep: a parameter tuple with its norm index
// gcd(e, m - 1) and the verdict at that cell.
struct HiiSweepCell {
    TameParams params;
    long normidx = 1;
    HiiVerdict verdict;
};

// Symbolic sweep over 2 <= n <= max_n, every factorization n = e * f, every
// admissible relation pair (m, c), and r from 2e to 2e + extra_levels.
std::vector<HiiSweepCell> hii_sweep(long max_n, long extra_levels);

}  // namespace tamedeg
