#include "tamedeg/factors.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

#include "tamedeg/clifford.hpp"
#include "tamedeg/weil.hpp"

namespace tamedeg {

namespace {

using RMat = std::vector<std::vector<Rational>>;

// Row echelon form in place; returns the rank and records the pivot column of
// each eliminated row.
long echelon(RMat& a, std::vector<long>* pivots = nullptr) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rank]);
        const Rational inv = 1 / a[rank][c];
        for (std::size_t cc = c; cc < cols; ++cc) a[rank][cc] *= inv;
        for (std::size_t rr = 0; rr < rows; ++rr) {
            if (rr == rank || a[rr][c] == 0) continue;
            const Rational t = a[rr][c];
            for (std::size_t cc = c; cc < cols; ++cc) a[rr][cc] -= t * a[rank][cc];
        }
        if (pivots) pivots->push_back(static_cast<long>(c));
        ++rank;
    }
    return static_cast<long>(rank);
}

// Basis of the right nullspace of a.
std::vector<std::vector<Rational>> nullspace(RMat a) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    std::vector<long> pivots;
    echelon(a, &pivots);
    std::vector<bool> is_pivot(cols, false);
    for (long c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<Rational>> out;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[fc] = 1;
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            v[static_cast<std::size_t>(pivots[pr])] = -a[pr][fc];
        out.push_back(std::move(v));
    }
    return out;
}

long rank_of(RMat a) { return echelon(a); }

RationalFunctionQ rf_det(std::vector<std::vector<RationalFunctionQ>> a) {
    const std::size_t n = a.size();
    RationalFunctionQ det{Rational(1)};
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c].is_zero()) ++piv;
        if (piv == n) return RationalFunctionQ();
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det = det * a[c][c];
        const RationalFunctionQ inv = RationalFunctionQ(Rational(1)) / a[c][c];
        for (std::size_t rr = c + 1; rr < n; ++rr) {
            if (a[rr][c].is_zero()) continue;
            const RationalFunctionQ t = a[rr][c] * inv;
            for (std::size_t cc = c; cc < n; ++cc) a[rr][cc] = a[rr][cc] - t * a[c][cc];
        }
    }
    return det;
}

// Trace-zero basis of n x n matrices: E_ij for i != j in row-major order,
// then the diagonal differences H_k = E_kk - E_{k+1,k+1}. Matrices are flat
// row-major vectors of length n^2.
struct SlBasis {
    long n = 0;
    std::vector<std::vector<Rational>> mats;
    std::vector<long> weight;  // Ad(diag(1, q, ..., q^{n-1})) scales elt by q^weight
};

SlBasis sl_basis(long n) {
    SlBasis b;
    b.n = n;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            if (i == j) continue;
            std::vector<Rational> m(static_cast<std::size_t>(n * n), Rational(0));
            m[static_cast<std::size_t>(i * n + j)] = 1;
            b.mats.push_back(std::move(m));
            b.weight.push_back(i - j);
        }
    for (long k = 0; k + 1 < n; ++k) {
        std::vector<Rational> m(static_cast<std::size_t>(n * n), Rational(0));
        m[static_cast<std::size_t>(k * n + k)] = 1;
        m[static_cast<std::size_t>((k + 1) * n + k + 1)] = -1;
        b.mats.push_back(std::move(m));
        b.weight.push_back(0);
    }
    return b;
}

// Coordinates of a trace-zero flat matrix in the basis above.
std::vector<Rational> sl_coords(const SlBasis& b, const std::vector<Rational>& m) {
    const long n = b.n;
    std::vector<Rational> out;
    out.reserve(b.mats.size());
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            if (i != j) out.push_back(m[static_cast<std::size_t>(i * n + j)]);
    Rational partial(0);
    for (long k = 0; k + 1 < n; ++k) {
        partial += m[static_cast<std::size_t>(k * n + k)];
        out.push_back(partial);
    }
    // Reconstruct and compare: catches a nonzero trace or an indexing slip.
    std::vector<Rational> back(static_cast<std::size_t>(n * n), Rational(0));
    for (std::size_t t = 0; t < b.mats.size(); ++t)
        for (std::size_t c = 0; c < back.size(); ++c) back[c] += out[t] * b.mats[t][c];
    if (back != m) throw std::logic_error("matrix is not in the trace-zero span");
    return out;
}

std::vector<Rational> flat_mul(long n, const std::vector<Rational>& a,
                               const std::vector<Rational>& b) {
    std::vector<Rational> c(static_cast<std::size_t>(n * n), Rational(0));
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k) {
            const Rational& aik = a[static_cast<std::size_t>(i * n + k)];
            if (aik == 0) continue;
            for (long j = 0; j < n; ++j)
                c[static_cast<std::size_t>(i * n + j)] +=
                    aik * b[static_cast<std::size_t>(k * n + j)];
        }
    return c;
}

RationalFunctionQ one_rf() { return RationalFunctionQ(Rational(1)); }

// Closed per-band conductor weight used to cross-check the reduced symbolic
// expression: n^2 - f at the bottom jump, (n^2 - n)/e on the middle bands,
// (n^2 - f e^2)/e at the last partially fixed band, zero above it.
Rational closed_band_weight(long n, long e, long f, long r, long k) {
    if (k == 0) return Rational(n * n - f);
    if (k <= e * (r - 1) - 1) return Rational(n * n - n) / Rational(e);
    if (k == e * (r - 1)) return Rational(n * n - f * e * e) / Rational(e);
    return Rational(0);
}

long band_fixed_dim(long n, long e, long f, long r, long k) {
    if (k == 0) return f - 1;
    if (k <= e * (r - 1) - 1) return n - 1;
    if (k == e * (r - 1)) return f * e * e - 1;
    return n * n - 1;
}

Integer int_pow(long base, long exp) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(exp));
    return out;
}

// p * q^k without the dense convolution of PolyQ::operator*.
PolyQ shift_poly(const PolyQ& p, long k) {
    if (p.is_zero()) return PolyQ();
    std::vector<Rational> c(static_cast<std::size_t>(p.degree() + k + 1), Rational(0));
    for (long i = 0; i <= p.degree(); ++i)
        c[static_cast<std::size_t>(i + k)] = p.coeff(i);
    return PolyQ(std::move(c));
}

}  // namespace

ConductorBreakdown artin_conductor(const TameParams& params) {
    const long n = params.n, e = params.e, f = params.f, r = params.r;
    if (n <= 0 || e <= 0 || f <= 0 || e * f != n || r < 2)
        throw std::domain_error("conductor needs e * f = n and level at least 2");
    ConductorBreakdown out;
    out.params = params;
    const long adim = n * n - 1;
    // |D_0| = e * (number of units of the level-er quotient ring).
    const PolyQ card0_poly =
        Rational(e) * (PolyQ::monomial(n * r) - PolyQ::monomial(n * r - f));
    Rational total(0);
    for (long k = 0; k <= e * r; ++k) {
        ConductorBand band;
        band.k = k;
        band.dim_fixed = band_fixed_dim(n, e, f, r, k);
        const long codim = adim - band.dim_fixed;
        if (k == 0) {
            band.card = RationalFunctionQ(card0_poly, PolyQ(Rational(1)));
            // The bottom subgroup has index 1, so the single jump t = 0
            // contributes its codimension directly.
            band.weight = RationalFunctionQ(Rational(codim));
        } else {
            band.card = RationalFunctionQ::q_pow(n * r - f * k);
            // jumps in the band times the subgroup order times the
            // codimension, divided exactly by |D_0|; the division throws
            // unless the ratio is a polynomial, and a degree check below
            // certifies it is a constant.
            const PolyQ jumps = PolyQ::monomial(f * k) - PolyQ::monomial(f * (k - 1));
            const PolyQ num = shift_poly(jumps, n * r - f * k) * Rational(codim);
            if (num.is_zero()) {
                band.weight = RationalFunctionQ();
            } else {
                const PolyQ w = num / card0_poly;
                if (w.degree() > 0)
                    throw std::logic_error("band weight does not reduce to a constant");
                band.weight = RationalFunctionQ(w.coeff(0));
            }
        }
        const Rational w = band.weight.is_zero() ? Rational(0) : band.weight.num().coeff(0);
        if (w != closed_band_weight(n, e, f, r, k))
            throw std::logic_error("band weight disagrees with its closed value");
        total += w;
        out.bands.push_back(std::move(band));
    }
    if (!is_integer(total)) throw std::logic_error("conductor band sum is not an integer");
    out.total = to_long(total);
    return out;
}

Rational conductor_total_at(const ConductorBreakdown& b, long q) {
    const long n = b.params.n, e = b.params.e, f = b.params.f, r = b.params.r;
    const long adim = n * n - 1;
    // |D_0| = e * (q^{fer} - q^{f(er-1)}) counted directly from the unit group.
    const Rational card0 = Rational(e) * Rational(int_pow(q, f * e * r) - int_pow(q, f * (e * r - 1)));
    Rational total(0);
    for (const ConductorBand& band : b.bands) {
        const long codim = adim - band.dim_fixed;
        if (codim == 0) continue;
        if (band.k == 0) {
            total += Rational(codim);
            continue;
        }
        const Integer jumps = int_pow(q, f * band.k) - int_pow(q, f * (band.k - 1));
        const Integer card = int_pow(q, f * (e * r - band.k));
        total += Rational(jumps * card) / card0 * Rational(codim);
    }
    return total;
}

LocalFactorReport principal_parameter_factors(long n) {
    if (n < 2) throw std::domain_error("principal parameter needs n >= 2");
    const SlBasis basis = sl_basis(n);
    const std::size_t dim = basis.mats.size();

    // Regular nilpotent and its powers.
    std::vector<Rational> n0(static_cast<std::size_t>(n * n), Rational(0));
    for (long i = 0; i + 1 < n; ++i) n0[static_cast<std::size_t>(i * n + i + 1)] = 1;
    std::vector<std::vector<Rational>> n0_pow_coords;
    std::vector<Rational> acc = n0;
    for (long k = 1; k < n; ++k) {
        n0_pow_coords.push_back(sl_coords(basis, acc));
        acc = flat_mul(n, acc, n0);
    }

    // Matrix of ad(N0) on the trace-zero space, columns = bracket coordinates.
    RMat ad(dim, std::vector<Rational>(dim, Rational(0)));
    for (std::size_t j = 0; j < dim; ++j) {
        std::vector<Rational> br = flat_mul(n, n0, basis.mats[j]);
        const std::vector<Rational> rb = flat_mul(n, basis.mats[j], n0);
        for (std::size_t c = 0; c < br.size(); ++c) br[c] -= rb[c];
        const std::vector<Rational> co = sl_coords(basis, br);
        for (std::size_t i = 0; i < dim; ++i) ad[i][j] = co[i];
    }

    const std::vector<std::vector<Rational>> kernel = nullspace(ad);
    if (static_cast<long>(kernel.size()) != n - 1)
        throw std::logic_error("centralizer of the regular nilpotent has the wrong dimension");

    // Certify that the kernel is exactly the span of the nilpotent powers:
    // the powers are independent, annihilated by ad(N0), and adjoining the
    // computed kernel vectors does not grow the span.
    RMat pow_rows;
    for (const auto& co : n0_pow_coords) {
        std::vector<Rational> img(dim, Rational(0));
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) img[i] += ad[i][j] * co[j];
        for (const Rational& v : img)
            if (v != 0) throw std::logic_error("nilpotent power escapes the centralizer");
        pow_rows.push_back(co);
    }
    if (rank_of(pow_rows) != n - 1)
        throw std::logic_error("nilpotent powers are dependent");
    RMat joint = pow_rows;
    for (const auto& v : kernel) joint.push_back(v);
    if (rank_of(joint) != n - 1)
        throw std::logic_error("centralizer is larger than the span of the nilpotent powers");

    // Frobenius acts through conjugation by diag(1, q, ..., q^{n-1}); on the
    // certified basis N0^k this is scaling by q^{-k}, verified entrywise.
    for (long k = 1; k < n; ++k) {
        const std::vector<Rational>& co = n0_pow_coords[static_cast<std::size_t>(k - 1)];
        for (std::size_t t = 0; t < dim; ++t) {
            if (co[t] == 0) continue;
            if (basis.weight[t] != -k)
                throw std::logic_error("Frobenius does not scale a nilpotent power");
        }
    }

    LocalFactorReport rep;
    rep.conductor = 0;  // inertia acts trivially on the principal parameter
    rep.l_at_0 = one_rf();
    rep.l_at_1 = one_rf();
    for (long k = 1; k < n; ++k) {
        rep.l_at_0 = rep.l_at_0 / (one_rf() - RationalFunctionQ::q_pow(-k));
        rep.l_at_1 = rep.l_at_1 / (one_rf() - RationalFunctionQ::q_pow(-(k + 1)));
    }

    // |epsilon| is the Frobenius determinant on the complement of the
    // centralizer: full adjoint determinant over the certified kernel part.
    long full_weight = 0;
    for (long w : basis.weight) full_weight += w;
    long kernel_weight = 0;
    for (long k = 1; k < n; ++k) kernel_weight += -k;
    rep.eps_abs = RationalFunctionQ::q_pow(full_weight - kernel_weight);

    rep.gamma_abs = rep.eps_abs * rep.l_at_1 / rep.l_at_0;
    return rep;
}

LocalFactorReport tame_parameter_factors(const TameParams& params) {
    const long f = params.f;
    const InertiaFixedSpace ifs = inertia_fixed_space(params.e, f);
    if (ifs.dim != f - 1) throw std::logic_error("inertia-fixed space has the wrong dimension");

    LocalFactorReport rep;

    // L(Ad, s)^-1 = det(I - q^{-s} Frobenius) on the inertia-fixed space,
    // evaluated at s = 0 and s = 1.
    const std::size_t d = static_cast<std::size_t>(ifs.dim);
    std::vector<std::vector<RationalFunctionQ>> at0(d, std::vector<RationalFunctionQ>(d));
    std::vector<std::vector<RationalFunctionQ>> at1(d, std::vector<RationalFunctionQ>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const Rational m(ifs.frobenius[i][j]);
            at0[i][j] = RationalFunctionQ((i == j ? Rational(1) : Rational(0)) - m);
            at1[i][j] = (i == j ? one_rf() : RationalFunctionQ()) -
                        RationalFunctionQ::q_pow(-1) * RationalFunctionQ(m);
        }
    rep.l_at_0 = one_rf() / rf_det(at0);
    rep.l_at_1 = one_rf() / rf_det(at1);

    const ConductorBreakdown cond = artin_conductor(params);
    rep.conductor = cond.total;
    if (rep.conductor % 2 != 0) throw std::logic_error("adjoint conductor is odd");
    rep.eps_abs = RationalFunctionQ::q_pow(rep.conductor / 2);

    rep.gamma_abs = rep.eps_abs * rep.l_at_1 / rep.l_at_0;
    return rep;
}

bool formal_degree_hypothesis(const TameParams& params) { return params.r >= 2 * params.e; }

RationalFunctionQ formal_degree(const TameParams& params, long normidx) {
    const long n = params.n, f = params.f, r = params.r;
    if (normidx <= 0) throw std::domain_error("norm index must be positive");
    const RationalFunctionQ closed =
        RationalFunctionQ::q_pow((r - 1) * n * (n - 1) / 2) *
        RationalFunctionQ(Rational(1, normidx)) *
        (one_rf() - RationalFunctionQ::q_pow(-n)) / (one_rf() - RationalFunctionQ::q_pow(-f));

    // Second route: finite-level dimension over the q-volume of the maximal
    // compact modulo its pro-unipotent radical.
    RationalFunctionQ vol = RationalFunctionQ::q_pow(n * (n - 1) / 2);
    for (long k = 1; k < n; ++k) vol = vol * (one_rf() - RationalFunctionQ::q_pow(-k));
    const RationalFunctionQ via_dim = dim_delta_formula(params, normidx) / vol;
    if (!rf_equal(closed, via_dim))
        throw std::logic_error("formal degree routes disagree");
    return closed;
}

HiiVerdict verify_hii(const TameParams& params, long normidx) {
    const long n = params.n, f = params.f;
    const LocalFactorReport principal = principal_parameter_factors(n);
    const LocalFactorReport tame = tame_parameter_factors(params);
    const long a_phi = normidx * f;

    HiiVerdict v;
    v.lhs = tame.gamma_abs / (principal.gamma_abs * RationalFunctionQ(Rational(a_phi)));
    v.rhs = formal_degree(params, normidx);
    v.holds = rf_equal(v.lhs, v.rhs);

    const RationalFunctionQ display =
        RationalFunctionQ::q_pow(tame.conductor / 2) * RationalFunctionQ(Rational(f)) *
        (one_rf() - RationalFunctionQ::q_pow(-n)) / (one_rf() - RationalFunctionQ::q_pow(-f));
    if (!rf_equal(display, tame.gamma_abs)) {
        v.notes =
            "closed-form display of |gamma| disagrees with the value assembled from its "
            "L- and epsilon-constituents; the identity is checked with the assembled value";
    }
    if (!formal_degree_hypothesis(params)) {
        if (!v.notes.empty()) v.notes += "; ";
        v.notes += "level below twice the ramification index: outside the hypothesis of the "
                   "formal-degree formula";
    }
    return v;
}

std::vector<HiiSweepCell> hii_sweep(long max_n, long extra_levels) {
    std::vector<HiiSweepCell> out;
    for (long n = 2; n <= max_n; ++n)
        for (long e = 1; e <= n; ++e) {
            if (n % e != 0) continue;
            const long f = n / e;
            for (const auto& [m, c] : admissible_mc(e, f))
                for (long r = 2 * e; r <= 2 * e + extra_levels; ++r) {
                    HiiSweepCell cell;
                    cell.params.p = 0;  // symbolic q
                    cell.params.n = n;
                    cell.params.e = e;
                    cell.params.f = f;
                    cell.params.r = r;
                    cell.params.m = m;
                    cell.params.c = c;
                    cell.normidx = e == 1 ? 1 : gcd_long(e, ((m - 1) % e + e) % e);
                    cell.verdict = verify_hii(cell.params, cell.normidx);
                    out.push_back(cell);
                }
        }
    return out;
}

}  // namespace tamedeg
