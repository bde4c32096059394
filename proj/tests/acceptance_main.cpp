// Acceptance gate: every criterion of the verification suite, one line each.
// Exit status 0 only if all criteria pass. Time limits are enforced, not
// merely reported.

#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tamedeg/beta.hpp"
#include "tamedeg/clifford.hpp"
#include "tamedeg/factors.hpp"
#include "tamedeg/report.hpp"
#include "tamedeg/residue.hpp"
#include "tamedeg/weil.hpp"

using namespace tamedeg;

namespace {

using clock_type = std::chrono::steady_clock;

long ms_since(clock_type::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clock_type::now() - t0)
        .count();
}

TameParams make_params(long p, long n, long e, long f, long r, long w = 1) {
    TameParams t;
    t.p = p;
    t.n = n;
    t.e = e;
    t.f = f;
    t.r = r;
    t.w = w;
    if (p != 0 && e > 1) t.m = p % e;
    return t;
}

RationalFunctionQ one() { return RationalFunctionQ(Rational(1)); }

// Gamma-ratio identity as an exact rational-function identity on every
// admissible cell with n <= 6, r in [2e, 2e+3].
bool criterion_identity_sweep(std::string& detail) {
    const auto t0 = clock_type::now();
    const std::vector<HiiSweepCell> cells = hii_sweep(6, 3);
    bool ok = cells.size() == 132;
    for (const HiiSweepCell& cell : cells) ok = ok && cell.verdict.holds;
    const long ms = ms_since(t0);
    std::ostringstream os;
    os << cells.size() << " cells, " << ms << " ms";
    detail = os.str();
    return ok && ms < 5000;
}

// Formal degree: the closed form must equal the dimension route on the same
// sweep (checked inside formal_degree), with two concrete spot values.
bool criterion_formal_degree(std::string& detail) {
    try {
        for (const HiiSweepCell& cell : hii_sweep(6, 3))
            formal_degree(cell.params, cell.normidx);
    } catch (const std::exception& ex) {
        detail = std::string("route mismatch: ") + ex.what();
        return false;
    }
    const Rational spot1 = rf_eval(formal_degree(make_params(3, 2, 1, 2, 2), 1), Rational(3));
    const Rational spot2 =
        rf_eval(formal_degree(make_params(3, 2, 2, 1, 4, -1), 2), Rational(3));
    std::ostringstream os;
    os << "spots " << spot1.get_str() << " and " << spot2.get_str();
    detail = os.str();
    return spot1 == Rational(3) && spot2 == Rational(18);
}

// One explicit construction of the induced representation.
bool brute_instance(const TameParams& t, long expected_dim, long budget, long limit_ms,
                    std::ostringstream& os) {
    const auto t0 = clock_type::now();
    const BetaData bd = build_beta(t, budget);
    IsotropyData iso = isotropy_group(bd, t.r, budget);
    const std::vector<AbelianCharacter> thetas = theta_extensions(iso);
    const SigmaRep sigma = t.r % 2 == 0 ? sigma_even(iso, thetas.front())
                                        : sigma_odd(iso, thetas.front());
    const DeltaData delta = induce_delta(iso, sigma);
    const long ms = ms_since(t0);
    os << " dim " << delta.dim << " in " << ms << " ms;";
    return delta.dim == expected_dim && delta.irreducible && ms < limit_ms;
}

bool criterion_brute_dimensions(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    ok = brute_instance(make_params(3, 2, 1, 2, 2), 6, 1000000, 5000, os) && ok;
    ok = brute_instance(make_params(3, 2, 1, 2, 3), 18, 1000000, 5000, os) && ok;
    ok = brute_instance(make_params(3, 2, 2, 1, 4, -1), 36, 1000000, 120000, os) && ok;
    detail = os.str();
    return ok;
}

bool criterion_conductor(std::string& detail) {
    const auto t0 = clock_type::now();
    bool ok = true;
    long cases = 0;
    for (long n = 2; n <= 8 && ok; ++n)
        for (long e = 1; e <= n && ok; ++e) {
            if (n % e != 0) continue;
            for (long r = 2; r <= 12 && ok; ++r) {
                const ConductorBreakdown b = artin_conductor(make_params(0, n, e, n / e, r));
                ok = ok && b.total == r * n * (n - 1);
                for (long q : {3L, 5L, 7L})
                    ok = ok && conductor_total_at(b, q) == Rational(b.total);
                ++cases;
            }
        }
    const long ms = ms_since(t0);
    std::ostringstream os;
    os << cases << " tuples, " << ms << " ms";
    detail = os.str();
    return ok && ms < 1000;
}

bool criterion_centralizer(std::string& detail) {
    const auto t0 = clock_type::now();
    const UnramifiedWeilModel w2 = build_unramified_model(3, 2, 2);
    const BetaData bd2 = build_beta(make_params(3, 2, 1, 2, 2));
    const long a2 = centralizer_in_pgl(w2, WeilTheta{theta_from_beta(w2.units, bd2, 2), 1, 0});

    const UnramifiedWeilModel w3 = build_unramified_model(5, 3, 2);
    const BetaData bd3 = build_beta(make_params(5, 3, 1, 3, 2));
    const long a3 = centralizer_in_pgl(w3, WeilTheta{theta_from_beta(w3.units, bd3, 2), 1, 0});
    const long ms = ms_since(t0);
    std::ostringstream os;
    os << "|A| = " << a2 << " (n=2), " << a3 << " (n=3), " << ms << " ms";
    detail = os.str();
    return a2 == 2 && a3 == 3 && ms < 30000;
}

bool criterion_norm_index(std::string& detail) {
    const std::vector<TameParams> instances = {
        make_params(3, 2, 1, 2, 2),      make_params(3, 2, 1, 2, 3),
        make_params(3, 2, 2, 1, 4, -1),  make_params(5, 2, 1, 2, 2),
        make_params(7, 2, 1, 2, 2),      make_params(5, 2, 2, 1, 4),
        make_params(3, 3, 1, 3, 2),      make_params(7, 3, 3, 1, 2),
    };
    bool ok = true;
    std::ostringstream os;
    for (const TameParams& t : instances) {
        const TameRing ring(BaseRing(t.p, t.r), t.f, t.e, t.w,
                            t.e > 1 ? derive_cprime_for(t) : 0);
        const long ring_side = norm_index(ring);
        const long galois_side =
            abelianization(build_metacyclic(t.e, t.f, ring.derived_m(), ring.derived_c()))
                .normidx;
        if (ring_side != galois_side) ok = false;
        os << " " << ring_side << (ring_side == galois_side ? "=" : "!=") << galois_side;
    }
    detail = "ring=galois per instance:" + os.str();
    return ok;
}

bool criterion_level_bands(std::string& detail) {
    BetaData bd2 = build_beta(make_params(3, 2, 1, 2, 2));
    UnitGroupData u2 = unit_group_data(bd2.ext);
    const auto bands2 = level_structure_check(u2, theta_from_beta(u2, bd2, 2));
    bool ok = bands2.size() == 2 && bands2.at(0) == std::vector<long>{0, 1} &&
              bands2.at(1) == std::vector<long>{0};

    BetaData bd4 = build_beta(make_params(3, 2, 2, 1, 4, -1));
    UnitGroupData u4 = unit_group_data(bd4.ext);
    const auto bands4 = level_structure_check(u4, theta_from_beta(u4, bd4, 4));
    ok = ok && bands4.size() == 4;
    for (long k = 0; ok && k <= 2; ++k) ok = bands4.at(k) == std::vector<long>{0, 1};
    ok = ok && bands4.at(3) == std::vector<long>{0};

    detail = "unramified level 2 and ramified level 4 stabilizer bands";
    return ok;
}

bool criterion_structural(std::string& detail) {
    // det(I - Q M) on the inertia-fixed space is the length-f geometric sum.
    bool ok = true;
    for (long f = 1; f <= 12 && ok; ++f) {
        const InertiaFixedSpace ifs = inertia_fixed_space(1, f);
        const std::size_t d = static_cast<std::size_t>(ifs.dim);
        std::vector<std::vector<RationalFunctionQ>> a(
            d, std::vector<RationalFunctionQ>(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                a[i][j] = (i == j ? one() : RationalFunctionQ()) -
                          RationalFunctionQ::variable() *
                              RationalFunctionQ(Rational(ifs.frobenius[i][j]));
        // determinant by elimination over the rational-function field
        RationalFunctionQ det = one();
        for (std::size_t c = 0; c < d; ++c) {
            std::size_t piv = c;
            while (piv < d && a[piv][c].is_zero()) ++piv;
            if (piv == d) {
                det = RationalFunctionQ();
                break;
            }
            if (piv != c) {
                std::swap(a[piv], a[c]);
                det = -det;
            }
            det = det * a[c][c];
            for (std::size_t rr = c + 1; rr < d; ++rr) {
                if (a[rr][c].is_zero()) continue;
                const RationalFunctionQ fac = a[rr][c] / a[c][c];
                for (std::size_t cc = c; cc < d; ++cc)
                    a[rr][cc] = a[rr][cc] - fac * a[c][cc];
            }
        }
        RationalFunctionQ geo;
        for (long k = 0; k < f; ++k) geo = geo + RationalFunctionQ::q_pow(k);
        ok = ok && rf_equal(det, geo);
    }

    // Kernel of ad(N0) with its Frobenius eigenvalues, certified inside
    // principal_parameter_factors; the L-value shape confirms q^{-1}..q^{-(n-1)}.
    for (long n = 2; n <= 6 && ok; ++n) {
        try {
            const LocalFactorReport rep = principal_parameter_factors(n);
            RationalFunctionQ l0 = one();
            for (long k = 1; k < n; ++k) l0 = l0 / (one() - RationalFunctionQ::q_pow(-k));
            ok = ok && rf_equal(rep.l_at_0, l0);
        } catch (const std::exception&) {
            ok = false;
        }
    }
    detail = "geometric-sum determinant f <= 12; nilpotent centralizer n <= 6";
    return ok;
}

bool criterion_hypothesis_only(std::string& detail) {
    // Supercuspidality of the compactly induced representation is out of
    // scope (infinite group); the suite carries only its hypothesis r >= 2e.
    bool ok = formal_degree_hypothesis(make_params(0, 2, 1, 2, 2));
    ok = ok && formal_degree_hypothesis(make_params(0, 2, 2, 1, 4));
    ok = ok && !formal_degree_hypothesis(make_params(0, 2, 2, 1, 3));
    const HiiVerdict low = verify_hii(make_params(0, 2, 2, 1, 3), 2);
    ok = ok && low.notes.find("hypothesis") != std::string::npos;
    detail = "hypothesis check r >= 2e; the theorem itself is out of scope";
    return ok;
}

struct Criterion {
    int id;
    const char* label;
    bool (*run)(std::string&);
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "gamma-ratio identity sweep, exact in q", criterion_identity_sweep},
        {2, "formal degree closed form vs dimension route", criterion_formal_degree},
        {3, "induced-representation dimensions by explicit construction",
         criterion_brute_dimensions},
        {4, "conductor band sum r n (n-1), symbolic and concrete", criterion_conductor},
        {5, "component group by brute centralizer search", criterion_centralizer},
        {6, "ring-side norm index equals Galois-side index", criterion_norm_index},
        {7, "character level bands and Galois stabilizers", criterion_level_bands},
        {8, "structural linear algebra identities", criterion_structural},
        {9, "supercuspidality hypothesis check only", criterion_hypothesis_only},
    };

    bool all_ok = true;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        all_ok = all_ok && ok;
        std::cout << "criterion " << c.id << " [" << (ok ? "PASS" : "FAIL") << "] "
                  << c.label << (detail.empty() ? "" : " -- " + detail) << "\n";
    }
    std::cout << (all_ok ? "ACCEPTANCE: all criteria pass" : "ACCEPTANCE: FAILURES above")
              << "\n";
    return all_ok ? 0 : 1;
}
