#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <unordered_set>

#include "tamedeg/clifford.hpp"

using namespace tamedeg;

namespace {

TameParams unram_level2() {
    TameParams t;
    t.p = 3; t.n = 2; t.e = 1; t.f = 2; t.r = 2; t.m = 1; t.c = 0; t.w = 1;
    return t;
}

TameParams unram_level3() {
    TameParams t = unram_level2();
    t.r = 3;
    return t;
}

TameParams ram_level4() {
    TameParams t;
    t.p = 3; t.n = 2; t.e = 2; t.f = 1; t.r = 4; t.m = 1; t.c = 0; t.w = -1;
    return t;
}

struct Lcg {
    std::uint64_t s = 0x2545F4914F6CDD1DULL;
    std::uint64_t next() { s = s * 6364136223846793005ULL + 1442695040888963407ULL; return s >> 11; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

}  // namespace

TEST_CASE("level character: homomorphism and stabilizer description agree") {
    BetaData bd = build_beta(unram_level2());
    const MatRing& ring = bd.ring;
    PsiBeta psi = make_psi_beta(bd, 2);
    IsotropyData iso = isotropy_group(bd, 2, 5000);

    std::vector<MatModPR> dom;
    for (std::uint64_t code : iso.congruence_l) dom.push_back(ring.decode(code));
    REQUIRE(dom.size() == 27);

    // psi is a character of the level subgroup
    for (const MatModPR& a : dom)
        for (const MatModPR& b : dom) {
            long lhs = psi.exponent(ring.mul(a, b));
            long rhs = (psi.exponent(a) + psi.exponent(b)) % psi.plp;
            CHECK(lhs == rhs);
        }

    // the Ad-congruence stabilizer is exactly the stabilizer of the character
    std::unordered_set<std::uint64_t> stab(iso.stabilizer.begin(), iso.stabilizer.end());
    for (std::uint64_t code : iso.group.elements) {
        MatModPR g = ring.decode(code);
        MatModPR gi = ring.inverse(g);
        bool fixes = true;
        for (const MatModPR& h : dom) {
            if (psi.exponent(ring.mul(ring.mul(g, h), gi)) != psi.exponent(h)) {
                fixes = false;
                break;
            }
        }
        CHECK(fixes == (stab.count(code) == 1));
    }
}

TEST_CASE("isotropy subgroup factors through the commutant at levels 2 and 3") {
    BetaData bd2 = build_beta(unram_level2());
    IsotropyData iso2 = isotropy_group(bd2, 2, 5000);
    CHECK(iso2.group.order() == 648);
    CHECK(iso2.stabilizer.size() == 108);
    CHECK(iso2.group.order() / static_cast<std::int64_t>(iso2.stabilizer.size()) == 6);
    CHECK(iso2.g_beta.size() == 12);
    CHECK(iso2.s.order() == 12);
    CHECK(iso2.overlap_l.size() == 3);
    CHECK(iso2.overlap_l == iso2.overlap_lp);  // l = l' at even level

    BetaData bd3 = build_beta(unram_level3());
    IsotropyData iso3 = isotropy_group(bd3, 3, 50000);
    CHECK(iso3.group.order() == 17496);
    CHECK(iso3.stabilizer.size() == 2916);
    CHECK(iso3.group.order() / static_cast<std::int64_t>(iso3.stabilizer.size()) == 6);
    CHECK(iso3.g_beta.size() == 36);
    CHECK(iso3.s.invariant_factors == std::vector<long>{36});
    CHECK(iso3.overlap_l.size() == 3);
    CHECK(iso3.overlap_lp.size() == 9);
}

TEST_CASE("extensions of the level character to the commutant") {
    BetaData bd = build_beta(unram_level2());
    IsotropyData iso = isotropy_group(bd, 2, 5000);
    std::vector<AbelianCharacter> thetas = theta_extensions(iso);
    CHECK(thetas.size() == 4);  // |G_beta| / |overlap|

    const MatRing& ring = bd.ring;
    for (const AbelianCharacter& th : thetas)
        for (std::uint64_t code : iso.overlap_l) {
            Cyclotomic v = Cyclotomic::zeta(th.D, th.value_exponent(iso.coords.at(code)));
            CHECK(v == iso.psi.value(ring.decode(code)));
        }

    BetaData bd3 = build_beta(unram_level3());
    IsotropyData iso3 = isotropy_group(bd3, 3, 50000);
    CHECK(theta_extensions(iso3).size() == 12);  // 36 / 3
}

TEST_CASE("even level: the extension is a character of the full stabilizer") {
    BetaData bd = build_beta(unram_level2());
    IsotropyData iso = isotropy_group(bd, 2, 5000);
    std::vector<AbelianCharacter> thetas = theta_extensions(iso);
    const MatRing& ring = bd.ring;

    SigmaRep sig = sigma_even(iso, thetas[0]);
    CHECK(sig.dim == 1);
    CHECK(sig.traces.size() == iso.stabilizer.size());

    // multiplicative on the whole stabilizer
    for (std::uint64_t a : iso.stabilizer)
        for (std::uint64_t b : iso.stabilizer) {
            std::uint64_t ab = ring.encode(ring.mul(ring.decode(a), ring.decode(b)));
            CHECK(sig.traces.at(ab) == sig.traces.at(a) * sig.traces.at(b));
        }

    // restricts to psi on the level subgroup
    for (std::uint64_t code : iso.congruence_l)
        CHECK(sig.traces.at(code) == iso.psi.value(ring.decode(code)));
}

TEST_CASE("symplectic module: pairing, polarization, Heisenberg law") {
    BetaData bd = build_beta(unram_level3());
    HeisenbergData h = make_heisenberg(bd);
    CHECK(h.m == 1);
    CHECK(h.inv2 == 2);
    CHECK(h.gbeta_basis.size() == 1);
    CHECK(h.pair(h.wprime_basis[0], h.w_basis[0]) == 1);
    CHECK(h.pair(h.w_basis[0], h.wprime_basis[0]) == 2);  // -1 mod 3

    // coordinates invert the section
    for (long a = 0; a < 3; ++a)
        for (long b = 0; b < 3; ++b) {
            MatModPR x = h.section({a}, {b});
            std::vector<long> gb, wm, wp;
            h.coordinates(x, &gb, &wm, &wp);
            CHECK(gb == std::vector<long>{0});
            CHECK(wm == std::vector<long>{a});
            CHECK(wp == std::vector<long>{b});
        }

    // group law of the Heisenberg model on all 81 pairs of V-points
    const Cyclotomic one{Rational(1)};
    for (long a1 = 0; a1 < 3; ++a1)
        for (long b1 = 0; b1 < 3; ++b1)
            for (long a2 = 0; a2 < 3; ++a2)
                for (long b2 = 0; b2 < 3; ++b2) {
                    CycMat lhs = cyc_mat_mul(schrodinger_op(h, {a1}, {b1}, one),
                                             schrodinger_op(h, {a2}, {b2}, one));
                    long sp = (a1 * b2 - a2 * b1) % 3;      // <u, v> in coordinates
                    long ph = ((h.inv2 * sp) % 3 + 3) % 3;  // tau(<u,v>/2)
                    CycMat rhs = schrodinger_op(h, {(a1 + a2) % 3}, {(b1 + b2) % 3},
                                                Cyclotomic::zeta(3, ph));
                    CHECK(cyc_mat_equal(lhs, rhs));
                }

    // swapped polarization is an equally valid symplectic basis
    HeisenbergData hs = make_heisenberg(bd, true);
    CHECK(hs.pair(hs.wprime_basis[0], hs.w_basis[0]) == 1);
}

TEST_CASE("odd level: projective action, intertwiners, well-definedness") {
    BetaData bd = build_beta(unram_level3());
    IsotropyData iso = isotropy_group(bd, 3, 50000);
    std::vector<AbelianCharacter> thetas = theta_extensions(iso);
    REQUIRE(thetas.size() == 12);
    const MatRing& ring = bd.ring;

    OddLevelModel model;
    SigmaRep sig = sigma_odd(iso, thetas[0], &model);
    CHECK(sig.dim == 3);
    CHECK(sig.traces.at(ring.encode(ring.identity())) == Cyclotomic(Rational(3)));

    // restriction to the deeper level subgroup is psi times the identity
    for (std::uint64_t code : iso.congruence_l) {
        CycMat mat = sigma_odd_matrix(iso, model, code);
        CycMat expect = cyc_mat_scalar(3, iso.psi.value(ring.decode(code)));
        CHECK(cyc_mat_equal(mat, expect));
    }

    // sigma is a homomorphism on the stabilizer (sampled pairs)
    Lcg rng;
    for (int trial = 0; trial < 40; ++trial) {
        std::uint64_t a = iso.stabilizer[rng.below(iso.stabilizer.size())];
        std::uint64_t b = iso.stabilizer[rng.below(iso.stabilizer.size())];
        std::uint64_t ab = ring.encode(ring.mul(ring.decode(a), ring.decode(b)));
        CHECK(cyc_mat_equal(sigma_odd_matrix(iso, model, ab),
                            cyc_mat_mul(sigma_odd_matrix(iso, model, a),
                                        sigma_odd_matrix(iso, model, b))));
    }

    // value independent of the chosen product decomposition
    for (int trial = 0; trial < 25; ++trial) {
        std::uint64_t xcode = iso.stabilizer[rng.below(iso.stabilizer.size())];
        MatModPR x = ring.decode(xcode);
        CycMat ref = sigma_odd_matrix(iso, model, xcode);
        const MatModPR id = ring.identity();
        for (std::uint64_t gcode : iso.g_beta) {
            MatModPR h = ring.mul(ring.inverse(ring.decode(gcode)), x);
            if (!ring.equal_mod(h, id, iso.lp)) continue;
            CycMat alt = cyc_mat_mul(model.left_factor.at(gcode),
                                     pi_beta_theta(iso, model.heis, model.theta, h));
            CHECK(cyc_mat_equal(ref, alt));
        }
    }

    // conjugation relation at the generator of the commutant
    for (std::size_t gi = 0; gi < iso.s.generators.size(); ++gi) {
        MatModPR g = ring.decode(iso.s.generators[gi]);
        MatModPR ginv = ring.inverse(g);
        for (int trial = 0; trial < 20; ++trial) {
            std::uint64_t hcode = iso.congruence_lp[rng.below(iso.congruence_lp.size())];
            MatModPR h = ring.decode(hcode);
            MatModPR conj = ring.mul(ring.mul(ginv, h), g);
            CycMat lhs = cyc_mat_mul(model.u_gens[gi],
                                     pi_beta_theta(iso, model.heis, model.theta, conj));
            CycMat rhs = cyc_mat_mul(pi_beta_theta(iso, model.heis, model.theta, h),
                                     model.u_gens[gi]);
            CHECK(cyc_mat_equal(lhs, rhs));
        }
    }

    // traces do not depend on the polarization used for the model
    OddLevelModel swapped = build_odd_model(iso, thetas[0], true);
    for (std::uint64_t code : iso.stabilizer)
        CHECK(cyc_mat_trace(sigma_odd_matrix(iso, swapped, code)) == sig.traces.at(code));
}

TEST_CASE("induced representation at even level 2: dimension 6, multiplicity one") {
    BetaData bd = build_beta(unram_level2());
    IsotropyData iso = isotropy_group(bd, 2, 5000);
    std::vector<AbelianCharacter> thetas = theta_extensions(iso);

    for (const AbelianCharacter& th : thetas) {
        SigmaRep sig = sigma_even(iso, th);
        DeltaData delta = induce_delta(iso, sig);
        CHECK(delta.group_order == 648);
        CHECK(delta.dim == 6);
        CHECK(delta.orbit_size == 6);
        CHECK(delta.b == 1);
        CHECK(delta.irreducible);
    }
    CHECK(dim_delta_at(unram_level2(), 1, 3) == 6);
}

TEST_CASE("induced representation at odd level 3: dimension 18, multiplicity 3") {
    BetaData bd = build_beta(unram_level3());
    IsotropyData iso = isotropy_group(bd, 3, 50000);
    std::vector<AbelianCharacter> thetas = theta_extensions(iso);

    SigmaRep sig = sigma_odd(iso, thetas[0]);
    DeltaData delta = induce_delta(iso, sig);
    CHECK(delta.group_order == 17496);
    CHECK(delta.dim == 18);
    CHECK(delta.orbit_size == 6);
    CHECK(delta.b == 3);
    CHECK(delta.irreducible);
    CHECK(dim_delta_at(unram_level3(), 1, 3) == 18);

    // restriction law: <delta, g.psi> over the level subgroup equals b for
    // any conjugate of psi by a group element
    const MatRing& ring = bd.ring;
    FiniteMatrixGroup& grp = iso.group;
    Lcg rng;
    for (int trial = 0; trial < 3; ++trial) {
        MatModPR g = ring.decode(grp.elements[rng.below(grp.elements.size())]);
        MatModPR gi = ring.inverse(g);
        Cyclotomic acc;
        for (std::uint64_t code : iso.congruence_l) {
            MatModPR h = ring.decode(code);
            long cls = grp.class_of[static_cast<std::size_t>(grp.index.at(code))];
            acc = acc + delta.class_values[static_cast<std::size_t>(cls)] *
                        iso.psi.value(ring.mul(ring.mul(g, h), gi)).conj();
        }
        CHECK(acc.rational_value() ==
              Rational(3 * static_cast<long>(iso.congruence_l.size())));
    }
}

TEST_CASE("induced representation at ramified level 4: dimension 36") {
    BetaData bd = build_beta(ram_level4());
    IsotropyData iso = isotropy_group(bd, 4, 600000);
    CHECK(iso.group.order() == 472392);
    CHECK(iso.stabilizer.size() == 13122);
    CHECK(iso.g_beta.size() == 162);
    CHECK(iso.overlap_l.size() == 9);

    std::vector<AbelianCharacter> thetas = theta_extensions(iso);
    CHECK(thetas.size() == 18);  // 162 / 9

    SigmaRep sig = sigma_even(iso, thetas[0]);
    DeltaData delta = induce_delta(iso, sig);
    CHECK(delta.group_order == 472392);
    CHECK(delta.dim == 36);
    CHECK(delta.orbit_size == 36);
    CHECK(delta.b == 1);
    CHECK(delta.irreducible);
    CHECK(dim_delta_at(ram_level4(), 2, 3) == 36);
}

TEST_CASE("dimension formula: closed form and integrality") {
    // unramified of full residue degree at level 2: q^{n(n-1)} prod_{k<n} (1 - q^{-k})
    for (long n = 2; n <= 6; ++n) {
        TameParams t;
        t.p = 0; t.n = n; t.e = 1; t.f = n; t.r = 2;
        RationalFunctionQ lhs = dim_delta_formula(t, 1);
        RationalFunctionQ rhs = RationalFunctionQ::q_pow(n * (n - 1));
        for (long k = 1; k < n; ++k)
            rhs = rhs * (RationalFunctionQ(Rational(1)) - RationalFunctionQ::q_pow(-k));
        CHECK(rf_equal(lhs, rhs));
    }

    // integrality across a small sweep of shapes and residue sizes
    for (long n = 2; n <= 4; ++n)
        for (long f = 1; f <= n; ++f) {
            if (n % f != 0) continue;
            long e = n / f;
            for (long r = 2; r <= 6; ++r)
                for (long q : {3L, 5L}) {
                    TameParams t;
                    t.p = q; t.n = n; t.e = e; t.f = f; t.r = r;
                    for (long ni : {1L, e}) {
                        if (ni == 0) continue;
                        Integer v = dim_delta_at(t, ni, q);
                        CHECK(v > 0);
                    }
                }
        }
}

TEST_CASE("power basis transport matches ring and matrix arithmetic") {
    for (int which = 0; which < 2; ++which) {
        TameParams t = which == 0 ? unram_level2() : unram_level3();
        BetaData bd = build_beta(t);
        PowerBasisTransport tr = make_transport(bd);
        const TameRing& ext = bd.ext;
        const MatRing& ring = bd.ring;

        std::vector<TameRing::Elt> all = ext.all_elements();
        CHECK(all.size() == (which == 0 ? 81 : 729));

        for (const TameRing::Elt& x : all) {
            TameRing::Elt back = tr.to_ring(bd, tr.to_matrix(bd, x));
            CHECK(ext.equal(back, x));
        }
        CHECK(ring.equal(tr.to_matrix(bd, ext.one()), ring.identity()));

        Lcg rng;
        for (int trial = 0; trial < 300; ++trial) {
            const TameRing::Elt& x = all[rng.below(all.size())];
            const TameRing::Elt& y = all[rng.below(all.size())];
            CHECK(ring.equal(tr.to_matrix(bd, ext.mul(x, y)),
                             ring.mul(tr.to_matrix(bd, x), tr.to_matrix(bd, y))));
        }

        // norm-one units are carried bijectively onto the commutant subgroup
        IsotropyData iso = isotropy_group(bd, t.r, 50000);
        std::set<std::uint64_t> image;
        for (const TameRing::Elt& x : all) {
            if (!ext.is_unit(x)) continue;
            MatModPR g = tr.to_matrix(bd, x);
            if (ring.det(g) != 1) continue;
            image.insert(ring.encode(g));
        }
        std::set<std::uint64_t> gb(iso.g_beta.begin(), iso.g_beta.end());
        CHECK(image == gb);
    }
}

TEST_CASE("transported level character equals the abstract additive exponent") {
    for (int which = 0; which < 2; ++which) {
        TameParams t = which == 0 ? unram_level2() : ram_level4();
        BetaData bd = build_beta(t);
        PowerBasisTransport tr = make_transport(bd);
        PsiBeta psi = make_psi_beta(bd, t.r);
        const long el = t.e * t.l();

        for (const TameRing::Elt& x : bd.ext.one_plus_ideal(el)) {
            long lhs = beta_additive_exponent(bd.ext, bd.gamma, x, t.l(), t.l_prime());
            long rhs = psi.exponent(tr.to_matrix(bd, x));
            CHECK(lhs == rhs);
        }
    }
}
