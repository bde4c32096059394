#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>
#include <set>
#include <unordered_set>

#include "tamedeg/abelian.hpp"
#include "tamedeg/beta.hpp"
#include "tamedeg/matgroup.hpp"

using namespace tamedeg;

TEST_CASE("matrix arithmetic over O/p^r") {
    BaseRing base(3, 2);
    MatRing ring(base, 2);
    MatModPR a = ring.from_rows({{1, 2}, {3, 4}});
    MatModPR b = ring.from_rows({{0, 1}, {1, 0}});

    CHECK(ring.mul(a, b).a == ring.from_rows({{2, 1}, {4, 3}}).a);
    CHECK(ring.trace(a) == 5);
    CHECK(ring.det(a) == base.reduce(1 * 4 - 2 * 3));
    CHECK(ring.det(ring.mul(a, b)) == base.mul(ring.det(a), ring.det(b)));
    CHECK(ring.pow(b, 2).a == ring.identity().a);

    // a has det -2, a unit mod 9
    MatModPR ainv = ring.inverse(a);
    CHECK(ring.mul(a, ainv).a == ring.identity().a);
    CHECK(ring.mul(ainv, a).a == ring.identity().a);

    MatModPR sing = ring.from_rows({{3, 0}, {0, 1}});
    CHECK_FALSE(ring.is_invertible(sing));
    CHECK_THROWS_AS(ring.inverse(sing), std::domain_error);

    const std::uint64_t code = ring.encode(a);
    CHECK(ring.decode(code).a == a.a);
}

TEST_CASE("special linear group orders match the reduction fibration") {
    FiniteMatrixGroup g1 = sl_enumerate(2, 3, 1, 1000000);
    CHECK(g1.order() == 24);
    CHECK(sl_group_order(2, 3, 1) == 24);

    FiniteMatrixGroup g2 = sl_enumerate(2, 3, 2, 1000000);
    CHECK(g2.order() == 648);
    CHECK(sl_group_order(2, 3, 2) == 648);

    FiniteMatrixGroup g3 = sl_enumerate(2, 3, 3, 1000000);
    CHECK(g3.order() == 17496);
    CHECK(sl_group_order(2, 3, 3) == 17496);

    FiniteMatrixGroup h = sl_enumerate(3, 3, 1, 1000000);
    CHECK(h.order() == 5616);
    CHECK(sl_group_order(3, 3, 1) == 5616);

    CHECK(sl_group_order(2, 3, 4) == 472392);
    CHECK_THROWS_AS(sl_enumerate(2, 3, 4, 1000), std::length_error);

    // every enumerated element has determinant 1
    for (std::uint64_t code : g2.elements) CHECK(g2.ring.det(g2.ring.decode(code)) == 1);
}

TEST_CASE("conjugacy classes partition the group") {
    FiniteMatrixGroup g = sl_enumerate(2, 3, 2, 1000000);
    materialize_classes(g);
    std::int64_t total = 0;
    for (std::int64_t s : g.class_sizes) total += s;
    CHECK(total == g.order());
    // class of the identity is a singleton, central -id too
    CHECK(g.class_sizes[static_cast<std::size_t>(g.class_of[0])] == 1);
    const std::uint64_t neg_id = g.ring.encode(g.ring.scalar(g.ring.base().reduce(-1)));
    const auto it = g.index.find(neg_id);
    REQUIRE(it != g.index.end());
    CHECK(g.class_sizes[static_cast<std::size_t>(g.class_of[static_cast<std::size_t>(it->second)])] == 1);
    // class sizes divide the group order
    for (std::int64_t s : g.class_sizes) CHECK(g.order() % s == 0);
}

TEST_CASE("congruence subgroups: sizes and truncated-exponential parametrizations") {
    SUBCASE("level 1 in SL_2(Z/9)") {
        BaseRing base(3, 2);
        MatRing ring(base, 2);
        std::vector<std::uint64_t> k1 = congruence_subgroup(ring, 1);
        CHECK(k1.size() == 27);  // p^{(r-l)(n^2-1)}

        // x -> 1 + 3x is an isomorphism from the trace-zero algebra mod 3
        std::vector<MatModPR> lie = sl_lie_enumerate(ring, 1);
        CHECK(lie.size() == 27);
        std::unordered_set<std::uint64_t> image;
        for (const MatModPR& x : lie) image.insert(ring.encode(congruence_exp_ii(ring, x, 1)));
        CHECK(image.size() == 27);
        for (std::uint64_t c : k1) CHECK(image.count(c) == 1);
        for (const MatModPR& x : lie)
            for (const MatModPR& y : lie) {
                MatModPR lhs = ring.mul(congruence_exp_ii(ring, x, 1), congruence_exp_ii(ring, y, 1));
                MatModPR rhs = congruence_exp_ii(ring, ring.add(x, y), 1);
                CHECK(lhs.a == rhs.a);
            }
    }

    SUBCASE("level 2 in SL_2(Z/27)") {
        BaseRing base(3, 3);
        MatRing ring(base, 2);
        std::vector<std::uint64_t> k2 = congruence_subgroup(ring, 2);
        CHECK(k2.size() == 27);
        std::vector<MatModPR> lie = sl_lie_enumerate(ring, 1);
        std::unordered_set<std::uint64_t> image;
        for (const MatModPR& x : lie) image.insert(ring.encode(congruence_exp_ii(ring, x, 2)));
        CHECK(image.size() == 27);
        for (std::uint64_t c : k2) CHECK(image.count(c) == 1);
        for (const MatModPR& x : lie)
            for (const MatModPR& y : lie)
                CHECK(ring.mul(congruence_exp_ii(ring, x, 2), congruence_exp_ii(ring, y, 2)).a ==
                      congruence_exp_ii(ring, ring.add(x, y), 2).a);
    }

    SUBCASE("quadratic truncation hits every element of G(p/p^3)") {
        BaseRing base(3, 3);
        MatRing ring(base, 2);
        std::vector<std::uint64_t> k1 = congruence_subgroup(ring, 1);
        CHECK(k1.size() == 729);
        std::vector<MatModPR> lie = sl_lie_enumerate(ring, 2);  // trace zero mod p^2
        CHECK(lie.size() == 729);
        std::unordered_set<std::uint64_t> image;
        for (const MatModPR& x : lie) {
            MatModPR g = congruence_exp_iii(ring, x, 2);
            CHECK(ring.det(g) == 1);
            image.insert(ring.encode(g));
        }
        CHECK(image.size() == 729);
        for (std::uint64_t c : k1) CHECK(image.count(c) == 1);
    }
}

TEST_CASE("regularity conditions on characteristic polynomials") {
    // t^2 + 1: inert quadratic shape at p = 3, irreducible mod 9
    CHECK(charpoly_inertial_shape({1, 0, 1}, 3, 1, 2));
    CHECK_FALSE(charpoly_inertial_shape({1, 0, 1}, 3, 2, 1));
    CHECK(charpoly_irreducible_mod_psq({1, 0, 1}, 3));
    // t^2 + 3: totally ramified shape, irreducible mod 9
    CHECK(charpoly_inertial_shape({3, 0, 1}, 3, 2, 1));
    CHECK_FALSE(charpoly_inertial_shape({3, 0, 1}, 3, 1, 2));
    CHECK(charpoly_irreducible_mod_psq({3, 0, 1}, 3));
    // t^2 - 1 splits; t^2 - 9 is a square mod 9
    CHECK_FALSE(charpoly_inertial_shape({-1, 0, 1}, 3, 1, 2));
    CHECK_FALSE(charpoly_irreducible_mod_psq({-9, 0, 1}, 3));

    BaseRing base(3, 2);
    MatRing ring(base, 2);
    CHECK_FALSE(matrix_nonderogatory_mod_p(ring, ring.identity()));
    CHECK(matrix_nonderogatory_mod_p(ring, ring.from_rows({{0, -1}, {1, 0}})));
}

TEST_CASE("generator search is deterministic and verified") {
    SUBCASE("unramified quadratic at p = 3") {
        TameParams t;
        t.p = 3; t.n = 2; t.e = 1; t.f = 2; t.r = 2; t.m = 1; t.c = 0; t.w = 1;
        BetaData bd = build_beta(t);
        CHECK(bd.charpoly == std::vector<long>{1, 0, 1});
        CHECK(bd.beta.a == bd.ring.from_rows({{0, -1}, {1, 0}}).a);
        // gamma is a root generating the ring
        TameRing::Elt g2 = bd.ext.mul(bd.gamma, bd.gamma);
        CHECK(bd.ext.equal(g2, bd.ext.neg(bd.ext.one())));
    }

    SUBCASE("ramified quadratic at p = 3, w = -1") {
        TameParams t;
        t.p = 3; t.n = 2; t.e = 2; t.f = 1; t.r = 4; t.m = 1; t.c = 0; t.w = -1;
        BetaData bd = build_beta(t);
        CHECK(bd.charpoly == std::vector<long>{3, 0, 1});
        CHECK(bd.beta.a == bd.ring.from_rows({{0, -3}, {1, 0}}).a);
        TameRing::Elt g2 = bd.ext.mul(bd.gamma, bd.gamma);
        CHECK(bd.ext.equal(g2, bd.ext.neg(bd.ext.from_base(3))));
        CHECK(bd.ext.valuation(bd.gamma) == 1);
    }

    SUBCASE("unramified cubic at p = 5") {
        TameParams t;
        t.p = 5; t.n = 3; t.e = 1; t.f = 3; t.r = 2; t.m = 1; t.c = 0; t.w = 1;
        BetaData bd = build_beta(t);
        CHECK(bd.charpoly == std::vector<long>{1, 1, 0, 1});  // t^3 + t + 1
        // Horner check in the extension ring
        TameRing::Elt v = bd.ext.add(bd.ext.mul(bd.ext.mul(bd.gamma, bd.gamma), bd.gamma),
                                     bd.ext.add(bd.gamma, bd.ext.one()));
        CHECK(bd.ext.is_zero(v));
    }
}

TEST_CASE("centralizer of a regular generator") {
    TameParams t;
    t.p = 3; t.n = 2; t.e = 1; t.f = 2; t.r = 2; t.m = 1; t.c = 0; t.w = 1;
    BetaData bd = build_beta(t);
    FiniteMatrixGroup g = sl_enumerate(2, 3, 2, 1000000);

    std::vector<std::uint64_t> cent = centralizer_of(g, bd.beta);
    CHECK(cent.size() == 12);

    // ring side: norm-one units of the quadratic extension
    std::vector<std::uint64_t> norm_one;
    for (const TameRing::Elt& x : bd.ext.all_elements())
        if (bd.ext.is_unit(x) && bd.ext.norm_base(x) == 1) norm_one.push_back(bd.ext.encode(x));
    CHECK(norm_one.size() == cent.size());

    // identical abelian invariants on both sides
    auto mat_group = [&g](const std::vector<std::uint64_t>& codes) {
        EncodedGroup eg;
        eg.elements = codes;
        eg.identity = g.ring.encode(g.ring.identity());
        eg.mul = [&g](std::uint64_t a, std::uint64_t b) {
            return g.ring.encode(g.ring.mul(g.ring.decode(a), g.ring.decode(b)));
        };
        return abelian_structure(eg);
    };
    EncodedGroup rg;
    rg.elements = norm_one;
    rg.identity = bd.ext.encode(bd.ext.one());
    rg.mul = [&bd](std::uint64_t a, std::uint64_t b) {
        return bd.ext.encode(bd.ext.mul(bd.ext.decode(a), bd.ext.decode(b)));
    };
    CHECK(mat_group(cent).invariant_factors == abelian_structure(rg).invariant_factors);
    CHECK(mat_group(cent).invariant_factors == std::vector<std::int64_t>{12});

    // every matrix commuting with beta (in the full matrix ring) is a polynomial in beta
    std::set<std::vector<std::uint64_t>> commuting;
    const std::uint64_t mod = g.ring.base().mod();
    for (std::uint64_t code = 0; code < mod * mod * mod * mod; ++code) {
        MatModPR x = g.ring.decode(code);
        if (g.ring.equal(g.ring.mul(x, bd.beta), g.ring.mul(bd.beta, x))) commuting.insert(x.a);
    }
    std::set<std::vector<std::uint64_t>> polys;
    for (std::uint64_t a0 = 0; a0 < mod; ++a0)
        for (std::uint64_t a1 = 0; a1 < mod; ++a1)
            polys.insert(g.ring.add(g.ring.scalar(a0), g.ring.scalar_mul(a1, bd.beta)).a);
    CHECK(commuting == polys);
}

TEST_CASE("level stabilizer factorizes through the centralizer") {
    TameParams t;
    t.p = 3; t.n = 2; t.e = 1; t.f = 2; t.r = 2; t.m = 1; t.c = 0; t.w = 1;
    BetaData bd = build_beta(t);
    FiniteMatrixGroup g = sl_enumerate(2, 3, 2, 1000000);

    std::vector<std::uint64_t> stab = ad_stabilizer_mod(g, bd.beta, 1);
    CHECK(stab.size() == 108);
    CHECK(g.order() / static_cast<std::int64_t>(stab.size()) == 6);

    // stab = centralizer * level-1 congruence subgroup
    std::vector<std::uint64_t> cent = centralizer_of(g, bd.beta);
    std::vector<std::uint64_t> k1 = congruence_subgroup(g.ring, 1);
    std::unordered_set<std::uint64_t> product;
    for (std::uint64_t a : cent)
        for (std::uint64_t b : k1)
            product.insert(g.ring.encode(g.ring.mul(g.ring.decode(a), g.ring.decode(b))));
    CHECK(product.size() == stab.size());
    for (std::uint64_t s : stab) CHECK(product.count(s) == 1);
}

TEST_CASE("cartan decomposition") {
    using RatMat = std::vector<std::vector<Rational>>;

    SUBCASE("diagonal example") {
        RatMat a{{rat(9), rat(0)}, {rat(0), rat(1, 9)}};
        CartanDecomposition cd = cartan_decompose(a, 3);
        CHECK(cd.m == std::vector<long>{2, -2});
    }

    SUBCASE("shear with a pole") {
        RatMat a{{rat(1), rat(1, 3)}, {rat(0), rat(1)}};
        CartanDecomposition cd = cartan_decompose(a, 3);
        CHECK(cd.m == std::vector<long>{1, -1});
    }

    SUBCASE("identity") {
        RatMat a{{rat(1), rat(0)}, {rat(0), rat(1)}};
        CartanDecomposition cd = cartan_decompose(a, 3);
        CHECK(cd.m == std::vector<long>{0, 0});
    }

    SUBCASE("singular input is rejected") {
        RatMat a{{rat(1), rat(1)}, {rat(1), rat(1)}};
        CHECK_THROWS_AS(cartan_decompose(a, 3), std::domain_error);
    }

    SUBCASE("random matrices round-trip with exponent sum matching det valuation") {
        std::mt19937 rng(20240811);
        std::uniform_int_distribution<long> num(-20, 20);
        std::uniform_int_distribution<long> den_pow(0, 3);
        long done = 0;
        while (done < 100) {
            const long n = 2 + static_cast<long>(done % 2);
            RatMat a(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
            for (auto& row : a)
                for (auto& x : row) x = rat(num(rng)) / pow_rat(rat(3), den_pow(rng));
            // exact determinant by cofactor expansion
            std::function<Rational(const RatMat&)> det = [&det](const RatMat& m) -> Rational {
                const std::size_t k = m.size();
                if (k == 1) return m[0][0];
                Rational acc(0);
                for (std::size_t j = 0; j < k; ++j) {
                    RatMat minor(k - 1, std::vector<Rational>(k - 1));
                    for (std::size_t i = 1; i < k; ++i) {
                        std::size_t cc = 0;
                        for (std::size_t c = 0; c < k; ++c) {
                            if (c == j) continue;
                            minor[i - 1][cc++] = m[i][c];
                        }
                    }
                    Rational term = m[0][j] * det(minor);
                    acc += (j % 2 == 0) ? term : -term;
                }
                return acc;
            };
            const Rational d = det(a);
            if (d == 0) continue;
            CartanDecomposition cd = cartan_decompose(a, 3);  // self-verifying
            long sum = 0;
            for (long v : cd.m) sum += v;
            CHECK(sum == valuation(d, 3));
            for (std::size_t i = 0; i + 1 < cd.m.size(); ++i) CHECK(cd.m[i] >= cd.m[i + 1]);
            ++done;
        }
    }
}
