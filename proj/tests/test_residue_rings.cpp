#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "tamedeg/abelian.hpp"
#include "tamedeg/cyclotomic.hpp"
#include "tamedeg/residue.hpp"

using namespace tamedeg;

TEST_CASE("base ring Z/p^r") {
    CHECK_THROWS_AS(BaseRing(2, 1), std::domain_error);  // p must be odd
    CHECK_THROWS_AS(BaseRing(9, 1), std::domain_error);  // p must be prime
    BaseRing b(3, 2);
    CHECK(b.mod() == 9);
    CHECK(b.unit_count() == 6);
    CHECK(b.inv(2) == 5);
    CHECK(b.pow(2, 5) == 5);  // 32 mod 9
    CHECK(b.reduce(-1) == 8);
    CHECK_THROWS_AS(b.inv(3), std::domain_error);
}

TEST_CASE("galois ring GR(9, 2)") {
    GaloisRing g(BaseRing(3, 2), 2);
    CHECK(g.size() == 81);
    CHECK(g.unit_count() == 72);
    // first lexicographic irreducible of degree 2 mod 3 is x^2 + 1
    CHECK(g.modulus() == std::vector<std::uint64_t>({1, 0, 1}));
    CHECK(g.mul(g.gen(), g.gen()) == g.from_base(8));  // x^2 = -1

    // Frobenius fixes the base and sends the generator to its conjugate -x
    CHECK(g.frobenius(g.gen()) == g.neg(g.gen()));
    CHECK(g.frobenius(g.from_base(5)) == g.from_base(5));
    CHECK(g.frobenius(g.frobenius(g.add(g.gen(), g.from_base(4)))) ==
          g.add(g.gen(), g.from_base(4)));

    // multiplicative inverse
    auto u = g.add(g.gen(), g.one());
    CHECK(g.mul(u, g.inv(u)) == g.one());
    CHECK_THROWS_AS(g.inv(g.from_base(3)), std::domain_error);
}

TEST_CASE("teichmuller representatives") {
    GaloisRing g(BaseRing(3, 2), 2);
    // the multiplicative lift of 2 in Z/9 is 8 = -1
    CHECK(g.teichmuller(g.from_base(2)) == g.from_base(8));
    auto t = g.teichmuller_generator();
    CHECK(g.pow(t, 8) == g.one());
    CHECK_FALSE(g.pow(t, 4) == g.one());
    CHECK_FALSE(g.pow(t, 2) == g.one());
}

TEST_CASE("abelian structure of encoded groups") {
    // Z/12 under addition
    EncodedGroup c12;
    for (std::uint64_t i = 0; i < 12; ++i) c12.elements.push_back(i);
    c12.identity = 0;
    c12.mul = [](std::uint64_t a, std::uint64_t b) { return (a + b) % 12; };
    auto s12 = abelian_structure(c12);
    CHECK(s12.invariant_factors == std::vector<long>({12}));
    CHECK(s12.order() == 12);

    // Z/2 x Z/4 encoded as a + 2b
    EncodedGroup g24;
    for (std::uint64_t i = 0; i < 8; ++i) g24.elements.push_back(i);
    g24.identity = 0;
    g24.mul = [](std::uint64_t x, std::uint64_t y) {
        std::uint64_t a = (x % 2 + y % 2) % 2;
        std::uint64_t b = (x / 2 + y / 2) % 4;
        return a + 2 * b;
    };
    auto s24 = abelian_structure(g24);
    CHECK(s24.invariant_factors == std::vector<long>({2, 4}));
    CHECK(s24.exponent() == 4);

    auto coords = abelian_coordinates(g24, s24);
    CHECK(coords.size() == 8);
    for (auto& [code, a] : coords) {
        std::uint64_t rebuilt = g24.identity;
        for (size_t i = 0; i < a.size(); ++i)
            rebuilt = g24.mul(rebuilt, group_pow(g24, s24.generators[i], a[i]));
        CHECK(rebuilt == code);
    }

    // nontrivial characters sum to zero over the group
    auto chars = all_characters(s24);
    CHECK(chars.size() == 8);
    for (const auto& ch : chars) {
        bool trivial = true;
        for (long ti : ch.t) trivial = trivial && ti == 0;
        Cyclotomic acc{Rational(0)};
        for (auto& [code, a] : coords)
            acc = acc + Cyclotomic::zeta(ch.D, ch.value_exponent(a));
        if (trivial)
            CHECK(acc.rational_value() == 8);
        else
            CHECK(acc.is_zero());
    }
}

TEST_CASE("unit groups of small rings") {
    // GR(9, 2)^x has order 72 = 8 * 9
    TameRing unram(BaseRing(3, 2), 2, 1, 1);
    auto s = unit_group(unram);
    CHECK(s.order() == 72);
    CHECK(s.invariant_factors == std::vector<long>({3, 24}));

    // (Z/9)[y]/(y^2 - 3): units 54 = 2 * 27, shape Z/2 x Z/9 x Z/3
    TameRing ram(BaseRing(3, 2), 1, 2, 1);
    auto sr = unit_group(ram);
    CHECK(sr.order() == 54);
    CHECK(sr.invariant_factors == std::vector<long>({3, 18}));

    // GR(25, 3)^x = Z/124 x (Z/5)^3
    TameRing big(BaseRing(5, 2), 3, 1, 1);
    auto sb = unit_group(big);
    CHECK(sb.order() == 15500);
    CHECK(sb.invariant_factors == std::vector<long>({5, 5, 620}));
}

TEST_CASE("tame ring arithmetic and valuation") {
    TameRing k(BaseRing(3, 2), 1, 2, 1);  // (Z/9)[y]/(y^2 - 3)
    CHECK(k.size() == 81);
    CHECK(k.mul(k.y(), k.y()) == k.from_base(3));
    CHECK(k.valuation(k.y()) == 1);
    CHECK(k.valuation(k.from_base(3)) == 2);
    auto six_y = k.mul(k.from_base(6), k.y());
    CHECK(k.valuation(six_y) == 3);
    CHECK(k.valuation(k.zero()) == 4);
    CHECK(k.in_ideal(six_y, 3));
    CHECK_FALSE(k.in_ideal(six_y, 4));

    // tau0(y) = -y, so trace(y) = 0 and norm(y) = -y^2 = -3
    CHECK(k.trace_base(k.y()) == 0);
    CHECK(k.norm_base(k.y()) == 6);
    // norm of a base element a is a^n, n = ef = 2
    CHECK(k.norm_base(k.from_base(2)) == 4);

    auto u = k.add(k.one(), k.y());
    CHECK(k.mul(u, k.inv(u)) == k.one());
}

TEST_CASE("principal unit filtration sizes") {
    TameRing k(BaseRing(3, 2), 1, 2, 1);
    CHECK(k.one_plus_ideal(1).size() == 27);
    CHECK(k.one_plus_ideal(2).size() == 9);
    CHECK(k.one_plus_ideal(3).size() == 3);
    CHECK(k.one_plus_ideal(4).size() == 1);
    for (const auto& x : k.one_plus_ideal(2)) CHECK(k.in_ideal(k.sub(x, k.one()), 2));
    // closed under multiplication (subgroup of units)
    auto lvl3 = k.one_plus_ideal(3);
    for (const auto& a : lvl3)
        for (const auto& b : lvl3) {
            auto ab = k.mul(a, b);
            CHECK(k.in_ideal(k.sub(ab, k.one()), 3));
        }
}

TEST_CASE("galois action on tame rings") {
    // GR(9,2)[y]/(y^2 + 3): e = 2 divides p^f - 1 = 8
    TameRing k(BaseRing(3, 2), 2, 2, -1);
    CHECK(k.galois_enabled());
    CHECK(k.n() == 4);
    CHECK(k.size() == 6561);
    CHECK(k.tau0(k.y()) == k.neg(k.y()));
    CHECK(k.tau0(k.from_gr(k.gr().gen())) == k.from_gr(k.gr().gen()));
    CHECK(k.sigma0(k.from_gr(k.gr().gen())) == k.from_gr(k.gr().frobenius(k.gr().gen())));

    // norm of a + by with a, b in the base: (a^2 + 3 b^2)^2
    auto x = k.add(k.one(), k.y());
    CHECK(k.norm_base(x) == 7);  // (1 + 3)^2 = 16
    CHECK(k.trace_base(x) == 4);  // 4 * 1 + 0

    // relations sigma tau sigma^{-1} = tau^m, sigma^f = tau^c (here m = 1, c = 0)
    CHECK(k.derived_m() == 1);
    CHECK(k.derived_c() == 0);

    // a ramified cubic-over-quadratic example with nontrivial twisting:
    // e = 8 | 3^2 - 1, c' = 1 gives m = 3, c = 4
    TameRing tw(BaseRing(3, 1), 2, 8, 1, 1);
    CHECK(tw.galois_enabled());
    CHECK(tw.derived_m() == 3);
    CHECK(tw.derived_c() == 4);
    auto g = tw.add(tw.y(), tw.from_gr(tw.gr().gen()));
    auto lhs = tw.sigma0(tw.tau0(g));
    auto rhs = tw.tau0(tw.tau0(tw.tau0(tw.sigma0(g))));
    CHECK(lhs == rhs);
    // sigma0^f agrees with tau0^c on the uniformizer
    auto sf = tw.sigma0(tw.sigma0(tw.y()));
    auto tc = tw.galois(tw.y(), tw.derived_c(), 0);
    CHECK(sf == tc);
}

TEST_CASE("norm index inside the base units") {
    // unramified: norms of units are all units
    CHECK(norm_index(TameRing(BaseRing(3, 2), 2, 1, 1)) == 1);
    // ramified quadratic: index 2
    CHECK(norm_index(TameRing(BaseRing(3, 2), 1, 2, 1)) == 2);
    // totally ramified quartic over Z/5: index 4
    CHECK(norm_index(TameRing(BaseRing(5, 1), 1, 4, 1)) == 4);
}
