#include "tamedeg/abelian.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace tamedeg {

std::uint64_t group_pow(const EncodedGroup& g, std::uint64_t a, long e) {
    std::uint64_t acc = g.identity;
    std::uint64_t b = a;
    while (e > 0) {
        if (e & 1) acc = g.mul(acc, b);
        b = g.mul(b, b);
        e >>= 1;
    }
    return acc;
}

long element_order(const EncodedGroup& g, std::uint64_t a) {
    long n = static_cast<long>(g.elements.size());
    // order divides |G|; find it from the factorization of |G|
    long ord = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        while (m % p == 0) m /= p;
        while (ord % p == 0 && group_pow(g, a, ord / p) == g.identity) ord /= p;
    }
    if (m > 1)
        while (ord % m == 0 && group_pow(g, a, ord / m) == g.identity) ord /= m;
    return ord;
}

namespace {

// Basis of the p-primary part given as an element list (with multiplicities
// collapsed). Returns generators with orders descending.
struct PrimaryBasis {
    std::vector<std::uint64_t> gens;
    std::vector<long> orders;  // p-powers, descending
};

PrimaryBasis primary_basis(const EncodedGroup& g, const std::vector<std::uint64_t>& part, long p) {
    PrimaryBasis basis;
    // coords of the subgroup generated so far
    std::unordered_map<std::uint64_t, std::vector<long>> sub;
    sub[g.identity] = {};
    auto p_order = [&](std::uint64_t x) {
        long o = 1;
        std::uint64_t cur = x;
        while (cur != g.identity) {
            cur = group_pow(g, cur, p);
            o *= p;
        }
        return o;
    };
    while (sub.size() < part.size()) {
        // element with maximal order in the quotient by the current subgroup
        std::uint64_t best = g.identity;
        long best_k = 0;
        for (std::uint64_t x : part) {
            if (sub.count(x)) continue;
            long k = 1;
            std::uint64_t cur = x;
            while (!sub.count(cur)) {
                cur = group_pow(g, cur, p);
                k *= p;
            }
            if (k > best_k || (k == best_k && x < best)) {
                best_k = k;
                best = x;
            }
        }
        if (best_k <= 1) throw std::runtime_error("abelian basis: no progress");
        // correct so the new generator meets the subgroup trivially
        std::uint64_t xk = group_pow(g, best, best_k);
        const std::vector<long>& tc = sub.at(xk);
        std::uint64_t corrected = best;
        for (size_t i = 0; i < tc.size(); ++i) {
            if (tc[i] == 0) continue;
            if (tc[i] % best_k != 0)
                throw std::runtime_error("abelian basis: purity violated");
            long adj = basis.orders[i] - tc[i] / best_k;  // exponent of g_i^{-t/k}
            corrected = g.mul(corrected, group_pow(g, basis.gens[i], adj % basis.orders[i]));
        }
        if (group_pow(g, corrected, best_k) != g.identity)
            throw std::runtime_error("abelian basis: correction failed");
        if (p_order(corrected) != best_k)
            throw std::runtime_error("abelian basis: unexpected corrected order");
        basis.gens.push_back(corrected);
        basis.orders.push_back(best_k);
        // extend subgroup coordinates
        std::unordered_map<std::uint64_t, std::vector<long>> bigger;
        bigger.reserve(sub.size() * static_cast<size_t>(best_k));
        for (const auto& [elt, coords] : sub) {
            std::uint64_t cur = elt;
            for (long j = 0; j < best_k; ++j) {
                std::vector<long> c = coords;
                c.push_back(j);
                auto [it, fresh] = bigger.emplace(cur, std::move(c));
                if (!fresh) throw std::runtime_error("abelian basis: not independent");
                cur = g.mul(cur, corrected);
            }
        }
        sub = std::move(bigger);
    }
    return basis;
}

}  // namespace

AbelianStructure abelian_structure(const EncodedGroup& g) {
    long n = static_cast<long>(g.elements.size());
    std::map<long, long> fact;  // p -> p^a
    long m = n;
    for (long p = 2; p * p <= m; ++p)
        while (m % p == 0) {
            fact[p] = fact.count(p) ? fact[p] * p : p;
            m /= p;
        }
    if (m > 1) fact[m] = fact.count(m) ? fact[m] * m : m;

    // primary parts: image of x -> x^{n / p^a}
    std::map<long, PrimaryBasis> bases;
    for (auto [p, pa] : fact) {
        std::unordered_set<std::uint64_t> seen;
        std::vector<std::uint64_t> part;
        for (std::uint64_t x : g.elements) {
            std::uint64_t y = group_pow(g, x, n / pa);
            if (seen.insert(y).second) part.push_back(y);
        }
        std::sort(part.begin(), part.end());
        bases[p] = primary_basis(g, part, p);
    }

    // combine slot-wise (largest orders together) into invariant factors
    size_t slots = 0;
    for (auto& [p, b] : bases) slots = std::max(slots, b.gens.size());
    std::vector<long> factors;
    std::vector<std::uint64_t> gens;
    for (size_t s = 0; s < slots; ++s) {
        long d = 1;
        std::uint64_t gen = g.identity;
        for (auto& [p, b] : bases) {
            if (s < b.gens.size()) {
                d *= b.orders[s];
                gen = g.mul(gen, b.gens[s]);
            }
        }
        factors.push_back(d);
        gens.push_back(gen);
    }
    // present ascending: d_1 | d_2 | ... | d_k
    std::reverse(factors.begin(), factors.end());
    std::reverse(gens.begin(), gens.end());
    AbelianStructure s{factors, gens};
    if (s.order() != n) throw std::runtime_error("abelian structure: order mismatch");
    for (size_t i = 0; i + 1 < factors.size(); ++i)
        if (factors[i + 1] % factors[i] != 0)
            throw std::runtime_error("abelian structure: divisibility violated");
    for (size_t i = 0; i < gens.size(); ++i)
        if (element_order(g, gens[i]) != factors[i])
            throw std::runtime_error("abelian structure: generator order mismatch");
    return s;
}

std::unordered_map<std::uint64_t, std::vector<long>> abelian_coordinates(
    const EncodedGroup& g, const AbelianStructure& s) {
    std::unordered_map<std::uint64_t, std::vector<long>> coord;
    coord.reserve(g.elements.size());
    coord[g.identity] = std::vector<long>(s.invariant_factors.size(), 0);
    for (size_t i = 0; i < s.generators.size(); ++i) {
        std::unordered_map<std::uint64_t, std::vector<long>> bigger;
        bigger.reserve(coord.size() * static_cast<size_t>(s.invariant_factors[i]));
        for (const auto& [elt, c] : coord) {
            std::uint64_t cur = elt;
            for (long j = 0; j < s.invariant_factors[i]; ++j) {
                std::vector<long> cc = c;
                cc[i] = j;
                bigger.emplace(cur, std::move(cc));
                cur = g.mul(cur, s.generators[i]);
            }
        }
        coord = std::move(bigger);
    }
    if (coord.size() != g.elements.size())
        throw std::runtime_error("abelian coordinates: size mismatch");
    return coord;
}

std::vector<AbelianCharacter> all_characters(const AbelianStructure& s) {
    std::vector<AbelianCharacter> chars;
    long total = s.order();
    chars.reserve(static_cast<size_t>(total));
    std::vector<long> t(s.invariant_factors.size(), 0);
    for (long idx = 0; idx < total; ++idx) {
        AbelianCharacter ch;
        ch.D = s.invariant_factors.empty() ? 1 : s.invariant_factors.back();
        ch.inv_factors = s.invariant_factors;
        ch.t = t;
        chars.push_back(ch);
        for (size_t i = 0; i < t.size(); ++i) {
            if (++t[i] < s.invariant_factors[i]) break;
            t[i] = 0;
        }
    }
    return chars;
}

}  // namespace tamedeg
