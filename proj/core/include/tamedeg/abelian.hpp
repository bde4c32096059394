#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "tamedeg/residue.hpp"

namespace tamedeg {

// A finite abelian group with elements encoded as uint64 keys.
struct EncodedGroup {
    std::vector<std::uint64_t> elements;
    std::uint64_t identity = 0;
    std::function<std::uint64_t(std::uint64_t, std::uint64_t)> mul;
};

// Invariant factors plus an independent generating set, computed without
// discrete logarithms: primary decomposition by powering, then a greedy
// maximal-order basis per p-group with subgroup coordinates maintained
// incrementally. Verified internally (product of factors = order).
AbelianStructure abelian_structure(const EncodedGroup& g);

// Coordinates of every element with respect to the generators:
// x = prod generators[i]^{coords[i]}, coords[i] in [0, d_i).
std::unordered_map<std::uint64_t, std::vector<long>> abelian_coordinates(
    const EncodedGroup& g, const AbelianStructure& s);

std::uint64_t group_pow(const EncodedGroup& g, std::uint64_t a, long e);
long element_order(const EncodedGroup& g, std::uint64_t a);

// Character chi_t of the group: value on an element with coordinates a_i is
// zeta_D^{sum_i t_i (D/d_i) a_i}, D the exponent. Characters are enumerated
// by the tuple t, t_i in [0, d_i).
struct AbelianCharacter {
    long D = 1;
    std::vector<long> inv_factors;
    std::vector<long> t;
    long value_exponent(const std::vector<long>& coords) const {  // mod D
        long acc = 0;
        for (size_t i = 0; i < t.size(); ++i) {
            long term = ((t[i] * (D / inv_factors[i])) % D) * (coords[i] % inv_factors[i]) % D;
            acc = (acc + term) % D;
        }
        return acc;
    }
};

std::vector<AbelianCharacter> all_characters(const AbelianStructure& s);

}  // namespace tamedeg
