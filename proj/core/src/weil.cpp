#include "tamedeg/weil.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace tamedeg {

std::pair<long, long> MetacyclicGroup::mul(std::pair<long, long> a, std::pair<long, long> b) const {
    long mj = 1 % e;
    for (long t = 0; t < a.second; ++t) mj = (mj * m) % e;
    long i = (a.first + b.first * mj) % e;
    long j = a.second + b.second;
    if (j >= f) {
        i = (i + c) % e;
        j -= f;
    }
    return {i, j};
}

std::pair<long, long> MetacyclicGroup::inverse(std::pair<long, long> a) const {
    for (long i = 0; i < e; ++i)
        for (long j = 0; j < f; ++j)
            if (mul(a, {i, j}) == std::pair<long, long>{0, 0}) return {i, j};
    throw std::logic_error("metacyclic element has no inverse");
}

MetacyclicGroup build_metacyclic(long e, long f, long m, long c) {
    if (e < 1 || f < 1) throw std::domain_error("e and f must be positive");
    m = ((m % e) + e) % e;
    c = ((c % e) + e) % e;
    if (e == 1) { m = 0; c = 0; }
    if (e > 1 && gcd_long(m, e) != 1) throw std::domain_error("m must be prime to e");
    long mf = 1 % e;
    for (long j = 0; j < f; ++j) mf = (mf * m) % e;
    if (mf != 1 % e) throw std::domain_error("m^f must be 1 mod e");
    if ((c * (m - 1)) % e != 0 && e > 1) throw std::domain_error("c(m-1) must be 0 mod e");
    MetacyclicGroup g{e, f, e == 1 ? 1 : m, c};
    for (long x = 0; x < g.order(); ++x)
        for (long y = 0; y < g.order(); ++y)
            for (long z = 0; z < g.order(); ++z) {
                auto lhs = g.mul(g.mul(g.decode(x), g.decode(y)), g.decode(z));
                auto rhs = g.mul(g.decode(x), g.mul(g.decode(y), g.decode(z)));
                if (lhs != rhs) throw std::logic_error("metacyclic relations are inconsistent");
            }
    return g;
}

AbelianizationResult abelianization(const MetacyclicGroup& g) {
    // commutator subgroup: closure of all [x,y] under multiplication
    std::set<long> sub;
    std::deque<long> queue;
    for (long x = 0; x < g.order(); ++x)
        for (long y = 0; y < g.order(); ++y) {
            auto a = g.decode(x), b = g.decode(y);
            auto comm = g.mul(g.mul(a, b), g.mul(g.inverse(a), g.inverse(b)));
            if (sub.insert(g.code(comm)).second) queue.push_back(g.code(comm));
        }
    while (!queue.empty()) {
        auto a = g.decode(queue.front());
        queue.pop_front();
        for (long s : std::vector<long>(sub.begin(), sub.end())) {
            long prod = g.code(g.mul(a, g.decode(s)));
            if (sub.insert(prod).second) queue.push_back(prod);
        }
    }
    AbelianizationResult res;
    res.commutator_order = static_cast<long>(sub.size());
    if (g.order() % res.commutator_order != 0)
        throw std::logic_error("commutator subgroup order does not divide the group order");
    res.ab_order = g.order() / res.commutator_order;
    if (res.ab_order % g.f != 0)
        throw std::logic_error("abelianization does not surject onto the unramified quotient");
    res.normidx = res.ab_order / g.f;
    return res;
}

long a_theta_count(const MetacyclicGroup& g) { return abelianization(g).ab_order; }

UnitGroupData unit_group_data(const TameRing& ring) {
    UnitGroupData u{ring, {}, {}, {}};
    for (const TameRing::Elt& x : ring.all_elements())
        if (ring.is_unit(x)) u.units.push_back(ring.encode(x));
    EncodedGroup eg;
    eg.elements = u.units;
    eg.identity = ring.encode(ring.one());
    eg.mul = [ring](std::uint64_t a, std::uint64_t b) {
        return ring.encode(ring.mul(ring.decode(a), ring.decode(b)));
    };
    u.s = abelian_structure(eg);
    u.coords = abelian_coordinates(eg, u.s);
    return u;
}

Cyclotomic unit_char_value(const UnitGroupData& u, const AbelianCharacter& chi,
                           const TameRing::Elt& x) {
    return Cyclotomic::zeta(chi.D, chi.value_exponent(u.coords.at(u.ring.encode(x))));
}

AbelianCharacter character_from_generator_exponents(const AbelianStructure& s,
                                                    const std::vector<long>& v) {
    AbelianCharacter chi;
    chi.D = static_cast<long>(s.exponent());
    chi.inv_factors.assign(s.invariant_factors.begin(), s.invariant_factors.end());
    if (v.size() != chi.inv_factors.size())
        throw std::domain_error("one exponent per abelian generator required");
    chi.t.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const long d = chi.inv_factors[i];
        const long step = chi.D / d;
        const long vi = ((v[i] % chi.D) + chi.D) % chi.D;
        if (vi % step != 0)
            throw std::domain_error("exponent incompatible with the generator order");
        chi.t[i] = (vi / step) % d;
    }
    return chi;
}

std::optional<AbelianCharacter> constrained_character(
    const UnitGroupData& u, const std::vector<std::pair<std::uint64_t, long>>& constraints) {
    std::vector<std::vector<long>> ccoords;
    ccoords.reserve(constraints.size());
    for (const auto& [code, exp] : constraints) {
        (void)exp;
        ccoords.push_back(u.coords.at(code));
    }
    for (const AbelianCharacter& chi : all_characters(u.s)) {
        bool ok = true;
        for (std::size_t k = 0; ok && k < constraints.size(); ++k)
            ok = chi.value_exponent(ccoords[k]) ==
                 ((constraints[k].second % chi.D) + chi.D) % chi.D;
        if (ok) return chi;
    }
    return std::nullopt;
}

AbelianCharacter theta_from_beta(const UnitGroupData& u, const BetaData& bd, long r) {
    const TameRing& ring = u.ring;
    const long lp = r / 2;
    const long l = r - lp;
    long plp = 1;
    for (long i = 0; i < lp; ++i) plp *= ring.base().p();
    const long D = static_cast<long>(u.s.exponent());
    if (D % plp != 0)
        throw std::logic_error("unit group exponent lacks the additive character order");
    std::vector<std::pair<std::uint64_t, long>> constraints;
    for (const TameRing::Elt& x : ring.one_plus_ideal(ring.e() * l)) {
        if (ring.norm_base(x) != 1) continue;
        const long ad = beta_additive_exponent(ring, bd.gamma, x, l, lp);
        constraints.push_back({ring.encode(x), ad % plp * (D / plp) % D});
    }
    std::optional<AbelianCharacter> chi = constrained_character(u, constraints);
    if (!chi) throw std::logic_error("no unit character extends the additive character");
    return *chi;
}

bool theta_is_generic(const UnitGroupData& u, const AbelianCharacter& theta) {
    const TameRing& ring = u.ring;
    for (long i = 0; i < ring.e(); ++i)
        for (long j = 0; j < ring.f(); ++j) {
            if (i == 0 && j == 0) continue;
            bool moved = false;
            for (std::uint64_t gcode : u.s.generators) {
                const TameRing::Elt g = ring.decode(gcode);
                const TameRing::Elt gi = ring.galois(g, i, j);
                if (theta.value_exponent(u.coords.at(ring.encode(gi))) !=
                    theta.value_exponent(u.coords.at(gcode))) {
                    moved = true;
                    break;
                }
            }
            if (!moved) return false;
        }
    return true;
}

UnramifiedWeilModel build_unramified_model(long p, long f, long r) {
    BaseRing base(p, r);
    TameRing ring(base, f, 1, 1, 0);
    return UnramifiedWeilModel{unit_group_data(ring), f};
}

long cocycle_exponent(long f, long i, long j) {
    i = ((i % f) + f) % f;
    j = ((j % f) + f) % f;
    return i + j >= f ? 1 : 0;
}

bool cocycle_identity_holds(long f) {
    for (long i = 0; i < f; ++i)
        for (long j = 0; j < f; ++j)
            for (long k = 0; k < f; ++k) {
                const long lhs = cocycle_exponent(f, j, k) + cocycle_exponent(f, i, (j + k) % f);
                const long rhs = cocycle_exponent(f, i, j) + cocycle_exponent(f, (i + j) % f, k);
                if (lhs != rhs) return false;
            }
    return true;
}

ThetaMatrices build_theta_matrices(const UnramifiedWeilModel& w, const WeilTheta& theta) {
    const TameRing& ring = w.units.ring;
    const long f = w.f;
    if (!theta_is_generic(w.units, theta.chi))
        throw std::domain_error("theta is fixed by a nontrivial Galois element");
    ThetaMatrices out;
    out.pi_scalar = Cyclotomic::zeta(theta.pi_order, theta.pi_exp);
    out.sigma = cyc_mat_zero(f);
    for (long j = 0; j + 1 < f; ++j) out.sigma[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(j)] = Cyclotomic(Rational(1));
    out.sigma[0][static_cast<std::size_t>(f - 1)] = out.pi_scalar;
    for (std::uint64_t gcode : w.units.s.generators) {
        CycMat mat = cyc_mat_zero(f);
        const TameRing::Elt g = ring.decode(gcode);
        for (long j = 0; j < f; ++j) {
            const TameRing::Elt gj = ring.galois(g, 0, j);
            mat[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] =
                unit_char_value(w.units, theta.chi, gj);
        }
        out.unit_gens.push_back(mat);
    }
    return out;
}

CycMat theta_unit_action(const UnramifiedWeilModel& w, const WeilTheta& theta,
                         const TameRing::Elt& alpha) {
    const TameRing& ring = w.units.ring;
    CycMat mat = cyc_mat_zero(w.f);
    for (long j = 0; j < w.f; ++j)
        mat[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] =
            unit_char_value(w.units, theta.chi, ring.galois(alpha, 0, j));
    return mat;
}

long centralizer_in_pgl(const UnramifiedWeilModel& w, const WeilTheta& theta) {
    const TameRing& ring = w.units.ring;
    const long f = w.f;
    const long D = static_cast<long>(w.units.s.exponent());
    // exponent of theta at sigma^j(g) for every generator g and 0 <= j < f
    const std::size_t ngen = w.units.s.generators.size();
    std::vector<std::vector<long>> tex(ngen, std::vector<long>(static_cast<std::size_t>(f)));
    std::vector<std::vector<long>> gen_coords(ngen);
    for (std::size_t gi = 0; gi < ngen; ++gi) {
        const TameRing::Elt g = ring.decode(w.units.s.generators[gi]);
        gen_coords[gi] = w.units.coords.at(w.units.s.generators[gi]);
        for (long j = 0; j < f; ++j)
            tex[gi][static_cast<std::size_t>(j)] =
                theta.chi.value_exponent(w.units.coords.at(ring.encode(ring.galois(g, 0, j))));
    }
    ThetaMatrices mats = build_theta_matrices(w, theta);
    // column factors of Theta(sigma): 1 except theta(pi) in the last column
    std::vector<Cyclotomic> col(static_cast<std::size_t>(f), Cyclotomic(Rational(1)));
    col[static_cast<std::size_t>(f - 1)] = mats.pi_scalar;

    long count = 0;
    for (const AbelianCharacter& chi : all_characters(w.units.s)) {
        // zero-pattern: T_{ab} may be nonzero iff theta(sigma^a g) = chi(g) theta(sigma^b g)
        std::vector<bool> diag_ok(static_cast<std::size_t>(f), true);
        for (long d = 0; d < f; ++d)
            for (long b = 0; diag_ok[static_cast<std::size_t>(d)] && b < f; ++b) {
                const long a = (b + d) % f;
                for (std::size_t gi = 0; gi < ngen; ++gi) {
                    const long want = chi.value_exponent(gen_coords[gi]);
                    const long diff = ((tex[gi][static_cast<std::size_t>(a)] -
                                        tex[gi][static_cast<std::size_t>(b)]) % D + D) % D;
                    if (diff != ((want % D) + D) % D) {
                        diag_ok[static_cast<std::size_t>(d)] = false;
                        break;
                    }
                }
            }
        long matched = 0;
        for (long d = 0; d < f; ++d) matched += diag_ok[static_cast<std::size_t>(d)] ? 1 : 0;
        if (matched == 0) continue;
        if (matched > 1)
            throw std::domain_error("centralizer is not finite: theta is not generic");
        long d = 0;
        while (!diag_ok[static_cast<std::size_t>(d)]) ++d;
        for (long k = 0; k < f; ++k) {
            const Cyclotomic zeta = Cyclotomic::zeta(f, k);
            // propagate T psi_j = t_j psi_{j+d} around the sigma relation
            std::vector<Cyclotomic> t(static_cast<std::size_t>(f));
            t[0] = Cyclotomic(Rational(1));
            for (long j = 0; j + 1 < f; ++j)
                t[static_cast<std::size_t>(j + 1)] = t[static_cast<std::size_t>(j)] *
                                                     col[static_cast<std::size_t>((j + d) % f)] *
                                                     (zeta * col[static_cast<std::size_t>(j)]).inverse();
            // closure around the cycle
            const Cyclotomic back = t[static_cast<std::size_t>(f - 1)] *
                                    col[static_cast<std::size_t>((f - 1 + d) % f)] *
                                    (zeta * col[static_cast<std::size_t>(f - 1)]).inverse();
            if (back != t[0]) continue;
            CycMat T = cyc_mat_zero(f);
            for (long j = 0; j < f; ++j)
                T[static_cast<std::size_t>((j + d) % f)][static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j)];
            // exact verification of every generator relation
            bool ok = cyc_mat_equal(cyc_mat_mul(mats.sigma, T), cyc_mat_scale(zeta, cyc_mat_mul(T, mats.sigma)));
            for (std::size_t gi = 0; ok && gi < ngen; ++gi) {
                const Cyclotomic lam = Cyclotomic::zeta(chi.D, chi.value_exponent(gen_coords[gi]));
                ok = cyc_mat_equal(cyc_mat_mul(mats.unit_gens[gi], T),
                               cyc_mat_scale(lam, cyc_mat_mul(T, mats.unit_gens[gi])));
            }
            if (ok) ++count;
        }
    }
    return count;
}

WeilTheta twist_by_base_character(const UnramifiedWeilModel& w, const WeilTheta& theta,
                                  const UnitGroupData& base_units,
                                  const AbelianCharacter& chi_base, long chi_pi_order,
                                  long chi_pi_exp) {
    const TameRing& ring = w.units.ring;
    const long D = static_cast<long>(w.units.s.exponent());
    std::vector<long> v;
    for (std::uint64_t gcode : w.units.s.generators) {
        const TameRing::Elt g = ring.decode(gcode);
        const std::uint64_t ng = ring.norm_base(g);
        const Cyclotomic val =
            Cyclotomic::zeta(theta.chi.D, theta.chi.value_exponent(w.units.coords.at(gcode))) *
            Cyclotomic::zeta(chi_base.D,
                             chi_base.value_exponent(base_units.coords.at(
                                 base_units.ring.encode(base_units.ring.from_base(ng)))));
        const auto root = as_root_of_unity(val);
        if (!root || D % root->order != 0)
            throw std::logic_error("twisted character value is not a unit-group character value");
        v.push_back(root->exp % root->order * (D / root->order) % D);
    }
    WeilTheta out;
    out.chi = character_from_generator_exponents(w.units.s, v);
    // theta'(pi) = theta(pi) * chi(pi)^n with n = f in the unramified case
    Cyclotomic pi_val = Cyclotomic::zeta(theta.pi_order, theta.pi_exp) *
                        Cyclotomic::zeta(chi_pi_order, chi_pi_exp).pow(w.f);
    const auto root = as_root_of_unity(pi_val);
    if (!root) throw std::logic_error("twisted uniformizer value is not a root of unity");
    out.pi_order = root->order;
    out.pi_exp = root->exp;
    return out;
}

bool twist_conjugacy_holds(const UnramifiedWeilModel& w, const WeilTheta& theta,
                           const UnitGroupData& base_units, const AbelianCharacter& chi_base,
                           long chi_pi_order, long chi_pi_exp) {
    const TameRing& ring = w.units.ring;
    const long f = w.f;
    WeilTheta twisted =
        twist_by_base_character(w, theta, base_units, chi_base, chi_pi_order, chi_pi_exp);
    ThetaMatrices a = build_theta_matrices(w, theta);
    ThetaMatrices b = build_theta_matrices(w, twisted);
    // T = diag(chi(gamma(sigma^j))) with gamma(sigma^j) = pi^j
    const Cyclotomic x = Cyclotomic::zeta(chi_pi_order, chi_pi_exp);
    CycMat T = cyc_mat_zero(f);
    CycMat Tinv = cyc_mat_zero(f);
    for (long j = 0; j < f; ++j) {
        T[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = x.pow(j);
        Tinv[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = x.pow(-j);
    }
    // sigma: T^{-1} Theta(sigma) T = chi(pi)^{-1} Theta'(sigma)
    if (!cyc_mat_equal(cyc_mat_mul(Tinv, cyc_mat_mul(a.sigma, T)), cyc_mat_scale(x.inverse(), b.sigma)))
        return false;
    // units: T^{-1} Theta(g) T = chi(N g)^{-1} Theta'(g), evaluated on every generator
    for (std::size_t gi = 0; gi < w.units.s.generators.size(); ++gi) {
        const TameRing::Elt g = ring.decode(w.units.s.generators[gi]);
        const std::uint64_t ng = ring.norm_base(g);
        const Cyclotomic cn = Cyclotomic::zeta(
            chi_base.D, chi_base.value_exponent(base_units.coords.at(
                            base_units.ring.encode(base_units.ring.from_base(ng)))));
        if (!cyc_mat_equal(cyc_mat_mul(Tinv, cyc_mat_mul(a.unit_gens[gi], T)),
                       cyc_mat_scale(cn.inverse(), b.unit_gens[gi])))
            return false;
    }
    return true;
}

InertiaFixedSpace inertia_fixed_space(long e, long f) {
    (void)e;
    InertiaFixedSpace out;
    out.dim = f - 1;
    out.frobenius.assign(static_cast<std::size_t>(f - 1),
                         std::vector<long>(static_cast<std::size_t>(f - 1), 0));
    for (long i = 0; i < f - 1; ++i) {
        out.frobenius[static_cast<std::size_t>(i)][0] = -1;
        if (i + 1 < f - 1) out.frobenius[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)] = 1;
    }
    return out;
}

std::map<long, std::vector<long>> level_structure_check(const UnitGroupData& u,
                                                        const AbelianCharacter& theta) {
    const TameRing& ring = u.ring;
    const long e = ring.e(), f = ring.f(), er = ring.e() * ring.base().r();
    std::map<long, std::vector<long>> out;
    for (long k = 0; k <= e + 1 && er - k >= 1; ++k) {
        std::vector<TameRing::Elt> band = ring.one_plus_ideal(er - k);
        std::vector<long> stab;
        for (long j = 0; j < f; ++j)
            for (long i = 0; i < e; ++i) {
                bool fixes = true;
                for (const TameRing::Elt& x : band) {
                    const TameRing::Elt xt = ring.galois(x, i, j);
                    if (theta.value_exponent(u.coords.at(ring.encode(xt))) !=
                        theta.value_exponent(u.coords.at(ring.encode(x)))) {
                        fixes = false;
                        break;
                    }
                }
                if (fixes) stab.push_back(i + e * j);
            }
        std::sort(stab.begin(), stab.end());
        out[k] = stab;
    }
    return out;
}

}  // namespace tamedeg
