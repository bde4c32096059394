#include "tamedeg/clifford.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace tamedeg {

namespace {

long pow_long(long b, long e) {
    long v = 1;
    for (long i = 0; i < e; ++i) v *= b;
    return v;
}

std::vector<long> flat_mod_p(const MatModPR& x, long p) {
    std::vector<long> v(x.a.size());
    for (std::size_t i = 0; i < x.a.size(); ++i) v[i] = static_cast<long>(x.a[i] % p);
    return v;
}

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("not invertible mod p");
    return ((t % p) + p) % p;
}

// Rank of a list of row vectors mod p (destructive on a copy).
long rank_mod_p(std::vector<std::vector<long>> rows, long p) {
    long rank = 0;
    const long cols = rows.empty() ? 0 : static_cast<long>(rows[0].size());
    long row = 0;
    for (long c = 0; c < cols && row < static_cast<long>(rows.size()); ++c) {
        long piv = -1;
        for (long i = row; i < static_cast<long>(rows.size()); ++i)
            if (rows[i][c] % p != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[row], rows[piv]);
        long inv = inv_mod(rows[row][c], p);
        for (long j = 0; j < cols; ++j) rows[row][j] = rows[row][j] * inv % p;
        for (long i = 0; i < static_cast<long>(rows.size()); ++i) {
            if (i == row || rows[i][c] % p == 0) continue;
            long f = rows[i][c] % p;
            for (long j = 0; j < cols; ++j)
                rows[i][j] = ((rows[i][j] - f * rows[row][j]) % p + p) % p;
        }
        ++row; ++rank;
    }
    return rank;
}

// Adjust an entrywise lift so its trace vanishes exactly mod p^r without
// moving the reduction mod p (the correction is p * k * n^{-1} with p | trace).
MatModPR lift_trace_zero(const MatRing& ring, const MatModPR& xp) {
    const long n = ring.n();
    MatModPR x = ring.zero();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) x.at(i, j) = xp.at(i, j);
    std::uint64_t t = ring.trace(x);
    if (t == 0) return x;
    std::uint64_t ninv = ring.base().inv(static_cast<std::uint64_t>(n) % ring.base().mod());
    std::uint64_t adj = ring.base().mul(t, ninv);
    return ring.sub(x, ring.scalar(adj));
}

}  // namespace

long PsiBeta::exponent(const MatModPR& h) const {
    const long n = ring.n();
    const long p = ring.base().p();
    const std::uint64_t pl = static_cast<std::uint64_t>(pow_long(p, l));
    MatModPR x = ring.zero();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            std::uint64_t d = h.at(i, j);
            if (i == j) d = ring.base().sub(d, 1);
            if (d % pl != 0)
                throw std::domain_error("element is not 1 mod p^l");
            x.at(i, j) = d / pl;
        }
    const std::uint64_t q = static_cast<std::uint64_t>(plp);
    std::uint64_t acc = 0;
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k)
            acc = (acc + (x.at(i, k) % q) * (beta.at(k, i) % q)) % q;
    return static_cast<long>(acc);
}

Cyclotomic PsiBeta::value(const MatModPR& h) const {
    return Cyclotomic::zeta(plp, exponent(h));
}

PsiBeta make_psi_beta(const BetaData& bd, long r) {
    if (bd.ring.base().r() != r)
        throw std::logic_error("level does not match the ring the generator was built in");
    PsiBeta psi{bd.ring, bd.beta, r, r - r / 2, r / 2, 1};
    psi.plp = pow_long(bd.ring.base().p(), psi.lp);
    return psi;
}

IsotropyData isotropy_group(const BetaData& bd, long r, std::int64_t budget) {
    const MatRing& ring = bd.ring;
    const long n = ring.n();
    const long p = ring.base().p();
    IsotropyData iso{bd, r, r - r / 2, r / 2, make_psi_beta(bd, r),
                     sl_enumerate(n, p, r, budget), {}, {}, {}, {}, {}, {}, {}, {}};
    iso.stabilizer = ad_stabilizer_mod(iso.group, bd.beta, iso.lp);
    iso.g_beta = centralizer_of(iso.group, bd.beta);
    iso.congruence_lp = congruence_subgroup(ring, iso.lp);
    iso.congruence_l = congruence_subgroup(ring, iso.l);

    const MatModPR id = ring.identity();
    for (std::uint64_t code : iso.g_beta) {
        MatModPR x = ring.decode(code);
        if (ring.equal_mod(x, id, iso.l)) iso.overlap_l.push_back(code);
        if (ring.equal_mod(x, id, iso.lp)) iso.overlap_lp.push_back(code);
    }

    // The stabilizer must factor as G_beta * G(p^{l'}/p^r); anything else
    // means the commutant or the congruence enumeration is broken.
    std::unordered_set<std::uint64_t> stab_set(iso.stabilizer.begin(), iso.stabilizer.end());
    std::unordered_set<std::uint64_t> prod_set;
    std::vector<MatModPR> cong;
    cong.reserve(iso.congruence_lp.size());
    for (std::uint64_t code : iso.congruence_lp) cong.push_back(ring.decode(code));
    for (std::uint64_t gcode : iso.g_beta) {
        MatModPR g = ring.decode(gcode);
        for (const MatModPR& h : cong) {
            std::uint64_t pc = ring.encode(ring.mul(g, h));
            if (stab_set.find(pc) == stab_set.end())
                throw std::logic_error("product decomposition leaves the stabilizer");
            prod_set.insert(pc);
        }
    }
    if (prod_set.size() != stab_set.size())
        throw std::logic_error("stabilizer is larger than the product decomposition");

    EncodedGroup eg;
    eg.elements = iso.g_beta;
    eg.identity = ring.encode(id);
    MatRing rcopy = ring;
    eg.mul = [rcopy](std::uint64_t a, std::uint64_t b) {
        return rcopy.encode(rcopy.mul(rcopy.decode(a), rcopy.decode(b)));
    };
    iso.s = abelian_structure(eg);
    iso.coords = abelian_coordinates(eg, iso.s);
    return iso;
}

std::vector<AbelianCharacter> theta_extensions(const IsotropyData& iso) {
    const MatRing& ring = iso.bd.ring;
    std::vector<AbelianCharacter> out;
    for (const AbelianCharacter& chi : all_characters(iso.s)) {
        bool ok = true;
        for (std::uint64_t code : iso.overlap_l) {
            Cyclotomic lhs = Cyclotomic::zeta(chi.D, chi.value_exponent(iso.coords.at(code)));
            if (lhs != iso.psi.value(ring.decode(code))) { ok = false; break; }
        }
        if (ok) out.push_back(chi);
    }
    if (out.size() * iso.overlap_l.size() != iso.g_beta.size())
        throw std::logic_error("unexpected number of extensions of psi to the commutant");
    return out;
}

SigmaRep sigma_even(const IsotropyData& iso, const AbelianCharacter& theta) {
    const MatRing& ring = iso.bd.ring;
    if (iso.r != 2 * iso.l) throw std::logic_error("one-dimensional extension requires even level");
    SigmaRep sig;
    sig.dim = 1;

    std::vector<MatModPR> ginv;
    std::vector<Cyclotomic> gval;
    ginv.reserve(iso.g_beta.size());
    for (std::uint64_t code : iso.g_beta) {
        ginv.push_back(ring.inverse(ring.decode(code)));
        gval.push_back(Cyclotomic::zeta(theta.D, theta.value_exponent(iso.coords.at(code))));
    }
    const MatModPR id = ring.identity();
    for (std::uint64_t xcode : iso.stabilizer) {
        MatModPR x = ring.decode(xcode);
        bool have = false;
        Cyclotomic val;
        for (std::size_t k = 0; k < ginv.size(); ++k) {
            MatModPR h = ring.mul(ginv[k], x);
            if (!ring.equal_mod(h, id, iso.l)) continue;
            Cyclotomic cand = gval[k] * iso.psi.value(h);
            if (!have) { val = cand; have = true; }
            else if (cand != val)
                throw std::logic_error("extension is not well defined across decompositions");
        }
        if (!have) throw std::logic_error("stabilizer element admits no product decomposition");
        sig.traces.emplace(xcode, val);
    }
    return sig;
}

long HeisenbergData::pair(const MatModPR& u, const MatModPR& v) const {
    MatModPR c = ringp.sub(ringp.mul(u, v), ringp.mul(v, u));
    return static_cast<long>(ringp.trace(ringp.mul(c, beta_p)));
}

void HeisenbergData::coordinates(const MatModPR& x, std::vector<long>* gb,
                                 std::vector<long>* wm, std::vector<long>* wp) const {
    const long ncols = static_cast<long>(solve_rows[0].size());
    const long nrows = static_cast<long>(solve_rows.size());
    std::vector<std::vector<long>> aug(nrows, std::vector<long>(ncols + 1, 0));
    for (long i = 0; i < nrows; ++i) {
        for (long j = 0; j < ncols; ++j) aug[i][j] = solve_rows[i][j];
        aug[i][ncols] = static_cast<long>(x.a[static_cast<std::size_t>(i)] % p);
    }
    std::vector<long> where(ncols, -1);
    long row = 0;
    for (long c = 0; c < ncols && row < nrows; ++c) {
        long piv = -1;
        for (long i = row; i < nrows; ++i)
            if (aug[i][c] % p != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(aug[row], aug[piv]);
        long inv = inv_mod(aug[row][c], p);
        for (long j = 0; j <= ncols; ++j) aug[row][j] = aug[row][j] * inv % p;
        for (long i = 0; i < nrows; ++i) {
            if (i == row || aug[i][c] % p == 0) continue;
            long f = aug[i][c] % p;
            for (long j = 0; j <= ncols; ++j)
                aug[i][j] = ((aug[i][j] - f * aug[row][j]) % p + p) % p;
        }
        where[c] = row;
        ++row;
    }
    for (long i = row; i < nrows; ++i)
        if (aug[i][ncols] % p != 0)
            throw std::logic_error("matrix is outside the span of the symplectic basis");
    std::vector<long> sol(ncols, 0);
    for (long c = 0; c < ncols; ++c) {
        if (where[c] < 0) throw std::logic_error("symplectic basis is not independent");
        sol[c] = aug[where[c]][ncols];
    }
    const long ng = static_cast<long>(gbeta_basis.size());
    gb->assign(sol.begin(), sol.begin() + ng);
    wm->assign(sol.begin() + ng, sol.begin() + ng + m);
    wp->assign(sol.begin() + ng + m, sol.end());
}

MatModPR HeisenbergData::section(const std::vector<long>& wm, const std::vector<long>& wp) const {
    MatModPR acc = ringp.zero();
    for (long i = 0; i < m; ++i) {
        acc = ringp.add(acc, ringp.scalar_mul(static_cast<std::uint64_t>(wm[i]), wprime_basis[i]));
        acc = ringp.add(acc, ringp.scalar_mul(static_cast<std::uint64_t>(wp[i]), w_basis[i]));
    }
    return acc;
}

HeisenbergData make_heisenberg(const BetaData& bd, bool swap_polarization) {
    const long n = bd.ring.n();
    const long p = bd.ring.base().p();
    HeisenbergData hd{p, n, n * (n - 1) / 2, (p + 1) / 2, MatRing(BaseRing(p, 1), n),
                      {}, {}, {}, {}, {}};
    const MatRing& rp = hd.ringp;

    MatModPR bp = rp.zero();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) bp.at(i, j) = bd.beta.at(i, j) % p;
    hd.beta_p = bp;

    const long ninv = inv_mod(n, p);
    std::vector<std::vector<long>> flat_list;
    for (long k = 1; k < n; ++k) {
        MatModPR pk = rp.pow(bp, k);
        long adj = static_cast<long>(rp.trace(pk)) * ninv % p;
        MatModPR bk = rp.sub(pk, rp.scalar(static_cast<std::uint64_t>(adj)));
        hd.gbeta_basis.push_back(bk);
        flat_list.push_back(flat_mod_p(bk, p));
    }
    if (rank_mod_p(flat_list, p) != n - 1)
        throw std::logic_error("powers of the generator are dependent mod p");

    // Trace-zero standard basis: off-diagonal units, then diagonal differences.
    std::vector<MatModPR> std_basis;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            if (i == j) continue;
            MatModPR e = rp.zero();
            e.at(i, j) = 1;
            std_basis.push_back(e);
        }
    for (long k = 0; k + 1 < n; ++k) {
        MatModPR e = rp.zero();
        e.at(k, k) = 1;
        e.at(k + 1, k + 1) = p - 1;
        std_basis.push_back(e);
    }

    std::vector<MatModPR> complement;
    long cur = rank_mod_p(flat_list, p);
    for (const MatModPR& e : std_basis) {
        if (cur == n * n - 1) break;
        flat_list.push_back(flat_mod_p(e, p));
        long nr = rank_mod_p(flat_list, p);
        if (nr > cur) { complement.push_back(e); cur = nr; }
        else flat_list.pop_back();
    }
    if (static_cast<long>(complement.size()) != n * (n - 1))
        throw std::logic_error("complement of the commutant has the wrong dimension");

    // The commutant must sit in the radical of the pairing.
    for (const MatModPR& b : hd.gbeta_basis) {
        for (const MatModPR& v : complement)
            if (hd.pair(b, v) != 0 || hd.pair(v, b) != 0)
                throw std::logic_error("commutant is not in the radical of the pairing");
        for (const MatModPR& v : hd.gbeta_basis)
            if (hd.pair(b, v) != 0)
                throw std::logic_error("commutant is not in the radical of the pairing");
    }
    for (const MatModPR& u : complement) {
        if (hd.pair(u, u) != 0) throw std::logic_error("pairing is not alternating");
        for (const MatModPR& v : complement)
            if ((hd.pair(u, v) + hd.pair(v, u)) % p != 0)
                throw std::logic_error("pairing is not skew");
    }

    // Greedy symplectic basis of the complement.
    std::vector<MatModPR> work = complement;
    while (!work.empty()) {
        MatModPR u = work.front();
        work.erase(work.begin());
        long vi = -1, c = 0;
        for (std::size_t i = 0; i < work.size(); ++i) {
            c = hd.pair(u, work[i]);
            if (c != 0) { vi = static_cast<long>(i); break; }
        }
        if (vi < 0) throw std::logic_error("pairing is degenerate on the complement");
        MatModPR v = rp.scalar_mul(static_cast<std::uint64_t>(inv_mod(c, p)), work[vi]);
        work.erase(work.begin() + vi);
        for (MatModPR& w : work) {
            long a = hd.pair(w, u) % p;            // w += <w,u> v - <w,v> u
            long b = hd.pair(w, v) % p;
            w = rp.add(w, rp.scalar_mul(static_cast<std::uint64_t>(a), v));
            w = rp.sub(w, rp.scalar_mul(static_cast<std::uint64_t>(b), u));
        }
        hd.wprime_basis.push_back(u);
        hd.w_basis.push_back(v);
    }
    if (static_cast<long>(hd.wprime_basis.size()) != hd.m)
        throw std::logic_error("symplectic basis has the wrong size");

    if (swap_polarization) {
        std::swap(hd.wprime_basis, hd.w_basis);
        for (MatModPR& x : hd.w_basis) x = rp.scalar_mul(static_cast<std::uint64_t>(p - 1), x);
    }

    for (long i = 0; i < hd.m; ++i)
        for (long j = 0; j < hd.m; ++j) {
            if (hd.pair(hd.wprime_basis[i], hd.w_basis[j]) != (i == j ? 1 : 0))
                throw std::logic_error("basis is not symplectic");
            if (hd.pair(hd.wprime_basis[i], hd.wprime_basis[j]) != 0 ||
                hd.pair(hd.w_basis[i], hd.w_basis[j]) != 0)
                throw std::logic_error("polarization subspaces are not isotropic");
        }

    hd.solve_rows.assign(static_cast<std::size_t>(n * n),
                         std::vector<long>(static_cast<std::size_t>(n * n - 1), 0));
    std::vector<const MatModPR*> cols;
    for (const MatModPR& b : hd.gbeta_basis) cols.push_back(&b);
    for (const MatModPR& b : hd.wprime_basis) cols.push_back(&b);
    for (const MatModPR& b : hd.w_basis) cols.push_back(&b);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (long i = 0; i < n * n; ++i)
            hd.solve_rows[static_cast<std::size_t>(i)][j] =
                static_cast<long>(cols[j]->a[static_cast<std::size_t>(i)] % p);
    return hd;
}

CycMat schrodinger_op(const HeisenbergData& h, const std::vector<long>& u_wprime,
                      const std::vector<long>& u_w, const Cyclotomic& s) {
    const long p = h.p;
    const long d = pow_long(p, h.m);
    CycMat mat = cyc_mat_zero(d);
    long half = h.inv2;
    long base = 0;
    for (long i = 0; i < h.m; ++i) base = (base + u_wprime[i] * u_w[i]) % p;
    base = base * half % p;
    std::vector<long> w(h.m);
    for (long col = 0; col < d; ++col) {
        long t = col;
        for (long i = 0; i < h.m; ++i) { w[i] = t % p; t /= p; }
        // image point w - u_minus, phase evaluated there
        long row = 0, mult = 1, phase = base;
        for (long i = 0; i < h.m; ++i) {
            long wi = ((w[i] - u_wprime[i]) % p + p) % p;
            row += wi * mult;
            mult *= p;
            phase = (phase + wi * u_w[i]) % p;
        }
        mat[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
            s * Cyclotomic::zeta(p, phase);
    }
    return mat;
}

CycMat pi_beta_theta(const IsotropyData& iso, const HeisenbergData& h,
                     const AbelianCharacter& theta, const MatModPR& hmat) {
    const MatRing& ring = iso.bd.ring;
    const long n = ring.n();
    const long p = ring.base().p();
    if (iso.r != 2 * iso.l - 1)
        throw std::logic_error("projective model requires odd level");
    const std::uint64_t plm1 = static_cast<std::uint64_t>(pow_long(p, iso.l - 1));
    const std::uint64_t pl = plm1 * static_cast<std::uint64_t>(p);

    MatModPR t = ring.zero();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            std::uint64_t d = hmat.at(i, j);
            if (i == j) d = ring.base().sub(d, 1);
            if (d % plm1 != 0)
                throw std::domain_error("element is not congruent to 1 at the required level");
            t.at(i, j) = d / plm1;  // defined mod p^l, canonical already
        }

    std::uint64_t a = 0;
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k)
            a = (a + (t.at(i, k) % pl) * (iso.bd.beta.at(k, i) % pl)) % pl;

    MatModPR tp = h.ringp.zero();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) tp.at(i, j) = t.at(i, j) % p;
    MatModPR t2 = h.ringp.mul(tp, tp);
    long b = static_cast<long>(h.ringp.trace(h.ringp.mul(t2, h.beta_p)));

    Cyclotomic scalar = Cyclotomic::zeta(static_cast<long>(pl), static_cast<long>(a)) *
                        Cyclotomic::zeta(p, ((p - h.inv2 * b % p) % p + p) % p);

    std::vector<long> gb, wm, wp;
    h.coordinates(tp, &gb, &wm, &wp);

    // additive character rho on the commutant part, through a trace-zero lift
    MatModPR x = ring.zero();
    for (long k = 1; k < n; ++k) {
        if (gb[k - 1] == 0) continue;
        MatModPR pk = ring.pow(iso.bd.beta, k);
        std::uint64_t tr = ring.trace(pk);
        std::uint64_t ninv = ring.base().inv(static_cast<std::uint64_t>(n) % ring.base().mod());
        MatModPR bk = ring.sub(pk, ring.scalar(ring.base().mul(tr, ninv)));
        x = ring.add(x, ring.scalar_mul(static_cast<std::uint64_t>(gb[k - 1]), bk));
    }
    MatModPR g = congruence_exp_iii(ring, x, iso.l);
    auto it = iso.coords.find(ring.encode(g));
    if (it == iso.coords.end())
        throw std::logic_error("commutant correction left the commutant subgroup");
    std::uint64_t c = 0;
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k)
            c = (c + (x.at(i, k) % pl) * (iso.bd.beta.at(k, i) % pl)) % pl;
    Cyclotomic rho = Cyclotomic::zeta(static_cast<long>(pl),
                                      static_cast<long>((pl - c) % pl)) *
                     Cyclotomic::zeta(theta.D, theta.value_exponent(it->second));

    return cyc_mat_scale(scalar * rho, schrodinger_op(h, wm, wp, Cyclotomic(Rational(1))));
}

namespace {

// One-dimensional null space of the stacked intertwining equations
// U A_e = B_e U over the cyclotomic field; throws unless the space is a line.
CycMat solve_intertwiner(const std::vector<std::pair<CycMat, CycMat>>& eqs, long d) {
    std::vector<std::vector<Cyclotomic>> rows;
    for (const auto& [a, b] : eqs)
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) {
                std::vector<Cyclotomic> row(static_cast<std::size_t>(d * d));
                for (long k = 0; k < d; ++k) {
                    row[static_cast<std::size_t>(i * d + k)] =
                        row[static_cast<std::size_t>(i * d + k)] + a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                    row[static_cast<std::size_t>(k * d + j)] =
                        row[static_cast<std::size_t>(k * d + j)] - b[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                }
                rows.push_back(std::move(row));
            }
    const long ncols = d * d;
    std::vector<long> pivot_col;
    long row = 0;
    for (long c = 0; c < ncols && row < static_cast<long>(rows.size()); ++c) {
        long piv = -1;
        for (long i = row; i < static_cast<long>(rows.size()); ++i)
            if (!rows[i][static_cast<std::size_t>(c)].is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[static_cast<std::size_t>(row)], rows[static_cast<std::size_t>(piv)]);
        Cyclotomic inv = rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)].inverse();
        for (long j = c; j < ncols; ++j)
            rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
                rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] * inv;
        for (long i = 0; i < static_cast<long>(rows.size()); ++i) {
            if (i == row) continue;
            Cyclotomic f = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            if (f.is_zero()) continue;
            for (long j = c; j < ncols; ++j)
                rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                    f * rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        }
        pivot_col.push_back(c);
        ++row;
    }
    if (static_cast<long>(pivot_col.size()) != ncols - 1)
        throw std::logic_error("intertwining space does not have dimension one");
    std::vector<char> is_piv(static_cast<std::size_t>(ncols), 0);
    for (long c : pivot_col) is_piv[static_cast<std::size_t>(c)] = 1;
    long free_col = -1;
    for (long c = 0; c < ncols; ++c)
        if (!is_piv[static_cast<std::size_t>(c)]) { free_col = c; break; }
    std::vector<Cyclotomic> sol(static_cast<std::size_t>(ncols));
    sol[static_cast<std::size_t>(free_col)] = Cyclotomic(Rational(1));
    for (long i = static_cast<long>(pivot_col.size()) - 1; i >= 0; --i) {
        long c = pivot_col[static_cast<std::size_t>(i)];
        Cyclotomic acc;
        for (long j = c + 1; j < ncols; ++j)
            acc = acc + rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                        sol[static_cast<std::size_t>(j)];
        sol[static_cast<std::size_t>(c)] = -acc;
    }
    CycMat u = cyc_mat_zero(d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                sol[static_cast<std::size_t>(i * d + j)];
    return u;
}

// Scalar lambda with M = lambda * Id; throws if M is not scalar.
Cyclotomic scalar_of(const CycMat& mat) {
    const std::size_t d = mat.size();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if (i != j && !mat[i][j].is_zero())
                throw std::logic_error("matrix is not scalar");
            if (i == j && mat[i][j] != mat[0][0])
                throw std::logic_error("matrix is not scalar");
        }
    return mat[0][0];
}

CycMat cyc_mat_pow(const CycMat& a, long e) {
    CycMat acc = cyc_mat_identity(static_cast<long>(a.size()));
    for (long i = 0; i < e; ++i) acc = cyc_mat_mul(acc, a);
    return acc;
}

}  // namespace

OddLevelModel build_odd_model(const IsotropyData& iso, const AbelianCharacter& theta,
                              bool swap_polarization) {
    const MatRing& ring = iso.bd.ring;
    if (iso.r != 2 * iso.l - 1)
        throw std::logic_error("projective model requires odd level");
    OddLevelModel mdl{make_heisenberg(iso.bd, swap_polarization), theta, {}, {}, {}};
    const long p = ring.base().p();
    const long d = pow_long(p, mdl.heis.m);

    // Cache the projective action on the whole congruence domain; it doubles
    // as the multiplicativity certificate below.
    std::unordered_map<std::uint64_t, CycMat> pi_cache;
    std::vector<MatModPR> dom;
    dom.reserve(iso.congruence_lp.size());
    for (std::uint64_t code : iso.congruence_lp) {
        dom.push_back(ring.decode(code));
        pi_cache.emplace(code, pi_beta_theta(iso, mdl.heis, theta, dom.back()));
    }
    const std::size_t nprobe = std::min<std::size_t>(dom.size(), 8);
    for (std::size_t i = 0; i < nprobe; ++i)
        for (std::size_t j = 0; j < dom.size(); j += 97) {
            std::uint64_t prod = ring.encode(ring.mul(dom[i], dom[j]));
            if (!cyc_mat_equal(pi_cache.at(prod),
                               cyc_mat_mul(pi_cache.at(ring.encode(dom[i])),
                                           pi_cache.at(ring.encode(dom[j])))))
                throw std::logic_error("level action is not multiplicative");
        }

    // Probe equations: images of a trace-zero basis under the cubic section.
    std::vector<MatModPR> probes;
    {
        std::vector<const MatModPR*> basis;
        for (const MatModPR& b : mdl.heis.gbeta_basis) basis.push_back(&b);
        for (const MatModPR& b : mdl.heis.wprime_basis) basis.push_back(&b);
        for (const MatModPR& b : mdl.heis.w_basis) basis.push_back(&b);
        for (const MatModPR* b : basis)
            probes.push_back(congruence_exp_iii(ring, lift_trace_zero(ring, *b), iso.l));
    }

    EncodedGroup eg;
    eg.elements = iso.g_beta;
    eg.identity = ring.encode(ring.identity());
    MatRing rcopy = ring;
    eg.mul = [rcopy](std::uint64_t x, std::uint64_t y) {
        return rcopy.encode(rcopy.mul(rcopy.decode(x), rcopy.decode(y)));
    };

    std::vector<std::vector<CycMat>> upows;
    for (std::size_t gi = 0; gi < iso.s.generators.size(); ++gi) {
        MatModPR g = ring.decode(iso.s.generators[gi]);
        MatModPR ginv = ring.inverse(g);
        std::vector<std::pair<CycMat, CycMat>> eqs;
        for (const MatModPR& hE : probes) {
            MatModPR conj = ring.mul(ring.mul(ginv, hE), g);
            eqs.emplace_back(pi_beta_theta(iso, mdl.heis, theta, conj),
                             pi_cache.at(ring.encode(hE)));
        }
        CycMat u = solve_intertwiner(eqs, d);
        for (const MatModPR& h : dom) {
            MatModPR conj = ring.mul(ring.mul(ginv, h), g);
            if (!cyc_mat_equal(cyc_mat_mul(u, pi_cache.at(ring.encode(conj))),
                               cyc_mat_mul(pi_cache.at(ring.encode(h)), u)))
                throw std::logic_error("intertwiner fails off the probe set");
        }
        const long di = element_order(eg, iso.s.generators[gi]);
        Cyclotomic cpow = scalar_of(cyc_mat_pow(u, di));
        Cyclotomic lambda = kth_root_finite(cpow.inverse(), di);
        u = cyc_mat_scale(lambda, u);
        if (!cyc_mat_equal(cyc_mat_pow(u, di), cyc_mat_identity(d)))
            throw std::logic_error("normalized intertwiner has the wrong order");
        mdl.u_gens.push_back(u);
        std::vector<CycMat> pows(1, cyc_mat_identity(d));
        for (long k = 1; k < di; ++k) pows.push_back(cyc_mat_mul(pows.back(), u));
        upows.push_back(std::move(pows));
    }
    for (std::size_t i = 0; i < mdl.u_gens.size(); ++i)
        for (std::size_t j = i + 1; j < mdl.u_gens.size(); ++j)
            if (!cyc_mat_equal(cyc_mat_mul(mdl.u_gens[i], mdl.u_gens[j]),
                               cyc_mat_mul(mdl.u_gens[j], mdl.u_gens[i])))
                throw std::logic_error("intertwiners at the generators do not commute");

    std::unordered_map<std::uint64_t, CycMat> ufull;
    for (std::uint64_t code : iso.g_beta) {
        const std::vector<long>& cd = iso.coords.at(code);
        CycMat acc = cyc_mat_identity(d);
        for (std::size_t i = 0; i < cd.size(); ++i)
            acc = cyc_mat_mul(acc, upows[i][static_cast<std::size_t>(cd[i])]);
        ufull.emplace(code, std::move(acc));
    }

    // The correcting character: the overlap ratio pi(x) / (theta(x) U(x)) is a
    // character of the overlap subgroup; extend it to the whole commutant.
    const long D = iso.s.exponent();
    std::vector<std::pair<std::vector<long>, long>> constraints;
    for (std::uint64_t code : iso.overlap_lp) {
        CycMat lhs = pi_cache.at(code);
        CycMat rhs = cyc_mat_scale(Cyclotomic::zeta(theta.D, theta.value_exponent(iso.coords.at(code))),
                                   ufull.at(code));
        Cyclotomic ratio;
        bool found = false;
        for (std::size_t i = 0; i < rhs.size() && !found; ++i)
            for (std::size_t j = 0; j < rhs.size() && !found; ++j)
                if (!rhs[i][j].is_zero()) { ratio = lhs[i][j] / rhs[i][j]; found = true; }
        if (!found || !cyc_mat_equal(lhs, cyc_mat_scale(ratio, rhs)))
            throw std::logic_error("overlap ratio is not scalar");
        auto root = as_root_of_unity(ratio);
        if (!root || D % root->order != 0)
            throw std::logic_error("overlap ratio is not a compatible root of unity");
        constraints.emplace_back(iso.coords.at(code), root->exp * (D / root->order) % D);
    }
    bool have_mu = false;
    for (const AbelianCharacter& chi : all_characters(iso.s)) {
        bool ok = true;
        for (const auto& [cd, k] : constraints)
            if (chi.value_exponent(cd) != k) { ok = false; break; }
        if (ok) { mdl.mu = chi; have_mu = true; break; }
    }
    if (!have_mu) throw std::logic_error("no correcting character matches the overlap");

    for (std::uint64_t code : iso.g_beta) {
        const std::vector<long>& cd = iso.coords.at(code);
        long ex = (theta.value_exponent(cd) * (D / theta.D) + mdl.mu.value_exponent(cd)) % D;
        mdl.left_factor.emplace(code, cyc_mat_scale(Cyclotomic::zeta(D, ex), ufull.at(code)));
    }
    for (std::uint64_t code : iso.overlap_lp)
        if (!cyc_mat_equal(mdl.left_factor.at(code), pi_cache.at(code)))
            throw std::logic_error("corrected action disagrees with the level action");
    return mdl;
}

CycMat sigma_odd_matrix(const IsotropyData& iso, const OddLevelModel& model,
                        std::uint64_t code) {
    const MatRing& ring = iso.bd.ring;
    MatModPR x = ring.decode(code);
    const MatModPR id = ring.identity();
    for (std::uint64_t gcode : iso.g_beta) {
        MatModPR h = ring.mul(ring.inverse(ring.decode(gcode)), x);
        if (!ring.equal_mod(h, id, iso.lp)) continue;
        return cyc_mat_mul(model.left_factor.at(gcode),
                           pi_beta_theta(iso, model.heis, model.theta, h));
    }
    throw std::logic_error("element admits no product decomposition");
}

SigmaRep sigma_odd(const IsotropyData& iso, const AbelianCharacter& theta,
                   OddLevelModel* model_out) {
    OddLevelModel mdl = build_odd_model(iso, theta);
    SigmaRep sig;
    sig.dim = pow_long(iso.bd.ring.base().p(), mdl.heis.m);
    for (std::uint64_t code : iso.stabilizer)
        sig.traces.emplace(code, cyc_mat_trace(sigma_odd_matrix(iso, mdl, code)));
    if (model_out) *model_out = std::move(mdl);
    return sig;
}

DeltaData induce_delta(IsotropyData& iso, const SigmaRep& sigma) {
    const MatRing& ring = iso.bd.ring;
    FiniteMatrixGroup& grp = iso.group;
    if (!grp.classes_ready()) materialize_classes(grp);

    std::vector<MatModPR> hdec;
    hdec.reserve(iso.stabilizer.size());
    for (std::uint64_t code : iso.stabilizer) hdec.push_back(ring.decode(code));

    std::vector<MatModPR> reps, repinv;
    std::vector<char> covered(grp.elements.size(), 0);
    for (std::size_t slot = 0; slot < grp.elements.size(); ++slot) {
        if (covered[slot]) continue;
        MatModPR g = ring.decode(grp.elements[slot]);
        reps.push_back(g);
        repinv.push_back(ring.inverse(g));
        for (const MatModPR& h : hdec)
            covered[static_cast<std::size_t>(grp.index.at(ring.encode(ring.mul(g, h))))] = 1;
    }
    if (reps.size() * iso.stabilizer.size() != grp.elements.size())
        throw std::logic_error("coset covering is inconsistent");

    DeltaData delta;
    delta.group_order = Integer(static_cast<long>(grp.order()));
    delta.orbit_size = static_cast<long>(reps.size());

    std::unordered_set<std::uint64_t> hset(iso.stabilizer.begin(), iso.stabilizer.end());
    delta.class_values.resize(grp.class_reps.size());
    for (std::size_t c = 0; c < grp.class_reps.size(); ++c) {
        MatModPR x = ring.decode(grp.elements[static_cast<std::size_t>(grp.class_reps[c])]);
        Cyclotomic acc;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            std::uint64_t y = ring.encode(ring.mul(ring.mul(repinv[i], x), reps[i]));
            if (hset.find(y) != hset.end()) acc = acc + sigma.traces.at(y);
        }
        delta.class_values[c] = acc;
    }

    const long id_class = grp.class_of[0];
    Rational dim_val = delta.class_values[static_cast<std::size_t>(id_class)].rational_value();
    delta.dim = to_long(dim_val);
    if (delta.dim != delta.orbit_size * sigma.dim)
        throw std::logic_error("induced dimension disagrees with the orbit size");

    Cyclotomic norm;
    for (std::size_t c = 0; c < grp.class_reps.size(); ++c)
        norm = norm + delta.class_values[c] * delta.class_values[c].conj() *
                      Rational(static_cast<long>(grp.class_sizes[c]));
    delta.irreducible = (norm.rational_value() == Rational(static_cast<long>(grp.order())));

    Cyclotomic bsum;
    for (std::uint64_t code : iso.congruence_l) {
        long cls = grp.class_of[static_cast<std::size_t>(grp.index.at(code))];
        bsum = bsum + delta.class_values[static_cast<std::size_t>(cls)] *
                      iso.psi.value(ring.decode(code)).conj();
    }
    Rational br = bsum.rational_value() / Rational(static_cast<long>(iso.congruence_l.size()));
    delta.b = to_long(br);
    if (delta.b * delta.orbit_size != delta.dim)
        throw std::logic_error("restriction multiplicity disagrees with the dimension");
    return delta;
}

RationalFunctionQ dim_delta_formula(const TameParams& params, long normidx) {
    const RationalFunctionQ one(Rational(1));
    RationalFunctionQ out =
        RationalFunctionQ::q_pow(params.r * params.n * (params.n - 1) / 2) *
        RationalFunctionQ(Rational(1, normidx));
    for (long k = 1; k <= params.n; ++k)
        out = out * (one - RationalFunctionQ::q_pow(-k));
    return out / (one - RationalFunctionQ::q_pow(-params.f));
}

Integer dim_delta_at(const TameParams& params, long normidx, long q) {
    Rational v = rf_eval(dim_delta_formula(params, normidx), Rational(q));
    if (!is_integer(v)) throw std::domain_error("dimension formula is not integral here");
    return v.get_num();
}

MatModPR PowerBasisTransport::to_matrix(const BetaData& bd, const TameRing::Elt& x) const {
    const long n = nring.n();
    std::vector<std::uint64_t> flat = flatten_coords(bd.ext, x);
    MatModPR g = nring.zero();
    MatModPR bp = nring.identity();
    for (long i = 0; i < n; ++i) {
        std::uint64_t ai = 0;
        for (long j = 0; j < n; ++j)
            ai = nring.base().add(ai, nring.base().mul(minv.at(i, j), flat[static_cast<std::size_t>(j)]));
        g = nring.add(g, nring.scalar_mul(ai, bp));
        bp = nring.mul(bp, bd.beta);
    }
    return g;
}

TameRing::Elt PowerBasisTransport::to_ring(const BetaData& bd, const MatModPR& g) const {
    const long n = nring.n();
    TameRing::Elt x = bd.ext.zero();
    TameRing::Elt pw = bd.ext.one();
    for (long i = 0; i < n; ++i) {
        x = bd.ext.add(x, bd.ext.mul(bd.ext.from_base(g.at(i, 0)), pw));
        pw = bd.ext.mul(pw, bd.gamma);
    }
    return x;
}

PowerBasisTransport make_transport(const BetaData& bd) {
    const MatRing& ring = bd.ring;
    const long n = ring.n();
    MatModPR m = ring.zero();
    TameRing::Elt pw = bd.ext.one();
    for (long j = 0; j < n; ++j) {
        std::vector<std::uint64_t> flat = flatten_coords(bd.ext, pw);
        for (long i = 0; i < n; ++i) m.at(i, j) = flat[static_cast<std::size_t>(i)];
        pw = bd.ext.mul(pw, bd.gamma);
    }
    return PowerBasisTransport{ring, ring.inverse(m)};
}

}  // namespace tamedeg
