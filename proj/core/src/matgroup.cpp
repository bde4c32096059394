#include "tamedeg/matgroup.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tamedeg {

namespace {

long checked_mul_fits(long base, long n2) {
    // digits of size `base`, n2 of them; require base^n2 < 2^62
    long double bits = n2 * std::log2(static_cast<long double>(base));
    return bits < 62.0L ? 1 : 0;
}

}  // namespace

MatRing::MatRing(BaseRing base, long n) : base_(base), n_(n) {
    if (n < 1) throw std::domain_error("matrix dimension must be positive");
}

MatModPR MatRing::zero() const {
    MatModPR m;
    m.n = n_;
    m.a.assign(static_cast<std::size_t>(n_ * n_), 0);
    return m;
}

MatModPR MatRing::identity() const {
    MatModPR m = zero();
    for (long i = 0; i < n_; ++i) m.at(i, i) = 1 % base_.mod();
    return m;
}

MatModPR MatRing::scalar(std::uint64_t c) const {
    MatModPR m = zero();
    for (long i = 0; i < n_; ++i) m.at(i, i) = c % base_.mod();
    return m;
}

MatModPR MatRing::from_rows(const std::vector<std::vector<long>>& rows) const {
    if (static_cast<long>(rows.size()) != n_) throw std::domain_error("row count mismatch");
    MatModPR m = zero();
    for (long i = 0; i < n_; ++i) {
        if (static_cast<long>(rows[i].size()) != n_) throw std::domain_error("column count mismatch");
        for (long j = 0; j < n_; ++j) m.at(i, j) = base_.reduce(rows[i][j]);
    }
    return m;
}

MatModPR MatRing::add(const MatModPR& x, const MatModPR& y) const {
    MatModPR m = x;
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = base_.add(m.a[k], y.a[k]);
    return m;
}

MatModPR MatRing::sub(const MatModPR& x, const MatModPR& y) const {
    MatModPR m = x;
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = base_.sub(m.a[k], y.a[k]);
    return m;
}

MatModPR MatRing::neg(const MatModPR& x) const {
    MatModPR m = x;
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = base_.neg(m.a[k]);
    return m;
}

MatModPR MatRing::mul(const MatModPR& x, const MatModPR& y) const {
    MatModPR m = zero();
    const std::uint64_t mod = base_.mod();
    for (long i = 0; i < n_; ++i)
        for (long k = 0; k < n_; ++k) {
            const std::uint64_t xik = x.at(i, k);
            if (xik == 0) continue;
            for (long j = 0; j < n_; ++j)
                m.at(i, j) = (m.at(i, j) + xik * y.at(k, j)) % mod;
        }
    return m;
}

MatModPR MatRing::scalar_mul(std::uint64_t c, const MatModPR& x) const {
    MatModPR m = x;
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = base_.mul(c % base_.mod(), m.a[k]);
    return m;
}

MatModPR MatRing::pow(const MatModPR& x, long k) const {
    if (k < 0) throw std::domain_error("negative matrix power");
    MatModPR acc = identity();
    MatModPR b = x;
    while (k > 0) {
        if (k & 1) acc = mul(acc, b);
        b = mul(b, b);
        k >>= 1;
    }
    return acc;
}

std::uint64_t MatRing::trace(const MatModPR& x) const {
    std::uint64_t t = 0;
    for (long i = 0; i < n_; ++i) t = base_.add(t, x.at(i, i));
    return t;
}

std::uint64_t MatRing::det(const MatModPR& x) const {
    // Bareiss fraction-free elimination over exact integers, then reduce.
    std::vector<std::vector<Integer>> a(static_cast<std::size_t>(n_),
                                        std::vector<Integer>(static_cast<std::size_t>(n_)));
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j < n_; ++j) a[i][j] = Integer(static_cast<unsigned long>(x.at(i, j)));
    Integer prev(1);
    int sign = 1;
    for (long k = 0; k + 1 < n_; ++k) {
        if (a[k][k] == 0) {
            long swap_row = -1;
            for (long i = k + 1; i < n_; ++i)
                if (a[i][k] != 0) { swap_row = i; break; }
            if (swap_row < 0) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (long i = k + 1; i < n_; ++i)
            for (long j = k + 1; j < n_; ++j) {
                Integer num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                a[i][j] = num / prev;  // exact by Bareiss
            }
        prev = a[k][k];
    }
    Integer d = a[static_cast<std::size_t>(n_ - 1)][static_cast<std::size_t>(n_ - 1)];
    if (sign < 0) d = -d;
    Integer mod(static_cast<unsigned long>(base_.mod()));
    Integer res;
    mpz_fdiv_r(res.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
    return res.get_ui();
}

bool MatRing::is_invertible(const MatModPR& x) const { return det(x) % base_.p() != 0; }

MatModPR MatRing::inverse(const MatModPR& x) const {
    // Gauss-Jordan over O/p^r; a unit pivot exists in every step iff det is a unit.
    const std::uint64_t mod = base_.mod();
    std::vector<std::vector<std::uint64_t>> a(static_cast<std::size_t>(n_),
                                              std::vector<std::uint64_t>(static_cast<std::size_t>(2 * n_), 0));
    for (long i = 0; i < n_; ++i) {
        for (long j = 0; j < n_; ++j) a[i][j] = x.at(i, j);
        a[i][static_cast<std::size_t>(n_ + i)] = 1 % mod;
    }
    for (long col = 0; col < n_; ++col) {
        long piv = -1;
        for (long i = col; i < n_; ++i)
            if (base_.is_unit(a[i][col])) { piv = i; break; }
        if (piv < 0) throw std::domain_error("matrix is not invertible mod p^r");
        std::swap(a[col], a[piv]);
        const std::uint64_t inv_p = base_.inv(a[col][col]);
        for (long j = 0; j < 2 * n_; ++j) a[col][j] = (a[col][j] * inv_p) % mod;
        for (long i = 0; i < n_; ++i) {
            if (i == col || a[i][col] == 0) continue;
            const std::uint64_t c = a[i][col];
            for (long j = 0; j < 2 * n_; ++j)
                a[i][j] = base_.sub(a[i][j], (c * a[col][j]) % mod);
        }
    }
    MatModPR inv = zero();
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j < n_; ++j) inv.at(i, j) = a[i][static_cast<std::size_t>(n_ + j)];
    return inv;
}

bool MatRing::equal_mod(const MatModPR& x, const MatModPR& y, long k) const {
    std::uint64_t pk = 1;
    for (long i = 0; i < k; ++i) pk *= static_cast<std::uint64_t>(base_.p());
    for (std::size_t t = 0; t < x.a.size(); ++t)
        if (x.a[t] % pk != y.a[t] % pk) return false;
    return true;
}

bool MatRing::encodable() const { return checked_mul_fits(base_.mod(), n_ * n_) == 1; }

std::uint64_t MatRing::encode(const MatModPR& x) const {
    const std::uint64_t mod = base_.mod();
    std::uint64_t code = 0;
    for (std::size_t k = x.a.size(); k-- > 0;) code = code * mod + x.a[k];
    return code;
}

MatModPR MatRing::decode(std::uint64_t code) const {
    const std::uint64_t mod = base_.mod();
    MatModPR m = zero();
    for (std::size_t k = 0; k < m.a.size(); ++k) {
        m.a[k] = code % mod;
        code /= mod;
    }
    return m;
}

FiniteMatrixGroup bfs_closure(const MatRing& ring, std::vector<MatModPR> gens,
                              std::int64_t budget) {
    if (!ring.encodable()) throw std::length_error("matrix codes exceed 64-bit capacity");
    FiniteMatrixGroup g{ring, std::move(gens), {}, {}, {}, {}, {}};
    const std::uint64_t id = ring.encode(ring.identity());
    g.elements.push_back(id);
    g.index.emplace(id, 0);
    std::deque<std::uint64_t> queue{id};
    while (!queue.empty()) {
        const MatModPR cur = ring.decode(queue.front());
        queue.pop_front();
        for (const MatModPR& s : g.gens) {
            const std::uint64_t next = ring.encode(ring.mul(cur, s));
            if (g.index.emplace(next, static_cast<std::int32_t>(g.elements.size())).second) {
                g.elements.push_back(next);
                if (static_cast<std::int64_t>(g.elements.size()) > budget)
                    throw std::length_error("group enumeration exceeds budget");
                queue.push_back(next);
            }
        }
    }
    return g;
}

FiniteMatrixGroup sl_enumerate(long n, long p, long r, std::int64_t budget) {
    BaseRing base(p, r);
    MatRing ring(base, n);
    std::vector<MatModPR> gens;
    for (long i = 0; i + 1 < n; ++i) {
        MatModPR a = ring.identity();
        a.at(i, i + 1) = 1;
        gens.push_back(a);
        MatModPR b = ring.identity();
        b.at(i + 1, i) = 1;
        gens.push_back(b);
    }
    FiniteMatrixGroup g = bfs_closure(ring, gens, budget);
    return g;
}

Integer sl_group_order(long n, long p, long r) {
    Integer q(p);
    Integer sl1(1);
    // |SL_n(F_p)| = p^{n(n-1)/2} * prod_{k=2}^{n} (p^k - 1)
    Integer ppow;
    mpz_pow_ui(ppow.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n * (n - 1) / 2));
    sl1 = ppow;
    for (long k = 2; k <= n; ++k) {
        Integer t;
        mpz_pow_ui(t.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k));
        sl1 *= (t - 1);
    }
    Integer lift;
    mpz_pow_ui(lift.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>((r - 1) * (n * n - 1)));
    return sl1 * lift;
}

void materialize_classes(FiniteMatrixGroup& g) {
    if (g.classes_ready()) return;
    const MatRing& ring = g.ring;
    std::vector<MatModPR> conjugators;
    for (const MatModPR& s : g.gens) {
        conjugators.push_back(s);
        conjugators.push_back(ring.inverse(s));
    }
    g.class_of.assign(g.elements.size(), -1);
    for (std::size_t start = 0; start < g.elements.size(); ++start) {
        if (g.class_of[start] >= 0) continue;
        const std::int32_t cid = static_cast<std::int32_t>(g.class_reps.size());
        g.class_reps.push_back(static_cast<std::int32_t>(start));
        std::int64_t size = 0;
        std::deque<std::int32_t> queue{static_cast<std::int32_t>(start)};
        g.class_of[start] = cid;
        while (!queue.empty()) {
            const MatModPR cur = ring.decode(g.elements[static_cast<std::size_t>(queue.front())]);
            queue.pop_front();
            ++size;
            for (std::size_t c = 0; c + 1 < conjugators.size(); c += 2) {
                const MatModPR conj = ring.mul(ring.mul(conjugators[c], cur), conjugators[c + 1]);
                const auto it = g.index.find(ring.encode(conj));
                if (it == g.index.end())
                    throw std::logic_error("conjugate escaped the group");
                if (g.class_of[static_cast<std::size_t>(it->second)] < 0) {
                    g.class_of[static_cast<std::size_t>(it->second)] = cid;
                    queue.push_back(it->second);
                }
            }
        }
        g.class_sizes.push_back(size);
    }
}

std::vector<MatModPR> sl_lie_enumerate(const MatRing& ring, long k) {
    std::uint64_t pk = 1;
    for (long i = 0; i < k; ++i) pk *= static_cast<std::uint64_t>(ring.base().p());
    const long n = ring.n();
    const long free_slots = n * n - 1;
    if (free_slots * std::log2(static_cast<double>(pk)) > 22.0)
        throw std::length_error("Lie algebra enumeration exceeds budget");
    std::vector<MatModPR> out;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(free_slots), 0);
    while (true) {
        MatModPR m = ring.zero();
        std::uint64_t diag_sum = 0;
        std::size_t slot = 0;
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                if (i == n - 1 && j == n - 1) continue;
                m.at(i, j) = digits[slot++];
                if (i == j) diag_sum += m.at(i, j);
            }
        m.at(n - 1, n - 1) = (pk - diag_sum % pk) % pk;
        out.push_back(m);
        std::size_t carry = 0;
        while (carry < digits.size()) {
            if (++digits[carry] < pk) break;
            digits[carry++] = 0;
        }
        if (carry == digits.size()) break;
    }
    return out;
}

std::vector<std::uint64_t> congruence_subgroup(const MatRing& ring, long l) {
    const long r = ring.base().r();
    const long p = ring.base().p();
    if (l < 1 || l > r) throw std::domain_error("congruence level out of range");
    std::uint64_t pl = 1;
    for (long i = 0; i < l; ++i) pl *= static_cast<std::uint64_t>(p);
    std::uint64_t prl = 1;
    for (long i = 0; i < r - l; ++i) prl *= static_cast<std::uint64_t>(p);
    const long n = ring.n();
    const long slots = n * n;
    if (slots * std::log2(static_cast<double>(prl)) > 22.0)
        throw std::length_error("congruence subgroup enumeration exceeds budget");
    std::vector<std::uint64_t> out;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(slots), 0);
    const std::uint64_t one = 1;
    while (true) {
        MatModPR m = ring.identity();
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                m.at(i, j) = (m.at(i, j) + pl * digits[static_cast<std::size_t>(i * n + j)]) %
                             ring.base().mod();
        if (ring.det(m) == one % ring.base().mod()) out.push_back(ring.encode(m));
        std::size_t carry = 0;
        while (carry < digits.size()) {
            if (++digits[carry] < prl) break;
            digits[carry++] = 0;
        }
        if (carry == digits.size()) break;
    }
    return out;
}

MatModPR congruence_exp_ii(const MatRing& ring, const MatModPR& x, long l) {
    std::uint64_t pl = 1;
    for (long i = 0; i < l; ++i) pl *= static_cast<std::uint64_t>(ring.base().p());
    MatModPR m = ring.identity();
    for (std::size_t k = 0; k < m.a.size(); ++k)
        m.a[k] = (m.a[k] + pl % ring.base().mod() * x.a[k]) % ring.base().mod();
    return m;
}

MatModPR congruence_exp_iii(const MatRing& ring, const MatModPR& x, long l) {
    const long p = ring.base().p();
    std::uint64_t pl1 = 1;
    for (long i = 0; i < l - 1; ++i) pl1 *= static_cast<std::uint64_t>(p);
    std::uint64_t p2l2 = 1;
    for (long i = 0; i < 2 * l - 2; ++i) p2l2 *= static_cast<std::uint64_t>(p);
    const std::uint64_t mod = ring.base().mod();
    const std::uint64_t half = ring.base().inv(2 % mod);
    MatModPR x2 = ring.mul(x, x);
    MatModPR m = ring.identity();
    for (std::size_t k = 0; k < m.a.size(); ++k) {
        std::uint64_t v = m.a[k];
        v = (v + (pl1 % mod) * x.a[k]) % mod;
        v = (v + ((p2l2 % mod) * half % mod) * x2.a[k]) % mod;
        m.a[k] = v;
    }
    return m;
}

std::vector<std::uint64_t> centralizer_of(const FiniteMatrixGroup& g, const MatModPR& beta) {
    std::vector<std::uint64_t> out;
    for (const std::uint64_t code : g.elements) {
        const MatModPR x = g.ring.decode(code);
        if (g.ring.equal(g.ring.mul(x, beta), g.ring.mul(beta, x))) out.push_back(code);
    }
    return out;
}

std::vector<std::uint64_t> ad_stabilizer_mod(const FiniteMatrixGroup& g, const MatModPR& beta,
                                             long k) {
    std::vector<std::uint64_t> out;
    for (const std::uint64_t code : g.elements) {
        const MatModPR x = g.ring.decode(code);
        if (g.ring.equal_mod(g.ring.mul(x, beta), g.ring.mul(beta, x), k)) out.push_back(code);
    }
    return out;
}

namespace {

using RatMat = std::vector<std::vector<Rational>>;

RatMat rat_identity(long n) {
    RatMat m(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
    for (long i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

RatMat rat_mul(const RatMat& a, const RatMat& b) {
    const std::size_t n = a.size();
    RatMat c(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

}  // namespace

CartanDecomposition cartan_decompose(const RatMat& a, long p) {
    const long n = static_cast<long>(a.size());
    for (const auto& row : a)
        if (static_cast<long>(row.size()) != n) throw std::domain_error("matrix must be square");
    RatMat d = a;
    RatMat k1 = rat_identity(n);
    RatMat k2 = rat_identity(n);
    // Invariants maintained by every step: k1 * d * k2 = a, with k1, k2
    // products of p-unit-determinant p-integral elementary matrices.
    for (long step = 0; step < n; ++step) {
        long best_i = -1, best_j = -1;
        long best_v = 0;
        for (long i = step; i < n; ++i)
            for (long j = step; j < n; ++j) {
                if (d[i][j] == 0) continue;
                const long v = valuation(d[i][j], p);
                if (best_i < 0 || v < best_v) {
                    best_i = i;
                    best_j = j;
                    best_v = v;
                }
            }
        if (best_i < 0) throw std::domain_error("matrix is singular");
        if (best_i != step) {
            for (long j = 0; j < n; ++j) std::swap(d[best_i][j], d[step][j]);
            for (long j = 0; j < n; ++j) std::swap(k1[j][best_i], k1[j][step]);
        }
        if (best_j != step) {
            for (long i = 0; i < n; ++i) std::swap(d[i][best_j], d[i][step]);
            for (long i = 0; i < n; ++i) std::swap(k2[best_j][i], k2[step][i]);
        }
        for (long i = step + 1; i < n; ++i) {
            if (d[i][step] == 0) continue;
            const Rational factor = d[i][step] / d[step][step];
            for (long j = step; j < n; ++j) d[i][j] -= factor * d[step][j];
            for (long j = 0; j < n; ++j) k1[j][step] += factor * k1[j][i];
        }
        for (long j = step + 1; j < n; ++j) {
            if (d[step][j] == 0) continue;
            const Rational factor = d[step][j] / d[step][step];
            for (long i = step; i < n; ++i) d[i][j] -= factor * d[i][step];
            for (long i = 0; i < n; ++i) k2[step][i] += factor * k2[j][i];
        }
    }
    // Pull the unit parts of the diagonal into k1 and sort exponents.
    std::vector<long> m(static_cast<std::size_t>(n), 0);
    for (long i = 0; i < n; ++i) {
        const long v = valuation(d[i][i], p);
        const Rational unit = d[i][i] / pow_rat(Rational(p), v);
        for (long j = 0; j < n; ++j) k1[j][i] *= unit;
        d[i][i] = pow_rat(Rational(p), v);
        m[static_cast<std::size_t>(i)] = v;
    }
    std::vector<long> perm(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::stable_sort(perm.begin(), perm.end(),
                     [&m](long x, long y) { return m[static_cast<std::size_t>(x)] > m[static_cast<std::size_t>(y)]; });
    RatMat k1s = rat_identity(n), k2s = rat_identity(n);
    std::vector<long> ms(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const long src = perm[static_cast<std::size_t>(i)];
        ms[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(src)];
        for (long j = 0; j < n; ++j) {
            k1s[j][i] = k1[j][src];
            k2s[i][j] = k2[src][j];
        }
    }
    // Validate the contract before returning.
    RatMat check = k1s;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            check[i][j] = k1s[i][j] * pow_rat(Rational(p), ms[static_cast<std::size_t>(j)]);
    check = rat_mul(check, k2s);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            if (check[i][j] != a[i][j]) throw std::logic_error("cartan factors do not multiply back");
    for (const auto& mat : {k1s, k2s})
        for (const auto& row : mat)
            for (const Rational& x : row)
                if (x != 0 && valuation(x, p) < 0)
                    throw std::logic_error("cartan factor is not p-integral");
    return CartanDecomposition{k1s, ms, k2s};
}

}  // namespace tamedeg
