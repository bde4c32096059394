#include "tamedeg/residue.hpp"

#include <stdexcept>
#include <unordered_set>

#include "tamedeg/abelian.hpp"

namespace tamedeg {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

BaseRing::BaseRing(long p, long r) : p_(p), r_(r) {
    if (!is_prime(p) || p == 2) throw std::domain_error("base ring requires an odd prime");
    if (r < 1) throw std::domain_error("base ring level must be >= 1");
    mod_ = 1;
    for (long i = 0; i < r; ++i) {
        mod_ *= static_cast<std::uint64_t>(p);
        if (mod_ > (1ull << 31)) throw std::domain_error("base ring modulus too large");
    }
}

std::uint64_t BaseRing::reduce(long x) const {
    long m = static_cast<long>(mod_);
    long v = x % m;
    if (v < 0) v += m;
    return static_cast<std::uint64_t>(v);
}

std::uint64_t BaseRing::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t acc = 1 % mod_, b = a % mod_;
    while (e > 0) {
        if (e & 1) acc = mul(acc, b);
        b = mul(b, b);
        e >>= 1;
    }
    return acc;
}

std::uint64_t BaseRing::inv(std::uint64_t a) const {
    if (!is_unit(a)) throw std::domain_error("inverse of non-unit in Z/p^r");
    return pow(a, unit_count() - 1);
}

std::uint64_t BaseRing::unit_count() const {
    std::uint64_t c = static_cast<std::uint64_t>(p_) - 1;
    for (long i = 1; i < r_; ++i) c *= static_cast<std::uint64_t>(p_);
    return c;
}

namespace {

// Arithmetic of monic polynomials over F_p, used only to pick the Galois ring
// modulus: first monic irreducible of degree f in lexicographic order.
using FpPoly = std::vector<long>;  // coefficients c_0..c_d, c_d != 0 (or empty)

FpPoly fp_mod(FpPoly a, const FpPoly& b, long p) {
    while (!a.empty() && a.back() % p == 0) a.pop_back();
    while (a.size() >= b.size()) {
        long shift = static_cast<long>(a.size() - b.size());
        long c = a.back();  // b monic
        for (size_t i = 0; i < b.size(); ++i) {
            long idx = shift + static_cast<long>(i);
            a[idx] = ((a[idx] - c * b[i]) % p + p) % p;
        }
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

bool fp_irreducible(const FpPoly& m, long p) {
    long f = static_cast<long>(m.size()) - 1;
    if (f < 1) return false;
    // trial division by every monic polynomial of degree 1..f/2
    for (long d = 1; 2 * d <= f; ++d) {
        long count = 1;
        for (long i = 0; i < d; ++i) count *= p;
        for (long idx = 0; idx < count; ++idx) {
            FpPoly div(static_cast<size_t>(d) + 1, 0);
            long v = idx;
            for (long i = 0; i < d; ++i) { div[i] = v % p; v /= p; }
            div[d] = 1;
            if (fp_mod(m, div, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace

GaloisRing::GaloisRing(BaseRing base, long f) : base_(base), f_(f) {
    if (f < 1) throw std::domain_error("galois ring degree must be >= 1");
    const long p = base_.p();
    // choose the modulus: first lexicographic monic irreducible of degree f mod p
    long count = 1;
    for (long i = 0; i < f; ++i) count *= p;
    bool found = false;
    for (long idx = 0; idx < count && !found; ++idx) {
        FpPoly cand(static_cast<size_t>(f) + 1, 0);
        long v = idx;
        for (long i = 0; i < f; ++i) { cand[i] = v % p; v /= p; }
        cand[f] = 1;
        if (fp_irreducible(cand, p)) {
            modulus_.assign(cand.begin(), cand.end());
            found = true;
        }
    }
    if (!found) throw std::runtime_error("no irreducible modulus found");

    // Frobenius: Hensel-lift the root gen^p of the modulus (Newton iteration;
    // the derivative is a unit because the modulus is separable mod p).
    Elt y = pow(gen(), static_cast<std::uint64_t>(p));
    auto eval_mod = [&](const Elt& x) {
        Elt acc = zero();
        Elt xp = one();
        for (long i = 0; i <= f_; ++i) {
            acc = add(acc, scalar_mul(modulus_[static_cast<size_t>(i)], xp));
            if (i < f_) xp = mul(xp, x);
        }
        return acc;
    };
    auto eval_dmod = [&](const Elt& x) {
        Elt acc = zero();
        Elt xp = one();
        for (long i = 1; i <= f_; ++i) {
            std::uint64_t c = base_.mul(modulus_[static_cast<size_t>(i)],
                                        static_cast<std::uint64_t>(i) % base_.mod());
            acc = add(acc, scalar_mul(c, xp));
            if (i < f_) xp = mul(xp, x);
        }
        return acc;
    };
    for (int iter = 0; iter < 64 && !is_zero(eval_mod(y)); ++iter)
        y = sub(y, mul(eval_mod(y), inv(eval_dmod(y))));
    if (!is_zero(eval_mod(y))) throw std::runtime_error("frobenius lift did not converge");
    frob_gen_ = y;
    // order f: applying f times must return gen
    Elt t = gen();
    for (long i = 0; i < f_; ++i) t = frobenius(t);
    if (t != gen()) throw std::runtime_error("frobenius order check failed");
}

std::uint64_t GaloisRing::size() const {
    std::uint64_t s = 1;
    for (long i = 0; i < f_; ++i) s *= base_.mod();
    return s;
}

std::uint64_t GaloisRing::unit_count() const {
    // non-units are exactly the elements vanishing in the residue field
    std::uint64_t s = size();
    std::uint64_t res_field = 1;
    for (long i = 0; i < f_; ++i) res_field *= static_cast<std::uint64_t>(base_.p());
    return s - s / res_field;
}

GaloisRing::Elt GaloisRing::one() const {
    Elt a = zero();
    a[0] = 1 % base_.mod();
    return a;
}

GaloisRing::Elt GaloisRing::from_base(std::uint64_t v) const {
    Elt a = zero();
    a[0] = v % base_.mod();
    return a;
}

GaloisRing::Elt GaloisRing::gen() const {
    Elt a = zero();
    if (f_ == 1) {
        // degenerate: x is a root of the degree-1 modulus, x = -c_0
        a[0] = base_.neg(modulus_[0]);
    } else {
        a[1] = 1;
    }
    return a;
}

GaloisRing::Elt GaloisRing::add(const Elt& a, const Elt& b) const {
    Elt c = zero();
    for (long i = 0; i < f_; ++i) c[i] = base_.add(a[i], b[i]);
    return c;
}

GaloisRing::Elt GaloisRing::sub(const Elt& a, const Elt& b) const {
    Elt c = zero();
    for (long i = 0; i < f_; ++i) c[i] = base_.sub(a[i], b[i]);
    return c;
}

GaloisRing::Elt GaloisRing::neg(const Elt& a) const {
    Elt c = zero();
    for (long i = 0; i < f_; ++i) c[i] = base_.neg(a[i]);
    return c;
}

GaloisRing::Elt GaloisRing::reduce_poly(std::vector<std::uint64_t> conv) const {
    // divide by the monic modulus
    for (long i = static_cast<long>(conv.size()) - 1; i >= f_; --i) {
        std::uint64_t c = conv[i];
        if (c == 0) continue;
        conv[i] = 0;
        for (long j = 0; j < f_; ++j) {
            long idx = i - f_ + j;
            conv[idx] = base_.sub(conv[idx], base_.mul(c, modulus_[static_cast<size_t>(j)]));
        }
    }
    conv.resize(static_cast<size_t>(f_), 0);
    return conv;
}

GaloisRing::Elt GaloisRing::mul(const Elt& a, const Elt& b) const {
    std::vector<std::uint64_t> conv(static_cast<size_t>(2 * f_ - 1), 0);
    for (long i = 0; i < f_; ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; j < f_; ++j)
            conv[i + j] = base_.add(conv[i + j], base_.mul(a[i], b[j]));
    }
    return reduce_poly(std::move(conv));
}

GaloisRing::Elt GaloisRing::scalar_mul(std::uint64_t s, const Elt& a) const {
    Elt c = zero();
    for (long i = 0; i < f_; ++i) c[i] = base_.mul(s % base_.mod(), a[i]);
    return c;
}

GaloisRing::Elt GaloisRing::pow(const Elt& a, std::uint64_t e) const {
    Elt acc = one(), b = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, b);
        b = mul(b, b);
        e >>= 1;
    }
    return acc;
}

bool GaloisRing::is_zero(const Elt& a) const {
    for (auto c : a)
        if (c != 0) return false;
    return true;
}

bool GaloisRing::is_unit(const Elt& a) const {
    for (auto c : a)
        if (c % static_cast<std::uint64_t>(base_.p()) != 0) return true;
    return false;
}

GaloisRing::Elt GaloisRing::inv(const Elt& a) const {
    if (!is_unit(a)) throw std::domain_error("inverse of non-unit in Galois ring");
    std::uint64_t res_field = 1;
    for (long i = 0; i < f_; ++i) res_field *= static_cast<std::uint64_t>(base_.p());
    std::uint64_t units = size() - size() / res_field;
    return pow(a, units - 1);
}

bool GaloisRing::in_base(const Elt& a) const {
    for (long i = 1; i < f_; ++i)
        if (a[i] != 0) return false;
    return true;
}

std::uint64_t GaloisRing::to_base(const Elt& a) const {
    if (!in_base(a)) throw std::domain_error("element does not lie in the base ring");
    return a[0];
}

GaloisRing::Elt GaloisRing::frobenius(const Elt& a) const {
    Elt acc = zero();
    Elt xp = one();
    for (long i = 0; i < f_; ++i) {
        acc = add(acc, scalar_mul(a[i], xp));
        if (i + 1 < f_) xp = mul(xp, frob_gen_);
    }
    return acc;
}

GaloisRing::Elt GaloisRing::teichmuller(const Elt& a) const {
    std::uint64_t q = 1;
    for (long i = 0; i < f_; ++i) q *= static_cast<std::uint64_t>(base_.p());
    Elt cur = a;
    for (int iter = 0; iter < 64; ++iter) {
        Elt nxt = pow(cur, q);
        if (nxt == cur) return cur;
        cur = nxt;
    }
    throw std::runtime_error("teichmuller iteration did not stabilize");
}

GaloisRing::Elt GaloisRing::teichmuller_generator() const {
    std::uint64_t q1 = 1;
    for (long i = 0; i < f_; ++i) q1 *= static_cast<std::uint64_t>(base_.p());
    q1 -= 1;  // p^f - 1
    std::vector<std::uint64_t> prime_divs;
    std::uint64_t m = q1;
    for (std::uint64_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_divs.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_divs.push_back(m);
    for (std::uint64_t code = 1; code < size(); ++code) {
        Elt cand = decode(code);
        if (!is_unit(cand)) continue;
        Elt t = teichmuller(cand);
        bool primitive = true;
        for (std::uint64_t q : prime_divs)
            if (pow(t, q1 / q) == one()) { primitive = false; break; }
        if (primitive) return t;
    }
    throw std::runtime_error("no teichmuller generator found");
}

std::uint64_t GaloisRing::encode(const Elt& a) const {
    std::uint64_t code = 0;
    for (long i = f_ - 1; i >= 0; --i) code = code * base_.mod() + a[static_cast<size_t>(i)];
    return code;
}

GaloisRing::Elt GaloisRing::decode(std::uint64_t code) const {
    Elt a = zero();
    for (long i = 0; i < f_; ++i) {
        a[i] = code % base_.mod();
        code /= base_.mod();
    }
    return a;
}

std::vector<GaloisRing::Elt> GaloisRing::all_elements() const {
    std::uint64_t s = size();
    if (s > 1000000) throw std::domain_error("ring enumeration exceeds the 10^6 budget");
    std::vector<Elt> out;
    out.reserve(s);
    for (std::uint64_t code = 0; code < s; ++code) out.push_back(decode(code));
    return out;
}

TameRing::TameRing(BaseRing base, long f, long e, long w, long cprime)
    : gr_(base, f), e_(e), cprime_(cprime) {
    if (e < 1) throw std::domain_error("ramification index must be >= 1");
    if (e % base.p() == 0) throw std::domain_error("tame ring requires gcd(e, p) = 1");
    if (cprime < 0 || cprime >= e) throw std::domain_error("cprime must lie in [0, e)");
    w_ = gr_.from_base(base.reduce(w));
    if (!gr_.is_unit(w_)) throw std::domain_error("w must be a unit");
    pw_ = gr_.scalar_mul(static_cast<std::uint64_t>(base.p()), w_);
    std::uint64_t q1 = 1;
    for (long i = 0; i < f; ++i) q1 *= static_cast<std::uint64_t>(base.p());
    q1 -= 1;
    galois_ok_ = (q1 % static_cast<std::uint64_t>(e) == 0);
    if (galois_ok_) {
        if (e == 1) {
            zeta_e_ = gr_.one();
        } else {
            GaloisRing::Elt t = gr_.teichmuller_generator();
            zeta_e_ = gr_.pow(t, q1 / static_cast<std::uint64_t>(e));
        }
    }
}

long TameRing::derived_m() const { return base().p() % e_ == 0 ? 0 : base().p() % e_; }

long TameRing::derived_c() const {
    // sigma0^f = tau0^{c' * (p^f - 1)/(p - 1)} on y
    long s = 0, pk = 1;
    for (long j = 0; j < f(); ++j) {
        s = (s + pk) % e_;
        pk = (pk * (base().p() % e_)) % e_;
    }
    return (cprime_ * s) % e_;
}

std::uint64_t TameRing::size() const {
    std::uint64_t s = 1;
    for (long i = 0; i < e_; ++i) s *= gr_.size();
    return s;
}

TameRing::Elt TameRing::zero() const { return Elt(static_cast<size_t>(e_), gr_.zero()); }

TameRing::Elt TameRing::one() const {
    Elt a = zero();
    a[0] = gr_.one();
    return a;
}

TameRing::Elt TameRing::from_base(std::uint64_t v) const {
    Elt a = zero();
    a[0] = gr_.from_base(v);
    return a;
}

TameRing::Elt TameRing::from_gr(const GaloisRing::Elt& g) const {
    Elt a = zero();
    a[0] = g;
    return a;
}

TameRing::Elt TameRing::y() const {
    Elt a = zero();
    if (e_ == 1) {
        a[0] = pw_;
    } else {
        a[1] = gr_.one();
    }
    return a;
}

TameRing::Elt TameRing::add(const Elt& a, const Elt& b) const {
    Elt c = zero();
    for (long i = 0; i < e_; ++i) c[i] = gr_.add(a[i], b[i]);
    return c;
}

TameRing::Elt TameRing::sub(const Elt& a, const Elt& b) const {
    Elt c = zero();
    for (long i = 0; i < e_; ++i) c[i] = gr_.sub(a[i], b[i]);
    return c;
}

TameRing::Elt TameRing::neg(const Elt& a) const {
    Elt c = zero();
    for (long i = 0; i < e_; ++i) c[i] = gr_.neg(a[i]);
    return c;
}

TameRing::Elt TameRing::mul(const Elt& a, const Elt& b) const {
    Elt c = zero();
    for (long i = 0; i < e_; ++i) {
        if (gr_.is_zero(a[i])) continue;
        for (long j = 0; j < e_; ++j) {
            GaloisRing::Elt t = gr_.mul(a[i], b[j]);
            long k = i + j;
            if (k >= e_) {
                k -= e_;
                t = gr_.mul(t, pw_);  // y^e = p w
            }
            c[k] = gr_.add(c[k], t);
        }
    }
    return c;
}

TameRing::Elt TameRing::pow(const Elt& a, std::uint64_t e) const {
    Elt acc = one(), b = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, b);
        b = mul(b, b);
        e >>= 1;
    }
    return acc;
}

bool TameRing::is_zero(const Elt& a) const {
    for (const auto& c : a)
        if (!gr_.is_zero(c)) return false;
    return true;
}

bool TameRing::is_unit(const Elt& a) const {
    // local ring with maximal ideal (p, y): unit iff a_0 is a unit of gr
    return gr_.is_unit(a[0]);
}

TameRing::Elt TameRing::inv(const Elt& a) const {
    if (!is_unit(a)) throw std::domain_error("inverse of non-unit in tame ring");
    std::uint64_t rf = 1;
    for (long i = 0; i < f(); ++i) rf *= static_cast<std::uint64_t>(base().p());
    std::uint64_t units = size() - size() / rf;
    return pow(a, units - 1);
}

TameRing::Elt TameRing::tau0(const Elt& a) const {
    if (!galois_ok_) throw std::domain_error("non-Galois configuration: e does not divide p^f - 1");
    Elt c = zero();
    GaloisRing::Elt z = gr_.one();
    for (long i = 0; i < e_; ++i) {
        c[i] = gr_.mul(a[i], z);
        z = gr_.mul(z, zeta_e_);
    }
    return c;
}

TameRing::Elt TameRing::sigma0(const Elt& a) const {
    if (!galois_ok_) throw std::domain_error("non-Galois configuration: e does not divide p^f - 1");
    Elt c = zero();
    GaloisRing::Elt zc = gr_.pow(zeta_e_, static_cast<std::uint64_t>(cprime_));
    GaloisRing::Elt z = gr_.one();
    for (long i = 0; i < e_; ++i) {
        c[i] = gr_.mul(gr_.frobenius(a[i]), z);
        z = gr_.mul(z, zc);
    }
    return c;
}

TameRing::Elt TameRing::galois(const Elt& a, long i, long j) const {
    Elt c = a;
    for (long k = 0; k < j; ++k) c = sigma0(c);
    for (long k = 0; k < i; ++k) c = tau0(c);
    return c;
}

TameRing::Elt TameRing::norm(const Elt& a) const {
    Elt acc = one();
    for (long i = 0; i < e_; ++i)
        for (long j = 0; j < f(); ++j) acc = mul(acc, galois(a, i, j));
    return acc;
}

TameRing::Elt TameRing::trace(const Elt& a) const {
    Elt acc = zero();
    for (long i = 0; i < e_; ++i)
        for (long j = 0; j < f(); ++j) acc = add(acc, galois(a, i, j));
    return acc;
}

bool TameRing::in_base(const Elt& a) const {
    for (long i = 1; i < e_; ++i)
        if (!gr_.is_zero(a[i])) return false;
    return gr_.in_base(a[0]);
}

std::uint64_t TameRing::norm_base(const Elt& a) const {
    Elt nv = norm(a);
    if (!in_base(nv)) throw std::runtime_error("norm does not lie in the base ring");
    return gr_.to_base(nv[0]);
}

std::uint64_t TameRing::trace_base(const Elt& a) const {
    Elt tv = trace(a);
    if (!in_base(tv)) throw std::runtime_error("trace does not lie in the base ring");
    return gr_.to_base(tv[0]);
}

namespace {
long p_valuation_capped(std::uint64_t v, long p, long cap) {
    if (v == 0) return cap;
    long k = 0;
    while (k < cap && v % static_cast<std::uint64_t>(p) == 0) { v /= p; ++k; }
    return k;
}
}  // namespace

long TameRing::valuation(const Elt& a) const {
    long cap = e_ * base().r();
    long best = cap;
    for (long i = 0; i < e_; ++i) {
        long vg = base().r();
        for (auto c : a[i]) vg = std::min(vg, p_valuation_capped(c, base().p(), base().r()));
        best = std::min(best, std::min(cap, e_ * vg + i));
    }
    return best;
}

bool TameRing::in_ideal(const Elt& a, long j) const { return valuation(a) >= j; }

std::uint64_t TameRing::encode(const Elt& a) const {
    std::uint64_t code = 0;
    for (long i = e_ - 1; i >= 0; --i)
        code = code * gr_.size() + gr_.encode(a[static_cast<size_t>(i)]);
    return code;
}

TameRing::Elt TameRing::decode(std::uint64_t code) const {
    Elt a = zero();
    for (long i = 0; i < e_; ++i) {
        a[i] = gr_.decode(code % gr_.size());
        code /= gr_.size();
    }
    return a;
}

std::vector<TameRing::Elt> TameRing::all_elements() const {
    std::uint64_t s = size();
    if (s > 1000000) throw std::domain_error("ring enumeration exceeds the 10^6 budget");
    std::vector<Elt> out;
    out.reserve(s);
    for (std::uint64_t code = 0; code < s; ++code) out.push_back(decode(code));
    return out;
}

std::vector<TameRing::Elt> TameRing::one_plus_ideal(long j) const {
    // p_K^j: y^i-coefficient must have p-valuation >= ceil((j - i)/e)
    std::vector<std::vector<GaloisRing::Elt>> per_slot;
    std::uint64_t total = 1;
    for (long i = 0; i < e_; ++i) {
        long need = j - i <= 0 ? 0 : (j - i + e_ - 1) / e_;
        if (need > base().r()) need = base().r();
        std::uint64_t step = 1;
        for (long k = 0; k < need; ++k) step *= static_cast<std::uint64_t>(base().p());
        std::vector<GaloisRing::Elt> slot;
        std::uint64_t per_coeff = base().mod() / step;
        std::uint64_t cnt = 1;
        for (long k = 0; k < f(); ++k) cnt *= per_coeff;
        slot.reserve(cnt);
        for (std::uint64_t c = 0; c < cnt; ++c) {
            GaloisRing::Elt g = gr_.zero();
            std::uint64_t v = c;
            for (long k = 0; k < f(); ++k) {
                g[k] = (v % per_coeff) * step % base().mod();
                v /= per_coeff;
            }
            slot.push_back(g);
        }
        total *= cnt;
        per_slot.push_back(std::move(slot));
    }
    if (total > 1000000) throw std::domain_error("ideal enumeration exceeds the 10^6 budget");
    std::vector<Elt> out;
    out.reserve(total);
    for (std::uint64_t c = 0; c < total; ++c) {
        Elt a = one();
        std::uint64_t v = c;
        for (long i = 0; i < e_; ++i) {
            std::uint64_t cnt = per_slot[i].size();
            a[i] = gr_.add(a[i], per_slot[i][v % cnt]);
            v /= cnt;
        }
        out.push_back(a);
    }
    return out;
}

AbelianStructure unit_group(const TameRing& ring) {
    std::uint64_t s = ring.size();
    if (s > 1000000) throw std::domain_error("unit group enumeration exceeds the 10^6 budget");
    EncodedGroup g;
    g.identity = ring.encode(ring.one());
    for (std::uint64_t code = 0; code < s; ++code)
        if (ring.is_unit(ring.decode(code))) g.elements.push_back(code);
    g.mul = [&ring](std::uint64_t a, std::uint64_t b) {
        return ring.encode(ring.mul(ring.decode(a), ring.decode(b)));
    };
    return abelian_structure(g);
}

long norm_index(const TameRing& ring) {
    std::uint64_t s = ring.size();
    if (s > 1000000) throw std::domain_error("norm image enumeration exceeds the 10^6 budget");
    std::unordered_set<std::uint64_t> image;
    for (std::uint64_t code = 0; code < s; ++code) {
        TameRing::Elt x = ring.decode(code);
        if (!ring.is_unit(x)) continue;
        image.insert(ring.norm_base(x));
    }
    std::uint64_t units = ring.base().unit_count();
    if (units % image.size() != 0) throw std::runtime_error("norm image does not divide unit count");
    return static_cast<long>(units / image.size());
}

}  // namespace tamedeg
