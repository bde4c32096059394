#include "tamedeg/cyclotomic.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace tamedeg {

long gcd_long(long a, long b) { return std::gcd(a, b); }
long lcm_long(long a, long b) { return std::lcm(a, b); }

long euler_phi(long m) {
    if (m < 1) throw std::domain_error("euler_phi of nonpositive argument");
    long result = m;
    long n = m;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

struct OrderData {
    long deg = 0;
    PolyQ phi;
    // x^(deg + i) mod Phi_m for every exponent deg + i < max(2 deg - 1, m),
    // enough for both products of reduced elements and mod-m folded powers.
    std::vector<std::vector<Rational>> red;
};

const OrderData& order_data(long m) {
    static std::map<long, OrderData> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    OrderData d;
    d.phi = cyclotomic_polynomial(m);
    d.deg = d.phi.degree();
    long rows = std::max(d.deg - 1, m - d.deg);
    std::vector<Rational> cur(static_cast<size_t>(d.deg), Rational(0));
    // cur holds x^k mod Phi starting at k = deg.
    for (long i = 0; i < d.deg; ++i) cur[i] = -d.phi.coeff(i);  // Phi monic
    for (long i = 0; i < rows; ++i) {
        d.red.push_back(cur);
        // multiply by x mod Phi
        Rational top = cur.back();
        for (long j = d.deg - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = Rational(0);
        if (top != 0)
            for (long j = 0; j < d.deg; ++j) cur[j] += top * -d.phi.coeff(j);
    }
    auto [pos, _] = cache.emplace(m, std::move(d));
    return pos->second;
}

std::vector<Rational> reduce_powers(long m, const std::vector<Rational>& powers) {
    const OrderData& d = order_data(m);
    std::vector<Rational> out(static_cast<size_t>(d.deg), Rational(0));
    for (size_t k = 0; k < powers.size(); ++k) {
        if (powers[k] == 0) continue;
        long e = static_cast<long>(k);
        if (e >= m && e >= 2 * d.deg - 1) e %= m;  // x^m = 1 mod Phi_m
        if (e < d.deg) {
            out[e] += powers[k];
        } else {
            const auto& row = d.red[static_cast<size_t>(e - d.deg)];
            for (long j = 0; j < d.deg; ++j) out[j] += powers[k] * row[j];
        }
    }
    return out;
}

}  // namespace

Cyclotomic Cyclotomic::zeta(long m, long k) {
    if (m < 1) throw std::domain_error("root-of-unity order must be positive");
    k %= m;
    if (k < 0) k += m;
    std::vector<Rational> powers(static_cast<size_t>(k) + 1, Rational(0));
    powers[k] = Rational(1);
    return from_powers(m, powers);
}

Cyclotomic Cyclotomic::from_powers(long m, const std::vector<Rational>& powers) {
    Cyclotomic z;
    z.order_ = m;
    z.c_ = reduce_powers(m, powers);
    return z;
}

bool Cyclotomic::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational Cyclotomic::rational_value() const {
    if (!is_rational()) throw std::domain_error("cyclotomic element is not rational");
    return c_[0];
}

Cyclotomic Cyclotomic::to_order(long M) const {
    if (M == order_) return *this;
    if (M % order_ != 0) throw std::domain_error("cyclotomic lift requires divisible order");
    long s = M / order_;
    std::vector<Rational> powers(static_cast<size_t>((c_.size() - 1) * s) + 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) powers[i * s] = c_[i];
    return from_powers(M, powers);
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r(*this);
    for (auto& c : r.c_) c = -c;
    return r;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    long L = lcm_long(order_, o.order_);
    Cyclotomic a = to_order(L), b = o.to_order(L);
    for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    long L = lcm_long(order_, o.order_);
    Cyclotomic a = to_order(L), b = o.to_order(L);
    std::vector<Rational> conv(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            if (b.c_[j] != 0) conv[i + j] += a.c_[i] * b.c_[j];
    }
    return from_powers(L, conv);
}

Cyclotomic Cyclotomic::operator*(const Rational& s) const {
    Cyclotomic r(*this);
    for (auto& c : r.c_) c *= s;
    return r;
}

namespace {
// extended gcd over Q[x]: g = u*a + v*b with g monic
void poly_ext_gcd(const PolyQ& a, const PolyQ& b, PolyQ& g, PolyQ& u, PolyQ& v) {
    PolyQ r0 = a, r1 = b;
    PolyQ u0(Rational(1)), u1;
    PolyQ v0, v1(Rational(1));
    while (!r1.is_zero()) {
        PolyQ q, rem;
        PolyQ::divmod(r0, r1, q, rem);
        PolyQ u2 = u0 - q * u1;
        PolyQ v2 = v0 - q * v1;
        r0 = r1; r1 = rem;
        u0 = u1; u1 = u2;
        v0 = v1; v1 = v2;
    }
    Rational lead = r0.is_zero() ? Rational(1) : r0.leading();
    Rational inv = Rational(1) / lead;
    g = r0 * inv;
    u = u0 * inv;
    v = v0 * inv;
}
}  // namespace

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero cyclotomic element");
    const OrderData& d = order_data(order_);
    PolyQ a{std::vector<Rational>(c_)};
    PolyQ g, u, v;
    poly_ext_gcd(a, d.phi, g, u, v);
    if (g.degree() != 0) throw std::domain_error("cyclotomic inverse: unexpected gcd");
    std::vector<Rational> powers(u.coeffs());
    return from_powers(order_, powers);
}

Cyclotomic Cyclotomic::operator/(const Cyclotomic& o) const { return *this * o.inverse(); }

Cyclotomic Cyclotomic::conj() const {
    std::vector<Rational> powers(static_cast<size_t>(order_), Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        long e = (order_ - static_cast<long>(i)) % order_;
        powers[e] += c_[i];
    }
    return from_powers(order_, powers);
}

Cyclotomic Cyclotomic::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Cyclotomic acc(Rational(1));
    Cyclotomic b(*this);
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    long L = lcm_long(order_, o.order_);
    return to_order(L).c_ == o.to_order(L).c_;
}

std::string Cyclotomic::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ", ";
        os << c_[i].get_str();
    }
    os << "] (order " << order_ << ")";
    return os.str();
}

std::optional<RootOfUnity> as_root_of_unity(const Cyclotomic& z) {
    long m = z.order();
    long N = (m % 2 == 0) ? m : 2 * m;
    Cyclotomic lifted = z.to_order(N);
    Cyclotomic w = Cyclotomic::zeta(N, 1);
    Cyclotomic cur(Rational(1));
    for (long j = 0; j < N; ++j) {
        if (lifted == cur) {
            if (j == 0) return RootOfUnity{1, 0};
            long g = gcd_long(j, N);
            return RootOfUnity{N / g, j / g};
        }
        cur = cur * w;
    }
    return std::nullopt;
}

namespace {
// Quadratic Gauss sum: sum over x of legendre(x|p) zeta_p^x equals sqrt(p)
// for p = 1 mod 4 and i*sqrt(p) for p = 3 mod 4.
Cyclotomic sqrt_odd_prime(long p) {
    std::vector<Rational> powers(static_cast<size_t>(p), Rational(0));
    for (long x = 1; x < p; ++x) {
        long sq = (x * x) % p;
        powers[sq] += Rational(1);  // counts each QR twice; adjust below
    }
    // sum_x (x|p) zeta^x = sum_{QR} zeta^x - sum_{QNR} zeta^x
    //                    = 2 sum_{QR} zeta^x - (sum_{x!=0} zeta^x)
    //                    = 2 sum_{QR} zeta^x + 1
    std::vector<Rational> g(static_cast<size_t>(p), Rational(0));
    g[0] = Rational(1);
    for (long x = 1; x < p; ++x) g[x] = powers[x];  // powers[x] = 2 on QRs, 0 else
    Cyclotomic gauss = Cyclotomic::from_powers(p, g);
    if (p % 4 == 1) return gauss;
    // gauss = i sqrt(p); divide by i = zeta_4
    return gauss * Cyclotomic::zeta(4, 3);  // zeta_4^3 = -i = 1/i
}
}  // namespace

Cyclotomic sqrt_integer_cyclo(long n) {
    if (n == 0) throw std::domain_error("sqrt of zero not needed");
    Cyclotomic acc(Rational(1));
    if (n < 0) {
        acc = acc * Cyclotomic::zeta(4, 1);
        n = -n;
    }
    long square = 1;
    for (long p = 2; p * p <= n; ++p) {
        long e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (long k = 0; k + 1 < e; k += 2) square *= p;
        if (e % 2) {
            if (p == 2) acc = acc * (Cyclotomic::zeta(8, 1) + Cyclotomic::zeta(8, 7));
            else acc = acc * sqrt_odd_prime(p);
        }
    }
    if (n > 1) {
        if (n == 2) acc = acc * (Cyclotomic::zeta(8, 1) + Cyclotomic::zeta(8, 7));
        else acc = acc * sqrt_odd_prime(n);
    }
    return acc * Rational(square);
}

Cyclotomic kth_root_finite(const Cyclotomic& c, long k) {
    if (k <= 0) throw std::domain_error("root index must be positive");
    if (c.is_zero()) throw std::domain_error("kth root of zero");
    Cyclotomic norm = c * c.conj();
    if (!norm.is_rational()) throw std::domain_error("kth_root_finite: |c|^2 not rational");
    Rational rho2 = norm.rational_value();
    if (rho2 <= 0) throw std::domain_error("kth_root_finite: |c|^2 not positive");

    // rho = sqrt(rho2) must be rational for a finite-order normalization to exist
    Integer num_root, den_root;
    if (mpz_perfect_square_p(rho2.get_num().get_mpz_t()) == 0 ||
        mpz_perfect_square_p(rho2.get_den().get_mpz_t()) == 0)
        throw std::domain_error("kth_root_finite: |c| not rational");
    mpz_sqrt(num_root.get_mpz_t(), rho2.get_num().get_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), rho2.get_den().get_mpz_t());
    Rational rho(num_root, den_root);
    rho.canonicalize();

    Cyclotomic omega = c * (Rational(1) / rho);
    auto ru = as_root_of_unity(omega);
    if (!ru) throw std::domain_error("kth_root_finite: unit part is not a root of unity");

    // rational k-th root of rho, allowing a single layer of square roots
    // (the only case compatible with abelian/cyclotomic entries)
    auto root_part = [&](const Integer& v) -> std::pair<Rational, long> {
        Rational rational_part(1);
        long radicand = 1;
        if (!v.fits_slong_p())
            throw std::domain_error("kth_root_finite: modulus too large to factor");
        long n = v.get_si();
        auto absorb = [&](long p, long e) {
            if (e % k == 0) {
                rational_part *= pow_rat(Rational(p), e / k);
            } else if ((2 * e) % k == 0 && ((2 * e) / k) % 2 == 1) {
                long half = (2 * e) / k;  // odd: contributes p^{(half-1)/2} sqrt(p)
                rational_part *= pow_rat(Rational(p), (half - 1) / 2);
                radicand *= p;
            } else {
                throw std::domain_error("kth_root_finite: modulus root not cyclotomic");
            }
        };
        for (long p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            long e = 0;
            while (n % p == 0) { n /= p; ++e; }
            absorb(p, e);
        }
        if (n > 1) absorb(n, 1);
        return {rational_part, radicand};
    };
    auto [num_rat, num_rad] = root_part(rho.get_num());
    auto [den_rat, den_rad] = root_part(rho.get_den());
    Cyclotomic modulus_root = sqrt_integer_cyclo(num_rad * den_rad) *
                              (num_rat / (den_rat * Rational(den_rad)));

    long N = ru->order;
    long j = ru->exp;
    Cyclotomic unit_root = Cyclotomic::zeta(N * k, j);
    Cyclotomic lambda = modulus_root * unit_root;
    if (lambda.pow(k) != c) throw std::domain_error("kth_root_finite: verification failed");
    return lambda;
}

CycMat cyc_mat_zero(long n) {
    return CycMat(static_cast<std::size_t>(n), std::vector<Cyclotomic>(static_cast<std::size_t>(n)));
}

CycMat cyc_mat_identity(long n) { return cyc_mat_scalar(n, Cyclotomic(Rational(1))); }

CycMat cyc_mat_scalar(long n, const Cyclotomic& s) {
    CycMat a = cyc_mat_zero(n);
    for (std::size_t i = 0; i < a.size(); ++i) a[i][i] = s;
    return a;
}

CycMat cyc_mat_mul(const CycMat& a, const CycMat& b) {
    const std::size_t n = a.size();
    CycMat c = cyc_mat_zero(static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) c[i][j] = c[i][j] + a[i][k] * b[k][j];
        }
    return c;
}

CycMat cyc_mat_scale(const Cyclotomic& s, const CycMat& a) {
    CycMat c = a;
    for (auto& row : c)
        for (auto& x : row) x = x * s;
    return c;
}

bool cyc_mat_equal(const CycMat& a, const CycMat& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    return true;
}

Cyclotomic cyc_mat_trace(const CycMat& a) {
    Cyclotomic t;
    for (std::size_t i = 0; i < a.size(); ++i) t = t + a[i][i];
    return t;
}

CycMat cyc_mat_inverse(const CycMat& a) {
    const std::size_t n = a.size();
    CycMat m = a;
    CycMat inv = cyc_mat_identity(static_cast<long>(n));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("cyclotomic matrix is singular");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const Cyclotomic scale = m[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] = m[col][j] * scale;
            inv[col][j] = inv[col][j] * scale;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            const Cyclotomic factor = m[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[row][j] = m[row][j] - factor * m[col][j];
                inv[row][j] = inv[row][j] - factor * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace tamedeg
