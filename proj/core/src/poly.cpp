#include "tamedeg/poly.hpp"

#include <map>
#include <sstream>

namespace tamedeg {

namespace {
const Rational kZero(0);
}

PolyQ::PolyQ(const Rational& c) {
    if (c != 0) c_.push_back(c);
}

PolyQ::PolyQ(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

PolyQ PolyQ::variable() { return monomial(1); }

PolyQ PolyQ::monomial(long exp, const Rational& c) {
    if (exp < 0) throw std::domain_error("negative exponent in PolyQ");
    if (c == 0) return PolyQ();
    std::vector<Rational> v(static_cast<size_t>(exp) + 1, Rational(0));
    v.back() = c;
    return PolyQ(std::move(v));
}

void PolyQ::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

long PolyQ::degree() const { return static_cast<long>(c_.size()) - 1; }

const Rational& PolyQ::coeff(long exp) const {
    if (exp < 0 || exp >= static_cast<long>(c_.size())) return kZero;
    return c_[static_cast<size_t>(exp)];
}

const Rational& PolyQ::leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
}

PolyQ PolyQ::operator-() const {
    PolyQ r(*this);
    for (auto& c : r.c_) c = -c;
    return r;
}

PolyQ PolyQ::operator+(const PolyQ& o) const {
    std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
    return PolyQ(std::move(v));
}

PolyQ PolyQ::operator-(const PolyQ& o) const { return *this + (-o); }

PolyQ PolyQ::operator*(const PolyQ& o) const {
    if (is_zero() || o.is_zero()) return PolyQ();
    std::vector<Rational> v(c_.size() + o.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    }
    return PolyQ(std::move(v));
}

PolyQ PolyQ::operator*(const Rational& s) const {
    if (s == 0) return PolyQ();
    PolyQ r(*this);
    for (auto& c : r.c_) c *= s;
    return r;
}

PolyQ operator*(const Rational& s, const PolyQ& p) { return p * s; }

PolyQ PolyQ::pow(long e) const {
    if (e < 0) throw std::domain_error("negative power of PolyQ");
    PolyQ acc(Rational(1));
    PolyQ b(*this);
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

Rational PolyQ::eval(const Rational& x) const {
    Rational acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

PolyQ PolyQ::monic() const {
    if (is_zero()) return *this;
    return *this * (Rational(1) / leading());
}

PolyQ PolyQ::derivative() const {
    if (c_.size() <= 1) return PolyQ();
    std::vector<Rational> v(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return PolyQ(std::move(v));
}

void PolyQ::divmod(const PolyQ& a, const PolyQ& b, PolyQ& q, PolyQ& r) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    q = PolyQ();
    r = a;
    const long db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        long shift = r.degree() - db;
        Rational c = r.leading() / b.leading();
        PolyQ t = monomial(shift, c);
        q = q + t;
        r = r - t * b;
    }
}

PolyQ PolyQ::operator/(const PolyQ& o) const {
    PolyQ q, r;
    divmod(*this, o, q, r);
    if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
    return q;
}

PolyQ PolyQ::operator%(const PolyQ& o) const {
    PolyQ q, r;
    divmod(*this, o, q, r);
    return r;
}

PolyQ PolyQ::gcd(PolyQ a, PolyQ b) {
    while (!b.is_zero()) {
        PolyQ r = a % b;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

std::string PolyQ::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        const Rational& c = c_[i];
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        if (i == 0 || a != 1) os << a.get_str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

PolyQ cyclotomic_polynomial(long m) {
    if (m < 1) throw std::domain_error("cyclotomic order must be positive");
    static std::map<long, PolyQ> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<Rational> xm(static_cast<size_t>(m) + 1, Rational(0));
    xm[0] = Rational(-1);
    xm.back() = Rational(1);
    PolyQ num{std::vector<Rational>(xm)};
    for (long d = 1; d < m; ++d)
        if (m % d == 0) num = num / cyclotomic_polynomial(d);
    cache[m] = num;
    return num;
}

}  // namespace tamedeg
