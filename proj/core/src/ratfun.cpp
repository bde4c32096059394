#include "tamedeg/ratfun.hpp"

namespace tamedeg {

RationalFunctionQ::RationalFunctionQ(PolyQ num, PolyQ den) {
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num.is_zero()) {
        num_ = PolyQ();
        den_ = PolyQ(Rational(1));
        return;
    }
    PolyQ g = PolyQ::gcd(num, den);
    num = num / g;
    den = den / g;
    Rational lead = den.leading();
    num_ = num * (Rational(1) / lead);
    den_ = den * (Rational(1) / lead);
}

RationalFunctionQ RationalFunctionQ::q_pow(long k) {
    if (k >= 0) return RationalFunctionQ(PolyQ::monomial(k), PolyQ(Rational(1)));
    return RationalFunctionQ(PolyQ(Rational(1)), PolyQ::monomial(-k));
}

RationalFunctionQ RationalFunctionQ::operator-() const {
    RationalFunctionQ r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RationalFunctionQ RationalFunctionQ::operator+(const RationalFunctionQ& o) const {
    return RationalFunctionQ(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunctionQ RationalFunctionQ::operator-(const RationalFunctionQ& o) const {
    return *this + (-o);
}

RationalFunctionQ RationalFunctionQ::operator*(const RationalFunctionQ& o) const {
    return RationalFunctionQ(num_ * o.num_, den_ * o.den_);
}

RationalFunctionQ RationalFunctionQ::operator/(const RationalFunctionQ& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero rational function");
    return RationalFunctionQ(num_ * o.den_, den_ * o.num_);
}

RationalFunctionQ RationalFunctionQ::pow(long e) const {
    if (e < 0) {
        if (is_zero()) throw std::domain_error("zero to negative power");
        RationalFunctionQ inv;
        inv.num_ = den_;
        inv.den_ = num_;
        return RationalFunctionQ(den_, num_).pow(-e);
    }
    RationalFunctionQ acc(Rational(1));
    RationalFunctionQ b(*this);
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

bool RationalFunctionQ::operator==(const RationalFunctionQ& o) const {
    // Both sides reduced with monic denominator, so representation is canonical.
    return num_ == o.num_ && den_ == o.den_;
}

std::string RationalFunctionQ::str(const std::string& var) const {
    if (den_ == PolyQ(Rational(1))) return num_.str(var);
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

bool rf_equal(const RationalFunctionQ& a, const RationalFunctionQ& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
}

Rational rf_eval(const RationalFunctionQ& f, const Rational& x) {
    Rational d = f.den().eval(x);
    if (d == 0) throw std::domain_error("rational function evaluated at a pole");
    return f.num().eval(x) / d;
}

}  // namespace tamedeg
