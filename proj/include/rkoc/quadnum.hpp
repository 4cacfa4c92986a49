#pragma once

#include <mpfr.h>

#include <cctype>
#include <ostream>
#include <string>

#include "rkoc/errors.hpp"
#include "rkoc/rational.hpp"

namespace rkoc {

namespace detail {

inline bool is_square_free(unsigned long d) {
    if (d == 0) return true;
    for (unsigned long p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) return false;
    }
    return true;
}

}  // namespace detail

/// Exact element a + b*sqrt(d) of the quadratic field Q(sqrt d).
///
/// The radicand travels with the value; d = 0 encodes pure rationals and is the
/// canonical radicand whenever b = 0. Mixing two distinct nonzero radicands in
/// one operation throws MixedRadicands: every tableau lives in one field.
class QuadNum {
  public:
    QuadNum() : a_(0), b_(0), d_(0) {}
    QuadNum(Rational a) : a_(std::move(a)), b_(0), d_(0) {}  // NOLINT(google-explicit-constructor)
    QuadNum(long n) : a_(n), b_(0), d_(0) {}                 // NOLINT(google-explicit-constructor)
    QuadNum(long n, long den) : a_(n, den), b_(0), d_(0) {}

    QuadNum(Rational a, Rational b, unsigned long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
        if (!detail::is_square_free(d_)) throw ParseError("radicand " + std::to_string(d_) + " is not square-free");
        if (d_ == 0 && !b_.is_zero()) throw ParseError("nonzero sqrt(0) coefficient");
        normalize();
    }

    const Rational& rat() const { return a_; }
    const Rational& rad_coef() const { return b_; }
    unsigned long radicand() const { return d_; }

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }

    /// Exact rational part; throws if the value is irrational.
    const Rational& as_rational() const {
        if (!b_.is_zero()) throw ParseError("value " + str() + " is not rational");
        return a_;
    }

    QuadNum operator-() const { return QuadNum(-a_, -b_, d_, NoCheck{}); }

    friend QuadNum operator+(const QuadNum& x, const QuadNum& y) {
        unsigned long d = join(x, y);
        return QuadNum(x.a_ + y.a_, x.b_ + y.b_, d, NoCheck{});
    }
    friend QuadNum operator-(const QuadNum& x, const QuadNum& y) {
        unsigned long d = join(x, y);
        return QuadNum(x.a_ - y.a_, x.b_ - y.b_, d, NoCheck{});
    }
    friend QuadNum operator*(const QuadNum& x, const QuadNum& y) {
        unsigned long d = join(x, y);
        Rational rd(static_cast<long>(d));
        return QuadNum(x.a_ * y.a_ + x.b_ * y.b_ * rd, x.a_ * y.b_ + x.b_ * y.a_, d, NoCheck{});
    }
    friend QuadNum operator/(const QuadNum& x, const QuadNum& y) { return x * y.inverse(); }

    QuadNum& operator+=(const QuadNum& o) { return *this = *this + o; }
    QuadNum& operator-=(const QuadNum& o) { return *this = *this - o; }
    QuadNum& operator*=(const QuadNum& o) { return *this = *this * o; }
    QuadNum& operator/=(const QuadNum& o) { return *this = *this / o; }

    /// Field inverse via the conjugate: 1/(a+b*sqrt d) = (a-b*sqrt d)/(a^2-b^2 d).
    /// The norm a^2 - b^2 d vanishes only at zero since sqrt(d) is irrational.
    QuadNum inverse() const {
        if (is_zero()) throw DivisionByZero();
        Rational n = a_ * a_ - b_ * b_ * Rational(static_cast<long>(d_));
        if (n.is_zero()) throw DivisionByZero();
        return QuadNum(a_ / n, -(b_ / n), d_, NoCheck{});
    }

    QuadNum pow(int k) const {
        QuadNum r(1);
        QuadNum base = *this;
        for (int i = 0; i < k; ++i) r *= base;
        return r;
    }

    friend bool operator==(const QuadNum& x, const QuadNum& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_;
    }
    friend bool operator!=(const QuadNum& x, const QuadNum& y) { return !(x == y); }

    /// Nearest double, computed through 128-bit MPFR so that the result is
    /// within a few ulp even under cancellation between a and b*sqrt(d).
    double to_double() const {
        if (b_.is_zero()) return a_.to_double();
        mpfr_t acc, tmp;
        mpfr_init2(acc, 128);
        mpfr_init2(tmp, 128);
        mpfr_sqrt_ui(acc, d_, MPFR_RNDN);
        mpfr_set_q(tmp, b_.raw().get_mpq_t(), MPFR_RNDN);
        mpfr_mul(acc, acc, tmp, MPFR_RNDN);
        mpfr_set_q(tmp, a_.raw().get_mpq_t(), MPFR_RNDN);
        mpfr_add(acc, acc, tmp, MPFR_RNDN);
        double out = mpfr_get_d(acc, MPFR_RNDN);
        mpfr_clear(acc);
        mpfr_clear(tmp);
        return out;
    }

    /// Canonical text form: "p", "p/q" or "(p+r*sqrt{d})/q" with a common
    /// positive denominator q and integer p, r.
    std::string str() const {
        if (b_.is_zero()) return a_.str();
        mpz_class q = lcm(a_.den(), b_.den());
        mpz_class p = a_.num() * (q / a_.den());
        mpz_class r = b_.num() * (q / b_.den());
        std::string rs = (r < 0 ? "-" : "+") + mpz_class(abs(r)).get_str();
        return "(" + p.get_str() + rs + "*sqrt{" + std::to_string(d_) + "})/" + q.get_str();
    }

    /// Parse the canonical text form (also plain rationals).
    static QuadNum parse(const std::string& text);

    friend std::ostream& operator<<(std::ostream& os, const QuadNum& x) { return os << x.str(); }

  private:
    struct NoCheck {};
    QuadNum(Rational a, Rational b, unsigned long d, NoCheck) : a_(std::move(a)), b_(std::move(b)), d_(d) {
        normalize();
    }

    void normalize() {
        if (b_.is_zero()) d_ = 0;
    }

    static unsigned long join(const QuadNum& x, const QuadNum& y) {
        if (x.d_ == y.d_) return x.d_;
        if (x.d_ == 0) return y.d_;
        if (y.d_ == 0) return x.d_;
        throw MixedRadicands(x.d_, y.d_);
    }

    Rational a_, b_;
    unsigned long d_;
};

inline QuadNum QuadNum::parse(const std::string& text) {
    std::string t;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    }
    if (t.empty()) throw ParseError("empty coefficient");
    if (t[0] != '(') return QuadNum(Rational::parse(t));

    auto close = t.find(')');
    if (close == std::string::npos) throw ParseError("unbalanced '(' in '" + text + "'");
    std::string inner = t.substr(1, close - 1);
    std::string tail = t.substr(close + 1);

    mpz_class den = 1;
    if (!tail.empty()) {
        if (tail[0] != '/') throw ParseError("expected '/q' after ')' in '" + text + "'");
        den.set_str(tail.substr(1), 10);
        if (den == 0) throw DivisionByZero();
    }

    // inner: p + r*sqrt{d}  |  p - r*sqrt{d}  (r may be omitted, '*' optional)
    auto sq = inner.find("sqrt");
    if (sq == std::string::npos) throw ParseError("expected sqrt in '" + text + "'");
    std::string left = inner.substr(0, sq);
    std::string dpart = inner.substr(sq + 4);
    if (dpart.size() < 3 || (dpart.front() != '{' && dpart.front() != '(')) {
        throw ParseError("expected sqrt{d} in '" + text + "'");
    }
    char open = dpart.front();
    char want = open == '{' ? '}' : ')';
    auto endd = dpart.find(want);
    if (endd == std::string::npos) throw ParseError("unbalanced sqrt braces in '" + text + "'");
    unsigned long d = std::stoul(dpart.substr(1, endd - 1));

    // split "p+r*" / "p-r*" at the sign that separates the two terms
    if (left.empty()) throw ParseError("missing rational part in '" + text + "'");
    std::size_t split = std::string::npos;
    for (std::size_t i = left.size(); i-- > 1;) {
        if (left[i] == '+' || left[i] == '-') {
            split = i;
            break;
        }
    }
    mpz_class p, r;
    if (split == std::string::npos) {
        // pure radical: "(r*sqrt{d})/q" or "(sqrt{d})/q"
        std::string rs = left;
        if (!rs.empty() && rs.back() == '*') rs.pop_back();
        if (rs.empty() || rs == "+") r = 1;
        else if (rs == "-") r = -1;
        else r.set_str(rs, 10);
        p = 0;
    } else {
        p.set_str(left.substr(0, split), 10);
        std::string rs = left.substr(split);
        if (!rs.empty() && rs.back() == '*') rs.pop_back();
        if (rs == "+") r = 1;
        else if (rs == "-") r = -1;
        else r.set_str(rs, 10);
    }
    return QuadNum(Rational(p, den), Rational(r, den), d);
}

}  // namespace rkoc
