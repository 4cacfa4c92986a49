#pragma once

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <utility>

#include "rkoc/errors.hpp"

namespace rkoc {

/// Arbitrary-precision rational in canonical form: positive denominator,
/// gcd(|num|, den) = 1. Thin wrapper over GMP's mpq_class that canonicalizes
/// on construction, so downstream code can compare values structurally.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor) integers embed naturally
    Rational(long n, long d) {
        if (d == 0) throw DivisionByZero();
        q_ = mpq_class(n, d);
        q_.canonicalize();
    }
    Rational(const mpz_class& n, const mpz_class& d) {
        if (d == 0) throw DivisionByZero();
        q_ = mpq_class(n, d);
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Parse "p", "p/q" or "-p/q".
    static Rational parse(const std::string& text) {
        mpq_class q;
        if (q.set_str(text, 10) != 0) throw ParseError("bad rational '" + text + "'");
        if (q.get_den() == 0) throw DivisionByZero();
        q.canonicalize();
        return Rational(std::move(q));
    }

    const mpz_class& num() const { return q_.get_num(); }
    const mpz_class& den() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DivisionByZero();
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    /// Nearest double (GMP truncates toward zero; below 1 ulp for our magnitudes).
    double to_double() const { return q_.get_d(); }

    const mpq_class& raw() const { return q_; }

    std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    mpq_class q_;
};

}  // namespace rkoc
