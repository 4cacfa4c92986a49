#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <mpfr.h>
#include <random>

#include "rkoc/quadnum.hpp"

using rkoc::DivisionByZero;
using rkoc::MixedRadicands;
using rkoc::QuadNum;
using rkoc::Rational;

namespace {

QuadNum qn(long p, long q) { return QuadNum(Rational(p, q)); }
QuadNum qn(long p, long r, long q, unsigned long d) {
    return QuadNum(Rational(p, q), Rational(r, q), d);
}

// independent extended-precision reference for a + b*sqrt(d)
double mpfr_ref(const QuadNum& x, int prec = 200) {
    mpfr_t acc, t;
    mpfr_init2(acc, prec);
    mpfr_init2(t, prec);
    mpfr_sqrt_ui(acc, x.radicand(), MPFR_RNDN);
    mpfr_set_q(t, x.rad_coef().raw().get_mpq_t(), MPFR_RNDN);
    mpfr_mul(acc, acc, t, MPFR_RNDN);
    mpfr_set_q(t, x.rat().raw().get_mpq_t(), MPFR_RNDN);
    mpfr_add(acc, acc, t, MPFR_RNDN);
    double out = mpfr_get_d(acc, MPFR_RNDN);
    mpfr_clear(acc);
    mpfr_clear(t);
    return out;
}

double ulp_distance(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::ldexp(1.0, std::ilogb(std::max(std::abs(a), std::abs(b))) - 52);
}

}  // namespace

TEST_CASE("conjugate pair sums to 2a") {
    // (1/4 + sqrt3/6) + (1/4 - sqrt3/6) = 1/2
    CHECK(qn(3, 2, 12, 3) + qn(3, -2, 12, 3) == qn(1, 2));
}

TEST_CASE("zero absorbs") {
    CHECK(qn(1, 12) * QuadNum(0) == QuadNum(0));
    CHECK(qn(1, 1, 6, 5) * QuadNum(0) == QuadNum(0));
}

TEST_CASE("radau weights sum to one") {
    // (16-sqrt6)/36 + (16+sqrt6)/36 + 1/9 = 1
    CHECK(qn(16, -1, 36, 6) + qn(16, 1, 36, 6) + qn(1, 9) == QuadNum(1));
}

TEST_CASE("is_zero") {
    CHECK(QuadNum(0).is_zero());
    CHECK_FALSE(qn(3, -2, 12, 3).is_zero());
    QuadNum x = qn(-1, 1, 120, 5);
    CHECK((x - x).is_zero());
}

TEST_CASE("to_float against extended-precision reference") {
    auto cases = {qn(1, 2), qn(3, -2, 12, 3), qn(6, -1, 10, 6), qn(16, -1, 36, 6),
                  qn(296, 169, 1800, 6), qn(-1, 1, 120, 5), qn(25, -13, 120, 5)};
    for (const auto& x : cases) {
        CHECK(ulp_distance(x.to_double(), mpfr_ref(x)) <= 4.0);
    }
    CHECK(qn(1, 2).to_double() == 0.5);
    CHECK(qn(3, -2, 12, 3).to_double() == Catch::Approx(-0.038675134594812866).margin(1e-16));
    CHECK(qn(6, -1, 10, 6).to_double() == Catch::Approx(0.35505102572168217).margin(1e-15));
}

TEST_CASE("division and inverse") {
    QuadNum x = qn(3, -2, 12, 3);
    CHECK(x * x.inverse() == QuadNum(1));
    CHECK(x / x == QuadNum(1));
    CHECK_THROWS_AS(QuadNum(0).inverse(), DivisionByZero);
    CHECK_THROWS_AS(x / QuadNum(0), DivisionByZero);
}

TEST_CASE("mixed radicands rejected, rational promotes") {
    QuadNum r3 = qn(0, 1, 1, 3), r5 = qn(0, 1, 1, 5);
    CHECK_THROWS_AS(r3 + r5, MixedRadicands);
    CHECK_THROWS_AS(r3 * r5, MixedRadicands);
    CHECK(r3 + qn(1, 2) == qn(1, 2, 2, 3));
    CHECK(qn(2, 1) * r5 == qn(0, 2, 1, 5));
}

TEST_CASE("canonicalization idempotent and b=0 drops radicand") {
    QuadNum x = qn(1, 1, 2, 7) - qn(0, 1, 2, 7);  // = 1/2, radical part cancels
    CHECK(x.radicand() == 0);
    CHECK(x == qn(1, 2));
    CHECK(x.is_rational());
}

TEST_CASE("field axioms on random samples with shared radicand") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-20, 20), den(1, 20);
    auto rnd = [&](unsigned long d) {
        return QuadNum(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), d);
    };
    for (unsigned long d : {2ul, 3ul, 5ul, 6ul, 15ul}) {
        for (int k = 0; k < 60; ++k) {
            QuadNum a = rnd(d), b = rnd(d), c = rnd(d);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) CHECK(a * a.inverse() == QuadNum(1));
        }
    }
}

TEST_CASE("float agreement on arithmetic") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> num(-30, 30), den(1, 30);
    auto rnd = [&] {
        return QuadNum(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 6);
    };
    int checked = 0;
    for (int k = 0; k < 300; ++k) {
        QuadNum x = rnd(), y = rnd();
        auto in_window = [](double v) { return std::abs(v) >= 1e-6 && std::abs(v) <= 1e6; };
        auto agree = [&](const QuadNum& exact, double approx) {
            if (!in_window(approx)) return;
            ++checked;
            CHECK(std::abs(exact.to_double() - approx) <= 1e-12 * std::abs(approx));
        };
        agree(x + y, x.to_double() + y.to_double());
        agree(x * y, x.to_double() * y.to_double());
        if (!y.is_zero()) agree(x / y, x.to_double() / y.to_double());
    }
    CHECK(checked > 100);
}

TEST_CASE("parse and print round-trip") {
    for (const char* s : {"25/24", "-49/48", "0", "(16-1*sqrt{6})/36", "(-1+1*sqrt{5})/120",
                          "(0-1*sqrt{5})/12", "(10+7*sqrt{5})/60"}) {
        QuadNum x = QuadNum::parse(s);
        CHECK(QuadNum::parse(x.str()) == x);
    }
    CHECK(QuadNum::parse("(16-sqrt{6})/36") == qn(16, -1, 36, 6));
    CHECK(QuadNum::parse("(3-2*sqrt{3})/12") == qn(3, -2, 12, 3));
    CHECK(QuadNum::parse("1/2") == qn(1, 2));
    CHECK(qn(16, -1, 36, 6).str() == "(16-1*sqrt{6})/36");
    CHECK_THROWS_AS(QuadNum::parse("(1+sqrt{12})/2"), rkoc::ParseError);  // 12 not square-free
}
