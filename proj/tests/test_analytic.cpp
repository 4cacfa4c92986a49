#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rkoc/analytic.hpp"
#include "rkoc/verify.hpp"

using namespace rkoc;

namespace {

// independent long-double evaluation of the closed-form coefficients
struct RefCoef {
    long double C1, C2, C3;
};

RefCoef reference(long double lam, long double a, long double b, long double nu) {
    long double el = std::exp(lam), eml = std::exp(-lam);
    long double den = -2.0L * nu * lam * el - el + eml;
    RefCoef r;
    r.C1 = (-b + a * eml) / den;
    r.C2 = -(-b + a * el + 2.0L * nu * lam * a * el) / den;
    r.C3 = 2.0L * lam * nu * r.C1;
    return r;
}

}  // namespace

TEST_CASE("coefficients against an independent long-double evaluation") {
    const double pi2 = M_PI * M_PI;
    for (double lam : {1.0, pi2, 4.0 * pi2}) {
        for (double nu : {1e-1, 1e-3, 1e-6}) {
            auto m = mode_coefficients(lam, 1.0, 1.0, nu);
            auto r = reference(lam, 1.0L, 1.0L, nu);
            INFO("lam=" << lam << " nu=" << nu);
            CHECK(m.C1 == Catch::Approx(static_cast<double>(r.C1)).epsilon(1e-14));
            CHECK(m.C2 == Catch::Approx(static_cast<double>(r.C2)).epsilon(1e-14));
            CHECK(m.C3 == Catch::Approx(static_cast<double>(r.C3)).epsilon(1e-14));
        }
    }
}

TEST_CASE("mode solution invariants over the (lambda, nu) grid") {
    const double pi2 = M_PI * M_PI;
    for (double lam : {1.0, pi2, 4.0 * pi2}) {
        for (double nu : {1e-1, 1e-3, 1e-6}) {
            for (double a : {1.0, -0.3}) {
                for (double b : {1.0, 0.7}) {
                    auto m = mode_coefficients(lam, a, b, nu);
                    INFO("lam=" << lam << " nu=" << nu << " a=" << a << " b=" << b);
                    CHECK(m.C3 == Catch::Approx(2.0 * lam * nu * m.C1).epsilon(1e-15).margin(1e-300));
                    CHECK(std::abs(m.C1 + m.C2 - a) <= 1e-14 * std::abs(a));
                    double el = std::exp(lam);
                    double lhs = m.C3 * el, rhs = b - (m.C1 * el + m.C2 / el);
                    double scale = std::abs(lhs) + std::abs(b) + std::abs(m.C1 * el) + 1e-300;
                    CHECK(std::abs(lhs - rhs) / scale <= 1e-12);
                    CHECK(residual_check(m, 17) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("zero data gives the zero solution") {
    auto m = mode_coefficients(M_PI * M_PI, 0.0, 0.0, 1e-3);
    CHECK(m.C1 == 0.0);
    CHECK(m.C2 == 0.0);
    CHECK(m.C3 == 0.0);
    CHECK(residual_check(m, 5) == 0.0);
}

TEST_CASE("nu -> infinity approaches uncontrolled decay") {
    double lam = M_PI * M_PI;
    auto m = mode_coefficients(lam, 1.0, 1.0, 1e9);
    for (double t : {0.0, 0.25, 0.5, 1.0}) {
        auto f = exact_fields(m, t);
        CHECK(std::abs(f.u) < 1e-6);
        CHECK(f.y == Catch::Approx(std::exp(-lam * t)).margin(1e-6));
    }
}

TEST_CASE("lambda = 0 limit formulas") {
    double nu = 1e-3;
    auto m = mode_coefficients(0.0, 1.0, 3.0, nu);
    // y(t) = a + (b-a) t/(nu+1), p constant = nu (b-a)/(nu+1)
    for (double t : {0.0, 0.5, 1.0}) {
        auto f = exact_fields(m, t);
        CHECK(f.y == Catch::Approx(1.0 + 2.0 * t / (nu + 1.0)).epsilon(1e-14));
        CHECK(f.p == Catch::Approx(nu * 2.0 / (nu + 1.0)).epsilon(1e-14));
    }
    auto f1 = exact_fields(m, 1.0);
    CHECK(f1.p == Catch::Approx(3.0 - f1.y).epsilon(1e-12));
    CHECK(residual_check(m, 9) <= 1e-12);

    // target equals initial: constant mode needs no control
    auto mc = mode_coefficients(0.0, 2.0, 2.0, nu);
    auto fc = exact_fields(mc, 0.7);
    CHECK(fc.y == 2.0);
    CHECK(fc.p == 0.0);
    CHECK(fc.u == 0.0);
}

TEST_CASE("terminal and initial identities of the evaluated fields") {
    auto m = mode_coefficients(M_PI * M_PI, 1.0, 1.0, 1e-3);
    auto f0 = exact_fields(m, 0.0);
    CHECK(f0.y == Catch::Approx(1.0).epsilon(1e-13));
    auto f1 = exact_fields(m, 1.0);
    CHECK(f1.p == Catch::Approx(1.0 - f1.y).epsilon(1e-12));
    CHECK(f1.u == Catch::Approx(f1.p / 1e-3).epsilon(1e-15));
}

TEST_CASE("corrupting a coefficient is detected by the residual") {
    auto m = mode_coefficients(M_PI * M_PI, 1.0, 1.0, 1e-3);
    m.C1 *= 1.01;
    CHECK(residual_check(m, 17) > 1e-4);
}

TEST_CASE("agreement with the shooting oracle") {
    const double pi2 = M_PI * M_PI;
    for (double lam : {0.0, 1.0, pi2}) {
        for (double nu : {1e-1, 1e-3}) {
            auto m = mode_coefficients(lam, 1.0, 1.0, nu);
            auto sh = verify_detail::shoot(lam, 1.0, 1.0, nu, 9);
            for (int i = 0; i < 9; ++i) {
                auto f = exact_fields(m, sh.t[i]);
                INFO("lam=" << lam << " nu=" << nu << " t=" << sh.t[i]);
                CHECK(std::abs(f.y - sh.y[i]) <= 1e-10 * (std::abs(f.y) + std::abs(sh.y[i]) + 1.0));
                CHECK(std::abs(f.p - sh.p[i]) <= 1e-10 * (std::abs(f.p) + std::abs(sh.p[i]) + 1.0));
            }
        }
    }
}

TEST_CASE("invalid parameters are refused") {
    CHECK_THROWS_AS(mode_coefficients(1.0, 1.0, 1.0, 0.0), DegenerateDenominator);
    CHECK_THROWS_AS(mode_coefficients(-1.0, 1.0, 1.0, 1e-3), DegenerateDenominator);
}
