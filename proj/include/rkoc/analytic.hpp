#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rkoc/errors.hpp"
#include "rkoc/spatial.hpp"

namespace rkoc {

/// Closed form of one eigenmode of the model problem on T = 1:
///   y(t) = C1 e^{lam t} + C2 e^{-lam t},   p(t) = C3 e^{lam t},   u = p / nu,
/// with C1, C2 solving y(0) = a and p(1) = b - y(1), and C3 = 2 lam nu C1.
/// For lam = 0 the coefficients C1, C2 diverge individually; the limit is
///   y(t) = a + (b-a) t / (nu+1),   p == C3 = nu (b-a)/(nu+1),
/// and exact_* below switch to that branch (C1 = C2 = 0 are placeholders).
struct ModeSolution {
    double lambda = 0.0;
    double a_coef = 0.0;
    double b_coef = 0.0;
    double nu = 1.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
};

namespace detail {

class MpReal {
  public:
    explicit MpReal(int prec = 256) { mpfr_init2(v, prec); }
    MpReal(const MpReal& o) {
        mpfr_init2(v, mpfr_get_prec(o.v));
        mpfr_set(v, o.v, MPFR_RNDN);
    }
    MpReal& operator=(const MpReal& o) {
        mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~MpReal() { mpfr_clear(v); }
    mpfr_t v;
};

}  // namespace detail

/// Coefficients of one mode, evaluated with 256-bit arithmetic and rounded.
/// Requires nu > 0, lambda >= 0; the formulas presume T = 1.
inline ModeSolution mode_coefficients(double lambda, double a_coef, double b_coef, double nu) {
    if (!(nu > 0)) throw DegenerateDenominator();
    if (lambda < 0) throw DegenerateDenominator();
    ModeSolution m;
    m.lambda = lambda;
    m.a_coef = a_coef;
    m.b_coef = b_coef;
    m.nu = nu;
    if (lambda == 0.0) {
        m.C1 = m.C2 = 0.0;
        m.C3 = nu * (b_coef - a_coef) / (nu + 1.0);
        return m;
    }

    constexpr int prec = 256;
    mpfr_t lam, nuv, a, b, el, eml, den, num, c1, c2, c3, t;
    mpfr_inits2(prec, lam, nuv, a, b, el, eml, den, num, c1, c2, c3, t, nullptr);
    mpfr_set_d(lam, lambda, MPFR_RNDN);
    mpfr_set_d(nuv, nu, MPFR_RNDN);
    mpfr_set_d(a, a_coef, MPFR_RNDN);
    mpfr_set_d(b, b_coef, MPFR_RNDN);
    mpfr_exp(el, lam, MPFR_RNDN);          // e^lam
    mpfr_neg(t, lam, MPFR_RNDN);
    mpfr_exp(eml, t, MPFR_RNDN);           // e^-lam

    // den = -2 nu lam e^lam - e^lam + e^-lam
    mpfr_mul(den, nuv, lam, MPFR_RNDN);
    mpfr_mul(den, den, el, MPFR_RNDN);
    mpfr_mul_si(den, den, -2, MPFR_RNDN);
    mpfr_sub(den, den, el, MPFR_RNDN);
    mpfr_add(den, den, eml, MPFR_RNDN);
    if (mpfr_zero_p(den) || std::abs(mpfr_get_d(den, MPFR_RNDN)) < 1e-300) {
        mpfr_clears(lam, nuv, a, b, el, eml, den, num, c1, c2, c3, t, nullptr);
        throw DegenerateDenominator();
    }

    // C1 = (-b + a e^-lam) / den
    mpfr_mul(num, a, eml, MPFR_RNDN);
    mpfr_sub(num, num, b, MPFR_RNDN);
    mpfr_div(c1, num, den, MPFR_RNDN);

    // C2 = -(-b + a e^lam + 2 nu lam a e^lam) / den
    mpfr_mul(num, a, el, MPFR_RNDN);
    mpfr_sub(num, num, b, MPFR_RNDN);
    mpfr_mul(t, nuv, lam, MPFR_RNDN);
    mpfr_mul(t, t, a, MPFR_RNDN);
    mpfr_mul(t, t, el, MPFR_RNDN);
    mpfr_mul_si(t, t, 2, MPFR_RNDN);
    mpfr_add(num, num, t, MPFR_RNDN);
    mpfr_div(c2, num, den, MPFR_RNDN);
    mpfr_neg(c2, c2, MPFR_RNDN);

    // C3 = 2 lam nu C1
    mpfr_mul(c3, lam, nuv, MPFR_RNDN);
    mpfr_mul(c3, c3, c1, MPFR_RNDN);
    mpfr_mul_si(c3, c3, 2, MPFR_RNDN);

    m.C1 = mpfr_get_d(c1, MPFR_RNDN);
    m.C2 = mpfr_get_d(c2, MPFR_RNDN);
    m.C3 = mpfr_get_d(c3, MPFR_RNDN);
    mpfr_clears(lam, nuv, a, b, el, eml, den, num, c1, c2, c3, t, nullptr);
    return m;
}

struct ModeFields {
    double y = 0.0, p = 0.0, u = 0.0;
};

inline ModeFields exact_fields(const ModeSolution& m, double t) {
    ModeFields f;
    if (m.lambda == 0.0) {
        f.p = m.C3;
        f.y = m.a_coef + m.C3 * t / m.nu;
    } else {
        f.y = m.C1 * std::exp(m.lambda * t) + m.C2 * std::exp(-m.lambda * t);
        f.p = m.C3 * std::exp(m.lambda * t);
    }
    f.u = f.p / m.nu;
    return f;
}

/// Max relative residual of y' + lam y = u and p' = lam p over sample points,
/// with derivatives taken analytically.
inline double residual_check(const ModeSolution& m, int samples) {
    if (samples < 2) samples = 2;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double t = static_cast<double>(i) / (samples - 1);
        double y, dy, p, dp, u;
        if (m.lambda == 0.0) {
            p = m.C3;
            dp = 0.0;
            y = m.a_coef + m.C3 * t / m.nu;
            dy = m.C3 / m.nu;
        } else {
            double ep = std::exp(m.lambda * t), em = std::exp(-m.lambda * t);
            y = m.C1 * ep + m.C2 * em;
            dy = m.lambda * (m.C1 * ep - m.C2 * em);
            p = m.C3 * ep;
            dp = m.lambda * m.C3 * ep;
        }
        u = p / m.nu;
        double ry = std::abs(dy + m.lambda * y - u);
        double sy = std::abs(dy) + std::abs(m.lambda * y) + std::abs(u) + 1e-300;
        double rp = std::abs(dp - m.lambda * p);
        double sp = std::abs(dp) + std::abs(m.lambda * p) + 1e-300;
        worst = std::max({worst, ry / sy, rp / sp});
    }
    return worst;
}

/// Exact solution of the full problem as a list of decoupled modes.
struct ExactSolution {
    std::vector<ModeSolution> modes;  // modes[k] belongs to eigenvalue (k pi)^2

    /// Modal coefficients (modal backend) or nodal interpolant (FEM) of y/p at time t.
    FieldVector field_y(const SpatialBackend& be, double t) const { return field(be, t, false); }
    FieldVector field_p(const SpatialBackend& be, double t) const { return field(be, t, true); }

  private:
    FieldVector field(const SpatialBackend& be, double t, bool adjoint) const {
        if (be.kind == SpatialBackend::Kind::Modal) {
            FieldVector v = FieldVector::Zero(be.dim);
            for (std::size_t k = 0; k < modes.size() && k < static_cast<std::size_t>(be.dim); ++k) {
                auto f = exact_fields(modes[k], t);
                v[static_cast<int>(k)] = adjoint ? f.p : f.y;
            }
            return v;
        }
        return interpolate(be, [&](double x) {
            double acc = 0.0;
            for (std::size_t k = 0; k < modes.size(); ++k) {
                auto f = exact_fields(modes[k], t);
                acc += (adjoint ? f.p : f.y) * mode_function(static_cast<int>(k), x);
            }
            return acc;
        });
    }
};

/// Exact solution for modal data vectors (entry k = coefficient of mode k).
inline ExactSolution exact_solution_for_modes(const FieldVector& a, const FieldVector& b, double nu) {
    ExactSolution sol;
    for (int k = 0; k < a.size(); ++k) {
        sol.modes.push_back(mode_coefficients(mode_eigenvalue(k), a[k], b[k], nu));
    }
    return sol;
}

}  // namespace rkoc
