#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rkoc/harness.hpp"
#include "rkoc/theorems.hpp"

namespace rkoc {

/// One verification check: a reproducible claim about the library, with the
/// tolerance baked in. verify-all prints one line per check.
struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace verify_detail {

using Clock = std::chrono::steady_clock;

inline double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Independent boundary-value oracle: integrate y' = -lam y + p/nu, p' = lam p
/// with classical RK4, resolve the terminal coupling p(1) = b - y(1) through
/// linearity in p(0), and refine by step halving until two successive grids
/// agree to 1e-12. Shares nothing with the closed-form path.
struct ShootingSolution {
    std::vector<double> t, y, p;
};

inline ShootingSolution shoot(double lam, double a, double b, double nu, int samples) {
    auto integrate = [&](double p0, int n, std::vector<double>* ys, std::vector<double>* ps) {
        double y = a, p = p0;
        double h = 1.0 / n;
        int stride = n / (samples - 1);
        if (ys) {
            ys->clear();
            ps->clear();
            ys->push_back(y);
            ps->push_back(p);
        }
        auto fy = [&](double yv, double pv) { return -lam * yv + pv / nu; };
        auto fp = [&](double pv) { return lam * pv; };
        for (int k = 0; k < n; ++k) {
            double k1y = fy(y, p), k1p = fp(p);
            double k2y = fy(y + 0.5 * h * k1y, p + 0.5 * h * k1p), k2p = fp(p + 0.5 * h * k1p);
            double k3y = fy(y + 0.5 * h * k2y, p + 0.5 * h * k2p), k3p = fp(p + 0.5 * h * k2p);
            double k4y = fy(y + h * k3y, p + h * k3p), k4p = fp(p + h * k3p);
            y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
            if (ys && (k + 1) % stride == 0) {
                ys->push_back(y);
                ps->push_back(p);
            }
        }
        return std::pair<double, double>(y, p);
    };

    auto solve_p0 = [&](int n) {
        auto [y0end, p0end] = integrate(0.0, n, nullptr, nullptr);
        auto [y1end, p1end] = integrate(1.0, n, nullptr, nullptr);
        (void)p0end;
        return (b - y0end) / (p1end + (y1end - y0end));
    };

    int n = 4096;
    double p0 = solve_p0(n);
    for (int it = 0; it < 8; ++it) {
        double p0_fine = solve_p0(2 * n);
        double scale = std::max({std::abs(p0), std::abs(p0_fine), 1.0});
        n *= 2;
        double diff = std::abs(p0_fine - p0) / scale;
        p0 = p0_fine;
        if (diff < 1e-12) break;
    }

    ShootingSolution out;
    std::vector<double> y0t, p0t, y1t, p1t;
    integrate(0.0, n, &y0t, &p0t);
    integrate(1.0, n, &y1t, &p1t);
    for (int i = 0; i < samples; ++i) {
        out.t.push_back(static_cast<double>(i) / (samples - 1));
        out.y.push_back(y0t[i] + p0 * (y1t[i] - y0t[i]));
        out.p.push_back(p0 * p1t[i]);
    }
    return out;
}

}  // namespace verify_detail

/// 1. The SDIRK order-reduction witness equals 18367/58800 exactly.
inline CheckResult check_sdirk_counterexample() {
    CheckResult r{1, "sdirk counterexample 18367/58800 (exact, <1ms)", false, "", 0.0};
    scheme_registry();
    condition_registry();  // registries warm; time only the computation
    auto t0 = verify_detail::Clock::now();
    Rational v = sdirk_counterexample();
    r.seconds = verify_detail::elapsed(t0);
    bool exact = (v == Rational(18367, 58800));
    bool fast = r.seconds < 1e-3;
    r.pass = exact && fast;
    r.detail = "value=" + v.str() + " time=" + std::to_string(r.seconds * 1e3) + "ms";
    return r;
}

/// 2. Adjoint pairings: Gauss self-adjoint, Lobatto IIIA <-> IIIB, both orders.
inline CheckResult check_adjoint_pairings() {
    CheckResult r{2, "adjoint pairings (gauss self, IIIA<->IIIB)", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    bool ok = same_coefficients(adjoint_tableau(registry_get("gauss-4")), registry_get("gauss-4")) &&
              same_coefficients(adjoint_tableau(registry_get("gauss-6")), registry_get("gauss-6")) &&
              same_coefficients(adjoint_tableau(registry_get("lobatto-iiia-4")), registry_get("lobatto-iiib-4")) &&
              same_coefficients(adjoint_tableau(registry_get("lobatto-iiib-4")), registry_get("lobatto-iiia-4")) &&
              same_coefficients(adjoint_tableau(registry_get("lobatto-iiia-6")), registry_get("lobatto-iiib-6")) &&
              same_coefficients(adjoint_tableau(registry_get("lobatto-iiib-6")), registry_get("lobatto-iiia-6"));
    r.seconds = verify_detail::elapsed(t0);
    r.pass = ok;
    r.detail = ok ? "6 pairings exact" : "pairing mismatch";
    return r;
}

/// 3. Involution of the adjoint map on the registry plus 100 random tableaux.
inline CheckResult check_involution() {
    CheckResult r{3, "adjoint involution (registry + 100 random)", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    bool ok = true;
    for (const auto& name : scheme_names()) {
        const auto& t = registry_get(name);
        if (!same_coefficients(adjoint_tableau(adjoint_tableau(t)), t)) ok = false;
    }
    std::mt19937 rng(20250809);
    std::uniform_int_distribution<long> num(-12, 12), den(1, 12), wnum(1, 9);
    for (int k = 0; k < 100 && ok; ++k) {
        int s = 1 + static_cast<int>(rng() % 4);
        Tableau t;
        t.name = "rand";
        t.s = s;
        t.A.assign(s, std::vector<QuadNum>(s, QuadNum(0)));
        t.b.assign(s, QuadNum(0));
        t.c.assign(s, QuadNum(0));
        for (int i = 0; i < s; ++i) {
            for (int j = 0; j < s; ++j) {
                t.A[i][j] = QuadNum(Rational(num(rng), den(rng)));
                t.c[i] += t.A[i][j];
            }
            t.b[i] = QuadNum(Rational((rng() & 1 ? 1 : -1) * wnum(rng), den(rng)));
        }
        if (!same_coefficients(adjoint_tableau(adjoint_tableau(t)), t)) ok = false;
    }
    r.seconds = verify_detail::elapsed(t0);
    r.pass = ok;
    r.detail = ok ? "identity on all 114 tableaux" : "involution broken";
    return r;
}

/// 4. Exact classification table of all fourteen schemes, under 5 s.
inline CheckResult check_classification_table() {
    CheckResult r{4, "order classification table (exact, <5s)", false, "", 0.0};
    const std::vector<std::pair<std::string, std::pair<int, int>>> expect = {
        {"stormer-verlet", {2, 2}}, {"radau-ia-3", {3, 3}},     {"radau-iia-3", {3, 3}},
        {"gauss-4", {4, 4}},        {"lobatto-iiia-4", {4, 4}}, {"lobatto-iiib-4", {4, 4}},
        {"lobatto-iiic-4", {4, 4}}, {"sdirk-4", {4, 2}},        {"radau-ia-5", {5, 5}},
        {"radau-iia-5", {5, 5}},    {"gauss-6", {6, 6}},        {"lobatto-iiia-6", {6, 6}},
        {"lobatto-iiib-6", {6, 6}}, {"lobatto-iiic-6", {6, 6}},
    };
    scheme_registry();
    condition_registry();
    auto t0 = verify_detail::Clock::now();
    std::ostringstream bad;
    for (const auto& [name, orders] : expect) {
        auto rep = classify(registry_get(name));
        if (rep.state_order != orders.first || rep.control_order != orders.second) {
            bad << name << "=(" << rep.state_order << "," << rep.control_order << ") ";
        }
    }
    r.seconds = verify_detail::elapsed(t0);
    r.pass = bad.str().empty() && r.seconds < 5.0;
    r.detail = bad.str().empty() ? "14 schemes, " + std::to_string(r.seconds) + "s"
                                 : "mismatch: " + bad.str();
    return r;
}

/// 5. Sufficiency implication at every order up to each scheme's state order.
inline CheckResult check_theorem_implications() {
    CheckResult r{5, "hypothesis => additional conditions (all schemes, all orders)", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    std::ostringstream bad;
    for (const auto& name : scheme_names()) {
        const auto& t = registry_get(name);
        int state = classify(t).state_order;
        for (int k = 2; k <= state; ++k) {
            if (hypothesis_for(t, k).holds && !additional_conditions_hold(t, k)) {
                bad << name << "@" << k << " ";
            }
        }
    }
    r.seconds = verify_detail::elapsed(t0);
    r.pass = bad.str().empty();
    r.detail = r.pass ? "no violations" : "violated: " + bad.str();
    return r;
}

/// 6. Simplifying-assumption spot checks of the corollaries.
inline CheckResult check_simplifying_spots() {
    CheckResult r{6, "simplifying assumptions spot checks", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    auto triple = [](const char* n) { return check_simplifying(registry_get(n)); };
    auto g4 = triple("gauss-4");
    auto g6 = triple("gauss-6");
    auto r5 = triple("radau-iia-5");
    auto lc6 = triple("lobatto-iiic-6");
    bool ok = g4.p_max == 4 && g4.eta_max == 2 && g4.zeta_max == 2 &&
              g6.p_max == 6 && g6.eta_max == 3 && g6.zeta_max == 3 &&
              r5.p_max == 5 && r5.eta_max == 3 && r5.zeta_max == 2 &&
              lc6.p_max == 6 && lc6.eta_max >= 2 && lc6.zeta_max >= 2;
    r.seconds = verify_detail::elapsed(t0);
    r.pass = ok;
    std::ostringstream d;
    d << "gauss-4=(" << g4.p_max << "," << g4.eta_max << "," << g4.zeta_max << ") "
      << "gauss-6=(" << g6.p_max << "," << g6.eta_max << "," << g6.zeta_max << ") "
      << "radau-iia-5=(" << r5.p_max << "," << r5.eta_max << "," << r5.zeta_max << ") "
      << "lobatto-iiic-6=(" << lc6.p_max << "," << lc6.eta_max << "," << lc6.zeta_max << ")";
    r.detail = d.str();
    return r;
}

/// 7. Convergence reproduction on the single-mode modal problem.
inline CheckResult check_convergence(std::ostream* progress = nullptr) {
    CheckResult r{7, "observed convergence orders (modal, nu=1e-3, <60s)", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    BackendSpec spec;
    spec.kind = SpatialBackend::Kind::Modal;
    spec.modes = 2;
    const std::vector<int> low{10, 20, 40, 80, 160}, high{4, 8, 16, 32, 64};
    std::ostringstream bad, all;
    for (const auto& name : scheme_names()) {
        int q = established_control_order(name);
        const auto& grid = q >= 5 ? high : low;
        auto res = run_convergence(name, spec, 1e-3, grid);
        double lo = q - 0.3, hi = q + 0.7;
        if (name == "sdirk-4") {
            lo = 1.7;
            hi = 2.7;
        }
        bool ok = res.estimate.median_y >= lo && res.estimate.median_y <= hi &&
                  res.estimate.median_p >= lo && res.estimate.median_p <= hi;
        all << name << "=" << res.estimate.median_y << "/" << res.estimate.median_p << " ";
        if (!ok) bad << name << "=(" << res.estimate.median_y << "," << res.estimate.median_p << ") ";
        if (progress) {
            *progress << "  " << name << ": median rate y=" << res.estimate.median_y
                      << " p=" << res.estimate.median_p << " target " << lo << ".." << hi
                      << (ok ? "" : "  <-- OUT OF WINDOW") << "\n";
        }
    }
    r.seconds = verify_detail::elapsed(t0);
    r.pass = bad.str().empty() && r.seconds < 60.0;
    r.detail = bad.str().empty() ? std::to_string(r.seconds) + "s" : "out of window: " + bad.str();
    return r;
}

/// 8. Analytic oracle: ODE residuals, boundary identities, shooting agreement.
inline CheckResult check_analytic_oracle() {
    CheckResult r{8, "analytic oracle (residuals, boundaries, shooting)", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    const double pi2 = M_PI * M_PI;
    std::ostringstream bad;
    for (double lam : {0.0, 1.0, pi2, 4.0 * pi2}) {
        for (double nu : {1e-1, 1e-3, 1e-6}) {
            auto m = mode_coefficients(lam, 1.0, 1.0, nu);
            if (residual_check(m, 33) > 1e-10) bad << "resid(" << lam << "," << nu << ") ";
            if (lam > 0.0) {
                double init = std::abs(m.C1 + m.C2 - m.a_coef) / std::max(std::abs(m.a_coef), 1e-300);
                if (init > 1e-14) bad << "init(" << lam << "," << nu << ") ";
                double el = std::exp(lam);
                double lhs = m.C3 * el;
                double rhs = m.b_coef - (m.C1 * el + m.C2 / el);
                double scale = std::abs(lhs) + std::abs(m.b_coef) + std::abs(m.C1 * el) + 1e-300;
                if (std::abs(lhs - rhs) / scale > 1e-12) bad << "term(" << lam << "," << nu << ") ";
                if (std::abs(m.C3 - 2.0 * lam * nu * m.C1) >
                    1e-15 * std::max(std::abs(m.C3), 1.0))
                    bad << "c3(" << lam << "," << nu << ") ";
            } else {
                auto f0 = exact_fields(m, 0.0);
                auto f1 = exact_fields(m, 1.0);
                if (std::abs(f0.y - m.a_coef) > 1e-14) bad << "init0 ";
                if (std::abs(f1.p - (m.b_coef - f1.y)) > 1e-12) bad << "term0 ";
            }
            const int samples = 9;
            auto sh = verify_detail::shoot(lam, 1.0, 1.0, nu, samples);
            for (int i = 0; i < samples; ++i) {
                auto f = exact_fields(m, sh.t[i]);
                double sy = std::abs(f.y) + std::abs(sh.y[i]) + 1.0;
                double sp = std::abs(f.p) + std::abs(sh.p[i]) + 1.0;
                if (std::abs(f.y - sh.y[i]) / sy > 1e-10 || std::abs(f.p - sh.p[i]) / sp > 1e-10) {
                    bad << "shoot(" << lam << "," << nu << ",t=" << sh.t[i] << ") ";
                    break;
                }
            }
        }
    }
    r.seconds = verify_detail::elapsed(t0);
    r.pass = bad.str().empty();
    r.detail = r.pass ? "12 (lambda,nu) pairs" : bad.str();
    return r;
}

/// 9. Registry self-validation (every condition up to each established order).
inline CheckResult check_registry_validation() {
    CheckResult r{9, "registry self-validation (exact, empty defect report)", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    auto defects = validate_registry();
    r.seconds = verify_detail::elapsed(t0);
    r.pass = defects.empty();
    if (defects.empty()) {
        r.detail = "no defects";
    } else {
        std::ostringstream d;
        for (const auto& def : defects) d << def.scheme << "/" << def.condition << " ";
        r.detail = "defects: " + d.str();
    }
    return r;
}

/// 10. First-order optimality of the coupled solve: central finite differences
/// of the discrete objective vanish along 20 random stage-control directions.
inline CheckResult check_discrete_optimality() {
    CheckResult r{10, "discrete optimality (FD directional derivatives <= 1e-8)", false, "", 0.0};
    auto t0 = verify_detail::Clock::now();
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e-3);
    const auto& scheme = registry_get("gauss-4");
    const int N = 16;
    auto sol = solve(prob, scheme, N);

    std::mt19937 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    const double eps = 1e-2;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::MatrixXd> dir;
        double norm2 = 0.0;
        for (int k = 0; k < N; ++k) {
            Eigen::MatrixXd g(scheme.s, be.dim);
            for (int i = 0; i < scheme.s; ++i)
                for (int j = 0; j < be.dim; ++j) g(i, j) = gauss(rng);
            norm2 += g.squaredNorm();
            dir.push_back(g);
        }
        double nrm = std::sqrt(norm2);
        std::vector<Eigen::MatrixXd> up = sol.u_stages, dn = sol.u_stages;
        for (int k = 0; k < N; ++k) {
            up[k] += eps / nrm * dir[k];
            dn[k] -= eps / nrm * dir[k];
        }
        double deriv = (discrete_objective(prob, scheme, N, up) -
                        discrete_objective(prob, scheme, N, dn)) /
                       (2.0 * eps);
        worst = std::max(worst, std::abs(deriv));
    }
    r.seconds = verify_detail::elapsed(t0);
    r.pass = worst <= 1e-8;
    std::ostringstream d;
    d << "max |dJ| = " << worst;
    r.detail = d.str();
    return r;
}

inline std::vector<CheckResult> run_verification(std::ostream* progress = nullptr) {
    std::vector<CheckResult> out;
    out.push_back(check_sdirk_counterexample());
    out.push_back(check_adjoint_pairings());
    out.push_back(check_involution());
    out.push_back(check_classification_table());
    out.push_back(check_theorem_implications());
    out.push_back(check_simplifying_spots());
    out.push_back(check_convergence(progress));
    out.push_back(check_analytic_oracle());
    out.push_back(check_registry_validation());
    out.push_back(check_discrete_optimality());
    return out;
}

}  // namespace rkoc
