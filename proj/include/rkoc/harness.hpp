#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rkoc/analytic.hpp"
#include "rkoc/ocp.hpp"
#include "rkoc/schemes.hpp"

namespace rkoc {

/// One (scheme, backend, nu, N) experiment with the max-over-nodes M-norm
/// errors of state and adjoint against the closed-form solution.
struct ConvergenceRow {
    std::string scheme;
    std::string backend;
    double nu = 0.0;
    int N = 0;
    double tau = 0.0;
    double h = 0.0;
    double err_y = 0.0;
    double err_p = 0.0;
};

/// Pairwise log-slopes and their medians, computed on rows whose errors sit
/// above the roundoff floor.
struct OrderEstimate {
    std::vector<double> rates_y, rates_p;
    double median_y = 0.0, median_p = 0.0;
};

inline constexpr double kRoundoffFloor = 1e-11;

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Max over time nodes of |y_i - I_h y(t_i)|_M and |p_i - I_h p(t_i)|_M.
inline std::pair<double, double> error_norms(const DiscreteSolution& sol, const OcpProblem& prob,
                                             const ExactSolution& exact) {
    double ey = 0.0, ep = 0.0;
    for (int k = 0; k <= sol.N; ++k) {
        double t = sol.tau * k;
        FieldVector dy = sol.y_nodes.row(k).transpose() - exact.field_y(prob.backend, t);
        FieldVector dp = sol.p_nodes.row(k).transpose() - exact.field_p(prob.backend, t);
        ey = std::max(ey, m_norm(prob.backend, dy));
        ep = std::max(ep, m_norm(prob.backend, dp));
    }
    return {ey, ep};
}

/// The model data of the experiments: v = y_D = sqrt(2) cos(pi x), which is
/// the second Neumann eigenfunction, so only mode one is active.
inline OcpProblem model_problem(const SpatialBackend& be, double nu) {
    OcpProblem prob;
    prob.backend = be;
    prob.nu = nu;
    prob.T = 1.0;
    auto data = [](double x) { return std::sqrt(2.0) * std::cos(M_PI * x); };
    prob.v = interpolate(be, data);
    prob.y_D = prob.v;
    return prob;
}

/// Exact solution of the model problem (single active mode with a = b = 1).
inline ExactSolution model_exact(const SpatialBackend& be, double nu) {
    int modes = be.kind == SpatialBackend::Kind::Modal ? be.n_modes : 2;
    FieldVector a = FieldVector::Zero(std::max(modes, 2));
    if (a.size() > 1) a[1] = 1.0;
    return exact_solution_for_modes(a, a, nu);
}

/// Backend specification for one convergence sweep. FEM couples the mesh to
/// the step count (n_cells = N), matching tau ~ h.
struct BackendSpec {
    SpatialBackend::Kind kind = SpatialBackend::Kind::Modal;
    int modes = 2;
    int fem_degree = 1;

    SpatialBackend instantiate(int N) const {
        if (kind == SpatialBackend::Kind::Modal) return build_modal(modes);
        return build_fem(fem_degree, std::max(N, 2));
    }
    std::string describe() const {
        if (kind == SpatialBackend::Kind::Modal) return "modal(" + std::to_string(modes) + ")";
        return "fem(p" + std::to_string(fem_degree) + ")";
    }
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    OrderEstimate estimate;
};

inline OrderEstimate estimate_orders(const std::vector<ConvergenceRow>& rows) {
    OrderEstimate est;
    auto slope = [](double e0, double e1, double t0, double t1) {
        return std::log(e0 / e1) / std::log(t0 / t1);
    };
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& r0 = rows[i];
        const auto& r1 = rows[i + 1];
        if (r0.err_y > kRoundoffFloor && r1.err_y > kRoundoffFloor)
            est.rates_y.push_back(slope(r0.err_y, r1.err_y, r0.tau, r1.tau));
        if (r0.err_p > kRoundoffFloor && r1.err_p > kRoundoffFloor)
            est.rates_p.push_back(slope(r0.err_p, r1.err_p, r0.tau, r1.tau));
    }
    est.median_y = detail::median(est.rates_y);
    est.median_p = detail::median(est.rates_p);
    return est;
}

inline ConvergenceResult run_convergence(const std::string& scheme_name, const BackendSpec& spec,
                                         double nu, const std::vector<int>& N_list) {
    if (N_list.size() < 3) throw ParseError("need at least 3 step counts");
    for (std::size_t i = 0; i + 1 < N_list.size(); ++i) {
        if (N_list[i] >= N_list[i + 1]) throw ParseError("step counts must be strictly increasing");
    }
    const auto& scheme = registry_get(scheme_name);
    ConvergenceResult res;
    for (int N : N_list) {
        auto be = spec.instantiate(N);
        auto prob = model_problem(be, nu);
        auto exact = model_exact(be, nu);
        auto sol = solve(prob, scheme, N);
        auto [ey, ep] = error_norms(sol, prob, exact);
        ConvergenceRow row;
        row.scheme = scheme_name;
        row.backend = spec.describe();
        row.nu = nu;
        row.N = N;
        row.tau = prob.T / N;
        row.h = be.h();
        row.err_y = ey;
        row.err_p = ep;
        res.rows.push_back(row);
    }
    res.estimate = estimate_orders(res.rows);
    return res;
}

/// Worker cap for parallel sweeps: RK_ADJOINT_THREADS, default hardware size.
inline int max_threads() {
    if (const char* env = std::getenv("RK_ADJOINT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Run several schemes concurrently (results ordered as the input list).
inline std::vector<ConvergenceResult> run_convergence_all(const std::vector<std::string>& schemes,
                                                          const BackendSpec& spec, double nu,
                                                          const std::vector<int>& N_list) {
    std::vector<ConvergenceResult> results(schemes.size());
    std::atomic<std::size_t> next{0};
    int workers = std::min<int>(max_threads(), static_cast<int>(schemes.size()));
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= schemes.size()) return;
            results[i] = run_convergence(schemes[i], spec, nu, N_list);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return results;
}

/// CSV: header then one row per experiment at 17 significant digits, plus a
/// companion ".rates" file with the pairwise slopes.
inline void emit_csv(const std::vector<ConvergenceRow>& rows,
                     const std::vector<std::pair<std::string, OrderEstimate>>& estimates,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path);
    out << "scheme,backend,nu,N,tau,h,err_y,err_p\n";
    out.precision(17);
    for (const auto& r : rows) {
        out << r.scheme << "," << r.backend << "," << r.nu << "," << r.N << "," << r.tau << ","
            << r.h << "," << r.err_y << "," << r.err_p << "\n";
    }
    if (!out) throw IoError(path);

    std::ofstream rates(path + ".rates");
    if (!rates) throw IoError(path + ".rates");
    rates << "scheme,pair,rate_y,rate_p,median_y,median_p\n";
    rates.precision(17);
    for (const auto& [scheme, est] : estimates) {
        std::size_t n = std::max(est.rates_y.size(), est.rates_p.size());
        for (std::size_t i = 0; i < n; ++i) {
            rates << scheme << "," << i << ",";
            if (i < est.rates_y.size()) rates << est.rates_y[i];
            rates << ",";
            if (i < est.rates_p.size()) rates << est.rates_p[i];
            rates << "," << est.median_y << "," << est.median_p << "\n";
        }
    }
}

/// Parse back an emitted CSV (round-trip checks re-derive the slopes).
inline std::vector<ConvergenceRow> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<ConvergenceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        ConvergenceRow r;
        std::getline(ss, r.scheme, ',');
        std::getline(ss, r.backend, ',');
        std::getline(ss, field, ',');
        r.nu = std::stod(field);
        std::getline(ss, field, ',');
        r.N = std::stoi(field);
        std::getline(ss, field, ',');
        r.tau = std::stod(field);
        std::getline(ss, field, ',');
        r.h = std::stod(field);
        std::getline(ss, field, ',');
        r.err_y = std::stod(field);
        std::getline(ss, field, ',');
        r.err_p = std::stod(field);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace rkoc
