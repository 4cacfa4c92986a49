// Command-line front end: scheme inspection, order-condition checks,
// simplifying assumptions, theorem verification, coupled solves, convergence
// sweeps, and the full verification suite.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "rkoc/conditions.hpp"
#include "rkoc/harness.hpp"
#include "rkoc/ocp.hpp"
#include "rkoc/schemes.hpp"
#include "rkoc/theorems.hpp"
#include "rkoc/verify.hpp"

namespace {

using namespace rkoc;

Tableau load_scheme(const std::string& name, const std::string& file) {
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw IoError(file);
        return from_text(in, file);
    }
    return registry_get(name);
}

void print_tableau(const Tableau& t) {
    std::cout << t.name;
    if (t.nominal_order > 0) std::cout << "  (s=" << t.s << ", nominal order " << t.nominal_order << ")";
    std::cout << "\n" << to_text(t);
    std::cout << "float:\n" << std::setprecision(16);
    for (int i = 0; i < t.s; ++i) {
        std::cout << "  ";
        for (int j = 0; j < t.s; ++j) std::cout << t.A[i][j].to_double() << (j + 1 < t.s ? " " : "");
        std::cout << "\n";
    }
    std::cout << "  b:";
    for (int i = 0; i < t.s; ++i) std::cout << " " << t.b[i].to_double();
    std::cout << "\n  c:";
    for (int i = 0; i < t.s; ++i) std::cout << " " << t.c[i].to_double();
    std::cout << "\n";
}

int cmd_schemes_list() {
    std::cout << "scheme            stages  nominal order\n";
    for (const auto& name : scheme_names()) {
        const auto& t = registry_get(name);
        std::cout << std::left << std::setw(18) << name << std::setw(8) << t.s
                  << t.nominal_order << "\n";
    }
    return 0;
}

int cmd_schemes_show(const std::string& name, const std::string& file) {
    print_tableau(load_scheme(name, file));
    return 0;
}

int cmd_schemes_adjoint(const std::string& name, const std::string& file) {
    auto t = load_scheme(name, file);
    auto a = adjoint_tableau(t);
    for (const auto& rn : scheme_names()) {
        if (same_coefficients(a, registry_get(rn))) {
            a.name = rn;
            a.nominal_order = registry_get(rn).nominal_order;
            break;
        }
    }
    print_tableau(a);
    return 0;
}

int cmd_conditions_check(const std::string& name, const std::string& file, bool use_float,
                         double tol, bool do_export) {
    if (do_export) {
        export_conditions(std::cout);
        return 0;
    }
    auto t = load_scheme(name, file);
    auto mode = use_float ? EvalMode::Float(tol) : EvalMode::Exact();
    auto rep = classify(t, mode);
    std::cout << t.name << ": state_order=" << rep.state_order
              << " control_order=" << rep.control_order << "\n";
    for (const auto& f : rep.failures) {
        std::cout << "  first failure above: " << f.id << " = " << f.value << " (wants " << f.rhs
                  << ")\n";
    }
    return 0;
}

int cmd_assumptions(const std::string& name, const std::string& file) {
    auto t = load_scheme(name, file);
    auto rep = check_simplifying(t);
    std::cout << t.name << ": B(p) up to p=" << rep.p_max << ", C(eta) up to eta=" << rep.eta_max
              << ", D(zeta) up to zeta=" << rep.zeta_max << "\n";
    std::cout << "(" << rep.p_max << ", " << rep.eta_max << ", " << rep.zeta_max << ")\n";
    return 0;
}

int cmd_theorems_verify() {
    auto cases = verify_all();
    std::cout << "scheme            order  hypothesis        holds  additional-conditions\n";
    bool consistent = true;
    for (const auto& tc : cases) {
        std::cout << std::left << std::setw(18) << tc.scheme << std::setw(7) << tc.claimed_order
                  << std::setw(18) << hypothesis_name(tc.hypothesis) << std::setw(7)
                  << (tc.hypothesis_holds ? "yes" : "no") << (tc.conditions_hold ? "pass" : "fail")
                  << "\n";
        if (tc.hypothesis_holds && !tc.conditions_hold) consistent = false;
    }
    if (!consistent) {
        std::cout << "IMPLICATION VIOLATED\n";
        return 1;
    }
    return 0;
}

int cmd_solve(const std::string& scheme_name, const std::string& backend, double nu, int steps,
              int modes, int fem_degree, int fem_cells, const std::string& dump) {
    SpatialBackend be = backend == "fem" ? build_fem(fem_degree, fem_cells) : build_modal(modes);
    auto prob = model_problem(be, nu);
    auto exact = model_exact(be, nu);
    const auto& scheme = registry_get(scheme_name);
    auto sol = solve(prob, scheme, steps);
    auto [ey, ep] = error_norms(sol, prob, exact);

    FieldVector yT = exact.field_y(be, 1.0), pT = exact.field_p(be, 1.0);
    FieldVector dy = sol.y_nodes.row(steps).transpose() - yT;
    FieldVector dp = sol.p_nodes.row(steps).transpose() - pT;
    std::cout << std::setprecision(12) << scheme_name << " on " << be.describe() << ", nu=" << nu
              << ", N=" << steps << "\n"
              << "  terminal |y_N - y(T)|_M = " << m_norm(be, dy) << "\n"
              << "  terminal |p_N - p(T)|_M = " << m_norm(be, dp) << "\n"
              << "  max_i    |y_i - y(t_i)|_M = " << ey << "\n"
              << "  max_i    |p_i - p(t_i)|_M = " << ep << "\n";

    if (!dump.empty()) {
        std::ofstream out(dump);
        if (!out) throw IoError(dump);
        out << "t,component,y,p\n";
        out.precision(17);
        for (int k = 0; k <= sol.N; ++k) {
            for (int j = 0; j < be.dim; ++j) {
                out << sol.tau * k << "," << j << "," << sol.y_nodes(k, j) << ","
                    << sol.p_nodes(k, j) << "\n";
            }
        }
        std::cout << "  trajectories written to " << dump << "\n";
    }
    return 0;
}

int cmd_converge(const std::string& scheme_name, const std::string& backend, double nu,
                 const std::string& n_list_str, int modes, int fem_degree,
                 const std::string& out_path) {
    BackendSpec spec;
    spec.kind = backend == "fem" ? SpatialBackend::Kind::Fem : SpatialBackend::Kind::Modal;
    spec.modes = modes;
    spec.fem_degree = fem_degree;

    std::vector<int> N_list;
    std::stringstream ss(n_list_str);
    for (std::string tok; std::getline(ss, tok, ',');) N_list.push_back(std::stoi(tok));
    if (N_list.size() < 3) throw ParseError("--n-list needs at least 3 strictly increasing values");
    for (std::size_t i = 0; i + 1 < N_list.size(); ++i) {
        if (N_list[i] >= N_list[i + 1]) throw ParseError("--n-list must be strictly increasing");
    }

    std::vector<std::string> schemes;
    if (scheme_name == "all") schemes = scheme_names();
    else schemes.push_back(scheme_name);

    auto results = run_convergence_all(schemes, spec, nu, N_list);

    std::vector<ConvergenceRow> rows;
    std::vector<std::pair<std::string, OrderEstimate>> estimates;
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        rows.insert(rows.end(), results[i].rows.begin(), results[i].rows.end());
        estimates.emplace_back(schemes[i], results[i].estimate);
        std::cout << std::left << std::setw(18) << schemes[i] << " median rate y="
                  << std::setprecision(3) << results[i].estimate.median_y
                  << "  p=" << results[i].estimate.median_p << "\n";
    }
    if (!out_path.empty()) {
        emit_csv(rows, estimates, out_path);
        std::cout << "wrote " << out_path << " and " << out_path << ".rates\n";
    }
    return 0;
}

int cmd_verify_all() {
    auto results = run_verification(&std::cout);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " — "
                  << r.detail << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "all checks passed\n" : "CHECKS FAILED\n");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"implicit Runge-Kutta discretizations of parabolic optimal control"};
    app.require_subcommand(1);

    auto* s_list = app.add_subcommand("schemes-list", "list the scheme registry");

    std::string name, file;
    auto* s_show = app.add_subcommand("schemes-show", "print a tableau, exact and float");
    s_show->add_option("name", name, "registry scheme name");
    s_show->add_option("--file", file, "read a tableau from a text-format file");

    auto* s_adj = app.add_subcommand("schemes-adjoint", "print the adjoint tableau");
    s_adj->add_option("name", name, "registry scheme name");
    s_adj->add_option("--file", file, "read a tableau from a text-format file");

    bool use_float = false, do_export = false;
    double tol = 1e-10;
    auto* s_cond = app.add_subcommand("conditions-check", "classify state and control order");
    s_cond->add_option("name", name, "registry scheme name");
    s_cond->add_option("--file", file, "read a tableau from a text-format file");
    s_cond->add_flag("--float", use_float, "evaluate in floating point (default exact)");
    s_cond->add_option("--tol", tol, "float-mode tolerance")->default_val(1e-10);
    s_cond->add_flag("--export", do_export, "dump the condition registry and exit");

    auto* s_assume = app.add_subcommand("assumptions", "maximal B(p), C(eta), D(zeta)");
    s_assume->add_option("name", name, "registry scheme name");
    s_assume->add_option("--file", file, "read a tableau from a text-format file");

    auto* s_thm = app.add_subcommand("theorems-verify", "verify the sufficiency implications");

    std::string backend = "modal", dump, out_path, n_list = "10,20,40,80,160";
    std::string scheme_name;
    double nu = 1e-3;
    int steps = 32, modes = 2, fem_degree = 1, fem_cells = 32;
    auto* s_solve = app.add_subcommand("solve", "solve the coupled discretization once");
    s_solve->add_option("--scheme", scheme_name, "scheme name")->required();
    s_solve->add_option("--backend", backend, "modal|fem")->check(CLI::IsMember({"modal", "fem"}));
    s_solve->add_option("--nu", nu, "regularization parameter");
    s_solve->add_option("--steps", steps, "number of time steps")->required();
    s_solve->add_option("--modes", modes, "modal backend: number of modes");
    s_solve->add_option("--fem-degree", fem_degree, "fem backend: element degree 1..3");
    s_solve->add_option("--fem-cells", fem_cells, "fem backend: cell count");
    s_solve->add_option("--dump", dump, "write trajectories as CSV (t, component, y, p)");

    auto* s_conv = app.add_subcommand("converge", "convergence sweep against the exact solution");
    s_conv->add_option("--scheme", scheme_name, "scheme name or 'all'")->required();
    s_conv->add_option("--backend", backend, "modal|fem")->check(CLI::IsMember({"modal", "fem"}));
    s_conv->add_option("--nu", nu, "regularization parameter");
    s_conv->add_option("--n-list", n_list, "comma-separated step counts");
    s_conv->add_option("--modes", modes, "modal backend: number of modes");
    s_conv->add_option("--fem-degree", fem_degree, "fem backend: element degree 1..3");
    s_conv->add_option("--out", out_path, "CSV output path (also writes .rates)");

    auto* s_verify = app.add_subcommand("verify-all", "run the full verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (s_list->parsed()) return cmd_schemes_list();
        if (s_show->parsed()) return cmd_schemes_show(name, file);
        if (s_adj->parsed()) return cmd_schemes_adjoint(name, file);
        if (s_cond->parsed()) return cmd_conditions_check(name, file, use_float, tol, do_export);
        if (s_assume->parsed()) return cmd_assumptions(name, file);
        if (s_thm->parsed()) return cmd_theorems_verify();
        if (s_solve->parsed()) return cmd_solve(scheme_name, backend, nu, steps, modes, fem_degree, fem_cells, dump);
        if (s_conv->parsed()) return cmd_converge(scheme_name, backend, nu, n_list, modes, fem_degree, out_path);
        if (s_verify->parsed()) return cmd_verify_all();
    } catch (const rkoc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
