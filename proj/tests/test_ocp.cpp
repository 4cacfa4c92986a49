#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rkoc/harness.hpp"
#include "rkoc/ocp.hpp"

using namespace rkoc;

TEST_CASE("system dimension formula") {
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e-3);
    auto sys = assemble(prob, registry_get("gauss-4"), 1);
    CHECK(sys.size() == (2 * 1 + 1 + 2 * 1 * 2) * 2);  // 14
    CHECK(sys.mat.rows() == 14);
    auto sys2 = assemble(prob, registry_get("radau-iia-5"), 4);
    CHECK(sys2.size() == (2 * 4 + 1 + 2 * 4 * 3) * 2);
}

TEST_CASE("assembly requires nonzero weights and steps") {
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e-3);
    Tableau t = registry_get("gauss-4");
    t.b[0] = QuadNum(0);
    CHECK_THROWS_AS(assemble(prob, t, 4), ZeroWeight);
    CHECK_THROWS_AS(assemble(prob, registry_get("gauss-4"), 0), InvalidMesh);
}

TEST_CASE("solution satisfies the constraint rows") {
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e-3);
    auto sol = solve(prob, registry_get("radau-iia-3"), 8);
    CHECK((sol.y_nodes.row(0).transpose() - prob.v).lpNorm<Eigen::Infinity>() == 0.0);
    // terminal coupling p_N = y_D - y_N
    Eigen::VectorXd res = sol.p_nodes.row(8).transpose() -
                          (prob.y_D - sol.y_nodes.row(8).transpose());
    CHECK(res.lpNorm<Eigen::Infinity>() <= 1e-10);
    // u = p / nu exactly at the stages
    for (int k = 0; k < 8; ++k) {
        CHECK((sol.u_stages[k] - sol.p_stages[k] / prob.nu).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("zero data produces the zero solution") {
    auto be = build_modal(2);
    OcpProblem prob;
    prob.backend = be;
    prob.nu = 1e-3;
    prob.T = 1.0;
    prob.v = FieldVector::Zero(2);
    prob.y_D = FieldVector::Zero(2);
    auto sol = solve(prob, registry_get("gauss-4"), 4);
    CHECK(sol.y_nodes.lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK(sol.p_nodes.lpNorm<Eigen::Infinity>() <= 1e-14);
    for (const auto& u : sol.u_stages) CHECK(u.lpNorm<Eigen::Infinity>() <= 1e-11);
}

TEST_CASE("fifth-order solve against the analytic oracle") {
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e-3);
    auto exact = model_exact(be, 1e-3);
    auto sol = solve(prob, registry_get("radau-iia-5"), 64);
    auto [ey, ep] = error_norms(sol, prob, exact);
    // frozen from the oracle run: err_y ~ 4.3e-9 at N=64
    CHECK(ey <= 1e-8);
    CHECK(ep <= 1e-8);
    CHECK(ey > 1e-11);  // sanity: above roundoff, genuine fifth-order size
}

TEST_CASE("huge nu reduces the state rows to the uncontrolled step") {
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e12);
    const auto& scheme = registry_get("lobatto-iiic-4");
    const int N = 6;
    auto sol = solve(prob, scheme, N);
    std::vector<Eigen::MatrixXd> zero_u(N, Eigen::MatrixXd::Zero(scheme.s, be.dim));
    auto y_free = forward_solve(prob, scheme, N, zero_u);
    CHECK((sol.y_nodes - y_free).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("adjoint stage blocks carry the eq-(4) coefficients") {
    // stormer-verlet: ahat = [[1/2, 0], [1/2, 0]]. In the assembled matrix the
    // p-stage row of stage i, mode 1 (lambda = pi^2, M = I) reads
    //   delta_ij - tau * ahat_ij * lambda   on the p-stage columns.
    auto be = build_modal(2);
    OcpProblem prob;
    prob.backend = be;
    prob.nu = 1.0;
    prob.T = 1.0;
    prob.v = FieldVector::Ones(2);
    prob.y_D = FieldVector::Ones(2);
    const int N = 1;
    const double tau = 1.0, lam = M_PI * M_PI;
    auto sys = assemble(prob, registry_get("stormer-verlet"), N);
    Eigen::MatrixXd D(sys.mat);
    const int dim = 2, s = 2;
    // row layout: state updates, state stages, adjoint updates, adjoint stages, terminal
    auto row_sp = [&](int k, int i) { return (2 * N + N * s + k * s + i) * dim; };
    int row0 = row_sp(0, 0) + 1;  // component 1 of stage 1
    int row1 = row_sp(0, 1) + 1;
    int col0 = sys.idx_sp(0, 0) + 1, col1 = sys.idx_sp(0, 1) + 1;
    CHECK(D(row0, col0) == Catch::Approx(1.0 - tau * 0.5 * lam).epsilon(1e-14));
    CHECK(D(row0, col1) == Catch::Approx(0.0).margin(1e-14));
    CHECK(D(row1, col0) == Catch::Approx(-tau * 0.5 * lam).epsilon(1e-14));
    CHECK(D(row1, col1) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stability function of the state scheme") {
    const auto& sv = registry_get("stormer-verlet");
    for (double z : {-0.25, -1.0, -3.5}) {
        double expect = (1.0 + z / 2.0) / (1.0 - z / 2.0);
        CHECK(uncontrolled_step_check(sv, -z, 1.0) == Catch::Approx(expect).epsilon(1e-14));
    }
    const auto& g4 = registry_get("gauss-4");
    for (double z : {-0.25, -1.0, -3.5}) {
        double expect = (1.0 + z / 2.0 + z * z / 12.0) / (1.0 - z / 2.0 + z * z / 12.0);
        CHECK(uncontrolled_step_check(g4, -z, 1.0) == Catch::Approx(expect).epsilon(1e-13));
    }
    CHECK(uncontrolled_step_check(registry_get("radau-iia-5"), 3.0, 0.0) == 1.0);
}

TEST_CASE("modal decoupling: joint solve equals per-mode solves") {
    auto be = build_modal(3);
    OcpProblem prob;
    prob.backend = be;
    prob.nu = 1e-2;
    prob.T = 1.0;
    prob.v = FieldVector(3);
    prob.v << 0.4, 1.0, -0.7;
    prob.y_D = FieldVector(3);
    prob.y_D << 0.1, 0.5, 0.9;
    const auto& scheme = registry_get("gauss-4");
    auto joint = solve(prob, scheme, 8);

    Eigen::MatrixXd y_sum = Eigen::MatrixXd::Zero(9, 3), p_sum = Eigen::MatrixXd::Zero(9, 3);
    for (int k = 0; k < 3; ++k) {
        OcpProblem single = prob;
        single.v = FieldVector::Zero(3);
        single.y_D = FieldVector::Zero(3);
        single.v[k] = prob.v[k];
        single.y_D[k] = prob.y_D[k];
        auto sol = solve(single, scheme, 8);
        y_sum += sol.y_nodes;
        p_sum += sol.p_nodes;
        // off-mode components stay zero: the modes do not couple
        for (int j = 0; j < 3; ++j) {
            if (j == k) continue;
            CHECK(sol.y_nodes.col(j).lpNorm<Eigen::Infinity>() <= 1e-12);
            CHECK(sol.p_nodes.col(j).lpNorm<Eigen::Infinity>() <= 1e-12);
        }
    }
    CHECK((joint.y_nodes - y_sum).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((joint.p_nodes - p_sum).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("errors decrease monotonically with N above the floor") {
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e-3);
    auto exact = model_exact(be, 1e-3);
    double prev_y = 1e300, prev_p = 1e300;
    for (int N : {10, 20, 40, 80}) {
        auto sol = solve(prob, registry_get("gauss-4"), N);
        auto [ey, ep] = error_norms(sol, prob, exact);
        CHECK(ey < prev_y);
        CHECK(ep < prev_p);
        prev_y = ey;
        prev_p = ep;
    }
}

TEST_CASE("first-order optimality of the coupled solution (small probe)") {
    auto be = build_modal(2);
    auto prob = model_problem(be, 1e-3);
    const auto& scheme = registry_get("gauss-4");
    const int N = 8;
    auto sol = solve(prob, scheme, N);
    double J0 = discrete_objective(prob, scheme, N, sol.u_stages);

    std::mt19937 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Eigen::MatrixXd> dir;
        double n2 = 0.0;
        for (int k = 0; k < N; ++k) {
            Eigen::MatrixXd m(scheme.s, be.dim);
            for (int i = 0; i < scheme.s; ++i)
                for (int j = 0; j < be.dim; ++j) m(i, j) = g(rng);
            n2 += m.squaredNorm();
            dir.push_back(m);
        }
        double eps = 1e-2 / std::sqrt(n2);
        auto up = sol.u_stages, dn = sol.u_stages;
        for (int k = 0; k < N; ++k) {
            up[k] += eps * dir[k];
            dn[k] -= eps * dir[k];
        }
        double Ju = discrete_objective(prob, scheme, N, up);
        double Jd = discrete_objective(prob, scheme, N, dn);
        CHECK(std::abs(Ju - Jd) / (2.0 * eps * std::sqrt(n2)) <= 1e-8);
        // objective increases away from the optimum (positive weights here)
        CHECK(Ju >= J0 - 1e-12);
        CHECK(Jd >= J0 - 1e-12);
    }
}
