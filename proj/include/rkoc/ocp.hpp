#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <vector>

#include "rkoc/analytic.hpp"
#include "rkoc/errors.hpp"
#include "rkoc/spatial.hpp"
#include "rkoc/tableau.hpp"

namespace rkoc {

/// Continuous problem data of the terminal-tracking control problem:
/// min 1/2 |y(T)-y_D|_M^2 + nu/2 int |u|_M^2 with M y_t + A y = M u, M y(0) = M v.
struct OcpProblem {
    SpatialBackend backend;
    double nu = 1e-3;
    double T = 1.0;
    FieldVector v;    // initial datum
    FieldVector y_D;  // desired terminal state
};

/// Trajectories of the coupled solve. Stage arrays are indexed [step](stage, component);
/// u is recovered from the stationarity relation u = p / nu at the stages.
struct DiscreteSolution {
    double tau = 0.0;
    int N = 0;
    Eigen::MatrixXd y_nodes;  // (N+1) x dim
    Eigen::MatrixXd p_nodes;  // (N+1) x dim
    std::vector<Eigen::MatrixXd> y_stages, p_stages, u_stages;  // N entries of s x dim
};

/// The monolithic linear system in the unknown ordering
/// (y_1..y_N, p_0..p_N, y-stage blocks, p-stage blocks); y_0 is substituted.
struct LinearSystem {
    Eigen::SparseMatrix<double> mat;
    Eigen::VectorXd rhs;
    int N = 0, s = 0, dim = 0;

    int idx_y(int k) const { return (k - 1) * dim; }                       // k = 1..N
    int idx_p(int k) const { return (N + k) * dim; }                       // k = 0..N
    int idx_sy(int k, int i) const { return (2 * N + 1 + k * s + i) * dim; }
    int idx_sp(int k, int i) const { return (2 * N + 1 + N * s + k * s + i) * dim; }
    int size() const { return (2 * N + 1 + 2 * N * s) * dim; }
};

namespace detail {

struct SchemeDoubles {
    int s = 0;
    Eigen::MatrixXd A, Ahat;
    Eigen::VectorXd b, c;
};

inline SchemeDoubles scheme_to_doubles(const Tableau& t) {
    SchemeDoubles sd;
    sd.s = t.s;
    sd.A.resize(t.s, t.s);
    sd.Ahat.resize(t.s, t.s);
    sd.b.resize(t.s);
    sd.c.resize(t.s);
    for (int i = 0; i < t.s; ++i) {
        if (t.b[i].is_zero()) throw ZeroWeight(i);
        sd.b[i] = t.b[i].to_double();
        sd.c[i] = t.c[i].to_double();
        for (int j = 0; j < t.s; ++j) sd.A(i, j) = t.A[i][j].to_double();
    }
    for (int i = 0; i < t.s; ++i)
        for (int j = 0; j < t.s; ++j) sd.Ahat(i, j) = sd.b[j] - sd.b[j] / sd.b[i] * sd.A(j, i);
    return sd;
}

inline void add_block(std::vector<Eigen::Triplet<double>>& trips, int row0, int col0,
                      const Eigen::SparseMatrix<double>& B, double scale) {
    if (scale == 0.0) return;
    for (int outer = 0; outer < B.outerSize(); ++outer) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(B, outer); it; ++it) {
            trips.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()),
                               scale * it.value());
        }
    }
}

}  // namespace detail

/// Assemble the coupled discretization as one sparse system. The six relation
/// groups, with u eliminated through M u = (1/nu) M p at the stages:
///   M y_{k+1} = M y_k + tau sum_i b_i ((1/nu) M p_{k;i} - A y_{k;i})
///   M y_{k;i} = M y_k + tau sum_j a_ij ((1/nu) M p_{k;j} - A y_{k;j})
///   M p_{k+1} = M p_k + tau sum_i b_i A p_{k;i}
///   M p_{k;i} = M p_k + tau sum_j ahat_ij A p_{k;j}
///   M y_0 = M v,   M p_N = M (y_D - y_N)
/// The adjoint blocks carry +tau: stationarity of the discrete Lagrangian
/// fixes this sign together with the ahat coefficients.
inline LinearSystem assemble(const OcpProblem& prob, const Tableau& scheme, int N) {
    if (N < 1) throw InvalidMesh(N);
    auto sd = detail::scheme_to_doubles(scheme);
    const int s = sd.s;
    const int dim = prob.backend.dim;
    const double tau = prob.T / N;
    const auto& M = prob.backend.M;
    const auto& A = prob.backend.A;

    LinearSystem sys;
    sys.N = N;
    sys.s = s;
    sys.dim = dim;
    sys.rhs = Eigen::VectorXd::Zero(sys.size());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(sys.size()) * (2 * s + 4));
    const Eigen::VectorXd Mv = M * prob.v;
    const Eigen::VectorXd MyD = M * prob.y_D;
    int row = 0;

    // state updates
    for (int k = 0; k < N; ++k) {
        detail::add_block(trips, row, sys.idx_y(k + 1), M, 1.0);
        if (k >= 1) detail::add_block(trips, row, sys.idx_y(k), M, -1.0);
        else sys.rhs.segment(row, dim) += Mv;
        for (int i = 0; i < s; ++i) {
            detail::add_block(trips, row, sys.idx_sp(k, i), M, -tau * sd.b[i] / prob.nu);
            detail::add_block(trips, row, sys.idx_sy(k, i), A, tau * sd.b[i]);
        }
        row += dim;
    }
    // state stages
    for (int k = 0; k < N; ++k) {
        for (int i = 0; i < s; ++i) {
            detail::add_block(trips, row, sys.idx_sy(k, i), M, 1.0);
            if (k >= 1) detail::add_block(trips, row, sys.idx_y(k), M, -1.0);
            else sys.rhs.segment(row, dim) += Mv;
            for (int j = 0; j < s; ++j) {
                detail::add_block(trips, row, sys.idx_sp(k, j), M, -tau * sd.A(i, j) / prob.nu);
                detail::add_block(trips, row, sys.idx_sy(k, j), A, tau * sd.A(i, j));
            }
            row += dim;
        }
    }
    // adjoint updates
    for (int k = 0; k < N; ++k) {
        detail::add_block(trips, row, sys.idx_p(k + 1), M, 1.0);
        detail::add_block(trips, row, sys.idx_p(k), M, -1.0);
        for (int i = 0; i < s; ++i) detail::add_block(trips, row, sys.idx_sp(k, i), A, -tau * sd.b[i]);
        row += dim;
    }
    // adjoint stages
    for (int k = 0; k < N; ++k) {
        for (int i = 0; i < s; ++i) {
            detail::add_block(trips, row, sys.idx_sp(k, i), M, 1.0);
            detail::add_block(trips, row, sys.idx_p(k), M, -1.0);
            for (int j = 0; j < s; ++j) detail::add_block(trips, row, sys.idx_sp(k, j), A, -tau * sd.Ahat(i, j));
            row += dim;
        }
    }
    // terminal coupling M p_N + M y_N = M y_D
    detail::add_block(trips, row, sys.idx_p(N), M, 1.0);
    detail::add_block(trips, row, sys.idx_y(N), M, 1.0);
    sys.rhs.segment(row, dim) += MyD;
    row += dim;

    sys.mat.resize(sys.size(), sys.size());
    sys.mat.setFromTriplets(trips.begin(), trips.end());
    return sys;
}

inline DiscreteSolution solve(const OcpProblem& prob, const Tableau& scheme, int N) {
    auto sys = assemble(prob, scheme, N);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys.mat);
    if (lu.info() != Eigen::Success) throw SingularSystem("factorization failed");
    Eigen::VectorXd x = lu.solve(sys.rhs);
    if (lu.info() != Eigen::Success) throw SingularSystem("back substitution failed");

    double rres = (sys.mat * x - sys.rhs).lpNorm<Eigen::Infinity>() /
                  std::max(sys.rhs.lpNorm<Eigen::Infinity>(), 1e-300);
    if (!(rres <= 1e-10)) throw SingularSystem("residual " + std::to_string(rres));

    const int dim = sys.dim, s = sys.s;
    DiscreteSolution out;
    out.tau = prob.T / N;
    out.N = N;
    out.y_nodes.resize(N + 1, dim);
    out.p_nodes.resize(N + 1, dim);
    out.y_nodes.row(0) = prob.v.transpose();
    for (int k = 1; k <= N; ++k) out.y_nodes.row(k) = x.segment(sys.idx_y(k), dim).transpose();
    for (int k = 0; k <= N; ++k) out.p_nodes.row(k) = x.segment(sys.idx_p(k), dim).transpose();
    for (int k = 0; k < N; ++k) {
        Eigen::MatrixXd ys(s, dim), ps(s, dim);
        for (int i = 0; i < s; ++i) {
            ys.row(i) = x.segment(sys.idx_sy(k, i), dim).transpose();
            ps.row(i) = x.segment(sys.idx_sp(k, i), dim).transpose();
        }
        out.y_stages.push_back(ys);
        out.u_stages.push_back(ps / prob.nu);
        out.p_stages.push_back(std::move(ps));
    }
    return out;
}

/// One-step amplification factor R(-tau lam) of the state scheme on y' = -lam y:
/// solves (I + tau lam A) g = 1, returns 1 - tau lam b^T g.
inline double uncontrolled_step_check(const Tableau& scheme, double lam, double tau) {
    auto sd = detail::scheme_to_doubles(scheme);
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(sd.s, sd.s) + tau * lam * sd.A;
    Eigen::VectorXd g = S.partialPivLu().solve(Eigen::VectorXd::Ones(sd.s));
    return 1.0 - tau * lam * sd.b.dot(g);
}

/// Classical RK sweep of the state equation alone, M y' + A y = M u(t), with
/// prescribed stage controls; returns the nodal trajectory. Used to probe the
/// discrete objective as a function of u and for the uncontrolled-order check.
inline Eigen::MatrixXd forward_solve(const OcpProblem& prob, const Tableau& scheme, int N,
                                     const std::vector<Eigen::MatrixXd>& u_stages) {
    auto sd = detail::scheme_to_doubles(scheme);
    const int s = sd.s, dim = prob.backend.dim;
    const double tau = prob.T / N;
    const auto& M = prob.backend.M;
    const auto& A = prob.backend.A;

    // stage system (I_s (x) M + tau a (x) A) g = rhs, dense LU reused per step
    Eigen::MatrixXd S(s * dim, s * dim);
    S.setZero();
    Eigen::MatrixXd Md(M), Ad(A);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            if (i == j) S.block(i * dim, j * dim, dim, dim) = Md + tau * sd.A(i, j) * Ad;
            else S.block(i * dim, j * dim, dim, dim) = tau * sd.A(i, j) * Ad;
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);

    Eigen::MatrixXd y(N + 1, dim);
    y.row(0) = prob.v.transpose();
    Eigen::VectorXd rhs(s * dim), yk(dim);
    for (int k = 0; k < N; ++k) {
        yk = y.row(k).transpose();
        const Eigen::VectorXd Myk = Md * yk;
        for (int i = 0; i < s; ++i) {
            Eigen::VectorXd r = Myk;
            for (int j = 0; j < s; ++j) r += tau * sd.A(i, j) * (Md * u_stages[k].row(j).transpose());
            rhs.segment(i * dim, dim) = r;
        }
        Eigen::VectorXd g = lu.solve(rhs);
        Eigen::VectorXd acc = Myk;
        for (int i = 0; i < s; ++i) {
            acc += tau * sd.b[i] * (Md * u_stages[k].row(i).transpose() - Ad * g.segment(i * dim, dim));
        }
        // M y_{k+1} = acc
        y.row(k + 1) = Md.partialPivLu().solve(acc).transpose();
    }
    return y;
}

/// Discrete objective 1/2 |y_N - y_D|_M^2 + (nu/2) sum_k tau sum_i b_i |u_{k;i}|_M^2
/// with y produced by forward_solve for the given stage controls.
inline double discrete_objective(const OcpProblem& prob, const Tableau& scheme, int N,
                                 const std::vector<Eigen::MatrixXd>& u_stages) {
    auto sd = detail::scheme_to_doubles(scheme);
    auto y = forward_solve(prob, scheme, N, u_stages);
    const double tau = prob.T / N;
    Eigen::VectorXd diff = y.row(N).transpose() - prob.y_D;
    double J = 0.5 * diff.dot(prob.backend.M * diff);
    for (int k = 0; k < N; ++k) {
        for (int i = 0; i < sd.s; ++i) {
            Eigen::VectorXd ui = u_stages[k].row(i).transpose();
            J += 0.5 * prob.nu * tau * sd.b[i] * ui.dot(prob.backend.M * ui);
        }
    }
    return J;
}

}  // namespace rkoc
