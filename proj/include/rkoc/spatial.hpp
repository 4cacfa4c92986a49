#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rkoc/errors.hpp"

namespace rkoc {

using FieldVector = Eigen::VectorXd;

/// Method-of-lines backend on Omega = (0,1) with homogeneous Neumann
/// conditions: supplies the mass matrix M, the stiffness matrix A of -Laplace,
/// and the interpolation onto the discrete space. The control operator B
/// equals M (distributed control in weak form).
///
/// Modal: orthonormal cosine basis e_0 = 1, e_k = sqrt(2) cos(k pi x), so
/// M = I and A = diag((k pi)^2). Fem: Lagrange elements of degree 1..3 on a
/// uniform mesh.
struct SpatialBackend {
    enum class Kind { Modal, Fem };
    Kind kind = Kind::Modal;
    int n_modes = 0;
    int degree = 0;
    int n_cells = 0;
    int dim = 0;
    Eigen::SparseMatrix<double> M;
    Eigen::SparseMatrix<double> A;

    std::string describe() const {
        if (kind == Kind::Modal) return "modal(" + std::to_string(n_modes) + ")";
        return "fem(p" + std::to_string(degree) + "," + std::to_string(n_cells) + " cells)";
    }

    /// Mesh size; 0 for the modal backend.
    double h() const { return kind == Kind::Fem ? 1.0 / n_cells : 0.0; }
};

namespace detail {

/// Gauss-Legendre nodes/weights on [0,1], exact through degree 2n-1.
inline void gauss_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    // Newton iteration on Legendre polynomials over [-1,1], then affine map.
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = 0.5 * (t + 1.0);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

/// Lagrange shape functions on the reference cell [0,1] with equispaced nodes.
inline double lagrange(int degree, int node, double x) {
    double v = 1.0;
    for (int m = 0; m <= degree; ++m) {
        if (m == node) continue;
        v *= (x * degree - m) / (node - m);
    }
    return v;
}

inline double lagrange_deriv(int degree, int node, double x) {
    double sum = 0.0;
    for (int k = 0; k <= degree; ++k) {
        if (k == node) continue;
        double term = static_cast<double>(degree) / (node - k);
        for (int m = 0; m <= degree; ++m) {
            if (m == node || m == k) continue;
            term *= (x * degree - m) / (node - m);
        }
        sum += term;
    }
    return sum;
}

}  // namespace detail

inline SpatialBackend build_modal(int n_modes) {
    if (n_modes < 1) throw InvalidMesh(n_modes);
    SpatialBackend be;
    be.kind = SpatialBackend::Kind::Modal;
    be.n_modes = n_modes;
    be.dim = n_modes;
    be.M.resize(n_modes, n_modes);
    be.A.resize(n_modes, n_modes);
    be.M.setIdentity();
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 1; k < n_modes; ++k) {
        double lk = k * M_PI;
        trips.emplace_back(k, k, lk * lk);
    }
    be.A.setFromTriplets(trips.begin(), trips.end());
    return be;
}

inline SpatialBackend build_fem(int degree, int n_cells) {
    if (degree < 1 || degree > 3) throw InvalidDegree(degree);
    if (n_cells < 2) throw InvalidMesh(n_cells);
    SpatialBackend be;
    be.kind = SpatialBackend::Kind::Fem;
    be.degree = degree;
    be.n_cells = n_cells;
    be.dim = degree * n_cells + 1;

    std::vector<double> qx, qw;
    detail::gauss_rule(degree + 1, qx, qw);  // exact for the degree-2p mass integrand
    const int nn = degree + 1;
    Eigen::MatrixXd Mloc = Eigen::MatrixXd::Zero(nn, nn);
    Eigen::MatrixXd Aloc = Eigen::MatrixXd::Zero(nn, nn);
    for (std::size_t q = 0; q < qx.size(); ++q) {
        for (int i = 0; i < nn; ++i) {
            for (int j = 0; j < nn; ++j) {
                Mloc(i, j) += qw[q] * detail::lagrange(degree, i, qx[q]) * detail::lagrange(degree, j, qx[q]);
                Aloc(i, j) += qw[q] * detail::lagrange_deriv(degree, i, qx[q]) * detail::lagrange_deriv(degree, j, qx[q]);
            }
        }
    }
    const double h = 1.0 / n_cells;
    std::vector<Eigen::Triplet<double>> mt, at;
    for (int cell = 0; cell < n_cells; ++cell) {
        for (int i = 0; i < nn; ++i) {
            int gi = cell * degree + i;
            for (int j = 0; j < nn; ++j) {
                int gj = cell * degree + j;
                mt.emplace_back(gi, gj, h * Mloc(i, j));
                at.emplace_back(gi, gj, Aloc(i, j) / h);
            }
        }
    }
    be.M.resize(be.dim, be.dim);
    be.A.resize(be.dim, be.dim);
    be.M.setFromTriplets(mt.begin(), mt.end());
    be.A.setFromTriplets(at.begin(), at.end());
    return be;
}

/// Neumann Laplacian eigenvalue lambda_k = (k pi)^2 of mode k.
inline double mode_eigenvalue(int k) { return (k * M_PI) * (k * M_PI); }

/// Orthonormal eigenfunction e_k evaluated at x.
inline double mode_function(int k, double x) {
    if (k == 0) return 1.0;
    return std::sqrt(2.0) * std::cos(k * M_PI * x);
}

/// Interpolation of f onto the discrete space: modal coefficients via
/// composite Gauss quadrature, or nodal values at the Lagrange nodes.
inline FieldVector interpolate(const SpatialBackend& be, const std::function<double(double)>& f) {
    FieldVector v(be.dim);
    if (be.kind == SpatialBackend::Kind::Modal) {
        std::vector<double> qx, qw;
        detail::gauss_rule(16, qx, qw);
        const int pieces = 8 + 2 * be.n_modes;  // resolve the highest cosine mode
        for (int k = 0; k < be.n_modes; ++k) {
            double acc = 0.0;
            for (int p = 0; p < pieces; ++p) {
                for (std::size_t q = 0; q < qx.size(); ++q) {
                    double x = (p + qx[q]) / pieces;
                    acc += qw[q] / pieces * f(x) * mode_function(k, x);
                }
            }
            v[k] = acc;
        }
    } else {
        for (int i = 0; i < be.dim; ++i) {
            double x = static_cast<double>(i) / (be.dim - 1);
            v[i] = f(x);
        }
    }
    return v;
}

/// sqrt(v^T M v).
inline double m_norm(const SpatialBackend& be, const FieldVector& v) {
    return std::sqrt(v.dot(be.M * v));
}

}  // namespace rkoc
