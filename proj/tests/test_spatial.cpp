#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rkoc/spatial.hpp"

using namespace rkoc;

TEST_CASE("modal backend diagonal structure") {
    auto be = build_modal(2);
    CHECK(be.dim == 2);
    Eigen::MatrixXd A(be.A), M(be.M);
    CHECK(M.isApprox(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(A(0, 0) == 0.0);
    CHECK(A(1, 1) == Catch::Approx(M_PI * M_PI).epsilon(1e-15));
    CHECK(A(0, 1) == 0.0);

    auto be1 = build_modal(1);
    CHECK(Eigen::MatrixXd(be1.A)(0, 0) == 0.0);  // constant mode only
    CHECK_THROWS_AS(build_modal(0), InvalidMesh);
}

TEST_CASE("modal projection of the data function") {
    auto be = build_modal(2);
    auto v = interpolate(be, [](double x) { return std::sqrt(2.0) * std::cos(M_PI * x); });
    CHECK(std::abs(v[0]) < 1e-13);
    CHECK(v[1] == Catch::Approx(1.0).epsilon(1e-12));

    auto be3 = build_modal(3);
    auto ones = interpolate(be3, [](double) { return 1.0; });
    CHECK(ones[0] == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(ones[1]) < 1e-13);
    CHECK(std::abs(ones[2]) < 1e-13);
}

TEST_CASE("p1 mass and stiffness against the standard element matrices") {
    auto be = build_fem(1, 2);  // h = 1/2, nodes 0, 1/2, 1
    REQUIRE(be.dim == 3);
    Eigen::MatrixXd M(be.M), A(be.A);
    const double h = 0.5;
    // interior row of M: (h/6)(1, 4, 1); of A: (1/h)(-1, 2, -1)
    CHECK(M(1, 0) == Catch::Approx(h / 6.0).epsilon(1e-14));
    CHECK(M(1, 1) == Catch::Approx(4.0 * h / 6.0).epsilon(1e-14));
    CHECK(M(1, 2) == Catch::Approx(h / 6.0).epsilon(1e-14));
    CHECK(A(1, 0) == Catch::Approx(-1.0 / h).epsilon(1e-14));
    CHECK(A(1, 1) == Catch::Approx(2.0 / h).epsilon(1e-14));
    CHECK(A(1, 2) == Catch::Approx(-1.0 / h).epsilon(1e-14));
    CHECK(M.sum() == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stiffness annihilates constants") {
    for (int deg : {1, 2, 3}) {
        auto be = build_fem(deg, 5);
        FieldVector ones = FieldVector::Ones(be.dim);
        CHECK((be.A * ones).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    auto bm = build_modal(4);
    FieldVector e0 = FieldVector::Zero(4);
    e0[0] = 1.0;
    CHECK((bm.A * e0).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("quadrature is exact for the element polynomials") {
    // P2 reproduces x^2: v^T A v = int (2x)^2 = 4/3, v^T M v = int x^4 = 1/5
    auto be2 = build_fem(2, 3);
    auto v2 = interpolate(be2, [](double x) { return x * x; });
    CHECK(v2.dot(be2.A * v2) == Catch::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(v2.dot(be2.M * v2) == Catch::Approx(1.0 / 5.0).epsilon(1e-13));
    // P3 reproduces x^3: v^T A v = int (3x^2)^2 = 9/5, v^T M v = int x^6 = 1/7
    auto be3 = build_fem(3, 2);
    auto v3 = interpolate(be3, [](double x) { return x * x * x; });
    CHECK(v3.dot(be3.A * v3) == Catch::Approx(9.0 / 5.0).epsilon(1e-13));
    CHECK(v3.dot(be3.M * v3) == Catch::Approx(1.0 / 7.0).epsilon(1e-13));
}

TEST_CASE("fem interpolation hits the lagrange nodes") {
    auto be = build_fem(1, 4);
    auto v = interpolate(be, [](double x) { return x; });
    REQUIRE(be.dim == 5);
    for (int i = 0; i < 5; ++i) CHECK(v[i] == Catch::Approx(0.25 * i).margin(1e-15));
}

TEST_CASE("m_norm") {
    auto bm = build_modal(2);
    FieldVector v(2);
    v << 0.0, 1.0;
    CHECK(m_norm(bm, v) == 1.0);
    CHECK(m_norm(bm, FieldVector::Zero(2)) == 0.0);

    auto bf = build_fem(1, 2);
    CHECK(m_norm(bf, FieldVector::Ones(3)) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("symmetry and positive semidefiniteness") {
    for (int deg : {1, 2, 3}) {
        auto be = build_fem(deg, 4);
        Eigen::MatrixXd M(be.M), A(be.A);
        CHECK((M - M.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((A - A.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M);
        CHECK(em.eigenvalues().minCoeff() > 0.0);
        CHECK(M.sum() == Catch::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(build_fem(0, 4), InvalidDegree);
    CHECK_THROWS_AS(build_fem(4, 4), InvalidDegree);
    CHECK_THROWS_AS(build_fem(1, 1), InvalidMesh);
}
