#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "torusbie/fields.hpp"
#include "torusbie/operators.hpp"

using namespace torusbie;

namespace {
const Torus kSquare{cplx(0.0, 1.0)};
const Torus kEquilateral{cplx(0.5, std::sqrt(3.0) / 2.0)};

QuadratureGrid circle_grid(int N, const Torus& torus) {
    return build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {N}, torus);
}
} // namespace

TEST_CASE("kress rule integrates low trigonometric modes of the periodic log exactly") {
    const int N = 32;
    CHECK_THROWS_AS(kress_log_weights(7), InvalidN);
    CHECK_THROWS_AS(kress_log_weights(2), InvalidN);
    CHECK_THROWS_AS(kress_log_weights_at(0.1, 3), InvalidN);

    Eigen::MatrixXd R = kress_log_weights(N);
    REQUIRE(R.rows() == N);
    for (int i = 0; i < N; ++i) {
        const double si = 2.0 * M_PI * i / N;
        double sum0 = 0.0, sum1 = 0.0, sum2 = 0.0;
        for (int j = 0; j < N; ++j) {
            const double tj = 2.0 * M_PI * j / N;
            sum0 += R(i, j);
            sum1 += R(i, j) * std::cos(tj);
            sum2 += R(i, j) * std::cos(2.0 * tj);
        }
        // integral of log(4 sin^2((s-t)/2)) cos(m t) dt = -(2 pi / m) cos(m s)
        CHECK(std::abs(sum0) < 1e-12);
        CHECK(std::abs(sum1 + 2.0 * M_PI * std::cos(si)) < 1e-12);
        CHECK(std::abs(sum2 + M_PI * std::cos(2.0 * si)) < 1e-12);
    }
}

TEST_CASE("off-node kress row matches the matrix at nodes and stays exact between them") {
    const int N = 24;
    Eigen::MatrixXd R = kress_log_weights(N);
    Eigen::VectorXd row = kress_log_weights_at(2.0 * M_PI * 5.0 / N, N);
    for (int j = 0; j < N; ++j) CHECK(std::abs(row[j] - R(5, j)) < 1e-13);

    const double s = 0.7;
    Eigen::VectorXd off = kress_log_weights_at(s, N);
    double sum1 = 0.0, sum3 = 0.0;
    for (int j = 0; j < N; ++j) {
        const double tj = 2.0 * M_PI * j / N;
        sum1 += off[j] * std::cos(tj);
        sum3 += off[j] * std::sin(3.0 * tj);
    }
    CHECK(std::abs(sum1 + 2.0 * M_PI * std::cos(s)) < 1e-12);
    CHECK(std::abs(sum3 + 2.0 * M_PI / 3.0 * std::sin(3.0 * s)) < 1e-12);
}

TEST_CASE("single layer boundary values match quadrature references") {
    QuadratureGrid g = circle_grid(200, kSquare);
    Eigen::VectorXd c1(g.total), s1(g.total);
    for (int i = 0; i < g.total; ++i) {
        c1[i] = std::cos(g.t[i]);
        s1[i] = std::sin(g.t[i]);
    }
    double vc = eval_single_layer_on_boundary(c1, g, kSquare, 0, 0.7);
    double vs = eval_single_layer_on_boundary(s1, g, kSquare, 0, 0.7);
    CHECK(std::abs(vc - 0.06712726523088201773011454528610457328595) < 1e-13);
    CHECK(std::abs(vs - 0.05676044665580892520254812935989035050857) < 1e-13);
}

TEST_CASE("single layer interior value matches the quadrature reference") {
    QuadratureGrid g = circle_grid(400, kSquare);
    Eigen::VectorXd c2(g.total);
    for (int i = 0; i < g.total; ++i) c2[i] = std::cos(2.0 * g.t[i]);
    double v = eval_single_layer(c2, g, kSquare, cplx(0.13, 0.4));
    CHECK(std::abs(v - 0.01415263482768297871496589405651105016366) < 1e-12);
}

TEST_CASE("double layer maps constants according to the hole volume fraction") {
    for (const Torus& torus : {kSquare, kEquilateral}) {
        QuadratureGrid g =
            build_grid({Hole::circle(cplx(0.5, 0.5), 0.2), Hole::trefoil(cplx(0.1, 0.1), 0.08)},
                       {100, 100}, torus);
        DenseOperator K = assemble_K(g, torus);
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.total);
        Eigen::VectorXd img = K.mat * ones;
        const double expect = 0.5 - g.total_area / torus.b();
        for (int i = 0; i < g.total; ++i) CHECK(std::abs(img[i] - expect) < 1e-10);
    }
}

TEST_CASE("piecewise constants built from hole areas lie in the interior null space") {
    QuadratureGrid g =
        build_grid({Hole::circle(cplx(0.3, 0.3), 0.15), Hole::circle(cplx(0.75, 0.75), 0.1)},
                   {120, 120}, kSquare);
    DenseOperator K = assemble_K(g, kSquare);
    Eigen::VectorXd phi(g.total);
    for (int i = 0; i < g.total; ++i)
        phi[i] = (g.hole_of[i] == 0) ? kSquare.b() / g.areas[0] : -kSquare.b() / g.areas[1];
    Eigen::VectorXd r = K.mat * phi - 0.5 * phi;
    CHECK(r.lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("adjoint pair is the weighted transpose and S is weighted symmetric") {
    QuadratureGrid g =
        build_grid({Hole::trefoil(cplx(0.6, 0.4), 0.1), Hole::circle(cplx(0.15, 0.8), 0.1)},
                   {36, 28}, kEquilateral);
    DenseOperator K = assemble_K(g, kEquilateral);
    DenseOperator Ks = assemble_Kstar(g, kEquilateral);
    DenseOperator S = assemble_S(g, kEquilateral);
    for (int i = 0; i < g.total; ++i) {
        for (int j = 0; j < g.total; ++j) {
            CHECK(std::abs(g.w[i] * Ks.mat(i, j) - K.mat(j, i) * g.w[j]) < 1e-14);
            CHECK(std::abs(g.w[i] * S.mat(i, j) - S.mat(j, i) * g.w[j]) < 1e-14);
        }
    }
}

TEST_CASE("mean projection is idempotent and fixes constants") {
    QuadratureGrid g = circle_grid(30, kSquare);
    DenseOperator M = assemble_M(g);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.total);
    CHECK((M.mat * ones - ones).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK((M.mat * M.mat - M.mat).lpNorm<Eigen::Infinity>() < 1e-14);
    // every row is w^T / L
    double L = 0.0;
    for (double wi : g.w) L += wi;
    for (int j = 0; j < g.total; ++j) CHECK(std::abs(M.mat(2, j) - g.w[j] / L) < 1e-15);
}

TEST_CASE("characteristic operator integrates over all holes but the last") {
    QuadratureGrid g =
        build_grid({Hole::circle(cplx(0.25, 0.25), 0.1), Hole::circle(cplx(0.7, 0.7), 0.1)},
                   {16, 20}, kSquare);
    DenseOperator X = assemble_X(g);
    Eigen::VectorXd phi(g.total);
    for (int i = 0; i < g.total; ++i) phi[i] = std::sin(0.37 * i);
    Eigen::VectorXd img = X.mat * phi;
    double int0 = 0.0;
    for (int i = 0; i < 16; ++i) int0 += g.w[i] * phi[i];
    for (int i = 0; i < 16; ++i) CHECK(std::abs(img[i] - int0) < 1e-14);
    for (int i = 16; i < g.total; ++i) CHECK(img[i] == 0.0);

    QuadratureGrid g1 = circle_grid(16, kSquare);
    CHECK(assemble_X(g1).mat.norm() == 0.0);
}

TEST_CASE("modified single layer fixes constants and matches its definition") {
    QuadratureGrid g =
        build_grid({Hole::circle(cplx(0.3, 0.5), 0.1), Hole::trefoil(cplx(0.7, 0.5), 0.08)},
                   {20, 24}, kSquare);
    DenseOperator S = assemble_S(g, kSquare);
    DenseOperator M = assemble_M(g);
    DenseOperator S0 = assemble_S0(g, kSquare);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.total);
    CHECK((S0.mat * ones - ones).lpNorm<Eigen::Infinity>() < 1e-13);
    Eigen::MatrixXd direct =
        S.mat * (Eigen::MatrixXd::Identity(g.total, g.total) - M.mat) + M.mat;
    CHECK((S0.mat - direct).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("fingerprints identify the discretization") {
    QuadratureGrid a = circle_grid(32, kSquare);
    QuadratureGrid b = circle_grid(32, kSquare);
    QuadratureGrid c = circle_grid(34, kSquare);
    CHECK(grid_fingerprint(a, kSquare) == grid_fingerprint(b, kSquare));
    CHECK(grid_fingerprint(a, kSquare) != grid_fingerprint(c, kSquare));
    CHECK(grid_fingerprint(a, kSquare) != grid_fingerprint(a, kEquilateral));
    CHECK(assemble_K(a, kSquare).fingerprint == grid_fingerprint(a, kSquare));
}

TEST_CASE("dump and load round-trip bit for bit") {
    QuadratureGrid g = circle_grid(20, kSquare);
    DenseOperator K = assemble_K(g, kSquare);
    const std::string path = "test_operator_dump.bin";
    K.dump(path);
    Eigen::MatrixXd back = DenseOperator::load(path);
    REQUIRE(back.rows() == K.mat.rows());
    REQUIRE(back.cols() == K.mat.cols());
    for (int i = 0; i < back.rows(); ++i)
        for (int j = 0; j < back.cols(); ++j) CHECK(back(i, j) == K.mat(i, j));
    std::remove(path.c_str());
    CHECK_THROWS_AS(DenseOperator::load("no_such_file.bin"), std::runtime_error);
}

#ifdef _OPENMP
TEST_CASE("assembly is bitwise deterministic across thread counts") {
    QuadratureGrid g =
        build_grid({Hole::trefoil(cplx(0.5, 0.5), 0.1), Hole::circle(cplx(0.1, 0.1), 0.05)},
                   {40, 32}, kEquilateral);
    omp_set_num_threads(1);
    Eigen::MatrixXd k1 = assemble_K(g, kEquilateral).mat;
    Eigen::MatrixXd s1 = assemble_S(g, kEquilateral).mat;
    omp_set_num_threads(3);
    Eigen::MatrixXd k3 = assemble_K(g, kEquilateral).mat;
    Eigen::MatrixXd s3 = assemble_S(g, kEquilateral).mat;
    CHECK((k1 - k3).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((s1 - s3).lpNorm<Eigen::Infinity>() == 0.0);
}
#endif
