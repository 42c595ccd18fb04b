#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "torusbie/fields.hpp"
#include "torusbie/presets.hpp"
#include "torusbie/solvers.hpp"

using namespace torusbie;

namespace {
const Torus kSquare{cplx(0.0, 1.0)};
const Torus kEquilateral{cplx(0.5, std::sqrt(3.0) / 2.0)};

double weighted_mean_on_hole(const Eigen::VectorXd& v, const QuadratureGrid& g, int hole) {
    double num = 0.0, den = 0.0;
    for (int i = g.offsets[hole]; i < g.offsets[hole] + g.counts[hole]; ++i) {
        num += g.w[i] * v[i];
        den += g.w[i];
    }
    return num / den;
}
} // namespace

TEST_CASE("dirichlet solve recovers point-source fluxes and interior values") {
    std::vector<Hole> holes = {Hole::circle(cplx(0.25, 0.25), 0.1),
                               Hole::circle(cplx(0.75, 0.35), 0.12),
                               Hole::circle(cplx(0.4, 0.75), 0.08)};
    for (const Torus& torus : {kSquare, kEquilateral}) {
        QuadratureGrid g = build_grid(holes, {64, 64, 64}, torus);
        ManufacturedData md =
            green_combination(holes, torus, {2.0, -0.5, -1.5}, {1.0, -2.0, 0.5}, {1, 2, 1});
        DirichletSolution sol = solve_dirichlet(g, torus, md.data(g));

        REQUIRE(sol.fluxes.size() == 3);
        double total = 0.0;
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(sol.fluxes[j] - md.expected_fluxes[j]) < 1e-12);
            total += sol.fluxes[j];
        }
        CHECK(std::abs(total) < 1e-12);
        CHECK(sol.rcond > 1e-8);

        // density constraint rows: zero weighted mean on every hole but the last
        CHECK(std::abs(weighted_mean_on_hole(sol.phi, g, 0)) < 1e-12);
        CHECK(std::abs(weighted_mean_on_hole(sol.phi, g, 1)) < 1e-12);

        for (cplx z : {cplx(0.05, 0.55), cplx(0.55, 0.05), cplx(0.05, 0.05)}) {
            cplx p = z.real() + z.imag() * torus.tau();
            CHECK(std::abs(eval_solution(sol, g, torus, p) - md.exact(p)) < 1e-10);
        }
    }
}

TEST_CASE("dirichlet solution does not depend on the singularity anchors") {
    std::vector<Hole> holes = {Hole::circle(cplx(0.3, 0.3), 0.1),
                               Hole::trefoil(cplx(0.7, 0.7), 0.08)};
    QuadratureGrid g = build_grid(holes, {80, 80}, kSquare);
    ManufacturedData md = green_combination(holes, kSquare, {1.0, -1.0}, {1.0, -1.0}, {1, 3});
    Eigen::VectorXd data = md.data(g);

    DirichletSolution a = solve_dirichlet(g, kSquare, data);
    std::vector<cplx> betas = {cplx(0.33, 0.28), cplx(0.68, 0.73)};
    DirichletSolution b = solve_dirichlet(g, kSquare, data, betas);

    CHECK(std::abs(a.betas[0] - cplx(0.3, 0.3)) < 1e-15);
    CHECK(std::abs(b.betas[1] - betas[1]) < 1e-15);
    for (cplx z : {cplx(0.05, 0.05), cplx(0.5, 0.5), cplx(0.9, 0.2)}) {
        CHECK(std::abs(eval_solution(a, g, kSquare, z) - eval_solution(b, g, kSquare, z)) < 1e-9);
    }
    CHECK_THROWS_AS(solve_dirichlet(g, kSquare, data, std::vector<cplx>{cplx(0.3, 0.3)}),
                    std::invalid_argument);
}

TEST_CASE("neumann solve recovers fluxes and the potential up to its constant") {
    std::vector<Hole> holes = {Hole::circle(cplx(0.3, 0.5), 0.12),
                               Hole::oscillatory(cplx(0.75, 0.5), 0.1, 4)};
    for (const Torus& torus : {kSquare, kEquilateral}) {
        QuadratureGrid g = build_grid(holes, {80, 80}, torus);
        ManufacturedData md = green_normal_combination(holes, torus, {1.0, -1.0});
        NeumannSolution sol = solve_neumann(g, torus, md.data(g));

        CHECK(std::abs(sol.fluxes[0] - 1.0) < 1e-10);
        CHECK(std::abs(sol.fluxes[1] + 1.0) < 1e-10);
        CHECK(sol.convention == "zero_mean");

        // zero weighted mean of the trace over the whole boundary
        double num = 0.0, den = 0.0;
        for (int i = 0; i < g.total; ++i) {
            num += g.w[i] * sol.trace[i];
            den += g.w[i];
        }
        CHECK(std::abs(num / den) < 1e-12);

        // interior values match the reference once both are centered the same way
        cplx p1 = 0.52 + 0.1 * torus.tau();
        cplx p2 = 0.05 + 0.9 * torus.tau();
        double mine = eval_solution(sol, g, torus, p1) - eval_solution(sol, g, torus, p2);
        double ref = md.exact(p1) - md.exact(p2);
        CHECK(std::abs(mine - ref) < 1e-9);
    }
}

TEST_CASE("neumann rejects data with nonzero total flux") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {40}, kSquare);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.total);
    CHECK_THROWS_AS(solve_neumann(g, kSquare, ones), NonZeroMeanData);
    // a generous tolerance lets the same data through
    CHECK_NOTHROW(solve_neumann(g, kSquare, ones, 10.0));
}

TEST_CASE("neumann_to_dirichlet returns the solution trace") {
    std::vector<Hole> holes = {Hole::circle(cplx(0.3, 0.3), 0.1),
                               Hole::circle(cplx(0.7, 0.7), 0.1)};
    QuadratureGrid g = build_grid(holes, {48, 48}, kSquare);
    ManufacturedData md = green_normal_combination(holes, kSquare, {2.0, -2.0});
    Eigen::VectorXd data = md.data(g);
    NeumannSolution sol = solve_neumann(g, kSquare, data);
    Eigen::VectorXd tr = neumann_to_dirichlet(g, kSquare, data);
    CHECK((tr - sol.trace).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("steklov spectrum starts at zero with a constant trace") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {50}, kSquare);
    auto pairs = solve_steklov(g, kSquare, 8);
    REQUIRE(pairs.size() == 8);

    CHECK(std::abs(pairs[0].sigma) < 1e-8);
    double dev = 0.0;
    for (int i = 1; i < g.total; ++i)
        dev = std::max(dev, std::abs(pairs[0].trace[i] - pairs[0].trace[0]));
    CHECK(dev < 1e-7);

    for (size_t k = 0; k < pairs.size(); ++k) {
        if (k > 0) CHECK(pairs[k].sigma >= pairs[k - 1].sigma - 1e-12);
        CHECK(pairs[k].residual < 1e-10);
        // unit discrete L2(w) normalization of the trace
        double norm2 = 0.0;
        for (int i = 0; i < g.total; ++i) norm2 += g.w[i] * pairs[k].trace[i] * pairs[k].trace[i];
        CHECK(std::abs(norm2 - 1.0) < 1e-10);
        // single hole: every eigenfunction carries zero net flux
        CHECK(std::abs(steklov_flux(pairs[k], g, 0)) < 1e-9);
    }

    CHECK_THROWS_AS(solve_steklov(g, kSquare, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_steklov(g, kSquare, g.total + 1), std::invalid_argument);
    CHECK_THROWS_AS(steklov_flux(pairs[0], g, 2), std::invalid_argument);
}

TEST_CASE("steklov eigenfunction satisfies the boundary condition between nodes") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {50}, kSquare);
    auto pairs = solve_steklov(g, kSquare, 4);
    for (const auto& p : pairs) CHECK(steklov_residual(p, g, kSquare) < 1e-10);
}

TEST_CASE("solvers reject mismatched data sizes") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {24}, kSquare);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(10);
    CHECK_THROWS_AS(solve_dirichlet(g, kSquare, bad), std::invalid_argument);
    CHECK_THROWS_AS(solve_neumann(g, kSquare, bad), std::invalid_argument);
}
