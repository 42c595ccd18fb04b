#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "torusbie/fields.hpp"
#include "torusbie/presets.hpp"

using namespace torusbie;

namespace {
const Torus kSquare{cplx(0.0, 1.0)};
}

TEST_CASE("trig_interp reproduces nodes and band-limited functions") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {16}, kSquare);
    Eigen::VectorXd phi(g.total);
    for (int i = 0; i < g.total; ++i) phi[i] = std::sin(3.0 * g.t[i]) + 0.4 * std::cos(5.0 * g.t[i]);
    for (int i = 0; i < g.total; ++i)
        CHECK(std::abs(trig_interp(phi, g, 0, g.t[i]) - phi[i]) < 1e-13);
    for (double s : {0.123, 1.9, 3.71, 6.1}) {
        double expect = std::sin(3.0 * s) + 0.4 * std::cos(5.0 * s);
        CHECK(std::abs(trig_interp(phi, g, 0, s) - expect) < 1e-12);
    }
}

TEST_CASE("refine_grid interleaves and trig_upsample matches analytic values") {
    std::vector<Hole> holes = {Hole::trefoil(cplx(0.3, 0.3), 0.1),
                               Hole::circle(cplx(0.75, 0.75), 0.1)};
    QuadratureGrid g = build_grid(holes, {32, 24}, kSquare);
    QuadratureGrid f = refine_grid(g, 3);
    REQUIRE(f.counts[0] == 96);
    REQUIRE(f.counts[1] == 72);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < g.counts[j]; ++i)
            CHECK(std::abs(f.z[f.offsets[j] + 3 * i] - g.z[g.offsets[j] + i]) < 1e-15);

    Eigen::VectorXd phi(g.total);
    auto val = [](int h, double t) {
        return h == 0 ? std::cos(2.0 * t) - 0.3 * std::sin(4.0 * t) : std::sin(t);
    };
    for (int i = 0; i < g.total; ++i) phi[i] = val(g.hole_of[i], g.t[i]);
    Eigen::VectorXd up = trig_upsample(phi, g, f);
    REQUIRE(up.size() == f.total);
    for (int i = 0; i < f.total; ++i)
        CHECK(std::abs(up[i] - val(f.hole_of[i], f.t[i])) < 1e-12);
}

TEST_CASE("double layer of the constant density sees the hole volume fraction") {
    std::vector<Hole> holes = {Hole::circle(cplx(0.5, 0.5), 0.2),
                               Hole::trefoil(cplx(0.05, 0.05), 0.06)};
    QuadratureGrid g = build_grid(holes, {100, 100}, kSquare);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.total);
    const double frac = g.total_area / kSquare.b();
    // far from all boundaries on either side
    CHECK(std::abs(eval_double_layer(ones, g, kSquare, cplx(0.5, 0.06)) - (-frac)) < 1e-9);
    CHECK(std::abs(eval_double_layer(ones, g, kSquare, cplx(0.5, 0.5)) - (1.0 - frac)) < 1e-9);
    CHECK(std::abs(eval_double_layer(ones, g, kSquare, cplx(0.05, 0.05)) - (1.0 - frac)) < 1e-9);
}

TEST_CASE("boundary trace of the single layer agrees with the matrix at the nodes") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {40}, kSquare);
    Eigen::VectorXd phi(g.total);
    for (int i = 0; i < g.total; ++i) phi[i] = std::cos(g.t[i]) + 0.2;
    Eigen::VectorXd Sphi = assemble_S(g, kSquare).mat * phi;
    for (int i : {0, 7, 23}) {
        CHECK(std::abs(eval_single_layer_on_boundary(phi, g, kSquare, 0, g.t[i]) - Sphi[i]) <
              1e-12);
    }
}

TEST_CASE("flux accessors expose the per-hole solution fluxes") {
    std::vector<Hole> holes = {Hole::circle(cplx(0.3, 0.3), 0.1),
                               Hole::circle(cplx(0.7, 0.7), 0.1)};
    QuadratureGrid g = build_grid(holes, {48, 48}, kSquare);
    ManufacturedData md = green_combination(holes, kSquare, {1.5, -1.5}, {0.0, 0.0}, {1, 1});
    DirichletSolution ds = solve_dirichlet(g, kSquare, md.data(g));
    CHECK(flux(ds, g, 0) == ds.fluxes[0]);
    CHECK(std::abs(flux(ds, g, 0) - 1.5) < 1e-12);

    ManufacturedData nd = green_normal_combination(holes, kSquare, {1.0, -1.0});
    NeumannSolution ns = solve_neumann(g, kSquare, nd.data(g));
    CHECK(flux(ns, g, 1) == ns.fluxes[1]);
    CHECK(std::abs(flux(ns, g, 1) + 1.0) < 1e-10);

    auto pairs = solve_steklov(g, kSquare, 3);
    CHECK(flux(pairs[1], g, 0) == steklov_flux(pairs[1], g, 0));
}

TEST_CASE("eval_solution handles steklov eigenfunctions near their hole") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.5, 0.5), 0.2)}, {50}, kSquare);
    auto pairs = solve_steklov(g, kSquare, 3);
    const SteklovEigenpair& p = pairs[1];
    // compare against the trace through trigonometric interpolation of a near point
    // evaluated on a refined grid: u just outside the hole approaches the trace
    cplx zb = cplx(0.5, 0.5) + 0.28 * std::exp(cplx(0.0, 1.1));
    double u = eval_solution(p, g, kSquare, zb);
    CHECK(std::isfinite(u));
    CHECK(std::abs(u) < 10.0);
}

TEST_CASE("sample_field lays out lattice midpoints with region tags") {
    QuadratureGrid g = build_grid({Hole::circle(cplx(0.45, 0.45), 0.2)}, {64}, kSquare);
    auto one = [](cplx) { return 1.0; };
    FieldGrid fg = sample_field(one, g, kSquare, 10);
    REQUIRE(int(fg.value.size()) == 100);
    CHECK(fg.resolution == 10);
    // idx = i + n j, z = (i+1/2)/n + (j+1/2)/n tau
    CHECK(fg.x[0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(fg.y[0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(fg.x[3 + 10 * 7] == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(fg.y[3 + 10 * 7] == doctest::Approx(0.75).epsilon(1e-15));
    // the cell at (0.45, 0.45) sits inside the hole
    CHECK(fg.mask[4 + 10 * 4].region == Region::Hole);
    CHECK(fg.mask[4 + 10 * 4].hole == 0);
    CHECK(fg.mask[0].region == Region::Omega);
    int holes = 0, omega = 0, near = 0;
    for (const RegionTag& m : fg.mask) {
        if (m.region == Region::Hole) ++holes;
        else if (m.region == Region::Omega) ++omega;
        else ++near;
    }
    CHECK(holes > 0);
    CHECK(omega > 0);
    CHECK(holes + omega + near == 100);
}

TEST_CASE("convergence_study drives the error down against both reference kinds") {
    std::vector<Hole> holes = {Hole::circle(cplx(0.5, 0.5), 0.2)};
    ManufacturedData md = single_layer_sine(holes, kSquare, {1.0}, {1}, 400);

    ConvergenceProblem prob;
    prob.torus = kSquare;
    prob.holes = holes;
    prob.problem = "dirichlet";
    prob.data = md.data;
    prob.exact = md.exact;
    for (int k = 0; k < 120; ++k)
        prob.contour.push_back(cplx(0.5, 0.5) +
                               0.35 * std::exp(cplx(0.0, 2.0 * M_PI * k / 120.0)));

    ConvergenceResult res = convergence_study(prob, {8, 16, 24, 32});
    REQUIRE(res.rows.size() == 4);
    CHECK(res.rows[0].nodes_per_hole == 8);
    CHECK(res.rows[3].error < res.rows[0].error);
    CHECK(res.rows[3].error < 1e-7);
    CHECK(res.slope < -0.1);

    // self-referencing variant: compare against a refined solve of the same problem
    ConvergenceProblem self = prob;
    self.exact = nullptr;
    self.reference_factor = 4;
    ConvergenceResult res2 = convergence_study(self, {8, 16, 32});
    REQUIRE(res2.rows.size() == 3);
    CHECK(res2.rows[2].error < res2.rows[0].error);
    CHECK(res2.rows[2].error < 1e-7);
}
