#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "torusbie/green.hpp"

using namespace torusbie;

namespace {
const Torus kSquare{cplx(0.0, 1.0)};
const Torus kEquilateral{cplx(0.5, std::sqrt(3.0) / 2.0)};
} // namespace

TEST_CASE("green reference value at the half period") {
    Torus torus{cplx(1.0 / 3.0, 2.0 / 3.0)};
    double v = green((cplx(1.0, 0.0) + torus.tau()) / 2.0, torus);
    CHECK(std::abs(v - (-0.02126065872861213911727356361480517471945)) < 1e-15);
}

TEST_CASE("green is doubly periodic and even") {
    for (const Torus& torus : {kSquare, kEquilateral}) {
        const cplx zs[] = {cplx(0.31, 0.17), cplx(-0.12, 0.41), cplx(0.45, -0.27)};
        for (cplx z : zs) {
            double g = green(z, torus);
            CHECK(std::abs(green(z + 1.0, torus) - g) < 1e-13);
            CHECK(std::abs(green(z + torus.tau(), torus) - g) < 1e-13);
            CHECK(std::abs(green(z - 3.0 + 2.0 * torus.tau(), torus) - g) < 1e-13);
            CHECK(std::abs(green(-z, torus) - g) < 1e-13);
        }
    }
}

TEST_CASE("green throws on lattice points") {
    CHECK_THROWS_AS(green(cplx(0.0, 0.0), kSquare), SingularArgument);
    CHECK_THROWS_AS(green(cplx(-2.0, 0.0), kSquare), SingularArgument);
    CHECK_THROWS_AS(green(2.0 * kEquilateral.tau(), kEquilateral), SingularArgument);
}

TEST_CASE("gradient matches central differences") {
    const double h = 1e-6;
    for (const Torus& torus : {kSquare, kEquilateral}) {
        const cplx zs[] = {cplx(0.27, 0.33), cplx(-0.41, 0.11), cplx(0.05, 0.48)};
        for (cplx z : zs) {
            auto grad = green_gradient(z, torus);
            double gx = (green(z + h, torus) - green(z - h, torus)) / (2.0 * h);
            double gy =
                (green(z + cplx(0.0, h), torus) - green(z - cplx(0.0, h), torus)) / (2.0 * h);
            CHECK(std::abs(grad[0] - gx) < 1e-8);
            CHECK(std::abs(grad[1] - gy) < 1e-8);
        }
    }
}

TEST_CASE("laplacian away from the lattice equals 1/b") {
    const double h = 1e-4;
    for (const Torus& torus : {kSquare, kEquilateral}) {
        cplx z(0.31, 0.29);
        double lap = (green(z + h, torus) + green(z - h, torus) + green(z + cplx(0.0, h), torus) +
                      green(z - cplx(0.0, h), torus) - 4.0 * green(z, torus)) /
                     (h * h);
        CHECK(std::abs(lap - 1.0 / torus.b()) < 1e-5);
    }
}

TEST_CASE("singularity constant equals the log split limit") {
    // G(z) + log|z|/(2 pi) -> -log|theta1'(0)|/(2 pi) as z -> 0
    double c = green_singularity_constant(kSquare);
    CHECK(std::abs(c - (-std::log(2.848694603987787316079985057120911720743) / (2.0 * M_PI))) <
          1e-14);
    for (const Torus& torus : {kSquare, kEquilateral}) {
        double limit = green_singularity_constant(torus);
        for (double r : {1e-4, 1e-5}) {
            cplx z = r * std::exp(cplx(0.0, 0.7));
            double probe = green(z, torus) + std::log(std::abs(z)) / (2.0 * M_PI);
            CHECK(std::abs(probe - limit) < 10.0 * r);
        }
    }
}

TEST_CASE("kernel entries are plain directional derivatives of green") {
    const Torus& torus = kEquilateral;
    KernelPoint xi{cplx(0.1, 0.05), cplx(-0.6, 0.8), 1.3, -2.0};
    cplx z(0.4, 0.33);
    auto grad = green_gradient(z - xi.position, torus);
    // source normal enters with a minus sign through d/d xi G(z - xi)
    double expect_src = -(grad[0] * xi.normal.real() + grad[1] * xi.normal.imag());
    CHECK(std::abs(normal_deriv_source(z, xi, torus) - expect_src) < 1e-14);

    KernelPoint target{z, cplx(0.28, -0.96), 1.0, 0.0};
    double expect_tgt = grad[0] * target.normal.real() + grad[1] * target.normal.imag();
    CHECK(std::abs(normal_deriv_target(target, xi.position, torus) - expect_tgt) < 1e-14);
}

TEST_CASE("single layer remainder is smooth through the diagonal") {
    // circle of radius 0.2 on the square torus; compare the analytic diagonal
    // against values at shrinking parameter separations
    const double r = 0.2;
    auto at = [&](double t) {
        cplx z = cplx(0.5, 0.5) + r * std::exp(cplx(0.0, t));
        cplx zp = r * cplx(0.0, 1.0) * std::exp(cplx(0.0, t));
        return KernelPoint{z, cplx(0.0, 1.0) * zp / std::abs(zp), std::abs(zp), -1.0 / r};
    };
    const double s = 0.9;
    double diag = single_layer_remainder(s, s, at(s), at(s), kSquare);
    double expected =
        -std::log(r * 2.848694603987787316079985057120911720743) / (2.0 * M_PI);
    CHECK(std::abs(diag - expected) < 1e-14);
    double prev_gap = 1.0;
    for (double d : {1e-2, 1e-3, 1e-4}) {
        double off = single_layer_remainder(s, s + d, at(s), at(s + d), kSquare);
        double gap = std::abs(off - diag);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);
}
