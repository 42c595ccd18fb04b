#pragma once

#include <array>

#include "torusbie/elliptic.hpp"

namespace torusbie {

/* A point of a parametrized boundary curve together with the local frame data the
 * layer-potential kernels need.  normal points out of the domain, i.e. into the
 * hole the curve bounds; speed = |z'(t)|; curvature is signed so a circle of
 * radius r traversed counterclockwise has kappa = -1/r. */
struct KernelPoint {
    cplx position;
    cplx normal;
    double speed = 1.0;
    double curvature = 0.0;
};

/* G(z) = -(1/2pi) log|theta1(z)| + Im(z)^2 / (2b), doubly periodic,
 * Laplacian 1/b away from the lattice, G(z) ~ -(1/2pi) log|z| near 0. */
double green(cplx z, const Torus& torus);

// (G_x, G_y); with F = theta1'/theta1: G_x = -Re F/(2pi), G_y = Im F/(2pi) + Im z / b
std::array<double, 2> green_gradient(cplx z, const Torus& torus);

// additive constant of G at its singularity: G(z) + (1/2pi) log|z| -> this, z -> 0
double green_singularity_constant(const Torus& torus);

// double-layer kernel: derivative of G(z - xi) along the normal at the source xi
double normal_deriv_source(cplx z, const KernelPoint& xi, const Torus& torus);

// adjoint kernel: derivative of G(z - xi) along the normal at the target z
double normal_deriv_target(const KernelPoint& z, cplx xi, const Torus& torus);

/* Smooth remainder of the single-layer log split on one curve:
 *   G(z(s) - z(t)) = -(1/4pi) log(4 sin^2((s-t)/2)) + remainder(s, t).
 * The diagonal is the analytic limit -(1/2pi) log(speed(t) |theta1'(0)|); computing
 * it by letting s -> t would cancel catastrophically. */
double single_layer_remainder(double s, double t, const KernelPoint& at_s,
                              const KernelPoint& at_t, const Torus& torus);

} // namespace torusbie
