#include "torusbie/green.hpp"

#include <cmath>

namespace torusbie {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;

double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }
} // namespace

double green(cplx z, const Torus& torus) {
    if (lattice_distance(z, torus) < 1e-12)
        throw SingularArgument("green: argument at a lattice point");
    const cplx zr = reduce_to_cell(z, torus).z;
    const cplx th = theta1(zr, torus);
    return -std::log(std::abs(th)) / two_pi + zr.imag() * zr.imag() / (2.0 * torus.b());
}

std::array<double, 2> green_gradient(cplx z, const Torus& torus) {
    const cplx zr = reduce_to_cell(z, torus).z;
    const cplx F = theta1_log_deriv(zr, torus);
    return {-F.real() / two_pi, F.imag() / two_pi + zr.imag() / torus.b()};
}

double green_singularity_constant(const Torus& torus) {
    return -std::log(std::abs(theta1_prime_at_zero(torus))) / two_pi;
}

double normal_deriv_source(cplx z, const KernelPoint& xi, const Torus& torus) {
    const auto g = green_gradient(z - xi.position, torus);
    return -dot(cplx(g[0], g[1]), xi.normal);
}

double normal_deriv_target(const KernelPoint& z, cplx xi, const Torus& torus) {
    const auto g = green_gradient(z.position - xi, torus);
    return dot(cplx(g[0], g[1]), z.normal);
}

double single_layer_remainder(double s, double t, const KernelPoint& at_s,
                              const KernelPoint& at_t, const Torus& torus) {
    if (s == t) {
        const double tp0 = std::abs(theta1_prime_at_zero(torus));
        return -std::log(at_t.speed * tp0) / two_pi;
    }
    const double sn = 2.0 * std::sin(0.5 * (s - t));
    return green(at_s.position - at_t.position, torus) + std::log(sn * sn) / (4.0 * pi);
}

} // namespace torusbie
