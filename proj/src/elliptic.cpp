#include "torusbie/elliptic.hpp"

#include <cmath>

namespace torusbie {

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;
}

Torus::Torus(cplx tau) : tau_(tau), b_(tau.imag()) {
    if (!(b_ > 0.0) || !std::isfinite(b_) || !std::isfinite(tau.real()))
        throw std::invalid_argument("torus: Im(tau) must be positive and finite");
    q_ = std::exp(cplx(0.0, pi) * tau_);
}

ReducedArgument reduce_to_cell(cplx z, const Torus& torus) {
    const cplx tau = torus.tau();
    const double y = z.imag() / torus.b();
    const double x = z.real() - y * tau.real();
    const long m = std::lround(x);
    const long n = std::lround(y);
    return {z - double(m) - double(n) * tau, m, n};
}

double lattice_distance(cplx z, const Torus& torus) {
    const cplx zr = reduce_to_cell(z, torus).z;
    const double y = zr.imag() / torus.b();
    const double x = zr.real() - y * torus.tau().real();
    return std::hypot(x, y);
}

namespace {

struct SeriesResult {
    cplx value;   // theta1 at the reduced argument
    cplx deriv;   // theta1' at the reduced argument
};

/* Truncation: the k-th term is bounded by 2 |q|^{(k+1/2)^2} e^{(2k+1) pi |Im z|},
 * so summation stops once the bound on the next term drops below rtol times the
 * running magnitude.  |q|^{1/4} stands in for the magnitude scale when the sum
 * itself is near a zero of theta1. */
SeriesResult theta1_series(cplx zr, const Torus& torus, SeriesTolerance tol, bool want_deriv) {
    const cplx ipitau = cplx(0.0, pi) * torus.tau();
    const double absq = std::abs(torus.q());
    const double yabs = std::abs(zr.imag());
    const double scale = std::pow(absq, 0.25);

    cplx s = 0.0, ds = 0.0;
    for (int k = 0; k < tol.n_max; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const cplx qp = std::exp(ipitau * double((2 * k + 1) * (2 * k + 1)) / 4.0);
        const cplx arg = double(2 * k + 1) * pi * zr;
        s += 2.0 * sign * qp * std::sin(arg);
        if (want_deriv)
            ds += 2.0 * pi * sign * double(2 * k + 1) * qp * std::cos(arg);
        const double bound =
            std::pow(absq, (k + 1.5) * (k + 1.5)) * std::exp((2 * k + 3) * pi * yabs);
        if (bound < tol.rtol * std::max(std::abs(s), scale))
            return {s, ds};
    }
    throw NonConvergent("theta1 series did not converge within n_max terms");
}

} // namespace

cplx theta1(cplx z, const Torus& torus, SeriesTolerance tol) {
    const ReducedArgument red = reduce_to_cell(z, torus);
    const SeriesResult sr = theta1_series(red.z, torus, tol, false);
    // theta1(z) = (-1)^{m+n} q^{-n^2} e^{-2 i pi n zr} theta1(zr)
    const double sign = ((red.m + red.n) % 2 == 0) ? 1.0 : -1.0;
    const cplx fac = sign * std::exp(-cplx(0.0, pi) * torus.tau() * double(red.n * red.n)) *
                     std::exp(cplx(0.0, -2.0 * pi * red.n) * red.z);
    return fac * sr.value;
}

cplx theta1_log_deriv(cplx z, const Torus& torus, SeriesTolerance tol) {
    if (lattice_distance(z, torus) < 1e-12)
        throw SingularArgument("theta1_log_deriv: argument at a lattice point");
    const ReducedArgument red = reduce_to_cell(z, torus);
    const SeriesResult sr = theta1_series(red.z, torus, tol, true);
    return sr.deriv / sr.value - cplx(0.0, 2.0 * pi * red.n);
}

cplx theta1_prime_at_zero(const Torus& torus, SeriesTolerance tol) {
    const cplx ipitau = cplx(0.0, pi) * torus.tau();
    const double absq = std::abs(torus.q());
    cplx s = 0.0;
    for (int k = 0; k < tol.n_max; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s += 2.0 * pi * sign * double(2 * k + 1) *
             std::exp(ipitau * double((2 * k + 1) * (2 * k + 1)) / 4.0);
        const double bound = 2.0 * pi * (2 * k + 3) * std::pow(absq, (k + 1.5) * (k + 1.5));
        if (bound < tol.rtol * std::abs(s))
            return s;
    }
    throw NonConvergent("theta1'(0) series did not converge within n_max terms");
}

} // namespace torusbie
