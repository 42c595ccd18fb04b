#pragma once

#include <complex>
#include <stdexcept>

namespace torusbie {

using cplx = std::complex<double>;

struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Lattice (1, tau) with Im(tau) = b > 0.  The nome q = exp(i pi tau) satisfies
 * |q| = exp(-pi b) < 1, so the theta series below converge geometrically once the
 * argument is reduced to the centered fundamental cell. */
class Torus {
public:
    explicit Torus(cplx tau);
    cplx tau() const { return tau_; }
    double b() const { return b_; }
    cplx q() const { return q_; }

private:
    cplx tau_;
    double b_;
    cplx q_;
};

struct SeriesTolerance {
    double rtol = 1e-15;
    int n_max = 64;
};

/* z = (x + m) + (y + n) tau with |x|, |y| <= 1/2 and integer m, n. */
struct ReducedArgument {
    cplx z;
    long m;
    long n;
};

ReducedArgument reduce_to_cell(cplx z, const Torus& torus);

// distance to the nearest lattice point, measured in lattice coordinates
double lattice_distance(cplx z, const Torus& torus);

/* theta1(z) = 2 sum_{k>=0} (-1)^k q^{(k+1/2)^2} sin((2k+1) pi z).
 * Zeros exactly at the lattice points, theta1(z+1) = -theta1(z),
 * theta1(z+tau) = -q^{-1} exp(-2 i pi z) theta1(z).  The sum runs over the
 * reduced argument and the quasi-period factors are reapplied exactly. */
cplx theta1(cplx z, const Torus& torus, SeriesTolerance tol = {});

// theta1'(z)/theta1(z); picks up -2 i pi n when z reduces by n copies of tau
cplx theta1_log_deriv(cplx z, const Torus& torus, SeriesTolerance tol = {});

cplx theta1_prime_at_zero(const Torus& torus, SeriesTolerance tol = {});

} // namespace torusbie
