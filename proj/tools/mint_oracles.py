#!/usr/bin/env python3
"""Regenerate the frozen high-precision reference constants used in the C++ unit tests.

Everything here is computed with mpmath at 60 significant digits, independently of
the C++ code: theta functions through mpmath.jtheta, integrals through adaptive
tanh-sinh quadrature, derivatives symbolically. Paste the printed values into the
tests when they change (they should never change).

Conventions matching the library:
  theta1(z | tau) = jtheta(1, pi*z, q)   with q = exp(i*pi*tau)
  G(z) = -log|theta1(z)| / (2*pi) + Im(z)^2 / (2*b),  b = Im(tau)
  curve: z(t) = a + rho(t)*exp(i*t), counterclockwise
  kappa = (y'x'' - x'y'') / |z'|^3   (circle of radius r gives -1/r)
"""

import mpmath as mp

mp.mp.dps = 60


def theta1(z, tau):
    q = mp.exp(1j * mp.pi * tau)
    return mp.jtheta(1, mp.pi * z, q)


def theta1_prime(z, tau):
    # d/dz jtheta(1, pi z, q) = pi * jtheta'(1, pi z, q)
    q = mp.exp(1j * mp.pi * tau)
    return mp.pi * mp.jtheta(1, mp.pi * z, q, derivative=1)


def green(z, tau):
    b = mp.im(tau)
    return -mp.log(abs(theta1(z, tau))) / (2 * mp.pi) + mp.im(z) ** 2 / (2 * b)


def show(label, value):
    if isinstance(value, mp.mpc):
        print(f"{label}:\n  re {mp.nstr(value.real, 40)}\n  im {mp.nstr(value.imag, 40)}")
    else:
        print(f"{label}:\n  {mp.nstr(value, 40)}")


tau_sq = mp.mpc(0, 1)
tau_eq = mp.mpf(1) / 2 + mp.sqrt(3) / 2 * 1j

show("theta1(0.25, tau=i)", theta1(mp.mpf("0.25"), tau_sq))
show("theta1_prime_at_zero(tau=i)", theta1_prime(0, tau_sq))
show("theta1_prime_at_zero(tau=1/2+sqrt(3)/2 i)", theta1_prime(0, tau_eq))

z = mp.mpc("0.3", "0.3")
show("theta1_log_deriv(0.3+0.3i, tau=i)", theta1_prime(z, tau_sq) / theta1(z, tau_sq))

tau3 = mp.mpf(1) / 3 + mp.mpf(2) / 3 * 1j
show("green((1+tau)/2, tau=1/3+2/3 i)", green((1 + tau3) / 2, tau3))

# trefoil rho(t) = r (1 + 0.3 cos 3t), r = 0.1: curvature at t = 0.4 and perimeter
r = mp.mpf("0.1")
rho = lambda t: r * (1 + mp.mpf("0.3") * mp.cos(3 * t))
drho = lambda t: -3 * r * mp.mpf("0.3") * mp.sin(3 * t)
ddrho = lambda t: -9 * r * mp.mpf("0.3") * mp.cos(3 * t)

def trefoil_kappa(t):
    # z = rho e^{it}: x' = rho' cos - rho sin, etc.; kappa = (y'x'' - x'y'')/|z'|^3
    p, dp, ddp = rho(t), drho(t), ddrho(t)
    xp = dp * mp.cos(t) - p * mp.sin(t)
    yp = dp * mp.sin(t) + p * mp.cos(t)
    xpp = ddp * mp.cos(t) - 2 * dp * mp.sin(t) - p * mp.cos(t)
    ypp = ddp * mp.sin(t) + 2 * dp * mp.cos(t) - p * mp.sin(t)
    sp = mp.sqrt(xp * xp + yp * yp)
    return (yp * xpp - xp * ypp) / sp ** 3

show("trefoil r=0.1 kappa(0.4)", trefoil_kappa(mp.mpf("0.4")))
show("trefoil r=0.1 perimeter",
     mp.quad(lambda t: mp.sqrt(drho(t) ** 2 + rho(t) ** 2), [0, mp.pi, 2 * mp.pi]))

# single-layer boundary values on the circle |z - a| = 0.2, a = 0.5+0.5i, tau = i:
#   (S phi)(z(s)) = int_0^{2pi} G(z(s) - z(t)) phi(t) * 0.2 dt, log-singular at t = s.
a, rc = mp.mpc("0.5", "0.5"), mp.mpf("0.2")
zc = lambda t: a + rc * mp.exp(1j * t)

def single_layer_on_boundary(phi, s):
    # split the parameter circle at the singular point t = s (and its 2*pi image)
    f = lambda t: green(zc(s) - zc(t), tau_sq) * phi(t) * rc
    pieces = [s, s + mp.pi / 2, s + mp.pi, s + 3 * mp.pi / 2, s + 2 * mp.pi]
    return mp.quad(f, pieces, maxdegree=10)

s0 = mp.mpf("0.7")
show("S[cos t](s=0.7) on circle r=0.2 at 0.5+0.5i, tau=i",
     single_layer_on_boundary(mp.cos, s0))
show("S[sin t](s=0.7) on circle r=0.2 at 0.5+0.5i, tau=i",
     single_layer_on_boundary(mp.sin, s0))

# off-boundary single layer with phi = cos 2t, target 0.13+0.4i (distance > 0.2 from the circle)
zt = mp.mpc("0.13", "0.4")
show("S[cos 2t](0.13+0.4i), same circle",
     mp.quad(lambda t: green(zt - zc(t), tau_sq) * mp.cos(2 * t) * rc,
             [0, mp.pi, 2 * mp.pi], maxdegree=10))
