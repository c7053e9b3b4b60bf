"""Scalar special functions and integral-geometric constants.

Everything here is a pure function of scalars: probabilists' Hermite
polynomials, the Gaussian tail, sphere surface measures, the beta/gamma
constants of the kinematic formula, and the angle weight F_{k,l} that
couples the normal directions of two intersecting sets.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "hermite",
    "gaussian_tail",
    "sphere_surface",
    "beta_const",
    "gamma_const",
    "f_kl",
]

# explicit-sum evaluation up to this order, three-term recurrence beyond
_HERMITE_EXPLICIT_MAX = 20


def hermite(n: int, t: float) -> float:
    """Probabilists' Hermite polynomial H_n(t).

    Convention: H_0 = 1, H_1(t) = t, H_2(t) = t^2 - 1, with the explicit
    sum H_n(t) = n! sum_j (-1)^j t^(n-2j) / (j! (n-2j)! 2^j).
    """
    if n < 0:
        raise ValueError(f"Hermite order must be nonnegative, got {n}")
    if n <= _HERMITE_EXPLICIT_MAX:
        return _hermite_sum(n, t)
    h_prev = _hermite_sum(_HERMITE_EXPLICIT_MAX - 1, t)
    h = _hermite_sum(_HERMITE_EXPLICIT_MAX, t)
    for m in range(_HERMITE_EXPLICIT_MAX, n):
        h_prev, h = h, t * h - m * h_prev
    return h


def _hermite_sum(n: int, t: float) -> float:
    acc = 0.0
    for j in range(n // 2 + 1):
        coeff = math.factorial(n) / (
            math.factorial(j) * math.factorial(n - 2 * j) * 2.0**j
        )
        acc += (-1) ** j * coeff * t ** (n - 2 * j)
    return acc


def gaussian_tail(t: float) -> float:
    """Upper tail psi(t) = P[N(0,1) >= t] of the standard normal."""
    return 0.5 * math.erfc(t / math.sqrt(2.0))


def sphere_surface(k: int) -> float:
    """k-dimensional surface measure O_k of the unit sphere S^k in R^(k+1).

    O_0 = 2, O_1 = 2*pi, O_2 = 4*pi.
    """
    if k < 0:
        raise ValueError(f"sphere dimension must be nonnegative, got {k}")
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


def beta_const(d: int, k: int) -> float:
    """Kinematic-formula constant beta_{d,k} (Gamma-ratio form)."""
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    return (
        math.gamma((k + 1) / 2.0)
        * math.gamma((d - k + 1) / 2.0)
        / (math.gamma((d + 1) / 2.0) * math.gamma(0.5))
    )


def gamma_const(d: int, k: int) -> float:
    """Flag-measure normalization gamma_{d,k} = binom(d-1,k) / O_{d-1-k}."""
    if not 0 <= k <= d - 1:
        raise ValueError(f"need 0 <= k <= d-1, got k={k}, d={d}")
    return math.comb(d - 1, k) / sphere_surface(d - 1 - k)


def f_kl(theta: float, d: int, k: int, l: int) -> float:
    """Angle weight F_{k,l}(theta) of the translative intersection formula.

    F_{k,l}(theta) = (theta/sin theta) / O_{2d-k-l-1}
                     * int_0^1 (sin((1-t)theta)/sin theta)^(d-1-k)
                               (sin(t theta)/sin theta)^(d-1-l) dt

    for theta in (0, pi), with F_{k,l}(pi) = 0 and the analytic limit at
    theta = 0.
    """
    if not 0 <= k <= d - 1 or not 0 <= l <= d - 1:
        raise ValueError(f"need 0 <= k,l <= d-1, got k={k}, l={l}, d={d}")
    if k + l < d:
        raise ValueError(f"need k + l >= d, got k={k}, l={l}, d={d}")
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"angle must lie in [0, pi], got {theta}")
    surf = sphere_surface(2 * d - k - l - 1)
    if theta == math.pi:
        return 0.0
    if theta < 1e-4:
        # sin(c*theta)/sin(theta) -> c, so the integral tends to the
        # Beta function B(d-k, d-l)
        a, b = d - k, d - l
        return math.gamma(a) * math.gamma(b) / math.gamma(a + b) / surf
    sin_t = math.sin(theta)
    pk, pl = d - 1 - k, d - 1 - l

    def integrand(t):
        return (np.sin((1.0 - t) * theta) / sin_t) ** pk * (
            np.sin(t * theta) / sin_t
        ) ** pl

    integral = _adaptive_gauss_legendre(integrand, 0.0, 1.0, tol=1e-10)
    return (theta / sin_t) * integral / surf


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _gl_panel(f, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.sum(_GL_WEIGHTS * f(mid + half * _GL_NODES)))


def _adaptive_gauss_legendre(f, a: float, b: float, tol: float, depth: int = 0) -> float:
    whole = _gl_panel(f, a, b)
    mid = 0.5 * (a + b)
    left = _gl_panel(f, a, mid)
    right = _gl_panel(f, mid, b)
    if abs(left + right - whole) < tol or depth >= 30:
        return left + right
    return _adaptive_gauss_legendre(f, a, mid, tol / 2, depth + 1) + _adaptive_gauss_legendre(
        f, mid, b, tol / 2, depth + 1
    )
