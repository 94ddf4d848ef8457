"""Spherical wave functions in the n = -y sign convention.

The scattering formulas in this package pair the regular function j_l
with an irregular function n_l that is the NEGATIVE of the conventional
spherical Neumann function y_l:

    n_0(x) = cos(x)/x,    n_1(x) = cos(x)/x^2 + sin(x)/x, ...

The outgoing and incoming combinations are

    h1_l(x) = n_l(x) + i j_l(x),    h2_l(x) = n_l(x) - i j_l(x),

so that h1_0(x) = exp(ix)/x.  All four kinds satisfy the same upward
recurrence f_{l+1}(x) = (2l+1)/x f_l(x) - f_{l-1}(x) and the derivative
rule f_l'(x) = f_{l-1}(x) - (l+1)/x f_l(x), with f_0' = -f_1.

Evaluation strategy: closed trigonometric forms for l <= 2 and upward
recurrence above, except that j_l switches to its power series when |x|
is small enough for the trigonometric form (or the recurrence) to lose
accuracy to cancellation.  h1/h2 are evaluated from the closed finite
sum h1_l(x) = (-i)^l (e^{ix}/x) sum_m C_lm (i/2x)^m, which stays well
conditioned for complex arguments where n + i j would cancel.
"""

from __future__ import annotations

import cmath
import enum
import math

LMAX = 10


class SphericalKind(enum.Enum):
    """The four spherical function kinds used by the scattering code."""

    J = "j"
    N = "n"
    H1 = "h1"
    H2 = "h2"


def double_factorial(m: int) -> int:
    """m!! for integer m >= -1, with (-1)!! = 0!! = 1."""
    if not isinstance(m, int):
        raise TypeError("m must be an integer")
    if m < -1:
        raise ValueError("m must be >= -1")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def _validate_l(l: int) -> None:
    if not isinstance(l, int) or isinstance(l, bool):
        raise TypeError("l must be an integer")
    if l < 0 or l > LMAX:
        raise ValueError(f"l must be in [0, {LMAX}]")


def _j_series(l: int, x: complex) -> complex:
    # j_l(x) = x^l sum_s (-x^2/2)^s / (s! (2l+2s+1)!!), entire in x
    w = -0.5 * x * x
    term = 1.0 / double_factorial(2 * l + 1)
    acc = term
    for s in range(1, 60):
        term *= w / (s * (2 * l + 2 * s + 1))
        acc += term
        if abs(term) <= 1e-18 * abs(acc):
            break
    return x**l * acc


def _j_closed(l: int, x: complex) -> complex:
    sx, cx = cmath.sin(x), cmath.cos(x)
    if l == 0:
        return sx / x
    if l == 1:
        return sx / x**2 - cx / x
    return (3.0 / x**3 - 1.0 / x) * sx - 3.0 * cx / x**2


def _n_closed(l: int, x: complex) -> complex:
    sx, cx = cmath.sin(x), cmath.cos(x)
    if l == 0:
        return cx / x
    if l == 1:
        return cx / x**2 + sx / x
    return (3.0 / x**3 - 1.0 / x) * cx + 3.0 * sx / x**2


def _recur_up(f0: complex, f1: complex, l: int, x: complex) -> complex:
    fm, f = f0, f1
    for m in range(1, l):
        fm, f = f, (2 * m + 1) / x * f - fm
    return f


def _h_closed(l: int, x: complex, sign: int) -> complex:
    # sign +1 gives h1, -1 gives h2; finite sum, exact for each l
    acc = 0j
    for m in range(l + 1):
        c = math.factorial(l + m) // (math.factorial(m) * math.factorial(l - m))
        acc += c * (sign * 0.5j / x) ** m
    return (-sign * 1j) ** l * cmath.exp(sign * 1j * x) / x * acc


def _maybe_real(value: complex, x) -> complex | float:
    if isinstance(x, complex):
        return value
    return value.real


def spherical(kind: SphericalKind, l: int, x) -> complex | float:
    """Evaluate a spherical function of the given kind and order at x.

    x may be real or complex but not zero.  Real x with kind J or N
    returns a float; everything else returns a complex number.
    """
    _validate_l(l)
    if x == 0:
        raise ValueError("x must be nonzero")
    if kind is SphericalKind.H1:
        return _h_closed(l, complex(x), +1)
    if kind is SphericalKind.H2:
        return _h_closed(l, complex(x), -1)
    z = complex(x)
    if kind is SphericalKind.J:
        if abs(z) <= max(1.5, float(l)):
            return _maybe_real(_j_series(l, z), x)
        if l <= 2:
            return _maybe_real(_j_closed(l, z), x)
        return _maybe_real(_recur_up(_j_closed(0, z), _j_closed(1, z), l, z), x)
    if kind is SphericalKind.N:
        if l <= 2:
            return _maybe_real(_n_closed(l, z), x)
        return _maybe_real(_recur_up(_n_closed(0, z), _n_closed(1, z), l, z), x)
    raise TypeError("kind must be a SphericalKind")


def spherical_deriv(kind: SphericalKind, l: int, x) -> complex | float:
    """d/dx of the spherical function, from the shared derivative rule."""
    _validate_l(l)
    if x == 0:
        raise ValueError("x must be nonzero")
    if l == 0:
        out = -spherical(kind, 1, x)
        return out
    return spherical(kind, l - 1, x) - (l + 1) / x * spherical(kind, l, x)


def vandermonde_ratio(z: complex, kappas) -> complex:
    """prod_m (kappa_m - z) over a list of pairwise distinct nodes.

    This is the ratio of the Vandermonde determinant on (z, kappa_1,
    ..., kappa_N) to the one on (kappa_1, ..., kappa_N).
    """
    nodes = [complex(c) for c in kappas]
    if not nodes:
        raise ValueError("kappas must be non-empty")
    scale = max(abs(c) for c in nodes) or 1.0
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if abs(nodes[i] - nodes[j]) <= 1e-12 * scale:
                raise ValueError("kappas must be pairwise distinct")
    out = 1.0 + 0j
    for c in nodes:
        out *= c - z
    return out
