"""Direct numerical phase shifts for radial potentials.

This is the package's independent check on every analytic phase
formula: integrate the reduced radial equation

    chi''(r) = (2 u(r) + l(l+1)/r^2 - k^2) chi(r)

outward with the fourth-order Numerov scheme from an inner boundary
condition, then read the phase off a two-function match against the
free pair (kr j_l, kr n_l) at the match radius, with

    chi(r) ~ a kr j_l(kr) + b kr n_l(kr),  tan(delta) = b/a.

The inner condition is either an explicit log derivative chi'/chi at
r0 (how dressed boundary conditions enter) or the regular free start.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .gzrp import PhaseShift, _fold_half_pi
from .specfun import LMAX, SphericalKind, spherical, spherical_deriv


class AccuracyError(ArithmeticError):
    """Richardson error estimate exceeded the requested tolerance."""


def default_match_radius(kappa_min: float, cap: float = 50.0) -> float:
    """25 decay lengths of the slowest potential tail, capped."""
    kappa_min = float(kappa_min)
    if kappa_min <= 0:
        raise ValueError("kappa_min must be positive")
    return min(25.0 / kappa_min, cap)


@dataclass(frozen=True)
class RadialProblem:
    """One phase-shift integration.

    potential is u(r) alone (centrifugal term added internally) or None
    for a free wave.  inner_logderiv is chi'/chi at r0; None starts the
    regular solution kr j_l(kr) instead.
    """

    l: int
    k: float
    potential: object = None
    inner_logderiv: float | None = None
    r0: float = 1e-3
    r_match: float = 50.0
    h: float = 1e-3

    def __post_init__(self):
        if not isinstance(self.l, int) or isinstance(self.l, bool):
            raise TypeError("l must be an integer")
        if self.l < 0 or self.l > LMAX:
            raise ValueError(f"l must be in [0, {LMAX}]")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError("k must be positive and finite")
        if not (0 < self.r0 < self.r_match):
            raise ValueError("need 0 < r0 < r_match")
        if not (0 < self.h < (self.r_match - self.r0)):
            raise ValueError("invalid step size")
        if self.inner_logderiv is not None and not math.isfinite(self.inner_logderiv):
            raise ValueError("inner boundary log derivative must be finite")
        if self.potential is not None:
            tail = abs(float(self.potential(self.r_match)))
            if tail >= 1e-10:
                warnings.warn(
                    f"|u(r_match)| = {tail:.3g} >= 1e-10; "
                    "phase may carry a tail systematic",
                    stacklevel=2,
                )


def _g_samples(problem: RadialProblem, r: np.ndarray) -> np.ndarray:
    g = -problem.k**2 * np.ones_like(r)
    if problem.l:
        g = g + problem.l * (problem.l + 1) / (r * r)
    if problem.potential is not None:
        try:
            u = np.asarray(problem.potential(r), dtype=float)
            if u.shape != r.shape:
                raise TypeError
        except (TypeError, ValueError):
            u = np.array([float(problem.potential(x)) for x in r])
        g = g + 2.0 * u
    return g


def _first_step(problem: RadialProblem, g: np.ndarray) -> tuple[float, float]:
    # integrate [chi, chi'] over one step with RK4 substeps; g is sampled
    # on the fine substep grid covering [r0, r0+h]
    nsub = (len(g) - 1) // 2
    hh = problem.h / nsub
    y, dy = 1.0, float(problem.inner_logderiv)
    for i in range(nsub):
        g0, gm, g1 = g[2 * i], g[2 * i + 1], g[2 * i + 2]
        k1y, k1d = dy, g0 * y
        k2y, k2d = dy + 0.5 * hh * k1d, gm * (y + 0.5 * hh * k1y)
        k3y, k3d = dy + 0.5 * hh * k2d, gm * (y + 0.5 * hh * k2y)
        k4y, k4d = dy + hh * k3d, g1 * (y + hh * k3y)
        y += hh / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        dy += hh / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d)
    return 1.0, y


def _free_pair(l: int, k: float, r: float) -> tuple[float, float, float, float]:
    x = k * r
    j = spherical(SphericalKind.J, l, x)
    n = spherical(SphericalKind.N, l, x)
    jp = spherical_deriv(SphericalKind.J, l, x)
    np_ = spherical_deriv(SphericalKind.N, l, x)
    return x * j, k * (j + x * jp), x * n, k * (n + x * np_)


def _integrate(problem: RadialProblem) -> float:
    h = problem.h
    m = int(round((problem.r_match - problem.r0) / h))
    nodes = m + 3
    r = problem.r0 + h * np.arange(nodes)
    g = _g_samples(problem, r)
    if problem.inner_logderiv is None:
        x0, x1 = problem.k * r[0], problem.k * r[1]
        y0 = x0 * spherical(SphericalKind.J, problem.l, x0)
        y1 = x1 * spherical(SphericalKind.J, problem.l, x1)
    else:
        nsub = 8
        rf = problem.r0 + (h / (2 * nsub)) * np.arange(2 * nsub + 1)
        y0, y1 = _first_step(problem, _g_samples(problem, rf))
    c = h * h / 12.0
    glist = g.tolist()
    y = [0.0] * nodes
    y[0], y[1] = y0, y1
    ym, yc = y0, y1
    wm = ym * (1.0 - c * glist[0])
    wc = yc * (1.0 - c * glist[1])
    for i in range(1, nodes - 1):
        wp = 2.0 * wc - wm + h * h * glist[i] * yc
        ym, wm = yc, wc
        wc = wp
        yc = wp / (1.0 - c * glist[i + 1])
        y[i + 1] = yc
    # rescale periodically is unnecessary here; exponential growth only
    # occurs inside classically forbidden regions, absent for k > 0
    im = m  # index of r_match on the grid
    chi = y[im]
    chi_p = (y[im - 2] - 8 * y[im - 1] + 8 * y[im + 1] - y[im + 2]) / (12.0 * h)
    fj, fjp, fn, fnp = _free_pair(problem.l, problem.k, float(r[im]))
    det = fj * fnp - fjp * fn
    a = (chi * fnp - chi_p * fn) / det
    b = (chi_p * fj - chi * fjp) / det
    return math.atan2(b, a)


def integrate_phase(problem: RadialProblem, tol: float | None = None) -> PhaseShift:
    """Phase shift of the problem, folded into (-pi/2, pi/2].

    With tol set, the integration is repeated at twice the step and the
    Richardson estimate |delta_h - delta_2h|/15 must stay below tol,
    otherwise AccuracyError is raised.
    """
    delta = _integrate(problem)
    if tol is not None:
        coarse = RadialProblem(
            l=problem.l,
            k=problem.k,
            potential=problem.potential,
            inner_logderiv=problem.inner_logderiv,
            r0=problem.r0,
            r_match=problem.r_match,
            h=2.0 * problem.h,
        )
        est = abs(_fold_half_pi(delta - _integrate(coarse))) / 15.0
        if est > tol:
            raise AccuracyError(
                f"estimated phase error {est:.3g} exceeds tol {tol:.3g}"
            )
    return PhaseShift(k=problem.k, delta=_fold_half_pi(delta))


def integrate_phase_scan(problems) -> np.ndarray:
    """Phases for a momentum scan, unwrapped mod pi for continuity."""
    deltas = np.array([_integrate(p) for p in problems])
    if deltas.size == 0:
        return deltas
    out = np.empty_like(deltas)
    out[0] = _fold_half_pi(deltas[0])
    for i in range(1, deltas.size):
        out[i] = deltas[i] - math.pi * round((deltas[i] - out[i - 1]) / math.pi)
    return out
