"""Single-center generalized zero-range scattering channel.

A channel of angular momentum l is fixed by one real parameter alpha
imposed through a boundary condition on the (2l+1)-th derivative of
g(r) = r^{l+1} psi(r) at the origin:

    g^{(2l+1)}(0) / g(0) = -2^l l! alpha / (2l-1)!!

The S matrix is rational in k,

    S_l(k) = (alpha - i k^{2l+1}) / (alpha + i k^{2l+1}),

with 2l+1 poles at k = i kappa_m, where the kappa_m are the roots of

    kappa^{2l+1} = (-1)^l alpha.

The equivalent pole-product form S = prod_m (kappa_m - ik)/(kappa_m + ik)
is exposed separately so the two can be cross-checked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .specfun import LMAX, double_factorial, vandermonde_ratio

#: |Im kappa| / |kappa| below which a root counts as lying on the real axis
_AXIS_TOL = 1e-9


@dataclass(frozen=True)
class GzrpChannel:
    """One generalized zero-range channel: angular momentum l, parameter alpha.

    alpha has units a0^{-(2l+1)}; alpha = 0 is allowed as the resonant
    limit (delta = pi/2 for all k) but has no pole set.
    """

    l: int
    alpha: float

    def __post_init__(self):
        if not isinstance(self.l, int) or isinstance(self.l, bool):
            raise TypeError("l must be an integer")
        if self.l < 0 or self.l > LMAX:
            raise ValueError(f"l must be in [0, {LMAX}]")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")

    @property
    def kappas(self) -> tuple[complex, ...]:
        """The 2l+1 roots of kappa^{2l+1} = (-1)^l alpha."""
        if self.alpha == 0.0:
            raise ValueError("alpha = 0 has a degenerate (all-zero) root set")
        c = (-1.0) ** self.l * self.alpha
        rho = abs(c) ** (1.0 / (2 * self.l + 1))
        theta0 = 0.0 if c > 0 else math.pi
        order = 2 * self.l + 1
        return tuple(
            rho * cmath.exp(1j * (theta0 + 2.0 * math.pi * m) / order)
            for m in range(order)
        )

    def s_matrix(self, k: float) -> complex:
        """S_l(k) from the closed rational form; unimodular for real k."""
        y = float(k) ** (2 * self.l + 1)
        return (self.alpha - 1j * y) / (self.alpha + 1j * y)


@dataclass(frozen=True)
class PhaseShift:
    """A partial phase delta at momentum k, reported in (-pi/2, pi/2]."""

    k: float
    delta: float

    @property
    def s_matrix(self) -> complex:
        return cmath.exp(2j * self.delta)


def _fold_half_pi(delta: float) -> float:
    # reduce mod pi into (-pi/2, pi/2]
    delta = math.remainder(delta, math.pi)
    if delta <= -math.pi / 2:
        delta += math.pi
    return delta


def gzrp_phase(channel: GzrpChannel, k: float) -> PhaseShift:
    """Partial phase of the channel, delta = -arctan(k^{2l+1}/alpha)."""
    k = float(k)
    if k <= 0:
        raise ValueError("k must be positive")
    y = k ** (2 * channel.l + 1)
    return PhaseShift(k=k, delta=_fold_half_pi(-math.atan2(y, channel.alpha)))


def pole_product_s_matrix(channel: GzrpChannel, k: float) -> complex:
    """S_l(k) rebuilt from the pole set, prod_m (kappa_m - ik)/(kappa_m + ik).

    Equals the closed rational form up to roundoff; used as a
    consistency check on the root convention.
    """
    kappas = channel.kappas
    return vandermonde_ratio(1j * k, kappas) / vandermonde_ratio(-1j * k, kappas)


@dataclass(frozen=True)
class PoleState:
    """One S-matrix pole at k = i kappa and its spectral classification.

    kind is computed from the root location: a positive real kappa is a
    bound state, a negative real kappa an antibound (virtual) state, and
    complex roots come in conjugate resonance pairs.  parity_label is the
    alternative channel-level bookkeeping rule (bound iff alpha > 0 with
    l odd, or alpha < 0 with l even) recorded alongside because it does
    not always agree with the computed kind; both are reported rather
    than silently picking one.
    """

    k: complex
    kind: str
    parity_label: str


def classify_states(channel: GzrpChannel) -> list[PoleState]:
    """Classify every S-matrix pole of the channel."""
    parity_bound = (channel.alpha > 0 and channel.l % 2 == 1) or (
        channel.alpha < 0 and channel.l % 2 == 0
    )
    axis_parity = "bound" if parity_bound else "antibound"
    out = []
    for kappa in channel.kappas:
        if abs(kappa.imag) <= _AXIS_TOL * abs(kappa):
            kind = "bound" if kappa.real > 0 else "antibound"
            parity = axis_parity
        else:
            kind = "resonance-pair"
            parity = "resonance-pair"
        out.append(PoleState(k=1j * kappa, kind=kind, parity_label=parity))
    return out


def boundary_residual(channel: GzrpChannel, series) -> float | complex:
    """Residual of the origin boundary condition on a power series.

    series holds the coefficients c_0, c_1, ... of g(r) = r^{l+1} psi(r)
    in ascending powers of r, with at least 2l+2 entries and c_0 != 0.
    Returns (2l+1)! c_{2l+1}/c_0 + 2^l l! alpha/(2l-1)!!, which vanishes
    for an exact channel wave.
    """
    l = channel.l
    coeffs = [complex(c) for c in series]
    if len(coeffs) < 2 * l + 2:
        raise ValueError(f"need at least {2 * l + 2} series coefficients")
    if coeffs[0] == 0:
        raise ValueError("leading series coefficient c_0 vanishes")
    ratio = math.factorial(2 * l + 1) * coeffs[2 * l + 1] / coeffs[0]
    target = 2**l * math.factorial(l) * channel.alpha / double_factorial(2 * l - 1)
    residual = ratio + target
    if abs(residual.imag) == 0.0:
        return residual.real
    return residual


def channel_wave_series(channel: GzrpChannel, k: float, terms: int = 8) -> np.ndarray:
    """Series coefficients of r^{l+1} psi for the exact channel wave.

    psi = cos(delta) j_l(kr) + sin(delta) n_l(kr) with the channel's
    phase; the fixed overall normalization is irrelevant to the boundary
    residual.  Returns the first `terms` coefficients of r^{l+1} psi.
    """
    l = channel.l
    k = float(k)
    delta = gzrp_phase(channel, k).delta
    cj, sn = math.cos(delta), math.sin(delta)
    coeffs = np.zeros(terms)
    # r^{l+1} j_l(kr) contributes at powers 2l+1+2s
    term = k**l / double_factorial(2 * l + 1)
    s = 0
    while 2 * l + 1 + 2 * s < terms:
        coeffs[2 * l + 1 + 2 * s] += cj * term
        s += 1
        term *= -0.5 * k * k / (s * (2 * l + 2 * s + 1))
    # r^{l+1} n_l(kr) contributes at even powers 2s; coefficients a_s follow
    # from x^{l+1} n_l(x) = sum_s a_s x^{2s} with a_0 = (2l-1)!! and
    # a_{s+1} = -a_s / (2(s+1)(2s + 1 - 2l))  (cos-type Laurent series)
    a = double_factorial(2 * l - 1) / k ** (l + 1)
    s = 0
    while 2 * s < terms:
        coeffs[2 * s] += sn * a * k ** (2 * s)
        a /= -2.0 * (s + 1) * (2 * s + 1 - 2 * l)
        s += 1
    return coeffs
