"""Darboux dressing of radial waves by explicit prop functions.

A prop function phi solves the free radial problem at a fixed negative
energy and defines the transform psi -> psi' - s psi with s = (ln phi)'.
Applied to a zero-range channel wave, one transform multiplies the S
matrix by (kappa - ik)/(kappa + ik), so an N-step chain shifts the
partial phase by -sum_m arctan(k/kappa_m).  The transformed potential is

    u1(r) = u(r) + 1/r^2 - s'(r),

which for the cosh prop cosh(kappa r)/r is the sech-squared well
-kappa^2 / cosh^2(kappa r).

All props are handled through the reduced radial function chi = r phi,
which obeys chi'' = (l(l+1)/r^2 + c) chi with a family constant c; that
single identity supplies analytic first derivatives, the exact s', and
arbitrary-order derivatives for Wronskians.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .gzrp import GzrpChannel, PhaseShift, _fold_half_pi, gzrp_phase
from .specfun import LMAX, SphericalKind, spherical, spherical_deriv


class PoleError(ArithmeticError):
    """The prop function vanishes where its log derivative is needed."""

    def __init__(self, location: float):
        self.location = location
        super().__init__(f"prop function vanishes near r = {location:.6g}")


class PropFamily(enum.Enum):
    COSH_OVER_R = "cosh"
    EXP_OVER_R = "exp"
    H1_KAPPA = "h1"
    GENERAL_LC = "lc"


@dataclass(frozen=True)
class PropFunction:
    """A seed solution phi(r) for one Darboux step.

    Families:
      COSH_OVER_R: cosh(kappa r)/r, real kappa > 0, l = 0
      EXP_OVER_R:  exp(kappa r)/r, real kappa != 0 (sign selects growth), l = 0
      H1_KAPPA:    h1_l(kappa r), complex kappa != 0
      GENERAL_LC:  c0 n_l(i kappa r) + c1 j_l(i kappa r), real kappa > 0;
                   experimental, sampleable but carrying no phase claims
    """

    family: PropFamily
    kappa: complex
    l: int = 0
    c0: complex = 1.0
    c1: complex = 0.0

    def __post_init__(self):
        if not isinstance(self.l, int) or isinstance(self.l, bool):
            raise TypeError("l must be an integer")
        if self.l < 0 or self.l > LMAX:
            raise ValueError(f"l must be in [0, {LMAX}]")
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        if self.family in (PropFamily.COSH_OVER_R, PropFamily.EXP_OVER_R):
            if self.l != 0:
                raise ValueError(f"{self.family.value} prop requires l = 0")
            if complex(self.kappa).imag != 0:
                raise ValueError(f"{self.family.value} prop requires real kappa")
            if self.family is PropFamily.COSH_OVER_R and complex(self.kappa).real <= 0:
                raise ValueError("cosh prop requires kappa > 0")
        if self.family is PropFamily.GENERAL_LC:
            z = complex(self.kappa)
            if z.imag != 0 or z.real <= 0:
                raise ValueError("lc prop requires real kappa > 0")
            if self.c0 == 0 and self.c1 == 0:
                raise ValueError("lc prop requires a nonzero coefficient")

    @property
    def energy_constant(self) -> complex:
        """The constant c in chi'' = (l(l+1)/r^2 + c) chi."""
        if self.family is PropFamily.H1_KAPPA:
            return -(complex(self.kappa) ** 2)
        kappa = complex(self.kappa).real
        return complex(kappa * kappa)

    def _chi_pair(self, r: float) -> tuple[complex, complex]:
        # chi = r phi and its first derivative
        if self.family is PropFamily.COSH_OVER_R:
            kr = complex(self.kappa).real * r
            return complex(math.cosh(kr)), self.kappa * complex(math.sinh(kr))
        if self.family is PropFamily.EXP_OVER_R:
            e = cmath.exp(self.kappa * r)
            return e, self.kappa * e
        if self.family is PropFamily.H1_KAPPA:
            x = self.kappa * r
            h = spherical(SphericalKind.H1, self.l, x)
            hp = spherical_deriv(SphericalKind.H1, self.l, x)
            return r * h, h + x * hp
        x = 1j * complex(self.kappa).real * r
        f = self.c0 * spherical(SphericalKind.N, self.l, x) + self.c1 * spherical(
            SphericalKind.J, self.l, x
        )
        fp = self.c0 * spherical_deriv(SphericalKind.N, self.l, x) + self.c1 * (
            spherical_deriv(SphericalKind.J, self.l, x)
        )
        return r * f, f + x * fp

    def value(self, r: float) -> complex:
        """phi(r)."""
        r = float(r)
        if r <= 0:
            raise ValueError("r must be positive")
        return self._chi_pair(r)[0] / r

    def chi_derivs(self, r: float, order: int) -> list[complex]:
        """[chi, chi', ..., chi^(order)] at r, from the chi'' identity."""
        r = float(r)
        if r <= 0:
            raise ValueError("r must be positive")
        chi, chi1 = self._chi_pair(r)
        out = [chi, chi1]
        ll = self.l * (self.l + 1)
        c = self.energy_constant
        for m in range(order - 1):
            acc = 0j
            for j in range(m + 1):
                if j == 0:
                    qj = ll / (r * r) + c
                else:
                    qj = ll * (-1) ** j * math.factorial(j + 1) / r ** (j + 2)
                acc += math.comb(m, j) * qj * out[m - j]
            out.append(acc)
        return out[: order + 1]

    def s(self, r: float) -> complex:
        """Log derivative s(r) = phi'(r)/phi(r)."""
        r = float(r)
        if r <= 0:
            raise ValueError("r must be positive")
        chi, chi1 = self._chi_pair(r)
        scale = abs(chi1) * r + 1.0
        if abs(chi) <= 1e-14 * scale:
            raise PoleError(r)
        out = chi1 / chi - 1.0 / r
        if out.imag == 0.0:
            return out.real
        return out

    def s_prime(self, r: float) -> complex:
        """Analytic s'(r) from the chi'' identity, avoiding stencils."""
        r = float(r)
        sval = self.s(r)
        w = sval + 1.0 / r
        q = self.l * (self.l + 1) / (r * r) + self.energy_constant
        out = q - w * w + 1.0 / (r * r)
        if out.imag == 0.0:
            return out.real
        return out


def channel_props(channel: GzrpChannel) -> list[PropFunction]:
    """Decaying pole waves h1_l(i kappa_m r) for every channel root."""
    return [
        PropFunction(family=PropFamily.H1_KAPPA, kappa=1j * kappa, l=channel.l)
        for kappa in channel.kappas
    ]


def log_derivative_s(prop: PropFunction):
    """The transform kernel s = (ln phi)' as a callable of r."""
    return prop.s


def sample_log_derivative(prop: PropFunction, grid) -> np.ndarray:
    """s sampled on a grid, raising PoleError if phi vanishes on it."""
    grid = np.asarray(grid, dtype=float)
    out = np.empty(grid.shape, dtype=complex)
    for i, r in enumerate(grid.ravel()):
        out.ravel()[i] = complex(prop.s(r))
    if np.all(np.abs(out.imag) == 0.0):
        return out.real
    return out


def five_point_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative of uniformly sampled values."""
    y = np.asarray(values)
    if y.size < 5:
        raise ValueError("need at least 5 samples")
    out = np.empty_like(y, dtype=np.result_type(y.dtype, float))
    out[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12.0 * h)
    # one-sided fourth-order stencils at the edges
    out[0] = np.dot([-25.0, 48.0, -36.0, 16.0, -3.0], y[:5]) / (12.0 * h)
    out[1] = np.dot([-3.0, -10.0, 18.0, -6.0, 1.0], y[:5]) / (12.0 * h)
    out[-2] = np.dot([-1.0, 6.0, -18.0, 10.0, 3.0], y[-5:]) / (12.0 * h)
    out[-1] = np.dot([3.0, -16.0, 36.0, -48.0, 25.0], y[-5:]) / (12.0 * h)
    return out


def dt_apply(psi, s, grid=None, psi_deriv=None):
    """Dressed wave psi' - s psi.

    With callables, returns a callable; psi' comes from psi_deriv when
    given, otherwise from a five-point stencil with step scaled to r.
    With arrays, psi and s must be sampled on the common uniform grid
    (a length mismatch is a domain error) and the stencil acts on the
    samples.
    """
    if callable(psi):
        s_fun = s if callable(s) else None
        if s_fun is None:
            raise ValueError("s must be callable when psi is callable")
        if psi_deriv is not None:

            def dressed(r):
                return psi_deriv(r) - s_fun(r) * psi(r)

            return dressed

        def dressed(r):
            h = 1e-3 * max(1.0, abs(r))
            num = psi(r - 2 * h) - 8 * psi(r - h) + 8 * psi(r + h) - psi(r + 2 * h)
            return num / (12.0 * h) - s_fun(r) * psi(r)

        return dressed
    if grid is None:
        raise ValueError("sampled psi requires the grid")
    psi = np.asarray(psi)
    s = np.asarray(s)
    grid = np.asarray(grid, dtype=float)
    if psi.shape != grid.shape or s.shape != grid.shape:
        raise ValueError("psi, s and grid must share one shape")
    steps = np.diff(grid)
    if steps.size == 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("sampled dt_apply requires a uniform grid")
    if psi_deriv is not None:
        dpsi = np.asarray(psi_deriv)
        if dpsi.shape != grid.shape:
            raise ValueError("psi_deriv must match the grid")
    else:
        dpsi = five_point_derivative(psi, float(steps[0]))
    return dpsi - s * psi


def dressed_potential(prop: PropFunction, grid) -> np.ndarray:
    """u1 = 1/r^2 - s' sampled on the grid (background u = 0)."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0):
        raise ValueError("grid must be positive")
    out = np.empty(grid.shape, dtype=complex)
    flat = out.ravel()
    for i, r in enumerate(grid.ravel()):
        flat[i] = 1.0 / (r * r) - complex(prop.s_prime(r))
    if np.all(out.imag == 0.0):
        return out.real
    return out


@dataclass(frozen=True)
class DressingChain:
    """An ordered chain of real decay constants kappa_m > 0.

    core_flags records, per step, which of the two short-range core
    conventions the seed used; the flags are bookkeeping only and do not
    enter the phase formulas.
    """

    kappas: tuple[float, ...]
    core_flags: tuple[int, ...] = field(default=())

    def __post_init__(self):
        kappas = tuple(float(k) for k in self.kappas)
        object.__setattr__(self, "kappas", kappas)
        if not kappas:
            raise ValueError("chain must contain at least one kappa")
        if any(k <= 0 for k in kappas):
            raise ValueError("chain kappas must be positive")
        for i in range(len(kappas)):
            for j in range(i + 1, len(kappas)):
                if abs(kappas[i] - kappas[j]) <= 1e-12 * max(kappas):
                    raise ValueError("chain kappas must be distinct")
        flags = tuple(int(f) for f in self.core_flags)
        if not flags:
            flags = (1,) * len(kappas)
        if len(flags) != len(kappas):
            raise ValueError("core_flags must match kappas in length")
        if any(f not in (0, 1) for f in flags):
            raise ValueError("core_flags entries must be 0 or 1")
        object.__setattr__(self, "core_flags", flags)


def chain_phase(channel: GzrpChannel, chain: DressingChain, k: float) -> PhaseShift:
    """Phase of the channel after the chain, folded into (-pi/2, pi/2].

    Each step multiplies the S matrix by (kappa_m - ik)/(kappa_m + ik),
    i.e. subtracts arctan(k/kappa_m) from the phase.
    """
    base = gzrp_phase(channel, k)
    shift = sum(math.atan(base.k / kappa) for kappa in chain.kappas)
    return PhaseShift(k=base.k, delta=_fold_half_pi(base.delta - shift))


def renormalized_length(a: float, kappa: float) -> float:
    """Scattering length after one dressing step, A + 1/kappa."""
    kappa = float(kappa)
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return float(a) + 1.0 / kappa


def dressed_boundary_logderiv(k: float, kappa: float, alpha: float) -> float:
    """(r psi1)'/(r psi1) at the origin for the cosh-dressed channel wave.

    Equals (k^2 + kappa^2)/alpha, replacing the bare condition -alpha.
    """
    alpha = float(alpha)
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    k, kappa = float(k), float(kappa)
    return (k * k + kappa * kappa) / alpha


def riccati_residual(s, l: int, k0: float, grid, s_prime=None) -> float:
    """Max residual of s' + (2/r)s + s^2 = l(l+1)/r^2 + k0 on the grid.

    s (and optionally its analytic derivative) are callables; without
    s_prime a five-point stencil is used, which costs a few digits.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0):
        raise ValueError("grid must be positive")
    worst = 0.0
    for r in grid.ravel():
        sval = complex(s(r))
        if s_prime is not None:
            sp = complex(s_prime(r))
        else:
            h = 1e-3 * max(1.0, r)
            sp = complex(
                s(r - 2 * h) - 8 * s(r - h) + 8 * s(r + h) - s(r + 2 * h)
            ) / (12.0 * h)
        res = sp + 2.0 / r * sval + sval * sval - l * (l + 1) / (r * r) - k0
        worst = max(worst, abs(res))
    return worst


def crum_wronskian(props, r: float) -> complex:
    """Wronskian of the reduced radial seeds chi_m = r phi_m at r.

    Built on chi rather than phi because the chi-form Wronskian of a
    complete channel root set is r-independent (the roots sum to zero),
    which is the identity the chain formulas rest on.  Evaluated as a
    dense determinant with partial pivoting; chains longer than 7 are
    rejected.
    """
    props = list(props)
    n = len(props)
    if n == 0:
        raise ValueError("props must be non-empty")
    if n > 7:
        raise ValueError("Wronskian size limited to 7")
    mat = np.empty((n, n), dtype=complex)
    for j, prop in enumerate(props):
        mat[:, j] = prop.chi_derivs(r, n - 1)
    return complex(np.linalg.det(mat))


def write_potential_csv(path, grid, u) -> None:
    """Two-column CSV (r, u) with 9 significant digits."""
    grid = np.asarray(grid, dtype=float)
    u = np.asarray(u)
    if grid.shape != u.shape:
        raise ValueError("grid and u must share one shape")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("r,u\n")
        for r, val in zip(grid.ravel(), u.ravel()):
            fh.write(f"{r:.9g},{np.real(val):.9g}\n")
