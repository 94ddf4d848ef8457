"""Multi-center point-scatterer phases for X_n and YX_n structures.

n identical s-wave centers with boundary parameter a sit at mutual
distance R (a segment, a regular triangle, or a regular tetrahedron);
YX_n adds one center with parameter a_y at distance D from every X.
Matching the boundary condition at every center turns the scattering
wave sum_m c_m sin(k|r - r_m| + delta)/|r - r_m| into the pencil
problem

    (A + t B) c = 0,    t = tan(delta),

with A_jj = a_j k, A_jm = a_j sin(k d_jm)/d_jm, B_jj = 1 and
B_jm = a_j cos(k d_jm)/d_jm.  Symmetry reduces the pencil to closed
forms: one symmetric and one (n-1)-fold antisymmetric channel for X_n,
and for YX_n an extra quadratic coupling the symmetric X combination
to the Y center.  The pencil itself is kept as the independent root
oracle (QZ eigenvalues of (A, B) give every t at once, including the
even-multiplicity roots a sign-scan would miss).

Phases along a momentum scan are unwrapped mod pi, starting in
(-pi/2, pi/2] at the lowest momentum; cross sections per channel are
sigma_J = (4 pi/k^2) sin^2(delta_J) and enter the total with their
degeneracies.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .units import k_to_ev


class ComplexRootError(ArithmeticError):
    """The channel quadratic lost its real roots at some momentum."""

    def __init__(self, k: float):
        self.k = k
        super().__init__(f"complex channel roots at k = {k:.6g}")


class DivergentScatteringLength(ZeroDivisionError):
    """The closed-form scattering length has a pole at these parameters."""


def _fold_half_pi(delta: float) -> float:
    delta = math.remainder(delta, math.pi)
    if delta <= -math.pi / 2:
        delta += math.pi
    return delta


def _unwrap_mod_pi(deltas: np.ndarray) -> np.ndarray:
    out = np.empty_like(deltas)
    out[0] = _fold_half_pi(float(deltas[0]))
    for i in range(1, deltas.size):
        out[i] = deltas[i] - math.pi * round((deltas[i] - out[i - 1]) / math.pi)
    return out


def _as_k_array(k) -> tuple[np.ndarray, bool]:
    arr = np.atleast_1d(np.asarray(k, dtype=float))
    if arr.ndim != 1:
        raise ValueError("k must be a scalar or a 1-d array")
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise ValueError("momenta must be positive and finite")
    if arr.size > 1 and np.any(np.diff(arr) <= 0):
        raise ValueError("momentum grids must be strictly increasing")
    return arr, np.isscalar(k) or np.asarray(k).ndim == 0


@dataclass(frozen=True)
class XnGeometry:
    """n identical centers, pairwise distance R, boundary parameter a."""

    n: int
    R: float
    a: float

    def __post_init__(self):
        if self.n not in (2, 3, 4):
            raise ValueError("n must be 2, 3 or 4")
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError("R must be positive")
        if not math.isfinite(self.a):
            raise ValueError("a must be finite")

    @property
    def degeneracies(self) -> tuple[int, int]:
        return (1, self.n - 1)

    def centers(self) -> np.ndarray:
        return _x_ring(self.n, self.R)

    def boundary_params(self) -> np.ndarray:
        return np.full(self.n, float(self.a))


def _x_ring(n: int, R: float) -> np.ndarray:
    if n == 2:
        return np.array([[-R / 2, 0.0, 0.0], [R / 2, 0.0, 0.0]])
    if n == 3:
        rho = R / math.sqrt(3.0)
        ang = np.deg2rad([90.0, 210.0, 330.0])
        return np.column_stack([rho * np.cos(ang), rho * np.sin(ang), np.zeros(3)])
    s = R / (2.0 * math.sqrt(2.0))
    return s * np.array(
        [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
    )


@dataclass(frozen=True)
class YxnGeometry:
    """X_n plus a central-axis scatterer Y at distance D from every X.

    For n = 4 the Y position is forced to the tetrahedron centroid, so
    R and D are consistent only when R = 2 sqrt(2/3) D; a violation
    beyond 1e-3 relative is warned about but not rejected, and the
    closed-form phases keep using the stated D.
    """

    n: int
    R: float
    D: float
    a_x: float
    a_y: float

    def __post_init__(self):
        if self.n not in (2, 3, 4):
            raise ValueError("n must be 2, 3 or 4")
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError("R must be positive")
        if not (self.D > 0 and math.isfinite(self.D)):
            raise ValueError("D must be positive")
        if not (math.isfinite(self.a_x) and math.isfinite(self.a_y)):
            raise ValueError("boundary parameters must be finite")
        if self.n == 4:
            target = 2.0 * math.sqrt(2.0 / 3.0) * self.D
            if abs(self.R - target) > 1e-3 * self.R:
                warnings.warn(
                    f"tetrahedral geometry inconsistent: R = {self.R:.6g} "
                    f"but 2 sqrt(2/3) D = {target:.6g}",
                    stacklevel=2,
                )

    @property
    def degeneracies(self) -> tuple[int, int, int]:
        return (1, 1, self.n - 1)

    def centers(self) -> np.ndarray:
        ring = _x_ring(self.n, self.R)
        if self.n == 4:
            y = np.zeros(3)
        else:
            rho = self.R / 2.0 if self.n == 2 else self.R / math.sqrt(3.0)
            if self.D <= rho:
                raise ValueError(
                    f"no embedding: D = {self.D:.6g} must exceed the ring "
                    f"circumradius {rho:.6g}"
                )
            y = np.array([0.0, 0.0, math.sqrt(self.D**2 - rho**2)])
        return np.vstack([ring, y])

    def boundary_params(self) -> np.ndarray:
        return np.array([self.a_x] * self.n + [self.a_y])


# ---------------------------------------------------------------------------
# closed-form phases


def xn_phases(geom: XnGeometry, k):
    """(delta_0, delta_1) for X_n; delta_1 carries degeneracy n - 1."""
    ks, scalar = _as_k_array(k)
    n, R, a = geom.n, geom.R, geom.a
    kr = ks * R
    d0 = np.arctan2(-a * (kr + (n - 1) * np.sin(kr)), R + (n - 1) * a * np.cos(kr))
    d1 = np.arctan2(-a * (kr - np.sin(kr)), R - a * np.cos(kr))
    d0, d1 = _unwrap_mod_pi(d0), _unwrap_mod_pi(d1)
    if scalar:
        return float(d0[0]), float(d1[0])
    return d0, d1


def xn_length_formula(n: int, a: float, R: float) -> float:
    """A = n a R / (R + (n-1) a); n = 1 collapses to the single center."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return float(a)
    den = R + (n - 1) * a
    if den == 0.0:
        raise DivergentScatteringLength(f"pole at R + (n-1) a = 0 (n={n})")
    return n * a * R / den


def xn_scattering_length(geom: XnGeometry) -> float:
    """Zero-energy scattering length of the X_n structure."""
    return xn_length_formula(geom.n, geom.a, geom.R)


def xn_compatibility_residual(geom: XnGeometry, k: float, t: float) -> float:
    """(p + (n-1) q)(p - q)^{n-1} with p = a k R + R t, q = a (sin kR + t cos kR).

    Vanishes exactly when t = tan(delta_J) for either channel.
    """
    k = float(k)
    p = geom.a * k * geom.R + geom.R * t
    q = geom.a * (math.sin(k * geom.R) + math.cos(k * geom.R) * t)
    return (p + (geom.n - 1) * q) * (p - q) ** (geom.n - 1)


def _yxn_quad(geom: YxnGeometry, ks: np.ndarray):
    n, R, D = geom.n, geom.R, geom.D
    ax, ay = geom.a_x, geom.a_y
    kr, kd = ks * R, ks * D
    p = 1.0 / (n - 1) + ax * np.cos(kr) / R
    q = ax * ks / (n - 1) + ax * np.sin(kr) / R
    m = n * ax * ay / ((n - 1) * D * D)
    a2 = p - m * np.cos(kd) ** 2
    b1 = q + ay * ks * p - 2.0 * m * np.sin(kd) * np.cos(kd)
    c0 = ay * ks * q - m * np.sin(kd) ** 2
    return a2, b1, c0


def _quad_roots(a2, b1, c0, ks):
    disc = b1 * b1 - 4.0 * a2 * c0
    bad = disc < 0
    if np.any(bad):
        raise ComplexRootError(float(ks[bad][0]))
    sq = np.sqrt(disc)
    qq = -0.5 * (b1 + np.where(b1 >= 0, 1.0, -1.0) * sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = qq / a2
        r2 = np.where(c0 == 0, 0.0, c0 / qq)
    # 0/0 can only appear at a fully degenerate point; pin the branches
    r1 = np.where(np.isnan(r1), np.inf, r1)
    r2 = np.where(np.isnan(r2), 0.0, r2)
    return r1, r2


def _track_grid(geom: YxnGeometry, ks: np.ndarray) -> np.ndarray:
    # step fine enough to resolve every sin(kR), sin(kD) feature the
    # branch assignment walks through, from near k = 0 up to the window
    k0, k1 = float(ks[0]), float(ks[-1])
    dk = 0.05 / max(geom.R, geom.D, 1.0)
    k_lo = min(1e-4, 0.1 * k0)
    parts = [ks, np.geomspace(k_lo, max(k0, k_lo * 1.01), 64)]
    if k1 > k_lo + dk:
        parts.append(np.arange(k_lo, k1, dk))
    return np.unique(np.concatenate(parts))


def yxn_phases(geom: YxnGeometry, k):
    """(delta_0, delta_1, delta_2) for YX_n.

    delta_2 (degeneracy n - 1) is the antisymmetric X channel closed
    form.  delta_0 and delta_1 are the two roots of the coupling
    quadratic, labeled by continuity from k -> 0 where their slopes are
    -A_YXn and 0; the labels are tracked along an internal refinement of
    the requested grid so a branch is never swapped across a resonance.
    """
    ks, scalar = _as_k_array(k)
    grid = _track_grid(geom, ks)
    a2, b1, c0 = _yxn_quad(geom, grid)
    r1, r2 = _quad_roots(a2, b1, c0, grid)
    th1, th2 = np.arctan(r1), np.arctan(r2)

    try:
        slope = -yxn_scattering_length(geom)
    except DivergentScatteringLength:
        slope = math.inf
    target = slope * grid[0] if math.isfinite(slope) else math.inf
    swap0 = abs(r2[0] - target) < abs(r1[0] - target)
    d0_prev, d1_prev = (th2[0], th1[0]) if swap0 else (th1[0], th2[0])
    d0_prev, d1_prev = _fold_half_pi(float(d0_prev)), _fold_half_pi(float(d1_prev))

    d0 = np.empty_like(grid)
    d1 = np.empty_like(grid)
    d0[0], d1[0] = d0_prev, d1_prev
    for i in range(1, grid.size):
        cands = (float(th1[i]), float(th2[i]))
        best = None
        for c0_, c1_ in ((cands[0], cands[1]), (cands[1], cands[0])):
            u0 = c0_ - math.pi * round((c0_ - d0_prev) / math.pi)
            u1 = c1_ - math.pi * round((c1_ - d1_prev) / math.pi)
            cost = abs(u0 - d0_prev) + abs(u1 - d1_prev)
            if best is None or cost < best[0]:
                best = (cost, u0, u1)
        d0[i], d1[i] = best[1], best[2]
        d0_prev, d1_prev = best[1], best[2]

    idx = np.searchsorted(grid, ks)
    d0, d1 = d0[idx], d1[idx]

    kr = ks * geom.R
    d2 = np.arctan2(
        -geom.a_x * (kr - np.sin(kr)), geom.R - geom.a_x * np.cos(kr)
    )
    d2 = _unwrap_mod_pi(d2)
    if scalar:
        return float(d0[0]), float(d1[0]), float(d2[0])
    return d0, d1, d2


def yxn_scattering_length(geom: YxnGeometry) -> float:
    """Zero-energy scattering length of YX_n (the nonzero quadratic root)."""
    n, R, D = geom.n, geom.R, geom.D
    ax, ay = geom.a_x, geom.a_y
    den = (R + (n - 1) * ax) * D * D - n * ax * ay * R
    if den == 0.0:
        raise DivergentScatteringLength("pole of the YX_n length formula")
    num = D * ((ay + n * ax) * R * D + ax * ay * ((n - 1) * D - 2 * n * R))
    return num / den


# ---------------------------------------------------------------------------
# cross sections and series


def total_cross_section(k, deltas, degeneracies):
    """Per-channel sigma_J = 4 pi sin^2(delta_J)/k^2 and their weighted sum."""
    ks = np.asarray(k, dtype=float)
    deltas = [np.asarray(d, dtype=float) for d in deltas]
    if len(deltas) != len(degeneracies):
        raise ValueError("one degeneracy per channel required")
    sigmas = [4.0 * np.pi * np.sin(d) ** 2 / ks**2 for d in deltas]
    total = sum(g * s for g, s in zip(degeneracies, sigmas))
    return sigmas, total


@dataclass(frozen=True)
class CrossSectionSeries:
    """Phases and cross sections tabulated on an energy grid (a.u. + eV)."""

    e_ev: np.ndarray
    k: np.ndarray
    deltas: tuple
    sigmas: tuple
    degeneracies: tuple
    extras: dict = field(default_factory=dict)

    @property
    def sigma_total(self) -> np.ndarray:
        return sum(g * s for g, s in zip(self.degeneracies, self.sigmas))

    def columns(self) -> list[tuple[str, np.ndarray]]:
        cols = [("E_eV", self.e_ev), ("k_au", self.k)]
        for j, d in enumerate(self.deltas):
            cols.append((f"delta_{j}", d))
        for j, s in enumerate(self.sigmas):
            cols.append((f"sigma_{j}", s))
        cols.append(("sigma_total", self.sigma_total))
        for name, values in self.extras.items():
            cols.append((name, values))
        return cols

    def to_csv(self, path) -> None:
        cols = self.columns()
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(",".join(name for name, _ in cols) + "\n")
            for i in range(self.e_ev.size):
                fh.write(",".join(f"{values[i]:.9g}" for _, values in cols) + "\n")


def build_series(geom, k) -> CrossSectionSeries:
    """Evaluate all channels of an X_n or YX_n geometry on a k grid."""
    ks, _ = _as_k_array(k)
    if isinstance(geom, XnGeometry):
        deltas = xn_phases(geom, ks)
    elif isinstance(geom, YxnGeometry):
        deltas = yxn_phases(geom, ks)
    else:
        raise TypeError("geom must be XnGeometry or YxnGeometry")
    sigmas, _ = total_cross_section(ks, deltas, geom.degeneracies)
    return CrossSectionSeries(
        e_ev=k_to_ev(ks),
        k=ks,
        deltas=tuple(deltas),
        sigmas=tuple(sigmas),
        degeneracies=tuple(geom.degeneracies),
    )


# ---------------------------------------------------------------------------
# pencil oracle


@dataclass(frozen=True)
class SymmetryChannel:
    """One root of det(A + t B) = 0 with its null space."""

    tan_delta: float
    delta: float
    degeneracy: int
    vectors: np.ndarray
    residual: float


def _pencil(geom, k: float):
    centers = geom.centers()
    a = geom.boundary_params()
    n = len(a)
    diff = centers[:, None, :] - centers[None, :, :]
    d = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(d, 1.0)
    amat = (a[:, None] * np.sin(k * d) / d) * (1 - np.eye(n))
    np.fill_diagonal(amat, a * k)
    bmat = (a[:, None] * np.cos(k * d) / d) * (1 - np.eye(n))
    np.fill_diagonal(bmat, 1.0)
    return amat, bmat


_RES_INF = 1e12


def determinant_oracle(geom, k: float) -> list[SymmetryChannel]:
    """All tan(delta) roots of the pencil at momentum k, with multiplicities.

    Roots are clustered to machine-level tolerance; each channel carries
    its null vectors and the worst normalized residual ||(A + t B) v||.
    A root beyond 1e12 in magnitude is reported as a resonance channel
    with delta = pi/2.
    """
    k = float(k)
    if k <= 0:
        raise ValueError("k must be positive")
    amat, bmat = _pencil(geom, k)
    lam, vecs = scipy.linalg.eig(amat, bmat)
    roots = -lam
    tvals = []
    for t in roots:
        if not np.isfinite(t.real) or abs(t) > _RES_INF:
            tvals.append(math.inf)
        else:
            tvals.append(float(t.real))
    order = np.argsort(tvals)
    scale_a = np.linalg.norm(amat)
    scale_b = np.linalg.norm(bmat)

    channels = []
    i = 0
    while i < len(order):
        group = [order[i]]
        while (
            i + 1 < len(order)
            and math.isfinite(tvals[order[i + 1]])
            and math.isfinite(tvals[group[0]])
            and abs(tvals[order[i + 1]] - tvals[group[0]])
            <= 1e-8 * (1.0 + abs(tvals[group[0]]))
        ) or (
            i + 1 < len(order)
            and not math.isfinite(tvals[order[i + 1]])
            and not math.isfinite(tvals[group[0]])
        ):
            group.append(order[i + 1])
            i += 1
        i += 1
        tbar = tvals[group[0]]
        vv = vecs[:, group]
        if math.isfinite(tbar):
            res = 0.0
            mat = amat + tbar * bmat
            for j in range(vv.shape[1]):
                v = vv[:, j]
                res = max(
                    res,
                    float(
                        np.linalg.norm(mat @ v)
                        / ((scale_a + abs(tbar) * scale_b) * np.linalg.norm(v))
                    ),
                )
            delta = math.atan(tbar)
        else:
            res = 0.0
            for j in range(vv.shape[1]):
                v = vv[:, j]
                res = max(
                    res, float(np.linalg.norm(bmat @ v) / (scale_b * np.linalg.norm(v)))
                )
            delta = math.pi / 2
        channels.append(
            SymmetryChannel(
                tan_delta=tbar,
                delta=delta,
                degeneracy=len(group),
                vectors=vv.T.copy(),
                residual=res,
            )
        )
    return channels
