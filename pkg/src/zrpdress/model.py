"""Tetrahedral YX4 model with a dressed symmetric channel.

The electron-silane model: four identical X centers on a tetrahedron
edge R with parameter a_x, a Y center at the centroid (distance D)
with parameter a_y, and one dressing step of decay constant kappa
applied to the symmetric channel delta_0 only:

    delta_0_dressed(k) = delta_0(k) - arctan(k/kappa).

The dressed channel cross section sigma_A1 = 4 pi sin^2(delta_0_dressed)/k^2
develops a deep Ramsauer-Townsend style minimum where the bare phase
crosses arctan(k/kappa); locating that minimum, scanning it and fitting
the three non-geometric parameters to measured cross sections are the
operations here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.optimize

from .multicenter import CrossSectionSeries, YxnGeometry, total_cross_section, yxn_phases
from .units import ev_to_k, k_to_ev


class NoMinimumError(ValueError):
    """The scanned cross section has no interior local minimum."""


class FitFailure(RuntimeError):
    """No restart improved on the starting parameters."""

    def __init__(self, message: str, trace: list):
        super().__init__(message)
        self.trace = trace


_TETRA_RATIO = 2.0 * math.sqrt(2.0 / 3.0)


@dataclass(frozen=True)
class SilaneModel:
    """Parameter set of the dressed YX4 model (atomic units)."""

    a_x: float = 4.10
    a_y: float = 1.88
    R: float = 4.51
    D: float = 2.762
    kappa: float = 0.185

    def __post_init__(self):
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ValueError("kappa must be positive")
        if not (self.R > 0 and self.D > 0):
            raise ValueError("R and D must be positive")
        if not (math.isfinite(self.a_x) and math.isfinite(self.a_y)):
            raise ValueError("boundary parameters must be finite")

    def geometry(self) -> YxnGeometry:
        return YxnGeometry(n=4, R=self.R, D=self.D, a_x=self.a_x, a_y=self.a_y)

    def geometry_defect(self) -> float:
        """Relative violation of the tetrahedral constraint R = 2 sqrt(2/3) D."""
        return abs(self.R - _TETRA_RATIO * self.D) / self.R


@dataclass(frozen=True)
class EnergyGrid:
    """Strictly increasing positive energies in eV."""

    e_ev: np.ndarray

    def __post_init__(self):
        e = np.atleast_1d(np.asarray(self.e_ev, dtype=float))
        if e.ndim != 1 or e.size == 0:
            raise ValueError("energy grid must be a non-empty 1-d array")
        if np.any(e <= 0) or not np.all(np.isfinite(e)):
            raise ValueError("energies must be positive and finite")
        if e.size > 1 and np.any(np.diff(e) <= 0):
            raise ValueError("energies must be strictly increasing")
        object.__setattr__(self, "e_ev", e)

    @classmethod
    def linear(cls, emin: float, emax: float, step: float | None = None,
               count: int | None = None) -> "EnergyGrid":
        if (step is None) == (count is None):
            raise ValueError("give exactly one of step or count")
        if step is not None:
            n = int(round((emax - emin) / step))
            if n < 1:
                raise ValueError("empty grid")
            return cls(emin + step * np.arange(n + 1))
        return cls(np.linspace(emin, emax, count))

    @classmethod
    def logarithmic(cls, emin: float, emax: float, count: int) -> "EnergyGrid":
        return cls(np.geomspace(emin, emax, count))

    @property
    def k(self) -> np.ndarray:
        return ev_to_k(self.e_ev)


def sigma_a1_scan(model: SilaneModel, grid: EnergyGrid) -> CrossSectionSeries:
    """Full channel table on the grid plus the dressed sigma_A1 column."""
    ks = grid.k
    geom = model.geometry()
    deltas = yxn_phases(geom, ks)
    sigmas, _ = total_cross_section(ks, deltas, geom.degeneracies)
    dressed = deltas[0] - np.arctan(ks / model.kappa)
    sigma_a1 = 4.0 * np.pi * np.sin(dressed) ** 2 / ks**2
    return CrossSectionSeries(
        e_ev=grid.e_ev,
        k=ks,
        deltas=tuple(deltas),
        sigmas=tuple(sigmas),
        degeneracies=tuple(geom.degeneracies),
        extras={"sigma_A1_dressed": sigma_a1},
    )


def _scan_curve(series: CrossSectionSeries) -> tuple[np.ndarray, np.ndarray]:
    if "sigma_A1_dressed" in series.extras:
        return series.e_ev, series.extras["sigma_A1_dressed"]
    return series.e_ev, series.sigma_total


def find_rt_minimum(series: CrossSectionSeries) -> tuple[float, float]:
    """Interior minimum of the scanned cross section, parabolically refined.

    Uses the dressed sigma_A1 column when present, the total otherwise.
    Raises NoMinimumError for a curve that only decreases into either
    scan edge.
    """
    e, sigma = _scan_curve(series)
    if e.size < 3:
        raise NoMinimumError("need at least 3 scan points")
    interior = np.arange(1, e.size - 1)
    mask = (sigma[interior] <= sigma[interior - 1]) & (
        sigma[interior] <= sigma[interior + 1]
    )
    if not np.any(mask):
        raise NoMinimumError("no interior local minimum in the scan")
    cands = interior[mask]
    i = int(cands[np.argmin(sigma[cands])])
    coeff = np.polyfit(e[i - 1 : i + 2], sigma[i - 1 : i + 2], 2)
    if coeff[0] <= 0:
        return float(e[i]), float(sigma[i])
    e_min = float(-coeff[1] / (2.0 * coeff[0]))
    s_min = float(np.polyval(coeff, e_min))
    if not (e[i - 1] <= e_min <= e[i + 1]):
        return float(e[i]), float(sigma[i])
    return e_min, max(s_min, 0.0)


@dataclass(frozen=True)
class ExperimentDataset:
    """Measured integral cross sections: E in eV, sigma in a0^2."""

    e_ev: np.ndarray
    sigma: np.ndarray
    sigma_err: np.ndarray | None = None
    source: str = ""

    def __post_init__(self):
        e = np.atleast_1d(np.asarray(self.e_ev, dtype=float))
        s = np.atleast_1d(np.asarray(self.sigma, dtype=float))
        if e.shape != s.shape or e.ndim != 1 or e.size == 0:
            raise ValueError("E and sigma must be matching non-empty 1-d arrays")
        if np.any(e <= 0) or (e.size > 1 and np.any(np.diff(e) <= 0)):
            raise ValueError("energies must be positive and strictly increasing")
        if np.any(s <= 0):
            raise ValueError("cross sections must be positive")
        object.__setattr__(self, "e_ev", e)
        object.__setattr__(self, "sigma", s)
        if self.sigma_err is not None:
            err = np.atleast_1d(np.asarray(self.sigma_err, dtype=float))
            if err.shape != e.shape or np.any(err <= 0):
                raise ValueError("sigma_err must be positive and match E")
            object.__setattr__(self, "sigma_err", err)


def load_dataset(path) -> ExperimentDataset:
    """Read an E_eV,sigma[,sigma_err] CSV."""
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if header not in (["E_eV", "sigma"], ["E_eV", "sigma", "sigma_err"]):
            raise ValueError(f"{path}: header must be E_eV,sigma[,sigma_err]")
        rows = [[float(x) for x in row] for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.array(rows)
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: ragged rows")
    err = data[:, 2] if data.shape[1] == 3 else None
    return ExperimentDataset(
        e_ev=data[:, 0], sigma=data[:, 1], sigma_err=err, source=str(path)
    )


_FIT_BOUNDS = {"a_x": (1e-6, 20.0), "a_y": (1e-6, 20.0), "kappa": (1e-6, 5.0)}


@dataclass(frozen=True)
class FitResult:
    model: SilaneModel
    residual: float
    free: tuple[str, ...]
    trace: list = field(default_factory=list)


def _sigma_a1_at(model: SilaneModel, e_ev: np.ndarray) -> np.ndarray:
    ks = ev_to_k(e_ev)
    deltas = yxn_phases(model.geometry(), ks)
    dressed = deltas[0] - np.arctan(ks / model.kappa)
    return 4.0 * np.pi * np.sin(dressed) ** 2 / ks**2


def fit_parameters(
    dataset: ExperimentDataset,
    free=("a_x", "a_y", "kappa"),
    base: SilaneModel | None = None,
    seed: int = 0,
    restarts: int = 10,
) -> FitResult:
    """Least-squares fit of the free parameters to the dataset.

    Minimizes sum (sigma_A1(E_i) - sigma_i)^2 with a derivative-free
    simplex, restarted from the base model and from `restarts` seeded
    random interior points; each winner is polished by a second simplex
    run.  Deterministic for a fixed seed.  Geometry (R, D) stays fixed.
    Raises FitFailure (with the full restart trace attached) when no
    restart matches or improves the base model's residual.
    """
    free = tuple(free)
    if not free or any(name not in _FIT_BOUNDS for name in free):
        raise ValueError(f"free must be a non-empty subset of {sorted(_FIT_BOUNDS)}")
    if len(set(free)) != len(free):
        raise ValueError("free parameters must be unique")
    if dataset.e_ev.size < 3:
        raise ValueError("need at least 3 data points")
    base = base if base is not None else SilaneModel()
    lo = np.array([_FIT_BOUNDS[name][0] for name in free])
    hi = np.array([_FIT_BOUNDS[name][1] for name in free])

    def objective(params: np.ndarray) -> float:
        if np.any(params < lo) or np.any(params > hi):
            return 1e300
        trial = replace(base, **dict(zip(free, params)))
        resid = _sigma_a1_at(trial, dataset.e_ev) - dataset.sigma
        return float(np.dot(resid, resid))

    rng = np.random.default_rng(seed)
    starts = [np.array([getattr(base, name) for name in free], dtype=float)]
    for _ in range(restarts):
        starts.append(lo + (hi - lo) * rng.random(len(free)))

    initial = objective(starts[0])
    options = {"xatol": 1e-11, "fatol": 1e-14, "maxiter": 4000, "maxfev": 8000}
    trace = []
    best = None
    for start in starts:
        res = scipy.optimize.minimize(
            objective, start, method="Nelder-Mead", options=options
        )
        res = scipy.optimize.minimize(
            objective, res.x, method="Nelder-Mead", options=options
        )
        trace.append((tuple(start), tuple(res.x), float(res.fun)))
        key = (float(res.fun), tuple(res.x))
        if best is None or key < best[0]:
            best = (key, res)
    res = best[1]
    if not (res.fun <= initial):
        raise FitFailure(
            f"no restart improved the starting residual {initial:.6g}", trace
        )
    fitted = replace(base, **dict(zip(free, res.x)))
    return FitResult(
        model=fitted, residual=float(res.fun), free=free, trace=trace
    )


def dressed_series_summary(series: CrossSectionSeries) -> dict:
    """Headline numbers of a scan: limits and the minimum if present."""
    e, sigma = _scan_curve(series)
    out = {
        "E_first_eV": float(e[0]),
        "sigma_first": float(sigma[0]),
        "E_last_eV": float(e[-1]),
        "sigma_last": float(sigma[-1]),
    }
    try:
        e_min, s_min = find_rt_minimum(series)
    except NoMinimumError:
        return out
    out["E_min_eV"] = e_min
    out["sigma_min"] = s_min
    return out
