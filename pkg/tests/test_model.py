"""Silane-model scans, the cross-section minimum, datasets and fitting."""

import math
from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from zrpdress.model import (
    EnergyGrid,
    ExperimentDataset,
    FitFailure,
    NoMinimumError,
    SilaneModel,
    dressed_series_summary,
    find_rt_minimum,
    fit_parameters,
    load_dataset,
    sigma_a1_scan,
)
from zrpdress.multicenter import CrossSectionSeries, yxn_scattering_length
from zrpdress.units import ev_to_k, k_to_ev

E_MIN_EV = 0.258463900938805  # refined minimum of the dressed A1 curve
DRESSED_ZERO_ENERGY_SIGMA = 48.52535657491398  # 4 pi (A + 1/kappa)^2
GEOMETRY_DEFECT = 7.253060859398078e-05
GRID_E_MIN_TOL = 1e-5  # parabolic refinement on a 2000-point scan


def test_default_parameter_set():
    m = SilaneModel()
    assert (m.a_x, m.a_y, m.R, m.D, m.kappa) == (4.10, 1.88, 4.51, 2.762, 0.185)
    geom = m.geometry()
    assert geom.n == 4 and geom.R == m.R and geom.D == m.D
    assert_allclose(m.geometry_defect(), GEOMETRY_DEFECT, rtol=1e-12)
    assert m.geometry_defect() < 1e-3


def test_model_validation():
    with pytest.raises(ValueError):
        SilaneModel(kappa=0.0)
    with pytest.raises(ValueError):
        SilaneModel(R=-1.0)
    with pytest.raises(ValueError):
        SilaneModel(a_x=math.inf)


def test_energy_grid_construction():
    g = EnergyGrid.linear(0.01, 1.0, step=0.01)
    assert g.e_ev[0] == 0.01
    assert_allclose(g.e_ev[-1], 1.0, rtol=1e-12)
    assert_allclose(np.diff(g.e_ev), 0.01, rtol=1e-10)

    g = EnergyGrid.linear(0.1, 0.5, count=5)
    assert_allclose(g.e_ev, [0.1, 0.2, 0.3, 0.4, 0.5], rtol=1e-12)

    g = EnergyGrid.logarithmic(0.01, 1.0, count=3)
    assert_allclose(g.e_ev, [0.01, 0.1, 1.0], rtol=1e-12)

    assert_allclose(g.k, ev_to_k(g.e_ev), rtol=1e-15)


def test_energy_grid_validation():
    with pytest.raises(ValueError):
        EnergyGrid.linear(0.1, 0.5, step=0.1, count=5)
    with pytest.raises(ValueError):
        EnergyGrid.linear(0.1, 0.5)
    with pytest.raises(ValueError):
        EnergyGrid(np.array([0.2, 0.1]))
    with pytest.raises(ValueError):
        EnergyGrid(np.array([-0.1, 0.2]))
    with pytest.raises(ValueError):
        EnergyGrid(np.array([]))


def test_scan_carries_dressed_column():
    m = SilaneModel()
    grid = EnergyGrid.linear(0.05, 0.6, count=40)
    series = sigma_a1_scan(m, grid)
    assert "sigma_A1_dressed" in series.extras
    names = [name for name, _ in series.columns()]
    assert names[-1] == "sigma_A1_dressed"
    # dressed column is the symmetric channel with the extra arctan removed
    dressed = series.deltas[0] - np.arctan(series.k / m.kappa)
    want = 4.0 * np.pi * np.sin(dressed) ** 2 / series.k**2
    assert_allclose(series.extras["sigma_A1_dressed"], want, rtol=1e-13)


def test_minimum_location_is_stable():
    series = sigma_a1_scan(SilaneModel(), EnergyGrid.linear(0.01, 1.0, count=2000))
    e_min, s_min = find_rt_minimum(series)
    assert abs(e_min - E_MIN_EV) < GRID_E_MIN_TOL
    assert 0.0 <= s_min < 1e-6
    summary = dressed_series_summary(series)
    assert summary["E_min_eV"] == e_min
    assert summary["sigma_min"] == s_min
    assert summary["E_first_eV"] == 0.01


def test_no_minimum_raises():
    e = np.array([0.1, 0.2, 0.3])
    series = CrossSectionSeries(
        e_ev=e,
        k=ev_to_k(e),
        deltas=(np.zeros(3),),
        sigmas=(np.array([3.0, 2.0, 1.0]),),
        degeneracies=(1,),
    )
    with pytest.raises(NoMinimumError):
        find_rt_minimum(series)
    assert "E_min_eV" not in dressed_series_summary(series)


def test_dressed_zero_energy_limit():
    m = SilaneModel()
    A = yxn_scattering_length(m.geometry())
    dressed_length = A + 1.0 / m.kappa
    assert_allclose(
        4.0 * math.pi * dressed_length**2, DRESSED_ZERO_ENERGY_SIGMA, rtol=1e-12
    )
    grid = EnergyGrid(k_to_ev(np.array([1e-3])))
    series = sigma_a1_scan(m, grid)
    assert_allclose(
        series.extras["sigma_A1_dressed"][0], DRESSED_ZERO_ENERGY_SIGMA, rtol=1e-3
    )


def _write_csv(path, text):
    path.write_text(text)
    return path


def test_load_dataset_round_trip(tmp_path):
    p = _write_csv(tmp_path / "d.csv", "E_eV,sigma\n0.1,2.5\n0.2,2.0\n")
    ds = load_dataset(p)
    assert_allclose(ds.e_ev, [0.1, 0.2])
    assert_allclose(ds.sigma, [2.5, 2.0])
    assert ds.sigma_err is None
    assert ds.source == str(p)

    p = _write_csv(tmp_path / "e.csv", "E_eV,sigma,sigma_err\n0.1,2.5,0.1\n")
    ds = load_dataset(p)
    assert_allclose(ds.sigma_err, [0.1])


def test_load_dataset_rejects_malformed(tmp_path):
    for text in (
        "",
        "energy,sigma\n0.1,2.5\n",
        "E_eV,sigma\n",
        "E_eV,sigma\n0.1,2.5,9\n",
    ):
        with pytest.raises(ValueError):
            load_dataset(_write_csv(tmp_path / "bad.csv", text))


def test_dataset_validation():
    with pytest.raises(ValueError):
        ExperimentDataset(e_ev=np.array([0.1, 0.2]), sigma=np.array([1.0]))
    with pytest.raises(ValueError):
        ExperimentDataset(e_ev=np.array([0.2, 0.1]), sigma=np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        ExperimentDataset(e_ev=np.array([0.1]), sigma=np.array([-1.0]))
    with pytest.raises(ValueError):
        ExperimentDataset(
            e_ev=np.array([0.1]), sigma=np.array([1.0]), sigma_err=np.array([0.0])
        )


def _synthetic(model, n=25):
    e = np.linspace(0.05, 1.0, n)
    series = sigma_a1_scan(model, EnergyGrid(e))
    return ExperimentDataset(e_ev=e, sigma=series.extras["sigma_A1_dressed"])


def test_fit_recovers_kappa():
    truth = SilaneModel()
    data = _synthetic(truth)
    start = replace(truth, kappa=0.30)
    fit = fit_parameters(data, free=("kappa",), base=start, seed=0, restarts=2)
    assert abs(fit.model.kappa - truth.kappa) / truth.kappa < 1e-2
    assert fit.residual <= 1e-10
    assert fit.free == ("kappa",)
    assert len(fit.trace) == 3  # base start plus two restarts
    # unfitted parameters stay pinned to the base model
    assert fit.model.a_x == truth.a_x and fit.model.R == truth.R

    again = fit_parameters(data, free=("kappa",), base=start, seed=0, restarts=2)
    assert again.model.kappa == fit.model.kappa
    assert again.residual == fit.residual


def test_fit_validation():
    data = _synthetic(SilaneModel())
    with pytest.raises(ValueError):
        fit_parameters(data, free=("R",))
    with pytest.raises(ValueError):
        fit_parameters(data, free=())
    with pytest.raises(ValueError):
        fit_parameters(data, free=("kappa", "kappa"))
    short = ExperimentDataset(e_ev=np.array([0.1, 0.2]), sigma=np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        fit_parameters(short, free=("kappa",))


def test_fit_failure_carries_trace():
    err = FitFailure("no improvement", trace=[(1, 2, 3.0)])
    assert isinstance(err, RuntimeError)
    assert err.trace == [(1, 2, 3.0)]
