"""Radial phase-shift integrator against closed-form references."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from zrpdress.darboux import dressed_boundary_logderiv
from zrpdress.numerov import (
    AccuracyError,
    RadialProblem,
    default_match_radius,
    integrate_phase,
    integrate_phase_scan,
)

SECH2_PHASE_TOL = 1e-3
EXACT_DATA_TOL = 1e-9
CONVERGENCE_WINDOW = (12.0, 20.0)

SECH2_CASES = ((1.0, 0.185), (2.0, 0.5), (0.5, 1.0))


def _sech2(kappa):
    def tail(r):
        return -(kappa**2) / np.cosh(kappa * r) ** 2

    return tail


def _exact_dressed_logderiv(alpha, kappa, k, r0):
    # chi = cos(kr) - (alpha/k) sin(kr) transformed by the cosh kernel
    chi = math.cos(k * r0) - (alpha / k) * math.sin(k * r0)
    chip = -k * math.sin(k * r0) - alpha * math.cos(k * r0)
    chipp = -k * k * chi
    t = math.tanh(kappa * r0)
    sech2 = 1.0 / math.cosh(kappa * r0) ** 2
    d1 = chip - kappa * t * chi
    d1p = chipp - kappa * kappa * sech2 * chi - kappa * t * chip
    return d1p / d1


@pytest.mark.filterwarnings("ignore:.*tail systematic.*")
def test_sech2_well_phase_matches_arctan_sum():
    for alpha, kappa in SECH2_CASES:
        for k in np.linspace(0.05, 1.0, 6):
            problem = RadialProblem(
                l=0,
                k=float(k),
                potential=_sech2(kappa),
                inner_logderiv=dressed_boundary_logderiv(float(k), kappa, alpha),
                r0=1e-4,
                r_match=default_match_radius(kappa),
                h=1e-3,
            )
            got = integrate_phase(problem).delta
            want = -math.atan(k / alpha) - math.atan(k / kappa)
            diff = abs(got - want) % math.pi
            diff = min(diff, math.pi - diff)
            assert diff < SECH2_PHASE_TOL, (alpha, kappa, k, diff)


def test_free_integration_with_exact_inner_data():
    # starting from the closed-form log derivative of the bare point
    # interaction wave, the integrated phase is exact to solver accuracy
    alpha, k, r0 = 1.3, 0.6, 0.4
    chi = math.cos(k * r0) - (alpha / k) * math.sin(k * r0)
    chip = -k * math.sin(k * r0) - alpha * math.cos(k * r0)
    problem = RadialProblem(
        l=0, k=k, inner_logderiv=chip / chi, r0=r0, r_match=40.0, h=1e-3
    )
    got = integrate_phase(problem).delta
    want = -math.atan(k / alpha)
    assert_allclose(got, want, atol=EXACT_DATA_TOL)


def test_regular_start_reproduces_zero_phase():
    # no potential and no inner condition: the regular free wave, delta = 0
    for l in (0, 1, 3):
        problem = RadialProblem(l=l, k=0.7, r0=1e-3, r_match=35.0, h=1e-3)
        got = integrate_phase(problem).delta
        assert abs(got) < 1e-8, (l, got)


def test_higher_partial_wave_phase_recovery():
    # start on an l = 2 mixture with known phase and integrate outward
    from zrpdress.specfun import SphericalKind, spherical, spherical_deriv

    l, k, delta, r0 = 2, 0.9, 0.4, 0.8

    def chi_pair(r):
        x = k * r
        j = spherical(SphericalKind.J, l, x)
        n = spherical(SphericalKind.N, l, x)
        jp = spherical_deriv(SphericalKind.J, l, x)
        npr = spherical_deriv(SphericalKind.N, l, x)
        chi = x * (math.cos(delta) * j + math.sin(delta) * n)
        chip = k * (
            math.cos(delta) * (j + x * jp) + math.sin(delta) * (n + x * npr)
        )
        return chi, chip

    chi, chip = chi_pair(r0)
    problem = RadialProblem(
        l=l, k=k, inner_logderiv=chip / chi, r0=r0, r_match=45.0, h=1e-3
    )
    got = integrate_phase(problem).delta
    assert_allclose(got, delta, atol=1e-8)


def test_fourth_order_convergence_ratio():
    # halving h divides the phase error by ~16 (checked via successive
    # differences, which cancel any h-independent systematics)
    for alpha, kappa, k, r_match in ((1.0, 0.5, 0.8, 25.0), (2.0, 0.5, 0.9, 30.0)):
        r0 = 0.5
        L = _exact_dressed_logderiv(alpha, kappa, k, r0)
        deltas = {}
        for h in (0.04, 0.02, 0.01):
            problem = RadialProblem(
                l=0, k=k, potential=_sech2(kappa),
                inner_logderiv=L, r0=r0, r_match=r_match, h=h,
            )
            deltas[h] = integrate_phase(problem).delta
        ratio = (deltas[0.04] - deltas[0.02]) / (deltas[0.02] - deltas[0.01])
        assert CONVERGENCE_WINDOW[0] < ratio < CONVERGENCE_WINDOW[1], ratio


def test_accuracy_guard_raises_on_coarse_grid():
    problem = RadialProblem(
        l=0,
        k=0.9,
        potential=_sech2(0.5),
        inner_logderiv=dressed_boundary_logderiv(0.9, 0.5, 1.0),
        r0=1e-3,
        r_match=25.0,
        h=0.05,
    )
    with pytest.raises(AccuracyError):
        integrate_phase(problem, tol=1e-12)
    # generous tolerance passes on the same problem
    integrate_phase(problem, tol=1e-2)


def test_scan_keeps_phase_continuous():
    kappa, alpha = 0.5, 1.0
    ks = np.linspace(0.05, 1.0, 40)
    problems = [
        RadialProblem(
            l=0, k=float(k), potential=_sech2(kappa),
            inner_logderiv=dressed_boundary_logderiv(float(k), kappa, alpha),
            r0=1e-4, r_match=25.0, h=2e-3,
        )
        for k in ks
    ]
    deltas = integrate_phase_scan(problems)
    assert np.all(np.abs(np.diff(deltas)) < 0.5)
    want = -np.arctan(ks / alpha) - np.arctan(ks / kappa)
    # continuous branch equals the arctan sum without folding
    assert_allclose(deltas, want, atol=5e-3)


def test_default_match_radius():
    assert default_match_radius(1.0) == 25.0
    assert default_match_radius(0.185) == 50.0
    assert default_match_radius(0.25, cap=80.0) == 80.0


def test_problem_validation_and_tail_warning():
    with pytest.raises(ValueError):
        RadialProblem(l=0, k=-0.5)
    with pytest.raises(TypeError):
        RadialProblem(l=1.0, k=0.5)
    with pytest.raises(ValueError):
        RadialProblem(l=0, k=0.5, r0=2.0, r_match=1.0)
    with pytest.raises(ValueError):
        RadialProblem(l=0, k=0.5, h=100.0)
    with pytest.raises(ValueError):
        RadialProblem(l=0, k=0.5, inner_logderiv=math.inf)
    with pytest.warns(UserWarning, match="tail systematic"):
        RadialProblem(l=0, k=0.5, potential=_sech2(0.185), r_match=50.0)
