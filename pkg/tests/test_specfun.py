"""Spherical wave functions against independent references.

The frozen reference values were produced with 40-digit arithmetic from
the half-integer Bessel representation; the sign convention here has
n_0(x) = +cos(x)/x and h1_l = n_l + i j_l, so h1_0(x) = exp(ix)/x.
scipy.special serves as a second live oracle for real arguments.
"""

import numpy as np
import pytest
import scipy.special
from numpy.testing import assert_allclose

from zrpdress.specfun import (
    LMAX,
    SphericalKind,
    double_factorial,
    spherical,
    spherical_deriv,
    vandermonde_ratio,
)

FROZEN_RTOL = 5e-14
SCIPY_RTOL = 5e-13
RECURRENCE_TOL = 1e-10
DERIV_RTOL = 1e-12

# 40-digit reference values, rounded to 20 digits
J_REFERENCE = {
    (0, 0.5): 0.95885107720840600055,
    (1, 1.0): 0.30116867893975678925,
    (2, 1.3): 0.099688571352131046688,
    (5, 0.7): 1.5866115512568321475e-05,
    (3, 10.0): -0.039495844984470324358,
    (7, 25.0): 0.022301229641816942249,
    (4, 0.001): 1.0582010101010111141e-15,
}
N_REFERENCE = {
    (0, 0.5): 1.7551651237807454322,
    (2, 1.3): 1.8699592119368510388,
    (3, 0.01): 1500015000.1250019584,
    (4, 8.0): -0.13509090698880775381,
    (6, 30.0): -0.025503123263553619935,
}
H1_REFERENCE = {
    (1, 2.0): 0.35061200427605525095 + 0.43539777497999161735j,
    (4, 6.0): 0.027935753532397945846 + 0.19679173516983343333j,
    (2, 1.5j): 0.64459824042879728359j,
    (3, 0.3 + 2.0j): 0.48038319612004097227 + 0.40219427994337885141j,
}
DJ2_AT_3 = 0.047040002686622407367
DN1_AT_08 = -4.0923649807644161377


def test_double_factorial_small():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(1) == 1
    assert double_factorial(5) == 15
    assert double_factorial(8) == 384
    with pytest.raises(ValueError):
        double_factorial(-2)


def test_frozen_j_values():
    for (l, x), want in J_REFERENCE.items():
        got = spherical(SphericalKind.J, l, x)
        assert_allclose(got, want, rtol=FROZEN_RTOL, err_msg=f"j_{l}({x})")


def test_frozen_n_values():
    for (l, x), want in N_REFERENCE.items():
        got = spherical(SphericalKind.N, l, x)
        assert_allclose(got, want, rtol=FROZEN_RTOL, err_msg=f"n_{l}({x})")


def test_frozen_h1_values():
    for (l, x), want in H1_REFERENCE.items():
        got = spherical(SphericalKind.H1, l, x)
        assert_allclose(got, want, rtol=FROZEN_RTOL, err_msg=f"h1_{l}({x})")


def test_h1_l0_closed_form():
    for x in (0.3, 1.7, 9.0):
        assert_allclose(
            spherical(SphericalKind.H1, 0, x), np.exp(1j * x) / x, rtol=1e-14
        )


def test_h2_is_conjugate_on_real_axis():
    rng = np.random.default_rng(11)
    for _ in range(50):
        l = int(rng.integers(0, 7))
        x = float(rng.uniform(0.2, 30.0))
        h1 = spherical(SphericalKind.H1, l, x)
        h2 = spherical(SphericalKind.H2, l, x)
        assert_allclose(h2, np.conj(h1), rtol=1e-13)


def test_h1_decomposes_into_n_plus_ij():
    rng = np.random.default_rng(3)
    for _ in range(50):
        l = int(rng.integers(0, 7))
        x = float(rng.uniform(0.3, 25.0))
        h1 = spherical(SphericalKind.H1, l, x)
        n = spherical(SphericalKind.N, l, x)
        j = spherical(SphericalKind.J, l, x)
        assert_allclose(h1, n + 1j * j, rtol=5e-13, atol=1e-15)


def test_against_scipy_spherical():
    # scipy's y_l is the opposite sign of n_l here
    rng = np.random.default_rng(19)
    for _ in range(200):
        l = int(rng.integers(0, LMAX + 1))
        x = float(rng.uniform(1e-3, 40.0))
        assert_allclose(
            spherical(SphericalKind.J, l, x),
            scipy.special.spherical_jn(l, x),
            rtol=SCIPY_RTOL,
            atol=1e-300,
            err_msg=f"j_{l}({x})",
        )
        assert_allclose(
            spherical(SphericalKind.N, l, x),
            -scipy.special.spherical_yn(l, x),
            rtol=SCIPY_RTOL,
            err_msg=f"n_{l}({x})",
        )


def test_three_term_recurrence():
    # f_{l-1} + f_{l+1} = (2l+1)/x f_l for all four kinds
    rng = np.random.default_rng(5)
    kinds = (SphericalKind.J, SphericalKind.N, SphericalKind.H1, SphericalKind.H2)
    for _ in range(100):
        x = float(rng.uniform(0.5, 40.0))
        for kind in kinds:
            f = [spherical(kind, l, x) for l in range(8)]
            for l in range(1, 7):
                lhs = f[l - 1] + f[l + 1]
                rhs = (2 * l + 1) / x * f[l]
                scale = max(1.0, abs(rhs))
                assert abs(lhs - rhs) / scale < RECURRENCE_TOL, (kind, l, x)


def test_derivative_identity_and_frozen_values():
    assert_allclose(
        spherical_deriv(SphericalKind.J, 2, 3.0), DJ2_AT_3, rtol=DERIV_RTOL
    )
    assert_allclose(
        spherical_deriv(SphericalKind.N, 1, 0.8), DN1_AT_08, rtol=DERIV_RTOL
    )
    # f_0' = -f_1
    for kind in (SphericalKind.J, SphericalKind.N, SphericalKind.H1):
        for x in (0.4, 2.0, 12.0):
            assert_allclose(
                spherical_deriv(kind, 0, x),
                -spherical(kind, 1, x),
                rtol=1e-13,
            )


def test_derivative_matches_finite_difference():
    rng = np.random.default_rng(23)
    h = 1e-5
    for _ in range(60):
        l = int(rng.integers(0, 6))
        x = float(rng.uniform(0.5, 20.0))
        kind = (SphericalKind.J, SphericalKind.N)[int(rng.integers(0, 2))]
        fd = (
            spherical(kind, l, x - 2 * h)
            - 8 * spherical(kind, l, x - h)
            + 8 * spherical(kind, l, x + h)
            - spherical(kind, l, x + 2 * h)
        ) / (12 * h)
        got = spherical_deriv(kind, l, x)
        assert_allclose(got, fd, rtol=1e-8, atol=1e-12)


def test_cross_wronskian():
    # j_l n_l' - j_l' n_l = -1/x^2 in this sign convention
    rng = np.random.default_rng(29)
    for _ in range(60):
        l = int(rng.integers(0, 7))
        x = float(rng.uniform(0.3, 30.0))
        w = spherical(SphericalKind.J, l, x) * spherical_deriv(
            SphericalKind.N, l, x
        ) - spherical_deriv(SphericalKind.J, l, x) * spherical(SphericalKind.N, l, x)
        assert_allclose(w, -1.0 / x**2, rtol=1e-11)


def test_l_range_and_argument_validation():
    with pytest.raises(ValueError):
        spherical(SphericalKind.J, LMAX + 1, 1.0)
    with pytest.raises(ValueError):
        spherical(SphericalKind.J, -1, 1.0)
    with pytest.raises(ValueError):
        spherical(SphericalKind.N, 0, 0.0)


def test_vandermonde_ratio_against_determinants():
    # the ratio of the bordered to the base Vandermonde determinant
    rng = np.random.default_rng(41)
    for _ in range(40):
        m = int(rng.integers(1, 6))
        nodes = rng.uniform(-2, 2, size=m) + 1j * rng.uniform(-2, 2, size=m)
        z = complex(rng.uniform(-2, 2) + 1j * rng.uniform(-2, 2))
        got = vandermonde_ratio(z, nodes)
        want = np.prod([kappa - z for kappa in nodes])
        assert_allclose(got, want, rtol=1e-12, atol=1e-12)
        # determinant form: append z as an extra node
        base = np.vander(nodes, increasing=True)
        ext = np.vander(np.append(nodes, z), increasing=True)
        det_ratio = np.linalg.det(ext) / np.linalg.det(base)
        prod_sign = np.prod([z - kappa for kappa in nodes])
        assert_allclose(det_ratio, prod_sign, rtol=1e-8, atol=1e-8)


def test_vandermonde_ratio_rejects_coincident_nodes():
    with pytest.raises(ValueError):
        vandermonde_ratio(0.5, [1.0, 1.0 + 1e-15])
