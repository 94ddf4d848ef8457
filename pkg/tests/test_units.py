"""Unit conversions between eV energies and a.u. wave numbers."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from zrpdress.units import BOHR2_TO_ANG2, HARTREE_EV, ev_to_k, k_to_ev

ROUNDTRIP_TOL = 1e-14


def test_constants():
    assert HARTREE_EV == 27.2114
    assert BOHR2_TO_ANG2 == 0.280028


def test_known_point():
    # E = k^2/2 hartree: k = 1 -> 13.6057 eV
    assert_allclose(k_to_ev(1.0), 13.6057, rtol=1e-12)
    assert_allclose(ev_to_k(13.6057), 1.0, rtol=1e-12)


def test_roundtrip_scalar_and_array():
    k = np.linspace(0.01, 3.0, 57)
    assert_allclose(ev_to_k(k_to_ev(k)), k, rtol=ROUNDTRIP_TOL)
    assert isinstance(k_to_ev(0.5), float)
    assert isinstance(ev_to_k(1.0), float)


def test_negative_energy_rejected():
    with pytest.raises(ValueError):
        ev_to_k(-0.1)
    with pytest.raises(ValueError):
        ev_to_k(np.array([0.5, -0.2]))
