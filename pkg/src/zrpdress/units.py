"""Unit conversions.

Everything internal is in Hartree atomic units: lengths in bohr (a0),
momenta in 1/a0, energies in hartree.  Energies cross the API boundary
in eV, cross sections in a0^2 with an optional conversion to Angstrom^2.
"""

from __future__ import annotations

import numpy as np

HARTREE_EV = 27.2114
"""One hartree in eV."""

BOHR2_TO_ANG2 = 0.280028
"""One a0^2 in Angstrom^2."""


def ev_to_k(energy_ev):
    """Momentum k (a.u.) for a kinetic energy in eV, E = k^2/2."""
    energy_ev = np.asarray(energy_ev, dtype=float)
    if np.any(energy_ev < 0):
        raise ValueError("energy must be non-negative")
    out = np.sqrt(2.0 * energy_ev / HARTREE_EV)
    return float(out) if out.ndim == 0 else out


def k_to_ev(k):
    """Kinetic energy in eV for a momentum k in a.u."""
    k = np.asarray(k, dtype=float)
    out = 0.5 * k * k * HARTREE_EV
    return float(out) if out.ndim == 0 else out
