"""Figure rendering for scan and fit outputs.

matplotlib is imported lazily with the Agg backend so the library core
never needs a display; every renderer writes a file and returns its
path.
"""

from __future__ import annotations

import numpy as np

from .units import BOHR2_TO_ANG2


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_series_figure(series, path, ang2: bool = False, logy: bool = True):
    """Cross-section channels of a series versus energy."""
    plt = _pyplot()
    scale = BOHR2_TO_ANG2 if ang2 else 1.0
    unit = "Angstrom^2" if ang2 else "a0^2"
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for j, sigma in enumerate(series.sigmas):
        g = series.degeneracies[j]
        label = f"sigma_{j}" + (f" (x{g})" if g > 1 else "")
        ax.plot(series.e_ev, scale * sigma, lw=1.0, label=label)
    ax.plot(series.e_ev, scale * series.sigma_total, "k-", lw=1.6, label="total")
    for name, values in series.extras.items():
        ax.plot(series.e_ev, scale * np.asarray(values), "--", lw=1.6, label=name)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("E (eV)")
    ax.set_ylabel(f"cross section ({unit})")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_potential_figure(r, u, path, label="u(r)"):
    """A dressed potential sample set."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(np.asarray(r), np.real(np.asarray(u)), lw=1.4, label=label)
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("r (a0)")
    ax.set_ylabel("u (hartree)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_fit_figure(dataset, e_model, sigma_model, path, ang2: bool = False):
    """Measured points against the fitted model curve."""
    plt = _pyplot()
    scale = BOHR2_TO_ANG2 if ang2 else 1.0
    unit = "Angstrom^2" if ang2 else "a0^2"
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    if dataset.sigma_err is not None:
        ax.errorbar(
            dataset.e_ev,
            scale * dataset.sigma,
            yerr=scale * dataset.sigma_err,
            fmt="o",
            ms=3,
            label=dataset.source or "data",
        )
    else:
        ax.plot(
            dataset.e_ev, scale * dataset.sigma, "o", ms=3,
            label=dataset.source or "data",
        )
    ax.plot(np.asarray(e_model), scale * np.asarray(sigma_model), "-", lw=1.4,
            label="fit")
    ax.set_xlabel("E (eV)")
    ax.set_ylabel(f"cross section ({unit})")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
