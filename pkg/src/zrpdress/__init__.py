"""Dressed zero-range-potential scattering toolkit.

Analytic S matrices for generalized point interactions, Darboux-type
dressing of their partial waves, multi-center phase equations for
symmetric molecular frames, and a silane preset that ties the pieces
together; every closed form ships with an independent numerical oracle.
"""

from .darboux import (
    DressingChain,
    PoleError,
    PropFamily,
    PropFunction,
    chain_phase,
    channel_props,
    crum_wronskian,
    dressed_boundary_logderiv,
    dressed_potential,
    dt_apply,
    renormalized_length,
    riccati_residual,
    write_potential_csv,
)
from .gzrp import (
    GzrpChannel,
    PhaseShift,
    PoleState,
    boundary_residual,
    channel_wave_series,
    classify_states,
    gzrp_phase,
    pole_product_s_matrix,
)
from .model import (
    EnergyGrid,
    ExperimentDataset,
    FitFailure,
    FitResult,
    NoMinimumError,
    SilaneModel,
    dressed_series_summary,
    find_rt_minimum,
    fit_parameters,
    load_dataset,
    sigma_a1_scan,
)
from .multicenter import (
    ComplexRootError,
    CrossSectionSeries,
    DivergentScatteringLength,
    SymmetryChannel,
    XnGeometry,
    YxnGeometry,
    build_series,
    determinant_oracle,
    total_cross_section,
    xn_compatibility_residual,
    xn_length_formula,
    xn_phases,
    xn_scattering_length,
    yxn_phases,
    yxn_scattering_length,
)
from .numerov import (
    AccuracyError,
    RadialProblem,
    default_match_radius,
    integrate_phase,
    integrate_phase_scan,
)
from .specfun import SphericalKind, spherical, spherical_deriv, vandermonde_ratio
from .units import BOHR2_TO_ANG2, HARTREE_EV, ev_to_k, k_to_ev

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BOHR2_TO_ANG2",
    "ComplexRootError",
    "CrossSectionSeries",
    "DivergentScatteringLength",
    "DressingChain",
    "EnergyGrid",
    "ExperimentDataset",
    "FitFailure",
    "FitResult",
    "GzrpChannel",
    "HARTREE_EV",
    "NoMinimumError",
    "PhaseShift",
    "PoleError",
    "PoleState",
    "PropFamily",
    "PropFunction",
    "RadialProblem",
    "SilaneModel",
    "SphericalKind",
    "SymmetryChannel",
    "XnGeometry",
    "YxnGeometry",
    "boundary_residual",
    "build_series",
    "chain_phase",
    "channel_props",
    "channel_wave_series",
    "classify_states",
    "crum_wronskian",
    "default_match_radius",
    "determinant_oracle",
    "dressed_boundary_logderiv",
    "dressed_potential",
    "dressed_series_summary",
    "dt_apply",
    "ev_to_k",
    "find_rt_minimum",
    "fit_parameters",
    "gzrp_phase",
    "integrate_phase",
    "integrate_phase_scan",
    "k_to_ev",
    "load_dataset",
    "pole_product_s_matrix",
    "renormalized_length",
    "riccati_residual",
    "sigma_a1_scan",
    "spherical",
    "spherical_deriv",
    "total_cross_section",
    "vandermonde_ratio",
    "write_potential_csv",
    "xn_compatibility_residual",
    "xn_length_formula",
    "xn_phases",
    "xn_scattering_length",
    "yxn_phases",
    "yxn_scattering_length",
]
