"""
Numerical solvers, one module per physical subsystem.
"""

from .lattice_core import (
    apply_gauge_transform,
    build_hamiltonian,
    flux_from_wavenumber,
    parse_flux,
    plaquette_phase,
    snap_to_rational,
)
from .spectra import band_count, butterfly, harper_matrix, reduced_fractions, spectrum_slice
from .dynamics import (
    density_profile,
    density_time_series,
    detect_period,
    evolve,
    uniform_initial_state,
)
from .wannier_bands import (
    calibration_table,
    effective_jx,
    gamma_x,
    gamma_y,
    hopping_J,
    omega_for_target_jx,
    solve_bands_1d,
    wannier,
    wannier_overlap,
    wannier_width,
)
from .laser_geometry import (
    attainable_alpha_window,
    gamma_squared,
    raman_rabi_magnitude,
    solve_angles,
    wavenumber_from_angles,
)
from .meanfield import local_mean_field_hamiltonian, observables, site_energy, solve_ground_state

__all__ = [
    "apply_gauge_transform",
    "build_hamiltonian",
    "flux_from_wavenumber",
    "parse_flux",
    "plaquette_phase",
    "snap_to_rational",
    "band_count",
    "butterfly",
    "harper_matrix",
    "reduced_fractions",
    "spectrum_slice",
    "density_profile",
    "density_time_series",
    "detect_period",
    "evolve",
    "uniform_initial_state",
    "calibration_table",
    "effective_jx",
    "gamma_x",
    "gamma_y",
    "hopping_J",
    "omega_for_target_jx",
    "solve_bands_1d",
    "wannier",
    "wannier_overlap",
    "wannier_width",
    "attainable_alpha_window",
    "gamma_squared",
    "raman_rabi_magnitude",
    "solve_angles",
    "wavenumber_from_angles",
    "local_mean_field_hamiltonian",
    "observables",
    "site_energy",
    "solve_ground_state",
]
