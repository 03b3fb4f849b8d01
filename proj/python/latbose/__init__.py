"""Python bindings for the latbose lattice Bose gas library."""

from ._latbose import (
    LatboseError,
    LatticeModel,
    certificate,
    compute_gamma,
    gp_length,
    ground_state_energy,
    neumann_gap,
    scattering_data,
    set_threads,
    spectrum,
    trial_energy_finite,
    trial_energy_thermo,
    two_body_extraction,
    upper_bound_sweep,
)

__all__ = [
    "LatboseError",
    "LatticeModel",
    "certificate",
    "compute_gamma",
    "gp_length",
    "ground_state_energy",
    "neumann_gap",
    "scattering_data",
    "set_threads",
    "spectrum",
    "trial_energy_finite",
    "trial_energy_thermo",
    "two_body_extraction",
    "upper_bound_sweep",
]
