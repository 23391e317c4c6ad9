"""Zero-dispersion profiles of the Benjamin-Ono equation."""

from zdlim._zdcore import (
    Datum,
    boundary_trace,
    critical_values,
    eps_run,
    pi_u,
    semigroup_gap,
    zd_grid,
    zd_pointwise,
    zd_rational,
    zd_step,
)

__all__ = [
    "Datum",
    "boundary_trace",
    "critical_values",
    "eps_run",
    "pi_u",
    "semigroup_gap",
    "zd_grid",
    "zd_pointwise",
    "zd_rational",
    "zd_step",
]
