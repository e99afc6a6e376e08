"""Constrained Proca evolution in dielectric media.

Thin python layer over the C++ core: grids, media, the two evolution
engines, the elliptic initial-data solvers, dispersion analysis, and the
run harness.
"""

from ._core import (  # noqa: F401
    CflError,
    ConfigError,
    DivergenceError,
    FlatEngine,
    FlatState,
    GordonEngine,
    GordonState,
    GridSpec,
    MeasurementError,
    MediumSpec,
    SolverError,
    __version__,
    classify_symbol,
    derivative,
    dispersion_longitudinal,
    dispersion_transverse,
    laplacian,
    measure_frequency,
    norm_l2,
    norm_linf,
    plane_wave_free_data,
    random_bandlimited,
    run_config_file,
    run_config_text,
    solve_gauss_constraint,
    solve_screened_poisson,
)
