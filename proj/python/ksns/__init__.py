"""Pseudo-spectral Keller-Segel / buoyant-flow channel simulator."""

from ._core import (
    ConfigError,
    emit_plots,
    laplacian,
    roundtrip,
    run,
    run_to_dir,
    solve_poisson,
    verify,
)

__all__ = [
    "ConfigError",
    "emit_plots",
    "laplacian",
    "roundtrip",
    "run",
    "run_to_dir",
    "solve_poisson",
    "verify",
]
