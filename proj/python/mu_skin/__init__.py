"""Semi-analytic Maxwell solver for high-permeability conductors and its verification harness."""

import json

from ._core import (
    SCHEMA_VERSION,
    AccuracyError,
    ConditioningError,
    ConfigError,
    Drive,
    DriveKind,
    Geometry,
    GeometryKind,
    MediaParams,
    ModalSolution,
    Polarization,
    derive_params,
    run_config,
    solve_exact,
    stability_constants,
)
from ._core import _rates_json


def run_rates(geometry, media, drive, eps=(0.2, 0.1, 0.05, 0.025), orders=(0, 1, 2), threads=1):
    """Convergence report of the composite expansion as a plain dict."""
    return json.loads(_rates_json(geometry, media, drive, list(eps), list(orders), threads))


__all__ = [
    "SCHEMA_VERSION",
    "AccuracyError",
    "ConditioningError",
    "ConfigError",
    "Drive",
    "DriveKind",
    "Geometry",
    "GeometryKind",
    "MediaParams",
    "ModalSolution",
    "Polarization",
    "derive_params",
    "run_config",
    "run_rates",
    "solve_exact",
    "stability_constants",
]
