"""Python access to the axisymmetric vortex-ring subsolution core."""

import json

from ._vring import (
    G,
    H,
    K_2d,
    CompatibilityError,
    ConfigError,
    RingParams,
    VorticityProfile,
    aux_exact_1,
    aux_exact_2,
    height,
    height_rate,
    kinetic_energy,
    lambda_max_traceless,
    mean_value_circle,
    q1_coefficients,
    residual,
    thickness,
    velocity,
)
from . import _vring


def load_config(config=None):
    """Validated run configuration as a dict; `config` is a dict of overrides."""
    return json.loads(_vring.config_json(json.dumps(config) if config else ""))


def validate(config=None):
    """Runs the check suite and returns the report as a dict."""
    return json.loads(_vring.run_validation_suite(json.dumps(config) if config else ""))


__all__ = [
    "G",
    "H",
    "K_2d",
    "CompatibilityError",
    "ConfigError",
    "RingParams",
    "VorticityProfile",
    "aux_exact_1",
    "aux_exact_2",
    "height",
    "height_rate",
    "kinetic_energy",
    "lambda_max_traceless",
    "load_config",
    "mean_value_circle",
    "q1_coefficients",
    "residual",
    "thickness",
    "validate",
    "velocity",
]
