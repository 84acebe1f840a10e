# SPDX-License-Identifier: Apache-2.0
"""Uplink outage and area spectral efficiency of sectorized mmWave networks."""

from ._core import (
    ConfigError,
    InterferenceProfile,
    Interferer,
    PropagationParams,
    RunConfig,
    campaign,
    code_rate,
    densify,
    nakagami_shape,
    outage_monte_carlo,
    outage_probability,
    outage_probability_no_hopping,
    path_loss,
    path_loss_exponent,
    shadowing_sigma_db,
    topology,
    validate,
)

__all__ = [
    "ConfigError",
    "InterferenceProfile",
    "Interferer",
    "PropagationParams",
    "RunConfig",
    "campaign",
    "code_rate",
    "densify",
    "nakagami_shape",
    "outage_monte_carlo",
    "outage_probability",
    "outage_probability_no_hopping",
    "path_loss",
    "path_loss_exponent",
    "shadowing_sigma_db",
    "topology",
    "validate",
]
