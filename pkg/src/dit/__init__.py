"""Reflection from a cavity holding a single three-level dipole.

Closed-form reflection spectra, Purcell-factor phase flip, Stark-shift Kerr
response, and a time-domain oracle that checks them.
"""

from .params import PAPER_DEFAULTS, ParameterError, SystemParams, paper_defaults, validate, weak_excitation_bound
from .spectrum import (
    ComplexResponse,
    SpectrumGrid,
    bare_reflectivity,
    crossover_detuning,
    phase_contrast,
    purcell_factor,
    reflection,
    resonant_reflection,
    sweep,
)
from .stark import StarkDrive, StarkValue, cavity_amplitude_ratio, kerr_sweep, shifted_reflection, stark_operator
from .oracle import OracleConfig, OracleRun, integrate, oracle_grid_check

__all__ = [
    "PAPER_DEFAULTS",
    "ParameterError",
    "SystemParams",
    "paper_defaults",
    "validate",
    "weak_excitation_bound",
    "ComplexResponse",
    "SpectrumGrid",
    "bare_reflectivity",
    "crossover_detuning",
    "phase_contrast",
    "purcell_factor",
    "reflection",
    "resonant_reflection",
    "sweep",
    "StarkDrive",
    "StarkValue",
    "cavity_amplitude_ratio",
    "kerr_sweep",
    "shifted_reflection",
    "stark_operator",
    "OracleConfig",
    "OracleRun",
    "integrate",
    "oracle_grid_check",
]
