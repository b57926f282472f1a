"""Analytic reflection spectrum of the single-sided cavity with one dipole.

The reflection coefficient at detuning ``dw`` is

    r = (i dw + D - gamma/2 + kappa/2) / (i dw + D + gamma/2 + kappa/2),
    D = g1**2 / (i (dw + delta) + tau2/2),

where ``D`` is the dipole self-energy. The same expression, with a complex
``delta``, gives the Stark-shifted response (see :mod:`dit.stark`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .params import ParameterError, SystemParams, require_valid


def reflection_coefficient(delta_omega, gamma, kappa, g1, tau2, delta=0.0):
    """Vectorised core of :func:`reflection`; broadcasts over all arguments.

    ``delta`` may be complex: its imaginary part enters through
    ``i (dw + delta)`` exactly as written.
    """
    dw = np.asarray(delta_omega, dtype=np.float64)
    dipole = g1 ** 2 / (1j * (dw + delta) + tau2 / 2)
    return (1j * dw + dipole - gamma / 2 + kappa / 2) / (1j * dw + dipole + gamma / 2 + kappa / 2)


def principal_phase(r):
    """Argument of ``r`` mapped into (-pi, pi]."""
    phi = np.angle(r)
    return np.where(phi <= -np.pi, phi + 2 * np.pi, phi)


def wrap_phase(phi):
    """Map any angle into (-pi, pi]."""
    w = np.mod(np.asarray(phi) + np.pi, 2 * np.pi) - np.pi
    return np.where(w <= -np.pi, w + 2 * np.pi, w)


@dataclass(frozen=True)
class ComplexResponse:
    """A complex reflection amplitude ``r = sqrt(R) exp(i phi)``."""

    r: complex
    phi_unwrapped: float | None = None

    @property
    def R(self) -> float:
        return abs(self.r) ** 2

    @property
    def phi(self) -> float:
        return float(principal_phase(self.r))


@dataclass(frozen=True, eq=False)
class SpectrumGrid:
    """Reflection sampled on a strictly increasing detuning grid.

    ``drive`` and ``stark`` are set only for Stark-shifted sweeps.
    """

    detunings: np.ndarray
    r: np.ndarray
    params: SystemParams
    drive: Any = None
    stark: Any = None

    def __len__(self) -> int:
        return len(self.detunings)

    def __getitem__(self, i) -> ComplexResponse:
        return ComplexResponse(complex(self.r[i]), float(self.phase_unwrapped[i]))

    @property
    def responses(self) -> list[ComplexResponse]:
        return [self[i] for i in range(len(self))]

    @property
    def reflectivity(self) -> np.ndarray:
        return np.abs(self.r) ** 2

    @property
    def phase(self) -> np.ndarray:
        return principal_phase(self.r)

    @property
    def phase_unwrapped(self) -> np.ndarray:
        return np.unwrap(self.phase, discont=np.pi)

    def to_csv(self, path) -> None:
        from .io import write_spectrum_csv

        write_spectrum_csv(self, path)


def _check_finite(params: SystemParams, delta_omega) -> None:
    require_valid(params)
    if not np.all(np.isfinite(delta_omega)):
        raise ParameterError("detuning must be finite")


def reflection(params: SystemParams, delta_omega: float) -> ComplexResponse:
    _check_finite(params, delta_omega)
    r = reflection_coefficient(
        [delta_omega], params.gamma, params.kappa, params.g1, params.tau2, params.delta
    )[0]
    return ComplexResponse(complex(r))


def purcell_factor(params: SystemParams) -> float:
    """F_p = 4 g1^2 / (tau2 (gamma + kappa))."""
    denom = params.tau2 * (params.gamma + params.kappa)
    if not denom > 0:
        raise ParameterError("Purcell factor needs tau2 > 0 and gamma + kappa > 0")
    return 4 * params.g1 ** 2 / denom


def bare_reflectivity(params: SystemParams) -> float:
    """Resonant reflection amplitude r0 = (gamma - kappa)/(gamma + kappa) of the empty cavity."""
    total = params.gamma + params.kappa
    if not total > 0:
        raise ParameterError("bare reflectivity needs gamma + kappa > 0")
    return (params.gamma - params.kappa) / total


def resonant_reflection(params: SystemParams) -> float:
    """Closed form (F_p - r0) / (F_p + 1) of r at zero detuning.

    Only valid for a dipole resonant with the cavity.
    """
    if params.delta != 0:
        raise ParameterError(f"resonant identity requires delta = 0, got {params.delta}")
    fp = purcell_factor(params)
    return (fp - bare_reflectivity(params)) / (fp + 1)


def crossover_detuning(params: SystemParams) -> float:
    """Detuning scale g1^2 / ((gamma + kappa)/2) over which the DIT phase returns to pi."""
    total = params.gamma + params.kappa
    if not total > 0:
        raise ParameterError("crossover detuning needs gamma + kappa > 0")
    return params.g1 ** 2 / (total / 2)


def phase_contrast(params: SystemParams, delta_omega):
    """Reflection phase with the dipole minus the bare-cavity phase, in (-pi, pi]."""
    _check_finite(params, delta_omega)
    p = params
    with_dipole = reflection_coefficient(delta_omega, p.gamma, p.kappa, p.g1, p.tau2, p.delta)
    bare = reflection_coefficient(delta_omega, p.gamma, p.kappa, 0.0, p.tau2, p.delta)
    out = wrap_phase(principal_phase(with_dipole) - principal_phase(bare))
    return float(out) if np.ndim(out) == 0 else out


def as_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=np.float64).ravel()
    if g.size == 0:
        raise ParameterError("detuning grid is empty")
    if not np.all(np.isfinite(g)):
        raise ParameterError("detuning grid must be finite")
    if np.any(np.diff(g) <= 0):
        raise ParameterError("detuning grid must be strictly increasing")
    return g


def sweep(params: SystemParams, grid) -> SpectrumGrid:
    require_valid(params)
    g = as_grid(grid)
    r = reflection_coefficient(g, params.gamma, params.kappa, params.g1, params.tau2, params.delta)
    return SpectrumGrid(g, r, params)


def linspace_grid(lo: float, hi: float, points: int) -> np.ndarray:
    if points < 1 or not math.isfinite(lo) or not math.isfinite(hi):
        raise ParameterError("grid needs finite bounds and at least one point")
    return np.linspace(lo, hi, points)
