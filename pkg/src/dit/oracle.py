"""Time-domain mean-field oracle for the analytic reflection spectrum.

Operators are replaced by their expectation amplitudes, noise terms are
dropped and the dipole inversion is frozen at its ground-state value. In
the frame rotating at the probe frequency, with detuning ``dw``:

    db/dt = -(i dw + (gamma + kappa)/2) b - sqrt(gamma) a_in - i g1 s
    ds/dt = -(i (dw + delta + S) + tau2/2) s - i g1 b
    a_out = a_in + sqrt(gamma) b

The equations are integrated from vacuum with fixed-step RK4 until the
state stops changing; ``a_out / a_in`` is then compared with the closed
form. ``S`` is an optional precomputed Stark operator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .params import ParameterError, SystemParams, require_valid
from .spectrum import as_grid, reflection_coefficient

STABILITY_FACTOR = 0.01


class WeakExcitationWarning(UserWarning):
    """The drive is strong enough that the frozen-inversion closure is doubtful."""


def stability_dt(params: SystemParams, delta_omega: float, shift: complex = 0j) -> float:
    """Largest allowed step: 0.01 / max(gamma + kappa, tau2, |dw|, |dw + delta + Re S|, g1)."""
    fastest = max(
        params.gamma + params.kappa,
        params.tau2,
        abs(delta_omega),
        abs(delta_omega + params.delta + shift.real),
        params.g1,
    )
    return STABILITY_FACTOR / fastest


@dataclass(frozen=True)
class OracleConfig:
    params: SystemParams
    drive_frequency_detuning: float = 0.0
    drive_amplitude: complex = 0.01
    dt: float | None = None
    t_max: float = 1.0e4
    convergence_tol: float = 1e-11
    effective_dipole_shift: complex = 0j

    def __post_init__(self):
        require_valid(self.params)
        if not math.isfinite(self.drive_frequency_detuning):
            raise ParameterError("drive detuning must be finite")
        if not self.t_max > 0:
            raise ParameterError(f"t_max must be positive, got {self.t_max}")
        if not self.convergence_tol > 0:
            raise ParameterError(f"convergence_tol must be positive, got {self.convergence_tol}")
        if self.dt is not None:
            if not self.dt > 0:
                raise ParameterError(f"dt must be positive, got {self.dt}")
            limit = self.max_dt
            if self.dt > limit * (1 + 1e-12):
                raise ParameterError(f"unstable dt {self.dt:g} exceeds stability limit {limit:g}")

    @property
    def max_dt(self) -> float:
        return stability_dt(self.params, self.drive_frequency_detuning, complex(self.effective_dipole_shift))

    @property
    def step(self) -> float:
        return self.dt if self.dt is not None else self.max_dt


@dataclass(frozen=True)
class OracleRun:
    steady_b: complex
    steady_sigma: complex
    steady_r: complex
    converged: bool
    iterations: int
    residual: float
    leaked: float = math.nan
    absorbed: float = math.nan
    degenerate: bool = False

    @property
    def energy_sum(self) -> float:
        """Reflected plus leaky-mode plus dipole-absorbed power, per unit input power."""
        return abs(self.steady_r) ** 2 + self.leaked + self.absorbed


def _rates(params: SystemParams, dw, shift: complex):
    dw = np.asarray(dw, dtype=np.float64)
    cav = 1j * dw + (params.gamma + params.kappa) / 2
    dip = 1j * (dw + params.delta + shift) + params.tau2 / 2
    return cav, dip


def _check_excitation(params: SystemParams, amplitude: complex) -> None:
    if params.g1 > 0 and abs(amplitude) ** 2 > 0.1 * params.g1 ** 2 / params.gamma:
        warnings.warn(
            f"input flux {abs(amplitude) ** 2:g} exceeds 0.1 g1^2/gamma = {0.1 * params.g1 ** 2 / params.gamma:g};"
            " the mean-field closure assumes weak excitation",
            WeakExcitationWarning,
            stacklevel=3,
        )


def _run_batch(params, detunings, amplitude, dt, t_max, tol, shift):
    cav, dip = _rates(params, detunings, shift)
    drive = np.full(cav.shape, -math.sqrt(params.gamma) * amplitude, dtype=np.complex128)
    window = max(1, math.ceil(1.0 / (params.gamma + params.kappa) / dt))
    max_steps = max(1, math.ceil(t_max / dt))
    b, s, steps, res, conv = _kernels.rk4_steady(cav, dip, params.g1, drive, dt, window, max_steps, tol)
    a2 = abs(amplitude) ** 2
    r = 1 + math.sqrt(params.gamma) * b / amplitude
    leaked = params.kappa * np.abs(b) ** 2 / a2
    absorbed = 2 * dip.real * np.abs(s) ** 2 / a2
    return b, s, r, steps, res, conv, leaked, absorbed


def integrate(config: OracleConfig) -> OracleRun:
    p = config.params
    a = complex(config.drive_amplitude)
    if a == 0:
        return OracleRun(0j, 0j, complex(math.nan, math.nan), False, 0, math.nan, degenerate=True)
    _check_excitation(p, a)
    b, s, r, steps, res, conv, leaked, absorbed = _run_batch(
        p,
        [config.drive_frequency_detuning],
        a,
        config.step,
        config.t_max,
        config.convergence_tol,
        complex(config.effective_dipole_shift),
    )
    return OracleRun(
        complex(b[0]), complex(s[0]), complex(r[0]), bool(conv[0]), int(steps[0]), float(res[0]),
        float(leaked[0]), float(absorbed[0]),
    )


@dataclass(frozen=True)
class OraclePoint:
    detuning: float
    analytic_r: complex
    oracle_r: complex
    abs_dev: float
    converged: bool
    energy_sum: float

    def to_dict(self) -> dict:
        return {
            "detuning": self.detuning,
            "analytic_r": [self.analytic_r.real, self.analytic_r.imag],
            "oracle_r": [self.oracle_r.real, self.oracle_r.imag],
            "abs_dev": self.abs_dev,
            "converged": self.converged,
            "energy_sum": self.energy_sum,
        }


@dataclass(frozen=True)
class OracleReport:
    points: list[OraclePoint]
    tol: float
    params: SystemParams
    effective_dipole_shift: complex = 0j
    backend: str = field(default=_kernels.BACKEND)

    @property
    def max_dev(self) -> float:
        return max(p.abs_dev for p in self.points)

    @property
    def all_converged(self) -> bool:
        return all(p.converged for p in self.points)

    @property
    def passed(self) -> bool:
        return all(p.converged and p.abs_dev <= self.tol for p in self.points)

    @property
    def max_energy_error(self) -> float:
        return max(abs(p.energy_sum - 1) for p in self.points if p.converged)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "effective_dipole_shift": [self.effective_dipole_shift.real, self.effective_dipole_shift.imag],
            "points": [p.to_dict() for p in self.points],
            "summary": {"max_dev": self.max_dev, "tol": self.tol, "pass": self.passed},
        }


def _default_analytic(params: SystemParams, dw, shift: complex):
    p = params
    return reflection_coefficient(dw, p.gamma, p.kappa, p.g1, p.tau2, p.delta + shift)


def oracle_grid_check(
    params: SystemParams,
    grid,
    tol: float = 1e-6,
    *,
    effective_dipole_shift: complex = 0j,
    drive_amplitude: complex = 0.01,
    convergence_tol: float = 1e-11,
    t_max: float = 1.0e4,
    dt: float | None = None,
    analytic=None,
) -> OracleReport:
    """Integrate every grid point to steady state and compare with the closed form.

    ``analytic(params, detunings, shift)`` can replace the reference formula,
    which is how the mutation tests feed in a deliberately wrong expression.
    All points share one step size, the stability limit of the outermost point.
    """
    require_valid(params)
    g = as_grid(grid)
    shift = complex(effective_dipole_shift)
    amplitude = complex(drive_amplitude)
    if amplitude == 0:
        raise ParameterError("drive amplitude must be non-zero")
    _check_excitation(params, amplitude)
    step = min(stability_dt(params, float(x), shift) for x in g)
    if dt is not None:
        if dt > step * (1 + 1e-12):
            raise ParameterError(f"unstable dt {dt:g} exceeds stability limit {step:g}")
        step = dt
    b, s, r, steps, res, conv, leaked, absorbed = _run_batch(
        params, g, amplitude, step, t_max, convergence_tol, shift
    )
    ref = np.asarray((analytic or _default_analytic)(params, g, shift), dtype=np.complex128)
    points = []
    for k in np.argsort(g, kind="stable"):
        ok = bool(conv[k])
        dev = float(abs(r[k] - ref[k])) if ok else math.inf
        points.append(
            OraclePoint(float(g[k]), complex(ref[k]), complex(r[k]), dev, ok, float(abs(r[k]) ** 2 + leaked[k] + absorbed[k]))
        )
    return OracleReport(points, tol, params, shift)
