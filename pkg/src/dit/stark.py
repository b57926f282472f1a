"""Optical Stark shift from a second field on the 2-3 transition.

A field detuned by ``Delta`` from the 2-3 transition, with ``n`` photons in
the cavity, dresses state |2> with the complex operator

    S = 2 i g2^2 n / (i Delta + tau3/2)
      = 2 g2^2 n (Delta + i tau3/2) / (Delta^2 + tau3^2/4).

Re(S) is the Stark shift (about 2 g2^2 n / Delta far from resonance) and
Im(S) is the two-photon absorption rate. The probe sees the ordinary
reflection coefficient with the dipole detuning ``delta`` replaced by
``delta + S``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import ParameterError, SystemParams, require_valid
from .spectrum import SpectrumGrid, as_grid, reflection_coefficient, ComplexResponse

PHOTONS = "photons"
FLUX = "flux"

#: ``literal`` substitutes S as computed; ``physical`` substitutes conj(S) so
#: that two-photon absorption adds to the dipole damping instead of removing it.
LOSS_SIGNS = ("literal", "physical")


@dataclass(frozen=True)
class StarkDrive:
    """Second field at nu + Delta. ``Delta = inf`` means no field."""

    Delta: float = math.inf
    n_photons: float = 0.0
    mode: str = PHOTONS
    input_flux: float = 0.0

    def __post_init__(self):
        if self.mode not in (PHOTONS, FLUX):
            raise ParameterError(f"unknown drive mode {self.mode!r}")
        if math.isnan(self.Delta):
            raise ParameterError("Delta must not be NaN")
        if not self.n_photons >= 0 or not self.input_flux >= 0:
            raise ParameterError("photon number and input flux must be non-negative")
        if self.mode == PHOTONS and self.input_flux != 0:
            raise ParameterError("photon-number drive must not also set input_flux")
        if self.mode == FLUX and self.n_photons != 0:
            raise ParameterError("flux drive must not also set n_photons")

    @classmethod
    def photons(cls, Delta: float, n: float = 1.0) -> "StarkDrive":
        return cls(Delta=Delta, n_photons=n, mode=PHOTONS)

    @classmethod
    def flux(cls, Delta: float, input_flux: float) -> "StarkDrive":
        return cls(Delta=Delta, input_flux=input_flux, mode=FLUX)

    @classmethod
    def off(cls) -> "StarkDrive":
        return cls()

    @property
    def active(self) -> bool:
        return math.isfinite(self.Delta)

    def photon_number(self, params: SystemParams) -> float:
        # bright-field substitution <b^dag b> = <a_in^dag a_in> / gamma
        if self.mode == FLUX:
            return self.input_flux / params.gamma
        return self.n_photons

    def to_dict(self) -> dict:
        return {
            "Delta": _encode_float(self.Delta),
            "n_photons": self.n_photons,
            "mode": self.mode,
            "input_flux": self.input_flux,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StarkDrive":
        return cls(
            Delta=_decode_float(data["Delta"]),
            n_photons=float(data.get("n_photons", 0.0)),
            mode=data.get("mode", PHOTONS),
            input_flux=float(data.get("input_flux", 0.0)),
        )


def _encode_float(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _decode_float(x) -> float:
    return float(x)


@dataclass(frozen=True)
class StarkValue:
    S: complex

    @property
    def shift(self) -> float:
        return self.S.real

    @property
    def two_photon_loss(self) -> float:
        return self.S.imag

    def to_dict(self) -> dict:
        return {"re_S": self.S.real, "im_S": self.S.imag}


@dataclass(frozen=True)
class CavityResponse:
    """Intracavity amplitude per unit input amplitude at the Stark frequency."""

    ratio: complex
    approx: float
    rel_error: float


def cavity_amplitude_ratio(params: SystemParams, Delta: float) -> CavityResponse:
    """b/a at nu + Delta, ``-sqrt(gamma) / (i (omega0 - nu - Delta) + gamma)``,
    together with its large-gamma approximation ``-1/sqrt(gamma)``."""
    if not params.gamma > 0:
        raise ParameterError(f"gamma must be positive, got {params.gamma}")
    sg = math.sqrt(params.gamma)
    ratio = -sg / (1j * (params.omega0 - params.nu - Delta) + params.gamma)
    approx = -1 / sg
    return CavityResponse(complex(ratio), approx, abs(ratio - approx) / abs(ratio))


def stark_operator(params: SystemParams, drive: StarkDrive) -> StarkValue:
    if not drive.active:
        return StarkValue(0j)
    Delta, tau3 = drive.Delta, params.tau3
    denom = Delta ** 2 + tau3 ** 2 / 4
    if denom == 0:
        raise ParameterError("Stark operator is singular for Delta = 0 and tau3 = 0")
    n = drive.photon_number(params)
    amp = 2 * params.g2 ** 2 * n / denom
    return StarkValue(complex(amp * Delta, amp * tau3 / 2))


def _effective_shift(value: StarkValue, loss_sign: str) -> complex:
    if loss_sign not in LOSS_SIGNS:
        raise ParameterError(f"loss_sign must be one of {LOSS_SIGNS}, got {loss_sign!r}")
    return value.S if loss_sign == "literal" else value.S.conjugate()


def _shifted(params: SystemParams, drive: StarkDrive, grid, loss_sign: str):
    value = stark_operator(params, drive)
    p = params
    if value.S == 0:
        # keep the unshifted path bit-identical to the g2 = 0 spectrum
        r = reflection_coefficient(grid, p.gamma, p.kappa, p.g1, p.tau2, p.delta)
    else:
        s = _effective_shift(value, loss_sign)
        r = reflection_coefficient(grid, p.gamma, p.kappa, p.g1, p.tau2, p.delta + s)
    return r, value


def shifted_reflection(
    params: SystemParams, drive: StarkDrive, delta_omega: float, loss_sign: str = "literal"
) -> ComplexResponse:
    require_valid(params)
    if not math.isfinite(delta_omega):
        raise ParameterError("detuning must be finite")
    r, _ = _shifted(params, drive, np.array([delta_omega], dtype=np.float64), loss_sign)
    return ComplexResponse(complex(r[0]))


def kerr_sweep(
    params: SystemParams, drives, grid, loss_sign: str = "literal"
) -> list[SpectrumGrid]:
    require_valid(params)
    drives = list(drives)
    if not drives:
        raise ParameterError("drive list is empty")
    g = as_grid(grid)
    out = []
    for drive in drives:
        r, value = _shifted(params, drive, g, loss_sign)
        out.append(SpectrumGrid(g, r, params, drive=drive, stark=value))
    return out


def stark_shift_limit(params: SystemParams, drive: StarkDrive) -> float:
    """Far-detuned Stark shift 2 g2^2 n / Delta."""
    if not drive.active:
        return 0.0
    return 2 * params.g2 ** 2 * drive.photon_number(params) / drive.Delta
