"""Physical parameters of the cavity / three-level dipole system.

All rates and frequencies are stored in rad/ps. Numerically this is the
"THz" used when quoting cavity and dipole rates, so ``gamma = 6`` means
6 THz and ``tau2 = 1e-3`` means 1 GHz.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, field, fields, replace

UNIT_SCALE = {
    "thz": 1.0,
    "ghz": 1e-3,
    "mhz": 1e-6,
    "rad/ps": 1.0,
    "": 1.0,
}

_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:inf|[0-9.]+(?:[eE][-+]?[0-9]+)?))\s*([A-Za-z/]*)\s*$")


class ParameterError(ValueError):
    """Raised when an operation receives parameters it cannot evaluate."""


def parse_quantity(text: str) -> float:
    """Parse ``"6 THz"``, ``"1GHz"``, ``"0.3"`` into rad/ps.

    >>> parse_quantity("1 GHz")
    0.001
    """
    m = _QUANTITY_RE.match(str(text))
    if m is None:
        raise ParameterError(f"cannot parse quantity {text!r}")
    value, unit = m.groups()
    try:
        scale = UNIT_SCALE[unit.lower()]
    except KeyError:
        raise ParameterError(f"unknown unit {unit!r} in {text!r}") from None
    return float(value) * scale


@dataclass(frozen=True)
class SystemParams:
    """Rates and frequencies of the cavity-dipole system, in rad/ps.

    Construction never raises, so that :func:`validate` can report on bad
    values; the evaluating functions reject what they cannot handle.
    """

    gamma: float = 6.0
    kappa: float = 0.1
    g1: float = 0.3
    g2: float = 0.3
    tau2: float = 1e-3
    tau3: float = 1e-3
    delta: float = 0.0
    omega0: float = 1000.0
    nu: float = 1000.0

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ParameterError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        return cls(**{k: float(v) for k, v in data.items()})

    @property
    def total_loss(self) -> float:
        return self.gamma + self.kappa

    @property
    def quality_factor(self) -> float:
        """Q = omega0 / kappa."""
        return self.omega0 / self.kappa if self.kappa > 0 else math.inf


#: gamma = 6 THz, kappa = 0.1 THz (Q = 10,000 with omega0 = 1000 THz),
#: tau2 = 1 GHz, dipole resonant with the cavity, g1 = g2 = 0.3 THz.
PAPER_DEFAULTS = SystemParams()


def paper_defaults(**overrides) -> SystemParams:
    return PAPER_DEFAULTS.replace(**overrides)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    message: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    warnings: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.message for c in self.checks if not c.passed]

    def __str__(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}" + (f": {c.message}" if not c.passed else "")
                 for c in self.checks]
        lines += [f"WARN {w}" for w in self.warnings]
        return "\n".join(lines)


def validate(params: SystemParams) -> ValidationReport:
    checks = []
    for f in fields(params):
        v = getattr(params, f.name)
        checks.append(Check(f"{f.name} finite", math.isfinite(v), f"{f.name} must be finite, got {v}"))

    def positive(name):
        v = getattr(params, name)
        checks.append(Check(f"{name} > 0", v > 0, f"{name} must be positive, got {v}"))

    def non_negative(name):
        v = getattr(params, name)
        checks.append(Check(f"{name} >= 0", v >= 0, f"{name} must be non-negative, got {v}"))

    positive("gamma")
    non_negative("kappa")
    positive("tau2")
    positive("tau3")
    non_negative("g1")
    non_negative("g2")

    warnings = []
    linewidth = params.gamma + params.kappa
    if not abs(params.delta) < linewidth:
        warnings.append(
            f"dipole outside cavity linewidth: |delta| = {abs(params.delta):g} >= gamma + kappa = {linewidth:g}"
        )
    if not abs(params.omega0 - params.nu) < linewidth:
        warnings.append(
            f"2-3 transition outside cavity linewidth: |omega0 - nu| = {abs(params.omega0 - params.nu):g}"
            f" >= gamma + kappa = {linewidth:g}"
        )
    return ValidationReport(tuple(checks), tuple(warnings))


def require_valid(params: SystemParams) -> None:
    p = params
    if (
        p.gamma > 0 and p.kappa >= 0 and p.tau2 > 0 and p.tau3 > 0 and p.g1 >= 0 and p.g2 >= 0
        and math.isfinite(p.gamma + p.kappa + p.g1 + p.g2 + p.tau2 + p.tau3 + p.delta + p.omega0 + p.nu)
    ):
        return
    report = validate(params)
    if not report.ok:
        raise ParameterError("; ".join(report.failures))


def weak_excitation_bound(params: SystemParams) -> float:
    """Input photon flux (photons/ps) below which the dipole stays near |1>.

    The mean-field treatment holds for input flux much smaller than
    ``g1**2 / gamma``.
    """
    if not params.gamma > 0:
        raise ParameterError(f"gamma must be positive, got {params.gamma}")
    return params.g1 ** 2 / params.gamma
