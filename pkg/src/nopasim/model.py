"""Physical parameters and fixed conventions of the three-mode down-converter.

The system is a triply resonant cavity in which a nonlinear crystal couples a
pump mode to a signal and an idler mode (pump frequency = signal + idler).
All rates are dimensionless per-roundtrip quantities; no SI conversion is done
anywhere in the package.

Fixed conventions used throughout:

* input phases: signal and idler inputs are real (phase 0), the pump input
  carries a fixed pi/4 phase; the signal input is vacuum,
* steady-state phases: signal and pump sit at pi/4, the idler at 0, so the
  steady-state mode amplitudes themselves are real numbers,
* quadratures: X = (a + a^dag)/2 and Y = (a - a^dag)/(2i),
* every input port's quadrature variance is normalized to 1 (vacuum = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


#: Input field phases (signal, idler, pump).
INPUT_PHASES = (0.0, 0.0, math.pi / 4)

#: Steady-state intracavity phases (signal, idler, pump).
STEADY_STATE_PHASES = (math.pi / 4, 0.0, math.pi / 4)

#: Quadrature variance of every (vacuum or coherent) input port.
VACUUM_VARIANCE = 1.0

#: Threshold conventions: "printed" is the product-of-losses form
#: (gamma3+rho3)(gamma+rho)/chi; "derived" divides that by sqrt(2*gamma3) and
#: equals the input pump amplitude at which the undriven-idler cavity starts
#: to oscillate.
THRESHOLD_CONVENTIONS = ("printed", "derived")

#: Closed-form fluctuation coefficient sets, see ``fluctuations``.
COEFFICIENT_MODES = ("printed", "corrected")


class SimulationError(Exception):
    """Base class for solver and metric failures."""


@dataclass(frozen=True)
class CavityParams:
    """Static cavity configuration.

    gamma / gamma3 are the coupling-mirror loss parameters of the signal+idler
    pair and of the pump; rho / rho3 the corresponding extra intracavity
    losses; chi the effective nonlinear coupling.  threshold_convention picks
    the formula used whenever drive amplitudes are normalized by the
    oscillation threshold (default frozen by the acceptance determination).
    """

    gamma: float = 0.1
    gamma3: float = 0.1
    rho: float = 0.0
    rho3: float = 0.0
    chi: float = 0.001
    threshold_convention: str = "printed"

    def with_convention(self, convention: str) -> "CavityParams":
        return replace(self, threshold_convention=convention)


@dataclass(frozen=True)
class DriveParams:
    """Real input amplitudes of the idler (beta2) and pump (beta3) fields.

    Intensities are the squared amplitudes.  The signal input is vacuum and
    the input phases are the fixed constants in ``INPUT_PHASES``.
    """

    beta2: float = 0.0
    beta3: float = 0.0


@dataclass(frozen=True)
class AnalyzingFrequency:
    """Sideband frequency at which fluctuation spectra are evaluated.

    Stored as the dimensionless product omega_tau (frequency times cavity
    roundtrip time).  Figures normalize it as Omega = omega_tau / gamma.
    """

    omega_tau: float = 0.0

    @classmethod
    def from_normalized(cls, omega_norm: float, params: CavityParams) -> "AnalyzingFrequency":
        return cls(omega_tau=omega_norm * params.gamma)

    def normalized(self, params: CavityParams) -> float:
        return self.omega_tau / params.gamma


def validate(params: CavityParams) -> list[str]:
    """Check the cavity-parameter invariants.

    Returns an empty list when the configuration passes, otherwise one entry
    per violated invariant, naming the field (e.g. ``"gamma > 0"``).
    """
    violations = []
    if not params.gamma > 0:
        violations.append("gamma > 0")
    if not params.gamma3 > 0:
        violations.append("gamma3 > 0")
    if not params.chi > 0:
        violations.append("chi > 0")
    if params.rho < 0:
        violations.append("rho >= 0")
    if params.rho3 < 0:
        violations.append("rho3 >= 0")
    if params.threshold_convention not in THRESHOLD_CONVENTIONS:
        violations.append("threshold_convention in {printed, derived}")
    return violations


def validate_drive(drive: DriveParams) -> list[str]:
    violations = []
    if drive.beta2 < 0:
        violations.append("beta2 >= 0")
    if drive.beta3 < 0:
        violations.append("beta3 >= 0")
    return violations


def threshold(params: CavityParams, convention: str | None = None) -> float:
    """Oscillation-threshold normalization for the drive amplitudes.

    Under the "printed" convention this is (gamma3+rho3)(gamma+rho)/chi.
    Under "derived" it is the same divided by sqrt(2*gamma3), which is the
    input pump amplitude where the zero-idler-injection steady state reaches
    the parametric oscillation condition alpha3*chi = gamma+rho.
    """
    conv = params.threshold_convention if convention is None else convention
    if conv not in THRESHOLD_CONVENTIONS:
        raise ValueError(f"unknown threshold convention {conv!r}")
    eps = (params.gamma3 + params.rho3) * (params.gamma + params.rho) / params.chi
    if conv == "derived":
        eps /= math.sqrt(2.0 * params.gamma3)
    return eps
