"""Steady state of the driven three-mode cavity.

With the fixed phase conventions of :mod:`nopasim.model` the steady-state
equations reduce to three real balance equations for the intracavity
amplitudes (alpha1, alpha2, alpha3):

    (gamma+rho) * alpha1 = chi * alpha2 * alpha3
    (gamma+rho) * alpha2 - chi * alpha1 * alpha3 = sqrt(2*gamma) * beta2
    (gamma3+rho3) * alpha3 + chi * alpha1 * alpha2 = sqrt(2*gamma3) * beta3

Eliminating alpha1 and alpha2 gives, with D = gamma+rho - alpha3^2 chi^2/(gamma+rho),

    alpha2 = sqrt(2*gamma) * beta2 / D
    alpha1 = sqrt(2*gamma) * chi * beta2 * alpha3 / ((gamma+rho) * D)

and a quintic polynomial in alpha3 (the idler-injection term carries 1/D^2).
A commonly quoted reduced form keeps only one power of D and is a cubic; it
is exposed as :func:`pump_polynomial` and its roots are used as extra seeds,
but the solver always polishes candidates against the raw balance equations,
so returned solutions satisfy the full system to the residual bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CavityParams, DriveParams, SimulationError, validate, validate_drive

#: Admissibility bound: residual <= RESIDUAL_RTOL * max(1, |alpha3|*(gamma3+rho3)).
RESIDUAL_RTOL = 1e-10

#: A selected root with |D| below POLE_RTOL*(gamma+rho) has numerically
#: meaningless signal/idler amplitudes.
POLE_RTOL = 1e-9


class NoAdmissibleRoot(SimulationError):
    """No real root of the pump balance survives filtering."""


class PoleProximity(SimulationError):
    """Selected root sits on the pole of the amplitude back-substitution."""


@dataclass(frozen=True)
class SteadyState:
    """Real intracavity amplitudes plus solution diagnostics.

    residual is the max absolute value of the three balance equations at the
    solution; stable reports whether both quadrature drift matrices are
    Hurwitz; branch_count the number of admissible real roots found.
    """

    alpha1: float
    alpha2: float
    alpha3: float
    residual: float
    stable: bool
    branch_count: int


@dataclass(frozen=True)
class OutputAmplitudes:
    """Traveling output amplitudes through the coupling mirror.

    Each mode obeys a_out = sqrt(2*gamma_i)*alpha_i - a_in with a vacuum
    signal input (beta1 = 0).
    """

    a1_out: float
    a2_out: float
    a3_out: float


def pump_polynomial(params: CavityParams, drive: DriveParams) -> tuple[float, float, float, float]:
    """Cubic coefficients (c3, c2, c1, c0) of the reduced pump balance.

    This is the denominator-cleared form of

        (gamma3+rho3)*a*[(gamma+rho)^2 - a^2 chi^2] + 2*gamma*chi^2*beta2^2*a
            - sqrt(2*gamma3)*beta3*[(gamma+rho)^2 - a^2 chi^2] = 0

    whose roots away from (gamma+rho)^2 = a^2 chi^2 solve the reduced
    (single-power-of-D) pump equation.  The full steady-state system carries
    D^2, so these roots are solver seeds, not final answers.
    """
    g = params.gamma + params.rho
    g3 = params.gamma3 + params.rho3
    chi = params.chi
    d = math.sqrt(2.0 * params.gamma3) * drive.beta3
    c3 = -g3 * chi**2
    c2 = d * chi**2
    c1 = g3 * g**2 + 2.0 * params.gamma * chi**2 * drive.beta2**2
    c0 = -d * g**2
    return (c3, c2, c1, c0)


def pump_balance_polynomial(params: CavityParams, drive: DriveParams) -> tuple[float, ...]:
    """Quintic coefficients (highest power first) of the exact pump balance.

    Obtained by clearing the D^2 denominator of the eliminated system; its
    real roots away from the D = 0 pole are exactly the steady-state pump
    amplitudes of the full three-mode system.
    """
    g = params.gamma + params.rho
    g3 = params.gamma3 + params.rho3
    chi = params.chi
    p0 = g * g
    d = math.sqrt(2.0 * params.gamma3) * drive.beta3
    return (
        g3 * chi**4,
        -d * chi**4,
        -2.0 * g3 * p0 * chi**2,
        2.0 * d * p0 * chi**2,
        g3 * p0**2 + 2.0 * params.gamma * g * chi**2 * drive.beta2**2,
        -d * p0**2,
    )


def _pole_gap(params: CavityParams, alpha3: float) -> float:
    """D = gamma+rho - alpha3^2 chi^2 / (gamma+rho), pole of the back-substitution."""
    g = params.gamma + params.rho
    return g - alpha3 * alpha3 * params.chi * params.chi / g


def _amplitudes_from_alpha3(params: CavityParams, drive: DriveParams, alpha3: float) -> tuple[float, float]:
    g = params.gamma + params.rho
    d = _pole_gap(params, alpha3)
    alpha2 = math.sqrt(2.0 * params.gamma) * drive.beta2 / d
    alpha1 = math.sqrt(2.0 * params.gamma) * params.chi * drive.beta2 * alpha3 / (g * d)
    return alpha1, alpha2


def steady_state_residual(params: CavityParams, drive: DriveParams,
                          alpha1: float, alpha2: float, alpha3: float) -> float:
    """Max absolute value of the three real balance equations."""
    g = params.gamma + params.rho
    g3 = params.gamma3 + params.rho3
    chi = params.chi
    r1 = -g * alpha1 + chi * alpha2 * alpha3
    r2 = -g * alpha2 + chi * alpha1 * alpha3 + math.sqrt(2.0 * params.gamma) * drive.beta2
    r3 = -g3 * alpha3 - chi * alpha1 * alpha2 + math.sqrt(2.0 * params.gamma3) * drive.beta3
    return max(abs(r1), abs(r2), abs(r3))


def residual_scale(params: CavityParams, alpha3: float) -> float:
    """Normalization for the residual bound: max(1, |alpha3|*(gamma3+rho3))."""
    return max(1.0, abs(alpha3) * (params.gamma3 + params.rho3))


def _polish_alpha3(params: CavityParams, drive: DriveParams, alpha3: float,
                   max_iter: int = 60) -> float:
    """Newton iteration on the raw pump balance with alpha1, alpha2 eliminated.

    The first two balance equations hold identically under the back
    substitution, so driving the remaining one to zero polishes the root of
    the full system.
    """
    g = params.gamma + params.rho
    g3 = params.gamma3 + params.rho3
    chi = params.chi
    gain = 2.0 * params.gamma * chi**2 * drive.beta2**2
    rhs = math.sqrt(2.0 * params.gamma3) * drive.beta3
    for _ in range(max_iter):
        d = _pole_gap(params, alpha3)
        if d == 0.0 or not math.isfinite(d):
            return math.nan
        q = rhs - g3 * alpha3 - gain * alpha3 / (g * d * d)
        dq = -g3 - (gain / g) * (1.0 / d**2 + 4.0 * chi**2 * alpha3**2 / (g * d**3))
        if dq == 0.0 or not math.isfinite(dq):
            break
        step = q / dq
        new = alpha3 - step
        if not math.isfinite(new):
            return math.nan
        alpha3 = new
        if abs(step) <= 1e-16 * max(1.0, abs(alpha3)):
            break
    return alpha3


def _candidate_roots(params: CavityParams, drive: DriveParams) -> list[float]:
    """Seed values for the polish: roots of the quintic plus the reduced cubic."""
    seeds = []
    for coeffs in (pump_balance_polynomial(params, drive), pump_polynomial(params, drive)):
        arr = np.asarray(coeffs, dtype=float)
        nz = np.flatnonzero(arr)
        if len(nz) == 0:
            seeds.append(0.0)
            continue
        trimmed = arr[nz[0]:]
        if len(trimmed) == 1:
            continue
        seeds.extend(float(r.real) for r in np.roots(trimmed))
    return seeds


def solve_steady_state(params: CavityParams, drive: DriveParams) -> SteadyState:
    """Solve the three-mode steady state and select the physical branch.

    All candidate pump amplitudes are Newton-polished on the raw balance
    equations; candidates are admissible when the back-substituted amplitudes
    reproduce the full system to the residual bound.  Among admissible roots
    the one continued from zero drive is returned: the smallest-|alpha3|
    stable root, or (when no root is stable, e.g. above threshold) the
    smallest-|alpha3| root flagged unstable.

    Raises NoAdmissibleRoot when filtering leaves nothing and PoleProximity
    when the selected root sits too close to the back-substitution pole.
    """
    problems = validate(params) + validate_drive(drive)
    if problems:
        raise ValueError("invalid parameters: " + ", ".join(problems))

    admissible: list[tuple[float, float, float, float]] = []
    for seed in _candidate_roots(params, drive):
        a3 = _polish_alpha3(params, drive, seed)
        if not math.isfinite(a3):
            continue
        a1, a2 = _amplitudes_from_alpha3(params, drive, a3)
        if not (math.isfinite(a1) and math.isfinite(a2)):
            continue
        res = steady_state_residual(params, drive, a1, a2, a3)
        if not math.isfinite(res) or res > RESIDUAL_RTOL * residual_scale(params, a3):
            continue
        if any(abs(a3 - other[2]) <= 1e-8 * max(1.0, abs(a3)) for other in admissible):
            continue
        admissible.append((a1, a2, a3, res))

    if not admissible:
        raise NoAdmissibleRoot(
            f"no admissible steady-state root for beta2={drive.beta2}, beta3={drive.beta3}")

    admissible.sort(key=lambda c: abs(c[2]))
    branch_count = len(admissible)

    from . import fluctuations  # deferred: fluctuations only type-hints on this module

    selected = None
    selected_stable = False
    for a1, a2, a3, res in admissible:
        if fluctuations.amplitudes_are_stable(params, a1, a2, a3):
            selected = (a1, a2, a3, res)
            selected_stable = True
            break
    if selected is None:
        selected = admissible[0]

    a1, a2, a3, res = selected
    if abs(_pole_gap(params, a3)) < POLE_RTOL * (params.gamma + params.rho):
        raise PoleProximity(
            f"selected root alpha3={a3} lies on the amplitude pole; "
            "amplitudes are numerically meaningless")

    return SteadyState(alpha1=a1, alpha2=a2, alpha3=a3, residual=res,
                       stable=selected_stable, branch_count=branch_count)


def output_amplitudes(ss: SteadyState, drive: DriveParams, params: CavityParams) -> OutputAmplitudes:
    """Apply the mirror boundary condition a_out = sqrt(2*gamma_i)*alpha_i - a_in."""
    root_g = math.sqrt(2.0 * params.gamma)
    root_g3 = math.sqrt(2.0 * params.gamma3)
    return OutputAmplitudes(
        a1_out=root_g * ss.alpha1,
        a2_out=root_g * ss.alpha2 - drive.beta2,
        a3_out=root_g3 * ss.alpha3 - drive.beta3,
    )


def manley_rowe_defect(ss: SteadyState, drive: DriveParams, params: CavityParams) -> float:
    """Max pairwise mismatch of the three photon-flux balances.

    P1 = signal flux created, P2 = idler flux created, P3 = pump flux
    destroyed.  Without extra intracavity loss all three equal the pair
    production rate 2*chi*alpha1*alpha2*alpha3 exactly; with loss the
    (nonzero) defect is reported as a diagnostic, not an error.
    """
    out = output_amplitudes(ss, drive, params)
    p1 = out.a1_out**2
    p2 = out.a2_out**2 - drive.beta2**2
    p3 = drive.beta3**2 - out.a3_out**2
    return max(abs(p1 - p2), abs(p1 - p3), abs(p2 - p3))


def pair_rate(ss: SteadyState, params: CavityParams) -> float:
    """Photon pair production rate 2*chi*alpha1*alpha2*alpha3."""
    return 2.0 * params.chi * ss.alpha1 * ss.alpha2 * ss.alpha3
