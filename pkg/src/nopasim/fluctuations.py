"""Linearized output fluctuations of the signal mode.

Small fluctuations about the steady state obey linear equations whose
quadrature decomposition (X = (a+a^dag)/2, Y = (a-a^dag)/(2i)) gives two real
3x3 drift matrices, identical except for the sign of the parametric-gain
entries chi*alpha3.  Two independent routes to the signal-output quadrature
variances are provided:

* a closed-form coefficient set (one complex gain per input port over a
  common denominator), evaluated in two modes: "printed" keeps a published
  transcription with its internal inconsistencies, "corrected" derives every
  entry from the drift-matrix cofactors;
* a frequency-domain matrix solve of the drift system, used as the oracle
  that fixes which closed-form mode is right.

All six input ports (three mirror inputs, three intracavity-loss vacua) are
uncorrelated with unit quadrature variance, so the output variance is the sum
of squared magnitudes of the port gains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .model import AnalyzingFrequency, CavityParams, SimulationError, COEFFICIENT_MODES

if TYPE_CHECKING:
    from .steady_state import SteadyState


class SingularSystem(SimulationError):
    """The analyzing frequency coincides with a drift-matrix eigenvalue."""


@dataclass(frozen=True)
class QuadratureTransfer:
    """Closed-form port gains of the signal output at one analyzing frequency.

    c_plus / c_minus are the denominators of the amplitude (X) and phase (Y)
    quadrature transfer; each coefficient field holds the (X-branch, Y-branch)
    pair of complex numerators for one input port: eta31 the pump input,
    eta32 the idler input, eta33 the signal input, and kappa31/32/33 the
    corresponding intracavity-loss vacuum ports.
    """

    c_plus: complex
    c_minus: complex
    eta31: tuple[complex, complex]
    eta32: tuple[complex, complex]
    eta33: tuple[complex, complex]
    kappa31: tuple[complex, complex]
    kappa32: tuple[complex, complex]
    kappa33: tuple[complex, complex]
    omega_tau: float


@dataclass(frozen=True)
class OutputVariances:
    """Signal-output quadrature variances (vacuum input = 1)."""

    var_x: float
    var_y: float
    source: str  # "closed_form" | "matrix_oracle"


def drift_matrices_from_amplitudes(params: CavityParams, alpha1: float, alpha2: float,
                                   alpha3: float) -> tuple[np.ndarray, np.ndarray]:
    """X- and Y-quadrature drift matrices for given intracavity amplitudes."""
    g = params.gamma + params.rho
    g3 = params.gamma3 + params.rho3
    c1 = params.chi * alpha1
    c2 = params.chi * alpha2
    c3 = params.chi * alpha3
    m_x = np.array([[-g, c3, c2],
                    [c3, -g, c1],
                    [-c2, -c1, -g3]])
    m_y = np.array([[-g, -c3, c2],
                    [-c3, -g, c1],
                    [-c2, -c1, -g3]])
    return m_x, m_y


def drift_matrices(ss: "SteadyState", params: CavityParams) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature drift matrices at a solved steady state.

    The matrices differ only in the sign of the two chi*alpha3 entries that
    couple signal and idler; they coincide when alpha3 = 0.
    """
    return drift_matrices_from_amplitudes(params, ss.alpha1, ss.alpha2, ss.alpha3)


def amplitudes_are_stable(params: CavityParams, alpha1: float, alpha2: float,
                          alpha3: float) -> bool:
    """True iff both drift matrices are Hurwitz (all eigenvalues in the left half plane)."""
    m_x, m_y = drift_matrices_from_amplitudes(params, alpha1, alpha2, alpha3)
    return bool(np.all(np.linalg.eigvals(m_x).real < 0.0)
                and np.all(np.linalg.eigvals(m_y).real < 0.0))


def stability(ss: "SteadyState", params: CavityParams) -> bool:
    """Hurwitz test of the linearization; required for the spectra to be meaningful."""
    return amplitudes_are_stable(params, ss.alpha1, ss.alpha2, ss.alpha3)


def closed_form_coefficients(ss: "SteadyState", params: CavityParams,
                             freq: AnalyzingFrequency, mode: str) -> QuadratureTransfer:
    """Evaluate the closed-form port gains of the signal output.

    mode="corrected" reproduces the drift-matrix cofactors exactly (verified
    against the matrix oracle).  mode="printed" keeps a transcription that is
    internally inconsistent in two places: the direct-reflection term -C is
    attached to the pump port instead of the signal port in the Y branch, and
    the idler-port cross term alpha1*alpha2*chi^2 enters with the opposite
    sign.  Both modes coincide wherever the transcription is consistent.
    """
    if mode not in COEFFICIENT_MODES:
        raise ValueError(f"unknown coefficient mode {mode!r}")
    gamma, gamma3 = params.gamma, params.gamma3
    rho, rho3 = params.rho, params.rho3
    chi = params.chi
    a1, a2, a3 = ss.alpha1, ss.alpha2, ss.alpha3
    wt = freq.omega_tau

    sg = gamma + rho + 1j * wt
    sg3 = gamma3 + rho3 + 1j * wt
    cross = 2.0 * a1 * a2 * a3 * chi**3
    common = (a1**2 + a2**2) * chi**2 * sg - a3**2 * chi**2 * sg3 + sg**2 * sg3
    c_plus = cross + common
    c_minus = -cross + common

    root_gg3 = math.sqrt(gamma * gamma3)
    root_gr3 = math.sqrt(gamma * rho3)
    root_gr = math.sqrt(gamma * rho)
    # (gamma+rho+iwt)(gamma3+rho3+iwt) + alpha1^2 chi^2, shared by the signal ports
    signal_bracket = sg * sg3 + a1**2 * chi**2

    if mode == "corrected":
        eta31 = (2.0 * root_gg3 * chi * (a2 * sg + a1 * a3 * chi),
                 2.0 * root_gg3 * chi * (a2 * sg - a1 * a3 * chi))
        eta32 = (2.0 * gamma * (chi * a3 * sg3 - chi**2 * a1 * a2),
                 2.0 * gamma * (-chi * a3 * sg3 - chi**2 * a1 * a2))
        eta33 = (2.0 * gamma * signal_bracket - c_plus,
                 2.0 * gamma * signal_bracket - c_minus)
        kappa31 = (2.0 * root_gr3 * chi * (a2 * sg + a1 * a3 * chi),
                   2.0 * root_gr3 * chi * (a2 * sg - a1 * a3 * chi))
        kappa32 = (2.0 * root_gr * (chi * a3 * sg3 - chi**2 * a1 * a2),
                   2.0 * root_gr * (-chi * a3 * sg3 - chi**2 * a1 * a2))
        kappa33 = (2.0 * root_gr * signal_bracket,
                   2.0 * root_gr * signal_bracket)
    else:
        eta31 = (2.0 * root_gg3 * chi * (a2 * sg + a1 * a3 * chi),
                 2.0 * root_gg3 * chi * (a2 * sg - a1 * a3 * chi) - c_minus)
        eta32 = (2.0 * gamma * (chi * a3 * sg3 + chi**2 * a1 * a2),
                 -2.0 * gamma * (chi * a3 * sg3 - chi**2 * a1 * a2))
        eta33 = (2.0 * gamma * signal_bracket - c_plus,
                 2.0 * gamma * signal_bracket)
        kappa31 = (2.0 * root_gr3 * chi * (a2 * sg + a1 * a3 * chi),
                   2.0 * root_gr3 * chi * (a2 * sg - a1 * a3 * chi))
        kappa32 = (2.0 * root_gr * (chi * a3 * sg3 + chi**2 * a1 * a2),
                   -2.0 * root_gr * (chi * a3 * sg3 + chi**2 * a1 * a2))
        kappa33 = (2.0 * root_gr * signal_bracket,
                   2.0 * root_gr * signal_bracket)

    return QuadratureTransfer(c_plus=c_plus, c_minus=c_minus, eta31=eta31, eta32=eta32,
                              eta33=eta33, kappa31=kappa31, kappa32=kappa32,
                              kappa33=kappa33, omega_tau=wt)


def output_variances_closed_form(qt: QuadratureTransfer) -> OutputVariances:
    """Sum the squared port-gain magnitudes over the common denominator.

    Magnitude-squares are used throughout: off resonance the coefficients are
    complex, and each input port carries unit quadrature variance.
    """
    def branch(index: int, denom: complex) -> float:
        total = 0.0
        for pair in (qt.eta31, qt.eta32, qt.eta33, qt.kappa31, qt.kappa32, qt.kappa33):
            total += abs(pair[index]) ** 2
        return total / abs(denom) ** 2

    return OutputVariances(var_x=branch(0, qt.c_plus), var_y=branch(1, qt.c_minus),
                           source="closed_form")


def output_variances_oracle(ss: "SteadyState", params: CavityParams,
                            freq: AnalyzingFrequency) -> OutputVariances:
    """Frequency-domain matrix solve of the quadrature drift system.

    For each quadrature family the port gains are read off the resolvent
    (i*omega_tau*I - M)^-1 applied to the input-coupling columns, with the
    direct -1 reflection on the signal-input port; independent of the closed
    form, so the two paths cross-check each other.
    """
    m_x, m_y = drift_matrices(ss, params)
    couplings = np.diag([
        math.sqrt(2.0 * params.gamma),
        math.sqrt(2.0 * params.gamma),
        math.sqrt(2.0 * params.gamma3),
        ])
    loss_couplings = np.diag([
        math.sqrt(2.0 * params.rho),
        math.sqrt(2.0 * params.rho),
        math.sqrt(2.0 * params.rho3),
        ])
    b = np.hstack([couplings, loss_couplings])

    variances = []
    for m in (m_x, m_y):
        a = 1j * freq.omega_tau * np.eye(3) - m
        if np.linalg.cond(a) > 1e14:
            raise SingularSystem(
                f"i*omega_tau = {1j * freq.omega_tau} coincides with a drift eigenvalue")
        v = np.linalg.solve(a, b)
        gains = math.sqrt(2.0 * params.gamma) * v[0, :]
        gains[0] -= 1.0  # direct reflection of the signal input
        variances.append(float(np.sum(np.abs(gains) ** 2)))

    return OutputVariances(var_x=variances[0], var_y=variances[1], source="matrix_oracle")
