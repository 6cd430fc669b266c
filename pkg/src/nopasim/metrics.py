"""Figures of merit: conversion efficiency and quadrature noise figures.

The conversion efficiency is the output signal intensity over the input pump
intensity; the noise figure of a quadrature is the output-to-input
signal-to-noise ratio, which with unit input variances reduces to
efficiency / output variance.  T = 1 together with eta = 1 is ideal
noise-free state transfer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fluctuations import OutputVariances
from .model import CavityParams, DriveParams, SimulationError
from .steady_state import SteadyState


class UndefinedMetric(SimulationError):
    """Raised when a metric divides by a zero pump input."""


@dataclass(frozen=True)
class TransferMetrics:
    """Transfer quality at one operating point.

    defined is False when the pump input is zero (efficiency and noise
    figures divide by its intensity); metric fields are then None.  stable
    propagates the steady-state flag: metrics are still reported on unstable
    branches, validity is the consumer's judgment.
    """

    eta: float | None
    t_x: float | None
    t_y: float | None
    var_x: float
    var_y: float
    stable: bool
    defined: bool


def conversion_efficiency(ss: SteadyState, drive: DriveParams, params: CavityParams) -> float:
    """Output signal intensity over input pump intensity: (sqrt(2*gamma)*alpha1)^2 / beta3^2."""
    if drive.beta3 == 0.0:
        raise UndefinedMetric("conversion efficiency divides by beta3^2")
    return 2.0 * params.gamma * ss.alpha1**2 / drive.beta3**2


def noise_figures(ss: SteadyState, drive: DriveParams, params: CavityParams,
                  variances: OutputVariances) -> tuple[float, float]:
    """SNR-transfer figures (t_x, t_y) = eta / output variance per quadrature."""
    if drive.beta3 == 0.0:
        raise UndefinedMetric("noise figures divide by beta3^2")
    eta = conversion_efficiency(ss, drive, params)
    return eta / variances.var_x, eta / variances.var_y


def transfer_metrics(ss: SteadyState, drive: DriveParams, params: CavityParams,
                     variances: OutputVariances) -> TransferMetrics:
    """Bundle efficiency and noise figures; zero pump yields a defined=False record."""
    if drive.beta3 == 0.0:
        return TransferMetrics(eta=None, t_x=None, t_y=None, var_x=variances.var_x,
                               var_y=variances.var_y, stable=ss.stable, defined=False)
    eta = conversion_efficiency(ss, drive, params)
    t_x, t_y = noise_figures(ss, drive, params, variances)
    return TransferMetrics(eta=eta, t_x=t_x, t_y=t_y, var_x=variances.var_x,
                           var_y=variances.var_y, stable=ss.stable, defined=True)


def is_ideal_transfer(metrics: TransferMetrics, tol: float) -> bool:
    """True when the transfer is noise-free and lossless within tol.

    Equivalent to unit output variances together with unit efficiency, which
    is exactly the condition for the output quadrature fluctuations and mean
    intensity to match the pump input.
    """
    if not metrics.defined or metrics.eta is None:
        return False
    return (abs(metrics.var_x - 1.0) <= tol
            and abs(metrics.var_y - 1.0) <= tol
            and abs(metrics.eta - 1.0) <= tol)
