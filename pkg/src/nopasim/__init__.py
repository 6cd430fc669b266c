"""Quantum state transfer by intracavity frequency down-conversion.

Solves the three-mode steady state of a triply resonant parametric
down-converter, computes linearized output-fluctuation spectra of the signal
mode, and evaluates conversion efficiency and quadrature noise figures over
parameter sweeps.
"""

from .model import (AnalyzingFrequency, CavityParams, DriveParams, SimulationError,
                    COEFFICIENT_MODES, THRESHOLD_CONVENTIONS, threshold, validate,
                    validate_drive)
from .steady_state import (NoAdmissibleRoot, OutputAmplitudes, PoleProximity, SteadyState,
                           manley_rowe_defect, output_amplitudes, pair_rate,
                           pump_balance_polynomial, pump_polynomial, solve_steady_state,
                           steady_state_residual)
from .fluctuations import (OutputVariances, QuadratureTransfer, SingularSystem,
                           closed_form_coefficients, drift_matrices,
                           output_variances_closed_form, output_variances_oracle,
                           stability)
from .metrics import (TransferMetrics, UndefinedMetric, conversion_efficiency,
                      is_ideal_transfer, noise_figures, transfer_metrics)
from .sweeps import (FIGURE_PRESETS, NoStablePoint, OptimizeResult, PointEvaluation,
                     SweepRow, SweepSpec, evaluate_point, figure_preset, optimize_idler,
                     run_sweep)

__version__ = "0.1.0"

__all__ = [
    "AnalyzingFrequency",
    "CavityParams",
    "DriveParams",
    "SimulationError",
    "COEFFICIENT_MODES",
    "THRESHOLD_CONVENTIONS",
    "threshold",
    "validate",
    "validate_drive",
    "NoAdmissibleRoot",
    "OutputAmplitudes",
    "PoleProximity",
    "SteadyState",
    "manley_rowe_defect",
    "output_amplitudes",
    "pair_rate",
    "pump_balance_polynomial",
    "pump_polynomial",
    "solve_steady_state",
    "steady_state_residual",
    "OutputVariances",
    "QuadratureTransfer",
    "SingularSystem",
    "closed_form_coefficients",
    "drift_matrices",
    "output_variances_closed_form",
    "output_variances_oracle",
    "stability",
    "TransferMetrics",
    "UndefinedMetric",
    "conversion_efficiency",
    "is_ideal_transfer",
    "noise_figures",
    "transfer_metrics",
    "FIGURE_PRESETS",
    "NoStablePoint",
    "OptimizeResult",
    "PointEvaluation",
    "SweepRow",
    "SweepSpec",
    "evaluate_point",
    "figure_preset",
    "optimize_idler",
    "run_sweep",
]
