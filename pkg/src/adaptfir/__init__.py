"""Adaptive FIR filtering: Wiener, Newton, steepest descent, LMS and transform-domain LMS."""

from .adapt import LmsConfig, LmsState, RunTrace, circular_block_filter, lms_run, lms_step, stability_bound, tdlms_run
from .dft import dft, idft
from .errors import InvalidArgumentError, NumericFailureError, SingularMatrixError, UndefinedMisadjustmentError
from .estimation import (
    CorrelationModel,
    Trajectory,
    cost,
    estimate_correlation,
    gradient,
    hessian,
    max_eigenvalue,
    newton_step,
    sda_run,
    solve_linear,
    wiener_solve,
)
from .harness import ExperimentSpec, SummaryRow, emit_summary, emit_trace, run_single, run_sweep
from .metrics import ConvergenceReport, accuracy, convergence_iteration, misadjustment, mse, steady_state_mse
from .signal import FirSystem, add_noise, fir_filter, generate_white_gaussian, tap_vector

__version__ = "0.1.0"
