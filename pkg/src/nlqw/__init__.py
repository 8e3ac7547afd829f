"""Nonlinear flip-flop quantum walks through potential barriers.

A walker on a 1-D lattice evolves under a coin rotation (angle theta), a
perturbed flip-flop shift whose barrier angle phi trades hopping for
staying put, and a Kerr-like intensity-dependent phase of strength chi.
The package provides the stepping kernels (compiled core with a pure
numpy fallback), the observables used to characterize the dynamics,
phase-diagram sweeps with regime classification, critical-barrier
detection, and a fiber-loop pulse emulation of the same physics.
"""

__version__ = "0.1.0"

from .analysis import (CriticalCurve, PhaseGrid, SweepSpec, classify_regime,
                       critical_curve, divergence_probe, find_phi_c,
                       run_point, sweep)
from .backend import BACKEND
from .errors import (BoundaryOverflowError, DegenerateDistributionError,
                     InsufficientDataError, InvalidDimensionError, NlqwError,
                     NoTransitionError)
from .evolution import (ShiftParams, WalkParams, apply_coin, apply_kerr,
                        apply_shift, build_coin, dense_step_oracle, evolve,
                        evolve_series, initial_state, step)
from .fiberloop import (LoopState, init_loop_pulse, loop_evolve,
                        loop_evolve_series, loop_probabilities, loop_step)
from .observables import (LongTimeAverages, ObservableSeries, SeriesRecorder,
                          fit_power_law, long_time_averages, participation,
                          peak_positions, survival)
from .state import (WalkerState, init_symmetric, site_probabilities,
                    total_probability)

__all__ = [
    "BACKEND",
    "BoundaryOverflowError",
    "CriticalCurve",
    "DegenerateDistributionError",
    "InsufficientDataError",
    "InvalidDimensionError",
    "LongTimeAverages",
    "LoopState",
    "NlqwError",
    "NoTransitionError",
    "ObservableSeries",
    "PhaseGrid",
    "SeriesRecorder",
    "ShiftParams",
    "SweepSpec",
    "WalkParams",
    "WalkerState",
    "apply_coin",
    "apply_kerr",
    "apply_shift",
    "build_coin",
    "classify_regime",
    "critical_curve",
    "dense_step_oracle",
    "divergence_probe",
    "evolve",
    "evolve_series",
    "find_phi_c",
    "fit_power_law",
    "init_loop_pulse",
    "init_symmetric",
    "initial_state",
    "long_time_averages",
    "loop_evolve",
    "loop_evolve_series",
    "loop_probabilities",
    "loop_step",
    "participation",
    "peak_positions",
    "run_point",
    "site_probabilities",
    "step",
    "survival",
    "sweep",
    "total_probability",
    "__version__",
]
