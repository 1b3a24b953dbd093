"""Nonlinear Fourier spectra of multi-soliton pulses and their truncations.

The package covers the full loop: synthesize a multi-soliton from its
discrete spectrum (Darboux dressing), scatter sampled signals numerically
(transfer-matrix forward transform), evaluate the closed-form spectrum of a
symmetrically truncated pulse, and recover eigenvalues from continuous
data (all-pass phase winding and fitting).  An ensemble harness reproduces
the truncation-error study, and a CLI exposes each step.
"""

__version__ = "0.1.0"

from .core import (
    ContinuousSpectrum,
    DiscreteSpectrum,
    JostPair,
    NFTError,
    TimeSignal,
    propagate_b,
    uniform_time_grid,
    validate_unitarity,
)
from .experiment import ExperimentConfig, run_experiment
from .inversion import allpass, count_eigenvalues, fit_eigenvalues, hilbert, radiation_a
from .scattering import (
    ScatterConfig,
    compose_segments,
    continuous_spectrum,
    discrete_amplitudes,
    energy_continuous,
    find_eigenvalues,
    scatter,
)
from .synthesis import (
    TailParams,
    a_closed_form,
    a_derivative_closed_form,
    is_symmetric,
    synthesize,
    tail_approximation,
    tail_parameters,
)
from .truncation import (
    TruncationModel,
    alpha,
    analytic_b_values,
    analytic_eigenvalues,
    beta,
    tail_jost_left,
    tail_jost_right,
    truncated_jost_real,
    truncated_jost_strip,
)
