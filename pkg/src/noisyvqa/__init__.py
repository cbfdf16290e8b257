"""Noisy variational quantum algorithms with truncated, traceless cost functions.

Exact density-matrix simulation under local Pauli noise, the subspace-truncated
cost C1, its traceless counterpart C2 (raw and regularized), benchmark
encoders, a gradient-descent trainer and numerical checks of the gradient
bounds.
"""

__version__ = "0.1.0"

from .ansatz import AnsatzSpec, BoundCircuit, build_hea, execute_noiseless, execute_noisy, final_state
from .costs import CostKind, GradientResult, clip_gradient, eval_c0, eval_c1, eval_c2, grad_central_difference
from .density import DensityMatrix, NoiseModel, apply_local_pauli_channel, fidelity_to_pure
from .pauli import PauliObservable, decompose, materialize, parse_pauli_text
from .problems import ProblemInstance, encode_maxcut, encode_tsp, encode_vertex_cover, load_benchmark
from .subspace import Subspace, TruncatedObservables, build_truncated_observables, subspace_from_predicate
from .trainer import TrainConfig, TrainRecord, gradient_norm_survey, parameter_quality, success_rate, train

__all__ = [
    "AnsatzSpec", "BoundCircuit", "build_hea", "execute_noiseless", "execute_noisy", "final_state",
    "CostKind", "GradientResult", "clip_gradient", "eval_c0", "eval_c1", "eval_c2", "grad_central_difference",
    "DensityMatrix", "NoiseModel", "apply_local_pauli_channel", "fidelity_to_pure",
    "PauliObservable", "decompose", "materialize", "parse_pauli_text",
    "ProblemInstance", "encode_maxcut", "encode_tsp", "encode_vertex_cover", "load_benchmark",
    "Subspace", "TruncatedObservables", "build_truncated_observables", "subspace_from_predicate",
    "TrainConfig", "TrainRecord", "gradient_norm_survey", "parameter_quality", "success_rate", "train",
]
