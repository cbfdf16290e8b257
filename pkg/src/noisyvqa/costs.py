"""Cost functions C0, C1, C2 (raw and regularized) and their gradients.

C1 is the subspace-renormalized energy Tr(rho O1) / Tr(rho O2).  C2 replaces
both observables by their traceless parts; the regularized form adds ``beta``
to the numerator and ``alpha`` to the denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ansatz import BoundCircuit, final_state
from .density import DensityMatrix, NoiseModel, basis_probabilities, pauli_coefficients
from .errors import (
    DimensionMismatch,
    NoisyVQAError,
    SingularDenominator,
    VanishingSubspaceWeight,
)
from .pauli import PauliObservable, materialize, trace_coefficients
from .subspace import TruncatedObservables

DENOMINATOR_FLOOR = 1e-12
VARIANTS = ("c0", "c1", "c2raw", "c2reg")
TRAIN_EPS = 1e-2
VERIFY_EPS = 1e-4


@dataclass(frozen=True)
class CostKind:
    variant: str = "c2reg"
    alpha: float = 0.1
    beta: float = 0.1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"cost variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.variant == "c2reg":
            if not self.alpha > 0:
                raise ValueError("c2reg needs alpha > 0")
            if self.beta < 0:
                raise ValueError("c2reg needs beta >= 0")


@dataclass(frozen=True)
class GradientResult:
    grad: np.ndarray
    evaluations: int
    clipped: bool = False


def expectation(rho: DensityMatrix, O: PauliObservable | np.ndarray) -> float:
    """Tr(rho O) for a Pauli observable or a dense matrix."""
    if isinstance(O, PauliObservable):
        if O.n != rho.n:
            raise DimensionMismatch(f"{O.n}-qubit observable on {rho.n}-qubit state")
        if O.is_diagonal():
            return float(basis_probabilities(rho) @ O.diagonal())
        O = materialize(O)
    O = np.asarray(O)
    if O.shape != rho.data.shape:
        raise DimensionMismatch(f"observable of shape {O.shape} on {rho.n}-qubit state")
    return float(np.sum(rho.data.T * O).real)


def eval_c0(rho: DensityMatrix, O: PauliObservable | np.ndarray) -> float:
    return expectation(rho, O)


def _check(rho: DensityMatrix, T: TruncatedObservables):
    if rho.n != T.n:
        raise DimensionMismatch(f"{rho.n}-qubit state with {T.n}-qubit observables")


def eval_c1(rho: DensityMatrix, T: TruncatedObservables) -> float:
    _check(rho, T)
    den = T.trace_o2(rho)
    if den < DENOMINATOR_FLOOR:
        raise VanishingSubspaceWeight(f"subspace weight {den:.3e} below {DENOMINATOR_FLOOR}")
    return T.trace_o1(rho) / den


def c2_parts(rho: DensityMatrix, T: TruncatedObservables) -> tuple[float, float]:
    """(Tr(rho O1'), Tr(rho O2'))."""
    _check(rho, T)
    return T.trace_o1(rho) - T.k1, T.trace_o2(rho) - T.k2


def _c2_from_parts(num: float, den: float, kind: CostKind) -> float:
    if kind.variant == "c2reg":
        num, den = num + kind.beta, den + kind.alpha
    if abs(den) <= DENOMINATOR_FLOOR:
        raise SingularDenominator(f"C2 denominator {den:.3e} is numerically zero")
    return num / den


def eval_c2(rho: DensityMatrix, T: TruncatedObservables, kind: CostKind = CostKind("c2raw")) -> float:
    if kind.variant not in ("c2raw", "c2reg"):
        raise ValueError(f"eval_c2 needs a C2 variant, got {kind.variant}")
    return _c2_from_parts(*c2_parts(rho, T), kind)


def evaluate(rho: DensityMatrix, kind: CostKind, T: TruncatedObservables | None = None,
             O: PauliObservable | np.ndarray | None = None) -> float:
    if kind.variant == "c0":
        if O is None:
            raise ValueError("C0 needs the full observable")
        return eval_c0(rho, O)
    if T is None:
        raise ValueError(f"{kind.variant} needs truncated observables")
    if kind.variant == "c1":
        return eval_c1(rho, T)
    return eval_c2(rho, T, kind)


def auto_beta(T: TruncatedObservables, alpha: float, margin: float = 0.1) -> float:
    """Smallest safe numerator offset for C2reg, plus ``margin``.

    On states with weight m on the argmin and the rest outside S, C2reg equals
    (lambda m - k1 + beta) / (m - k2 + alpha); it decreases in m (so leaving S
    is penalized) iff beta > k1 - lambda (k2 - alpha).  lambda_min^S is bounded
    below by k1 - ||w1||_1 using Pauli coefficients only, so the rule never
    needs the solution.
    """
    lam_low = min(T.k1 - float(np.sum(np.abs(T.w1))), 0.0)
    # worst case over lambda in [lam_low, 0]
    threshold = max(T.k1 - lam_low * (T.k2 - alpha), T.k1)
    return max(0.0, threshold) + margin


def grad_central_difference(costfn: Callable[[np.ndarray], float], theta, eps: float = TRAIN_EPS) -> GradientResult:
    """Component k is (C(theta + eps e_k) - C(theta - eps e_k)) / (2 eps).

    A cost error is re-raised with ``component`` set to the failing index.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    theta = np.asarray(theta, dtype=float)
    grad = np.empty(theta.size)
    for k in range(theta.size):
        tp = theta.copy()
        tp[k] += eps
        tm = theta.copy()
        tm[k] -= eps
        try:
            grad[k] = (costfn(tp) - costfn(tm)) / (2 * eps)
        except NoisyVQAError as exc:
            exc.component = k
            raise
    return GradientResult(grad, 2 * theta.size)


def clip_gradient(g, threshold: float) -> np.ndarray:
    """Rescale so the infinity norm is at most ``threshold`` (direction kept)."""
    if not threshold > 0:
        raise ValueError("clip threshold must be positive")
    g = np.asarray(g, dtype=float)
    norm = np.max(np.abs(g), initial=0.0)
    if norm <= threshold:
        return g
    return g * (threshold / norm)


# -- Pauli-coefficient (analytic) gradients ----------------------------------


def state_derivative(c: BoundCircuit, nm: NoiseModel, k: int, eps: float = VERIFY_EPS) -> np.ndarray:
    """Central difference of rho_L itself with respect to parameter k."""
    plus = final_state(c.shifted(k, eps), nm).data
    minus = final_state(c.shifted(k, -eps), nm).data
    return (plus - minus) / (2 * eps)


def _pauli_data(c, nm, T, k, eps):
    rho = final_state(c, nm)
    a = pauli_coefficients(rho)
    g = trace_coefficients(state_derivative(c, nm, k, eps))[1:].real
    return a, g


def grad_c1_from_coefficients(a, g, T: TruncatedObservables) -> float:
    w1, w2 = T.w1, T.w2
    num = T.k1 + a @ w1
    den = T.k2 + a @ w2
    if den < DENOMINATOR_FLOOR:
        raise VanishingSubspaceWeight(f"subspace weight {den:.3e} below {DENOMINATOR_FLOOR}")
    return (g @ w1) / den - (num / den) * (g @ w2) / den


def grad_c2_from_coefficients(a, g, T: TruncatedObservables) -> float:
    w1, w2 = T.w1, T.w2
    den = a @ w2
    if abs(den) <= DENOMINATOR_FLOOR:
        raise SingularDenominator(f"a . w2 = {den:.3e} is numerically zero")
    return (g @ w1) / den - ((a @ w1) / den) * (g @ w2) / den


def analytic_grad_c1(c: BoundCircuit, nm: NoiseModel, T: TruncatedObservables, k: int,
                     eps: float = VERIFY_EPS) -> float:
    a, g = _pauli_data(c, nm, T, k, eps)
    return grad_c1_from_coefficients(a, g, T)


def analytic_grad_c2(c: BoundCircuit, nm: NoiseModel, T: TruncatedObservables, k: int,
                     eps: float = VERIFY_EPS) -> float:
    a, g = _pauli_data(c, nm, T, k, eps)
    return grad_c2_from_coefficients(a, g, T)


def analytic_gradients(c: BoundCircuit, nm: NoiseModel, T: TruncatedObservables,
                       eps: float = VERIFY_EPS) -> tuple[np.ndarray, np.ndarray]:
    """Full (dC1, dC2) vectors; dC2 entries are nan where a . w2 vanishes."""
    a = pauli_coefficients(final_state(c, nm))
    d1 = np.empty(c.theta.size)
    d2 = np.empty(c.theta.size)
    for k in range(c.theta.size):
        g = trace_coefficients(state_derivative(c, nm, k, eps))[1:].real
        d1[k] = grad_c1_from_coefficients(a, g, T)
        try:
            d2[k] = grad_c2_from_coefficients(a, g, T)
        except SingularDenominator:
            d2[k] = np.nan
    return d1, d2
