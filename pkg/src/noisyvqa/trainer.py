"""Gradient-descent training: step on one cost, always report C1.

The default stepping cost is the regularized C2; C1 is the objective that is
logged and compared.  Runs are deterministic given the config and seed.
"""
from __future__ import annotations

import csv
import hashlib
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, build_hea, execute_noiseless, final_state
from .costs import (
    DENOMINATOR_FLOOR,
    TRAIN_EPS,
    CostKind,
    c2_parts,
    clip_gradient,
    eval_c1,
    evaluate,
)
from .density import DensityMatrix, NoiseModel, basis_probabilities, fidelity_to_pure
from .errors import NoisyVQAError, SingularDenominator, VanishingSubspaceWeight, WrongBenchmarkKind
from .problems import ProblemInstance

CSV_COLUMNS = ("iter", "c1", "c2", "grad_l2", "grad_linf", "subspace_weight", "metric")
INIT_ATTEMPTS = 1000


@dataclass(frozen=True)
class TrainConfig:
    iterations: int = 300
    lr0: float = 0.1
    clip_threshold: float = 1.0
    cost: CostKind = field(default_factory=CostKind)
    seed: int = 0
    init: str = "uniform"  # "uniform" in [0, 2pi) or "zeros"
    fd_eps: float = TRAIN_EPS
    workers: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.lr0 < 0:
            raise ValueError("lr0 must be non-negative")
        if not self.clip_threshold > 0:
            raise ValueError("clip_threshold must be positive")
        if self.init not in ("uniform", "zeros"):
            raise ValueError(f"unknown init {self.init!r}")
        if not self.fd_eps > 0:
            raise ValueError("fd_eps must be positive")

    def lr(self, t: int) -> float:
        return self.lr0 * (1 - t / self.iterations)


@dataclass
class TrainRecord:
    rows: list = field(default_factory=list)
    theta_hashes: list = field(default_factory=list)
    theta_init: np.ndarray | None = None
    theta_final: np.ndarray | None = None
    final_c1: float = float("nan")
    final_metric: float = float("nan")
    parameter_quality: float = float("nan")
    init_attempts: int = 1
    aborted: str | None = None
    wall_time: float = 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            w.writerow([row[0]] + [repr(float(v)) for v in row[1:]])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "iterations_completed": len(self.rows),
            "final_c1": self.final_c1,
            "final_metric": self.final_metric,
            "parameter_quality": self.parameter_quality,
            "init_attempts": self.init_attempts,
            "aborted": self.aborted,
            "theta_final": None if self.theta_final is None else self.theta_final.tolist(),
            "wall_time": self.wall_time,
        }


def success_rate(rho: DensityMatrix, P: ProblemInstance) -> float:
    """Raw measurement probability of the solution set (no renormalization)."""
    if P.kind != "qaoa":
        raise WrongBenchmarkKind(f"success rate needs a QAOA instance, {P.name} is {P.kind}")
    p = basis_probabilities(rho)
    return float(np.sum(p[list(P.solutions)]))


def metric(rho: DensityMatrix, P: ProblemInstance) -> float:
    """Success rate for QAOA, fidelity to the target state for VQE."""
    if P.kind == "qaoa":
        return success_rate(rho, P)
    return fidelity_to_pure(rho, P.target_state)


def parameter_quality(theta, ansatz: AnsatzSpec, P: ProblemInstance) -> float:
    """Metric of the noise-free circuit run with parameters trained under noise."""
    return metric(execute_noiseless(ansatz.bind(theta)), P)


def _theta_hash(theta: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(theta).tobytes()).hexdigest()[:16]


def initial_parameters(ansatz: AnsatzSpec, nm: NoiseModel, P: ProblemInstance, cfg: TrainConfig):
    """Seeded initial theta, redrawn until the output state gives Tr(rho O2') >= 0.

    The rule does not depend on the stepping cost, so paired runs share theta_0.
    Returns ``(theta, attempts)``.
    """
    rng = np.random.default_rng(cfg.seed)
    T = P.truncated
    theta = None
    for attempt in range(1, INIT_ATTEMPTS + 1):
        if cfg.init == "zeros":
            theta = np.zeros(ansatz.parameter_count)
        else:
            theta = rng.uniform(0.0, 2 * np.pi, ansatz.parameter_count)
        rho = final_state(ansatz.bind(theta), nm)
        if T.trace_o2(rho) >= max(T.k2, DENOMINATOR_FLOOR) or cfg.init == "zeros":
            return theta, attempt
    return theta, INIT_ATTEMPTS


class _Objective:
    """theta -> cost, with a process-local cache of the latest state."""

    def __init__(self, P, ansatz, nm, kind):
        self.P, self.ansatz, self.nm, self.kind = P, ansatz, nm, kind

    def state(self, theta):
        return final_state(self.ansatz.bind(theta), self.nm)

    def __call__(self, theta):
        return evaluate(self.state(theta), self.kind, self.P.truncated, self.P.observable)


def _fd_gradient(f, theta, eps, pool):
    P = theta.size
    points = []
    for k in range(P):
        tp = theta.copy()
        tp[k] += eps
        tm = theta.copy()
        tm[k] -= eps
        points += [tp, tm]
    try:
        vals = list(pool.map(f, points)) if pool is not None else [f(x) for x in points]
    except NoisyVQAError as exc:
        # locate the failing component deterministically
        for k in range(P):
            try:
                f(points[2 * k])
                f(points[2 * k + 1])
            except NoisyVQAError as inner:
                inner.component = k
                raise inner from None
        raise exc
    vals = np.asarray(vals).reshape(P, 2)
    return (vals[:, 0] - vals[:, 1]) / (2 * eps)


def _c2_value(rho, T, kind: CostKind) -> float:
    num, den = c2_parts(rho, T)
    if kind.variant == "c2reg":
        num, den = num + kind.beta, den + kind.alpha
    if abs(den) <= DENOMINATOR_FLOOR:
        return float("nan")
    return num / den


def train(P: ProblemInstance, ansatz: AnsatzSpec, nm: NoiseModel, cfg: TrainConfig,
          theta0=None) -> TrainRecord:
    """theta_{t+1} = theta_t - lr_t * clip(grad C_step(theta_t)).

    Row t holds C1, C2 (the stepping variant when it is a C2 form, raw C2
    otherwise; nan where singular), the pre-clip gradient norms, the subspace
    weight and the benchmark metric, all at theta_t.  A final row
    ``t = iterations`` records the state after the last step with zero gradient
    norms.  If C1 becomes undefined the run stops and the partial record is
    returned with ``aborted`` set.
    """
    if ansatz.n != P.n:
        raise ValueError(f"{ansatz.n}-qubit ansatz for {P.n}-qubit problem")
    start = time.perf_counter()
    rec = TrainRecord()
    if theta0 is None:
        theta, rec.init_attempts = initial_parameters(ansatz, nm, P, cfg)
    else:
        theta = np.array(theta0, dtype=float)
    rec.theta_init = theta.copy()
    T = P.truncated
    f = _Objective(P, ansatz, nm, cfg.cost)
    c2_kind = cfg.cost if cfg.cost.variant in ("c2raw", "c2reg") else CostKind("c2raw")
    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for t in range(cfg.iterations + 1):
            rho = f.state(theta)
            try:
                c1 = eval_c1(rho, T)
            except VanishingSubspaceWeight as exc:
                rec.aborted = f"iteration {t}: {exc}"
                break
            weight = T.trace_o2(rho)
            m = metric(rho, P)
            c2 = _c2_value(rho, T, c2_kind)
            rec.theta_hashes.append(_theta_hash(theta))
            if t == cfg.iterations:
                rec.rows.append((t, c1, c2, 0.0, 0.0, weight, m))
                rec.final_c1, rec.final_metric = c1, m
                break
            try:
                g = _fd_gradient(f, theta, cfg.fd_eps, pool)
            except (VanishingSubspaceWeight, SingularDenominator) as exc:
                rec.aborted = f"iteration {t}, component {getattr(exc, 'component', '?')}: {exc}"
                rec.rows.append((t, c1, c2, float("nan"), float("nan"), weight, m))
                rec.final_c1, rec.final_metric = c1, m
                break
            rec.rows.append((t, c1, c2, float(np.linalg.norm(g)), float(np.max(np.abs(g))), weight, m))
            theta = theta - cfg.lr(t) * clip_gradient(g, cfg.clip_threshold)
    finally:
        if pool is not None:
            pool.shutdown()
    rec.theta_final = theta
    rec.parameter_quality = parameter_quality(theta, ansatz, P)
    rec.wall_time = time.perf_counter() - start
    return rec


@dataclass
class SurveyResult:
    pairs: np.ndarray  # (samples, 2): ||grad C1||_2, ||grad C2||_2
    mean_ratio: float
    applicable: bool
    inapplicable_reason: str | None = None
    singular_samples: int = 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("sample", "grad_c1_l2", "grad_c2_l2", "ratio"))
        for i, (a, b) in enumerate(self.pairs):
            w.writerow((i, repr(float(a)), repr(float(b)), repr(float(b / a)) if a > 0 else "nan"))
        return buf.getvalue()


def gradient_norm_survey(P: ProblemInstance, ansatz: AnsatzSpec, nm: NoiseModel, samples: int = 20,
                         seed: int = 0, kinds=(CostKind("c1"), CostKind("c2raw")),
                         eps: float = TRAIN_EPS) -> SurveyResult:
    """Gradient norms of two costs at uniformly random theta.

    ``mean_ratio`` is the mean over samples of ||grad second|| / ||grad first||.
    A subspace whose traceless projector vanishes (S = full space) makes C2
    undefined everywhere; the result is then flagged inapplicable.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    T = P.truncated
    uses_c2 = any(k.variant in ("c2raw", "c2reg") for k in kinds)
    if uses_c2 and T.subspace.dim == 1 << P.n:
        return SurveyResult(np.empty((0, 2)), float("nan"), False, "O2' = 0: C2 undefined on the full space")
    rng = np.random.default_rng(seed)
    pairs = []
    singular = 0
    fs = [_Objective(P, ansatz, nm, k) for k in kinds]
    while len(pairs) < samples:
        theta = rng.uniform(0.0, 2 * np.pi, ansatz.parameter_count)
        try:
            norms = [np.linalg.norm(_fd_gradient(f, theta, eps, None)) for f in fs]
        except (SingularDenominator, VanishingSubspaceWeight):
            singular += 1
            if singular > 100 * samples:
                return SurveyResult(np.asarray(pairs).reshape(-1, 2), float("nan"), False,
                                    "cost singular at almost every sample")
            continue
        pairs.append(norms)
    pairs = np.asarray(pairs)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = pairs[:, 1] / pairs[:, 0]
    return SurveyResult(pairs, float(np.mean(ratios)), True, singular_samples=singular)


def default_ansatz(P: ProblemInstance, blocks: int = 5, **kw) -> AnsatzSpec:
    return build_hea(P.n, blocks, initial_bits=P.initial_bits, **kw)


def config_dict(cfg: TrainConfig) -> dict:
    return asdict(cfg)
