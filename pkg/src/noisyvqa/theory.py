"""Numerical checks of the decay, amplification and structural claims.

Each check returns a :class:`BoundReport`.  Violations are counted, never
raised; samples outside a claim's hypotheses are counted as inapplicable so a
vacuous pass is visible.  Slack is ``bound - observed`` (negative means a
violation beyond the numerical allowance).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, build_hea, execute_noisy, final_state
from .costs import (
    VERIFY_EPS,
    c2_parts,
    eval_c1,
    grad_central_difference,
    grad_c1_from_coefficients,
    grad_c2_from_coefficients,
    state_derivative,
)
from .density import DensityMatrix, NoiseModel, pauli_coefficients
from .errors import SingularDenominator
from .pauli import trace_coefficients
from .subspace import Subspace, TruncatedObservables, build_truncated_observables, diagonal_observable

NUMERIC_SLACK = 1e-9
CLAIMS = (
    "lemma2.1",
    "lemma2.2",
    "prop3.2",
    "theorem3.1",
    "prop3.5",
    "prop3.6",
    "lemmaA.1",
)


@dataclass
class BoundReport:
    claim: str
    instances: int = 0
    applicable: int = 0
    inapplicable: int = 0
    violations: int = 0
    min_slack: float = math.inf
    max_slack: float = -math.inf
    slacks: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.applicable > 0

    def record(self, slack: float, tol: float = NUMERIC_SLACK):
        self.applicable += 1
        self.slacks.append(float(slack))
        self.min_slack = min(self.min_slack, float(slack))
        self.max_slack = max(self.max_slack, float(slack))
        if slack < -tol:
            self.violations += 1

    def to_dict(self, include_slacks: bool = False) -> dict:
        out = {
            "claim": self.claim,
            "instances": self.instances,
            "applicable": self.applicable,
            "inapplicable": self.inapplicable,
            "violations": self.violations,
            "min_slack": None if not self.slacks else self.min_slack,
            "max_slack": None if not self.slacks else self.max_slack,
            "passed": self.passed,
            "parameters": self.parameters,
            "notes": self.notes,
        }
        if include_slacks:
            out["slacks"] = self.slacks
        return out


def _random_theta(rng, ansatz: AnsatzSpec) -> np.ndarray:
    return rng.uniform(0.0, 2 * np.pi, ansatz.parameter_count)


def _grad_vector(c, nm, k, eps):
    """g^L: Pauli coefficients Tr(d rho_L sigma_i) over non-identity strings."""
    return trace_coefficients(state_derivative(c, nm, k, eps))[1:].real


def lemma21_bound(n: int, q: float, L: int, N: int = 1, eta_inf: float = 0.5) -> float:
    return math.sqrt(2 ** (n + 1) - 2) * N * eta_inf * q ** (L + 1)


def check_state_decay(ansatz: AnsatzSpec, nm: NoiseModel, samples: int, seed: int = 0,
                      input: DensityMatrix | None = None) -> BoundReport:
    """||a^l||_2 <= q^l sqrt(2^n - 1) at every block l of every sample."""
    rng = np.random.default_rng(seed)
    q, n = nm.contraction, ansatz.n
    rep = BoundReport("lemma2.2", parameters={"q": q, "n": n, "L": ansatz.blocks})
    for _ in range(samples):
        rep.instances += 1
        c = ansatz.bind(_random_theta(rng, ansatz))
        _, traj = execute_noisy(c, nm, input)
        for l, rho in enumerate(traj, start=1):
            observed = np.linalg.norm(pauli_coefficients(rho))
            rep.record(q**l * math.sqrt(2**n - 1) - observed)
    return rep


def check_gradient_bound_c0(ansatz: AnsatzSpec, nm: NoiseModel, samples: int, seed: int = 0,
                            eps: float = VERIFY_EPS) -> BoundReport:
    """||g^L_lm||_2 <= sqrt(2^{n+1} - 2) N ||eta||_inf q^{L+1} for every parameter."""
    rng = np.random.default_rng(seed)
    q, n, L = nm.contraction, ansatz.n, ansatz.blocks
    bound = lemma21_bound(n, q, L, ansatz.generator_terms, ansatz.generator_norm_inf)
    rep = BoundReport("lemma2.1", parameters={
        "q": q, "n": n, "L": L, "N_lm": ansatz.generator_terms,
        "eta_inf": ansatz.generator_norm_inf, "bound": bound, "eps": eps})
    worst_by_block = np.full(L, -math.inf)
    for _ in range(samples):
        rep.instances += 1
        c = ansatz.bind(_random_theta(rng, ansatz))
        for k in range(ansatz.parameter_count):
            g = np.linalg.norm(_grad_vector(c, nm, k, eps))
            rep.record(bound - g)
            b = ansatz.slot(k)[0]
            worst_by_block[b] = max(worst_by_block[b], g)
    rep.parameters["max_observed_by_block"] = worst_by_block.tolist()
    return rep


def prop32_h(T: TruncatedObservables, N: int = 1, eta_inf: float = 0.5) -> float:
    """h with max |lambda_i| over S (the absolute value keeps the bound valid
    when eigenvalues in S have mixed signs)."""
    lam = float(np.max(np.abs(T.eigenvalues_S)))
    w1, w2 = np.linalg.norm(T.w1), np.linalg.norm(T.w2)
    return (w1 / T.k2 + lam * w2 / T.k2**2) * N * eta_inf


def check_gradient_bound_c1(ansatz: AnsatzSpec, nm: NoiseModel, T: TruncatedObservables, samples: int,
                            seed: int = 0, eps: float = VERIFY_EPS) -> BoundReport:
    """|dC1| <= sqrt(2^{n+1} - 2) h q^{L+1} on samples with Tr(O2 rho_L) >= k2."""
    rng = np.random.default_rng(seed)
    q, n, L = nm.contraction, ansatz.n, ansatz.blocks
    h = prop32_h(T, ansatz.generator_terms, ansatz.generator_norm_inf)
    bound = math.sqrt(2 ** (n + 1) - 2) * h * q ** (L + 1)
    rep = BoundReport("prop3.2", parameters={"q": q, "n": n, "L": L, "h": h, "bound": bound,
                                             "N_lm": ansatz.generator_terms,
                                             "eta_inf": ansatz.generator_norm_inf})
    for _ in range(samples):
        rep.instances += 1
        c = ansatz.bind(_random_theta(rng, ansatz))
        rho = final_state(c, nm)
        if abs(T.trace_o2(rho)) < abs(T.k2):
            rep.inapplicable += 1
            continue
        a = pauli_coefficients(rho)
        worst = max(abs(grad_c1_from_coefficients(a, _grad_vector(c, nm, k, eps), T))
                    for k in range(ansatz.parameter_count))
        rep.record(bound - worst)
    return rep


def theorem31_constants(T: TruncatedObservables, n: int, q: float, epsilon: float,
                        N: int = 1, eta_inf: float = 0.5) -> dict:
    """L_0 (minimal integer meeting the theorem's condition) and s.

    ``||w1 k2 - w2 k1||_2`` is the 2-norm of that vector.  When it vanishes the
    first term of s is unbounded and only the second term remains.
    """
    w2n = np.linalg.norm(T.w2)
    k1, k2 = T.k1, T.k2
    root = math.sqrt(2**n - 1)
    if w2n == 0:
        L0 = 0
    else:
        target = abs(k2) / (root * w2n * (1 + epsilon))
        L0 = 0 if target >= 1 else math.ceil(math.log(target) / math.log(q) - 1e-12)
        while q**L0 * root * w2n * (1 + epsilon) > abs(k2):
            L0 += 1
        while L0 > 0 and q ** (L0 - 1) * root * w2n * (1 + epsilon) <= abs(k2):
            L0 -= 1
    cross = np.linalg.norm(T.w1 * k2 - T.w2 * k1)
    first = math.inf if cross == 0 else (
        epsilon**2 * k2**2 / ((1 + epsilon) ** 2 * math.sqrt(2 ** (n + 1) - 2) * N * eta_inf * cross))
    second = math.inf if w2n == 0 else (abs(k2) / (q**L0 * root * w2n) - q ** (L0 + 1)) ** 2
    return {"L0": L0, "s": min(first, second), "s_first": first, "s_second": second,
            "epsilon": epsilon, "cross_norm": float(cross)}


def check_amplification(ansatz: AnsatzSpec, nm: NoiseModel, T: TruncatedObservables, samples: int,
                        epsilon: float = 0.1, seed: int = 0, eps: float = VERIFY_EPS,
                        params_per_sample: int | None = None) -> BoundReport:
    """|dC2| >= (s / q^{L+1}) |dC1| - 1, only when L > 2 L_0 + 1.

    Each (sample, parameter) pair is one applicable instance.  Parameters whose
    C2 denominator vanishes are counted inapplicable.
    """
    rng = np.random.default_rng(seed)
    q, n, L = nm.contraction, ansatz.n, ansatz.blocks
    consts = theorem31_constants(T, n, q, epsilon, ansatz.generator_terms, ansatz.generator_norm_inf)
    rep = BoundReport("theorem3.1", parameters={"q": q, "n": n, "L": L, **consts,
                                                "N_lm": ansatz.generator_terms,
                                                "eta_inf": ansatz.generator_norm_inf})
    if not L > 2 * consts["L0"] + 1:
        rep.inapplicable = samples
        rep.instances = samples
        rep.notes.append(f"L = {L} does not exceed 2 L_0 + 1 = {2 * consts['L0'] + 1}")
        return rep
    s = consts["s"]
    P = ansatz.parameter_count
    for _ in range(samples):
        rep.instances += 1
        c = ansatz.bind(_random_theta(rng, ansatz))
        a = pauli_coefficients(final_state(c, nm))
        ks = range(P) if params_per_sample is None else rng.choice(P, params_per_sample, replace=False)
        for k in ks:
            g = _grad_vector(c, nm, int(k), eps)
            d1 = grad_c1_from_coefficients(a, g, T)
            try:
                d2 = grad_c2_from_coefficients(a, g, T)
            except SingularDenominator:
                rep.inapplicable += 1
                continue
            rep.record(abs(d2) - (s / q ** (L + 1) * abs(d1) - 1))
    return rep


def singular_profile(T: TruncatedObservables, m) -> np.ndarray:
    """Closed form of raw C2 on the crafted states: lambda + (lambda - k1/k2) k2 / (m - k2)."""
    lam = T.lambda_min_S
    m = np.asarray(m, dtype=float)
    return lam + (lam - T.k1 / T.k2) * T.k2 / (m - T.k2)


def crafted_state(T: TruncatedObservables, m: float) -> DensityMatrix:
    """Diagonal state with weight m on the argmin basis state, 1 - m spread over
    the basis states outside S."""
    if T.argmin_index is None:
        raise ValueError("crafted states need a basis-state argmin")
    outside = np.flatnonzero(~T.subspace.mask)
    if outside.size == 0:
        raise ValueError("S is the full space; no weight can leave it")
    p = np.zeros(1 << T.n)
    p[outside] = (1 - m) / outside.size
    p[T.argmin_index] = m
    return DensityMatrix.from_diagonal(p)


def default_m_grid(T: TruncatedObservables, points: int = 50) -> np.ndarray:
    """Log-spaced distances 1e-6 ... 1 - k2 above the singular weight k2."""
    return T.k2 + np.logspace(-6, math.log10(1 - T.k2), points)


def check_singularity_profile(T: TruncatedObservables, m_grid=None, tol: float = 1e-8) -> BoundReport:
    """Raw C2 on crafted states against the closed form; slack = tol - |diff|."""
    m_grid = default_m_grid(T) if m_grid is None else np.asarray(m_grid, dtype=float)
    rep = BoundReport("prop3.5", parameters={"k1": T.k1, "k2": T.k2, "lambda_min_S": T.lambda_min_S,
                                             "tol": tol})
    closed = singular_profile(T, m_grid)
    values = []
    for m, g in zip(m_grid, closed):
        rep.instances += 1
        num, den = c2_parts(crafted_state(T, m), T)
        c2 = num / den
        values.append(c2)
        rep.record(tol - abs(c2 - g), tol=0.0)
    values = np.asarray(values)
    order = np.argsort(m_grid)
    rep.parameters["c2_at_min_m"] = float(values[order[0]])
    rep.parameters["monotone_toward_singularity"] = bool(
        T.lambda_min_S >= T.k1 / T.k2 or np.all(np.diff(values[order]) >= 0))
    return rep


def solution_family_state(T: TruncatedObservables, rng, c_min: float = 1e-6) -> DensityMatrix:
    """Pure state sum_{j not in S} a_j |j> + c |i*> with random complex a and c > 0."""
    outside = np.flatnonzero(~T.subspace.mask)
    psi = np.zeros(1 << T.n, dtype=complex)
    if outside.size == 0:
        psi[T.argmin_index] = 1.0
        return DensityMatrix.from_statevector(psi)
    v = rng.normal(size=outside.size) + 1j * rng.normal(size=outside.size)
    c = rng.uniform(max(c_min, 0.05), 1.0)
    psi[outside] = math.sqrt(1 - c**2) * v / np.linalg.norm(v)
    psi[T.argmin_index] = c
    return DensityMatrix.from_statevector(psi)


def check_solution_space(T: TruncatedObservables, samples: int, seed: int = 0,
                         tol: float = 1e-10) -> BoundReport:
    """C1 = lambda_min^S on the family; moving weight to another S-state raises C1
    (strictly when that state's eigenvalue exceeds lambda_min^S)."""
    rng = np.random.default_rng(seed)
    lam = T.lambda_min_S
    rep = BoundReport("prop3.6", parameters={"lambda_min_S": lam, "tol": tol})
    others = [int(i) for i in T.subspace.indices if i != T.argmin_index]
    diag = T.o1_diag
    strict = 0
    for _ in range(samples):
        rep.instances += 1
        rho = solution_family_state(T, rng)
        c1 = eval_c1(rho, T)
        rep.record(tol - abs(c1 - lam), tol=0.0)
        if others and diag is not None:
            j = others[rng.integers(len(others))]
            p = np.real(np.diagonal(rho.data)).copy()
            moved = 0.5 * p[T.argmin_index]
            p[T.argmin_index] -= moved
            p[j] += moved
            c1p = eval_c1(DensityMatrix.from_diagonal(p), T)
            if diag[j] > lam:
                strict += 1
                if not c1p > c1:
                    rep.violations += 1
                    rep.notes.append(f"moving weight to {j} did not raise C1")
    rep.parameters["perturbation_checks"] = strict
    return rep


def check_traceless_derivative(ansatz: AnsatzSpec, nm: NoiseModel, samples: int, seed: int = 0,
                               eps: float = VERIFY_EPS, tol: float = 1e-12) -> BoundReport:
    """|Tr(rho_L(theta + eps e_k) - rho_L(theta - eps e_k))| < ``tol`` for every k.

    The undivided difference is what is bounded; the largest trace of the
    divided difference is reported alongside as ``max_trace_derivative``.
    """
    rng = np.random.default_rng(seed)
    rep = BoundReport("lemmaA.1", parameters={"eps": eps, "tol": tol, "n": ansatz.n, "L": ansatz.blocks})
    worst = 0.0
    for _ in range(samples):
        rep.instances += 1
        c = ansatz.bind(_random_theta(rng, ansatz))
        for k in range(ansatz.parameter_count):
            plus = final_state(c.shifted(k, eps), nm).data
            minus = final_state(c.shifted(k, -eps), nm).data
            diff = abs(np.trace(plus - minus))
            worst = max(worst, diff / (2 * eps))
            rep.record(tol - diff, tol=0.0)
    rep.parameters["max_trace_derivative"] = worst
    return rep


def toy_ansatz(n: int, blocks: int = 1) -> AnsatzSpec:
    return build_hea(n, blocks)


def random_hermitian(n: int, rng) -> np.ndarray:
    """Random Hermitian matrix with spectral norm 1."""
    dim = 1 << n
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = (A + A.conj().T) / 2
    return H / np.max(np.abs(np.linalg.eigvalsh(H)))


def random_density(n: int, rng) -> DensityMatrix:
    """Full-rank random state (Ginibre ensemble)."""
    dim = 1 << n
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = G @ G.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_subspace(n: int, rng, proper: bool = True) -> Subspace:
    dim = 1 << n
    hi = dim - 1 if proper else dim
    size = int(rng.integers(1, hi + 1))
    return Subspace(n, np.sort(rng.choice(dim, size, replace=False)), "random")


def check_c1_identity(samples: int, seed: int = 0, max_qubits: int = 3, tol: float = 1e-10) -> BoundReport:
    """Dense-trace C1 against (k1 + a.w1) / (k2 + a.w2) on random (rho, O, S).

    Each sample also compares with the post-selected expectation
    Tr(P rho P O) / Tr(P rho) (keep only outcomes in S); the larger of the two
    discrepancies is recorded.
    """
    rng = np.random.default_rng(seed)
    rep = BoundReport("prop3.3", parameters={"tol": tol, "max_qubits": max_qubits})
    worst = 0.0
    for _ in range(samples):
        rep.instances += 1
        n = int(rng.integers(1, max_qubits + 1))
        S = random_subspace(n, rng, proper=False)
        H = random_hermitian(n, rng)
        T = build_truncated_observables(H, S)
        rho = random_density(n, rng)
        dense = eval_c1(rho, T)
        a = pauli_coefficients(rho)
        pauli = (T.k1 + a @ T.w1) / (T.k2 + a @ T.w2)
        P = np.diag(S.mask.astype(float))
        kept = P @ rho.data @ P
        post = float(np.trace(kept @ H).real / np.trace(kept).real)
        diff = max(abs(dense - pauli), abs(dense - post))
        worst = max(worst, diff)
        rep.record(tol - diff, tol=0.0)
    rep.parameters["max_abs_diff"] = float(worst)
    return rep


def check_gradient_crossval(samples: int, seed: int = 0, eps: float = VERIFY_EPS, tol: float = 1e-6,
                            min_denominator: float = 0.2, order_eps=(1e-2, 1e-3)) -> BoundReport:
    """Analytic (Pauli-coefficient) C1 and raw-C2 gradients against central
    differences of the costs on random 2-qubit instances.

    Observables have unit spectral norm.  Draws with |Tr(rho O2')| below
    ``min_denominator`` are counted inapplicable and redrawn: next to the pole
    the finite-difference truncation error of C2 itself exceeds ``tol``.  The
    convergence order log10(err(eps_a) / err(eps_b)) / log10(eps_a / eps_b) is
    recorded per instance against the analytic value.
    """
    rng = np.random.default_rng(seed)
    rep = BoundReport("gradients", parameters={"eps": eps, "tol": tol, "min_denominator": min_denominator,
                                               "order_eps": list(order_eps)})
    orders = []
    while rep.applicable < samples:
        rep.instances += 1
        S = random_subspace(2, rng)
        T = build_truncated_observables(random_hermitian(2, rng), S)
        ansatz = build_hea(2, int(rng.integers(1, 4)))
        nm = NoiseModel.uniform(rng.uniform(0.0, 0.05))
        c = ansatz.bind(_random_theta(rng, ansatz))
        rho = final_state(c, nm)
        if abs(c2_parts(rho, T)[1]) < min_denominator:
            rep.inapplicable += 1
            continue
        a = pauli_coefficients(rho)

        def cost1(t):
            return eval_c1(final_state(ansatz.bind(t), nm), T)

        def cost2(t):
            num, den = c2_parts(final_state(ansatz.bind(t), nm), T)
            return num / den

        gs = [_grad_vector(c, nm, k, eps) for k in range(ansatz.parameter_count)]
        d1 = np.array([grad_c1_from_coefficients(a, g, T) for g in gs])
        d2 = np.array([grad_c2_from_coefficients(a, g, T) for g in gs])
        f1 = grad_central_difference(cost1, c.theta, eps).grad
        f2 = grad_central_difference(cost2, c.theta, eps).grad
        err = max(np.max(np.abs(d1 - f1)), np.max(np.abs(d2 - f2)))
        rep.record(tol - err, tol=0.0)
        e_a, e_b = (np.max(np.abs(grad_central_difference(cost1, c.theta, h).grad - d1)) for h in order_eps)
        if e_b > 0 and e_a > 1e-13:
            orders.append(math.log10(e_a / e_b) / math.log10(order_eps[0] / order_eps[1]))
    rep.parameters["orders"] = orders
    rep.parameters["median_order"] = float(np.median(orders)) if orders else None
    return rep


# -- default protocols --------------------------------------------------------

ALL_CLAIMS = CLAIMS + ("theorem3.2", "prop3.3", "gradients")
DEFAULT_NOISE = NoiseModel.uniform(0.03)  # q = 0.88


def example_observables() -> TruncatedObservables:
    """O = diag(0.8, 0, 0, 0.2) on 2 qubits with S = {|00>, |11>}."""
    O = diagonal_observable(np.array([0.8, 0.0, 0.0, 0.2]))
    return build_truncated_observables(O, Subspace(2, np.array([0, 3]), "{00, 11}"))


def toy_problems():
    """Noise-free toys: Z on one qubit (full subspace) and -ZZ - XX/2 on two
    qubits restricted to {|00>, |11>}, whose minimizer in S is a Bell state."""
    from .pauli import PauliObservable
    from .problems import ProblemInstance

    z = ProblemInstance("toy-z", "qaoa", PauliObservable(1, {"Z": 1.0}), Subspace(1, np.array([0, 1]), "all"),
                        solutions=(1,))
    bell = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2)
    zz = ProblemInstance("toy-bell", "vqe", PauliObservable(2, {"ZZ": -1.0, "XX": -0.5}),
                         Subspace(2, np.array([0, 3]), "{00, 11}"), target_state=bell)
    return [(z, build_hea(1, 1)), (zz, build_hea(2, 2))]


def check_surrogate_convergence(seeds=(0, 1, 2), iterations: int = 200, tol: float = 1e-2,
                                alpha: float = 0.1, beta: float = 0.1, lr0: float = 0.1) -> BoundReport:
    """Step on C2reg without noise and require the logged C1 to end within
    ``tol`` of lambda_min^S.  The first iteration after which C1 stays inside
    the band is reported per run."""
    from .costs import CostKind
    from .trainer import TrainConfig, train

    rep = BoundReport("theorem3.2", parameters={"iterations": iterations, "tol": tol, "alpha": alpha,
                                                 "beta": beta, "lr0": lr0, "entered": {}})
    kind = CostKind("c2reg", alpha, beta)
    for P, A in toy_problems():
        lam = P.truncated.lambda_min_S
        for seed in seeds:
            rep.instances += 1
            cfg = TrainConfig(iterations=iterations, lr0=lr0, cost=kind, seed=seed)
            rec = train(P, A, NoiseModel(0.0, 0.0, 0.0), cfg)
            if rec.aborted:
                rep.violations += 1
                rep.notes.append(f"{P.name} seed {seed}: {rec.aborted}")
                continue
            gaps = np.abs(np.array([r[1] for r in rec.rows]) - lam)
            outside = np.flatnonzero(gaps >= tol)
            entered = 0 if outside.size == 0 else int(outside[-1]) + 1
            rep.parameters["entered"][f"{P.name}-seed{seed}"] = entered
            rep.record(tol - gaps[-1], tol=0.0)
    return rep


def check_state_decay_random(samples: int, seed: int = 0, max_qubits: int = 6,
                             max_blocks: int = 10) -> BoundReport:
    """State-decay bound over random circuit shapes and random Pauli noise models."""
    rng = np.random.default_rng(seed)
    rep = BoundReport("lemma2.2", parameters={"max_qubits": max_qubits, "max_blocks": max_blocks})
    for _ in range(samples):
        n = int(rng.integers(1, max_qubits + 1))
        L = int(rng.integers(1, max_blocks + 1))
        q = rng.dirichlet(np.ones(4))[:3] * rng.uniform(0, 0.5)
        sub = check_state_decay(build_hea(n, L), NoiseModel(*q), 1, seed=int(rng.integers(2**31)))
        rep.instances += 1
        for s in sub.slacks:
            rep.record(s)
    return rep


def run_claim(claim: str, samples: int | None = None, seed: int = 0, T: TruncatedObservables | None = None,
              nm: NoiseModel | None = None, ansatz: AnsatzSpec | None = None) -> BoundReport:
    """Run one claim's default protocol; ``T``, ``nm`` and ``ansatz`` override
    the shipped 4-qubit MaxCut setting (q = 0.88, 5 blocks) where they apply."""
    if claim not in ALL_CLAIMS:
        raise KeyError(f"unknown claim {claim!r}; valid: {', '.join(ALL_CLAIMS)}")
    nm = DEFAULT_NOISE if nm is None else nm
    if T is None and claim in ("prop3.2", "theorem3.1"):
        from .problems import load_benchmark

        T = load_benchmark("qaoa-mc").truncated
    if claim == "lemma2.2":
        return check_state_decay_random(samples or 1000, seed)
    if claim == "lemma2.1":
        return check_gradient_bound_c0(ansatz or build_hea(4, 5), nm, samples or 50, seed)
    if claim == "prop3.2":
        return check_gradient_bound_c1(ansatz or build_hea(T.n, 5), nm, T, samples or 100, seed)
    if claim == "theorem3.1":
        L0 = theorem31_constants(T, T.n, nm.contraction, 0.1)["L0"]
        A = ansatz if ansatz is not None and ansatz.blocks > 2 * L0 + 1 else build_hea(T.n, 2 * L0 + 2)
        rep = check_amplification(A, nm, T, samples or 50, 0.1, seed, params_per_sample=2)
        rep.parameters["epsilon_sweep"] = {
            str(e): theorem31_constants(T, T.n, nm.contraction, e) for e in (0.01, 0.1, 0.5)}
        return rep
    if claim == "prop3.5":
        return check_singularity_profile(T or example_observables())
    if claim == "prop3.6":
        return check_solution_space(T or example_observables(), samples or 100, seed)
    if claim == "lemmaA.1":
        if ansatz is None:
            from .problems import load_benchmark

            P = load_benchmark("vqe-beh2")
            ansatz = build_hea(P.n, 5, initial_bits=P.initial_bits)
            nm = NoiseModel.uniform(0.01)
        return check_traceless_derivative(ansatz, nm, samples or 1, seed)
    if claim == "theorem3.2":
        return check_surrogate_convergence(tuple(range(samples or 3)))
    if claim == "prop3.3":
        return check_c1_identity(samples or 500, seed)
    return check_gradient_crossval(samples or 100, seed)
