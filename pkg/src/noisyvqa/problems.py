"""Benchmark problem encoders: QAOA-style diagonal Hamiltonians and VQE fixtures.

Every QAOA observable is a cost to minimize, diagonal in the computational
basis.  When the smallest eigenvalue inside the symmetry subspace is not
negative, a multiple of the identity is subtracted (``shift``) so it becomes
``-1`` (shift only touches the identity coefficient).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import EmptySubspace, InvalidGraph, InvalidInstance, ParseError
from .pauli import PauliObservable, load_pauli_file, materialize, parse_pauli_text
from .subspace import (
    Subspace,
    TruncatedObservables,
    all_states,
    build_truncated_observables,
    diagonal_observable,
    fixed_bit,
    fixed_bits,
    hamming_weight,
    subspace_from_predicate,
)

MAX_QUBITS = 10
ENERGY_CHECK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    name: str
    kind: str  # "qaoa" or "vqe"
    observable: PauliObservable
    subspace: Subspace
    solutions: tuple[int, ...] = ()
    target_state: np.ndarray | None = None
    shift: float = 0.0
    initial_bits: str | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("qaoa", "vqe"):
            raise InvalidInstance(f"unknown benchmark kind {self.kind!r}")
        if self.kind == "qaoa":
            if not self.solutions:
                raise InvalidInstance(f"{self.name}: empty solution set")
            outside = [s for s in self.solutions if s not in self.subspace]
            if outside:
                raise InvalidInstance(f"{self.name}: solutions {outside} lie outside the subspace")
        elif self.target_state is None:
            raise InvalidInstance(f"{self.name}: VQE instance needs a target state")
        if self.truncated.lambda_min_S >= 0:
            raise InvalidInstance(f"{self.name}: minimum eigenvalue in S is not negative")

    @property
    def n(self) -> int:
        return self.observable.n

    @cached_property
    def truncated(self) -> TruncatedObservables:
        return build_truncated_observables(self.observable, self.subspace)

    @cached_property
    def dense_observable(self) -> np.ndarray:
        if self.observable.is_diagonal():
            return np.diag(self.observable.diagonal())
        return materialize(self.observable)


def _negative_shift(values_in_s: np.ndarray) -> float:
    low = float(np.min(values_in_s))
    return 0.0 if low < 0 else -(low + 1.0)


def _normalize_graph(nodes, edges) -> tuple[int, list[tuple[int, int]]]:
    V = nodes if isinstance(nodes, int) else len(nodes)
    if not 1 <= V <= MAX_QUBITS:
        raise InvalidGraph(f"graph must have 1..{MAX_QUBITS} nodes, got {V}")
    clean = set()
    for e in edges:
        u, v = (int(x) for x in e)
        if u == v or not (0 <= u < V and 0 <= v < V):
            raise InvalidGraph(f"bad edge {e!r} for {V} nodes")
        clean.add((min(u, v), max(u, v)))
    return V, sorted(clean)


def _connected(V: int, edges) -> bool:
    seen, stack = {0}, [0]
    adj = {v: set() for v in range(V)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    while stack:
        for w in adj[stack.pop()] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == V


def _bits(V: int) -> np.ndarray:
    """bits[b, v] = value of qubit v in basis state b."""
    b = np.arange(1 << V)
    return (b[:, None] >> np.arange(V)[None, :]) & 1


def maxcut_values(V: int, edges) -> np.ndarray:
    """Diagonal of sum_{(i,j)} (Z_i Z_j - I)/2, i.e. minus the cut size."""
    z = _bits(V)
    cut = np.zeros(1 << V)
    for u, v in edges:
        cut += z[:, u] != z[:, v]
    return -cut


def encode_maxcut(graph: dict | tuple, name: str = "qaoa-mc") -> ProblemInstance:
    nodes, edges = (graph["nodes"], graph["edges"]) if isinstance(graph, dict) else graph
    V, edges = _normalize_graph(nodes, edges)
    if not edges:
        raise InvalidGraph("MaxCut needs at least one edge")
    if not _connected(V, edges):
        raise InvalidGraph("MaxCut graph must be connected")
    obs = PauliObservable(V, {})
    for u, v in edges:
        zz = ["I"] * V
        zz[V - 1 - u] = zz[V - 1 - v] = "Z"
        obs = obs + PauliObservable(V, {"".join(zz): 0.5, "I" * V: -0.5})
    S = subspace_from_predicate(V, fixed_bit(0, 1))
    values = maxcut_values(V, edges)
    shift = _negative_shift(values[S.indices])
    obs = obs.shifted(shift)
    best = values[S.indices].min()
    sols = tuple(int(i) for i in S.indices if values[i] == best)
    return ProblemInstance(name, "qaoa", obs, S, solutions=sols, shift=shift,
                           initial_bits="0" * V, metadata={"edges": edges})


def vertex_cover_values(V: int, edges, weights, penalty: float) -> np.ndarray:
    z = _bits(V)
    vals = z @ np.asarray(weights, dtype=float)
    for u, v in edges:
        vals = vals + penalty * (1 - z[:, u]) * (1 - z[:, v])
    return vals


def _default_symmetry_qubit(V, edges, weights, penalty) -> int:
    vals = vertex_cover_values(V, edges, weights, penalty)
    best = vals.min()
    optima = np.flatnonzero(vals == best)
    for q in reversed(range(V)):
        if any(not (b >> q) & 1 for b in optima):
            return q
    return 0


def encode_vertex_cover(graph: dict | tuple, penalty: float | None = None,
                        symmetry_qubit: int | None = None, name: str = "qaoa-vc") -> ProblemInstance:
    """Minimum vertex cover; qubit value 1 means the node is in the cover.

    ``symmetry_qubit`` is the node fixed to 0 by the subspace.  When omitted,
    the graph dict's ``symmetry_qubit`` is used, else the highest-index node
    excluded by at least one minimum cover.
    """
    if isinstance(graph, dict):
        nodes, edges = graph["nodes"], graph["edges"]
        weights = graph.get("weights")
        if symmetry_qubit is None:
            symmetry_qubit = graph.get("symmetry_qubit")
    else:
        nodes, edges = graph
        weights = None
    V, edges = _normalize_graph(nodes, edges)
    weights = np.ones(V) if weights is None else np.asarray(weights, dtype=float)
    if weights.shape != (V,) or np.any(weights <= 0):
        raise InvalidGraph("weights must be one positive number per node")
    if penalty is None:
        penalty = 2.0 * V
    if penalty <= weights.max():
        raise InvalidGraph(f"penalty {penalty} must exceed the largest vertex weight")
    values = vertex_cover_values(V, edges, weights, penalty)
    if symmetry_qubit is None:
        symmetry_qubit = _default_symmetry_qubit(V, edges, weights, penalty)
    if not 0 <= symmetry_qubit < V:
        raise InvalidGraph(f"symmetry qubit {symmetry_qubit} out of range")
    S = subspace_from_predicate(V, fixed_bit(symmetry_qubit, 0))
    best = values.min()
    sols = tuple(int(i) for i in S.indices if values[i] == best)
    if not sols:
        raise InvalidGraph(f"no minimum cover has node {symmetry_qubit} excluded")
    shift = _negative_shift(values[S.indices])
    obs = diagonal_observable(values + shift)
    return ProblemInstance(name, "qaoa", obs, S, solutions=sols, shift=shift,
                           initial_bits="0" * V,
                           metadata={"edges": edges, "penalty": penalty, "symmetry_qubit": symmetry_qubit})


def tsp_values(distances: np.ndarray, penalty: float) -> np.ndarray:
    """Diagonal over 2K-qubit states; position p holds a node code in qubits {2p, 2p+1}.

    Valid permutations score their cycle length.  Every code outside [0, K) and
    every repeated node adds ``penalty``.
    """
    K = distances.shape[0]
    n = 2 * K
    b = np.arange(1 << n)
    codes = np.stack([(b >> (2 * p)) & 3 for p in range(K)], axis=1)
    valid = codes < K
    length = np.zeros(b.size)
    for p in range(K):
        u, v = codes[:, p], codes[:, (p + 1) % K]
        ok = valid[:, p] & valid[:, (p + 1) % K]
        length += np.where(ok, distances[np.minimum(u, K - 1), np.minimum(v, K - 1)], 0.0)
    violations = (~valid).sum(axis=1).astype(float)
    for p, p2 in itertools.combinations(range(K), 2):
        violations += valid[:, p] & valid[:, p2] & (codes[:, p] == codes[:, p2])
    return length + penalty * violations


def encode_tsp(distances, penalty: float | None = None, name: str = "qaoa-tsp") -> ProblemInstance:
    if isinstance(distances, dict):
        distances = distances["distances"]
    d = np.asarray(distances, dtype=float)
    K = d.shape[0]
    if d.shape != (K, K) or K != 3:
        raise InvalidInstance("TSP encoder supports 3 nodes (6 qubits)")
    if not np.allclose(d, d.T) or np.any(np.diag(d) != 0) or np.any(d[~np.eye(K, dtype=bool)] <= 0):
        raise InvalidInstance("distances must be symmetric, positive, zero on the diagonal")
    if penalty is None:
        penalty = float(d.sum())  # twice the total edge length: above any tour
    values = tsp_values(d, penalty)
    n = 2 * K
    S = subspace_from_predicate(n, fixed_bits(0b11, 0b00))
    best = values[S.indices].min()
    sols = tuple(int(i) for i in S.indices if values[i] == best)
    shift = _negative_shift(values[S.indices])
    obs = diagonal_observable(values + shift)
    return ProblemInstance(name, "qaoa", obs, S, solutions=sols, shift=shift, initial_bits="0" * n,
                           metadata={"distances": d.tolist(), "penalty": penalty})


def vqe_instance(obs: PauliObservable, electrons: int | None, name: str = "vqe",
                 initial_bits: str | None = None, expected_energy: float | None = None) -> ProblemInstance:
    n = obs.n
    if electrons is None:
        S = subspace_from_predicate(n, all_states())
    else:
        if not 0 <= electrons <= n:
            raise EmptySubspace(f"{electrons} electrons on {n} qubits")
        S = subspace_from_predicate(n, hamming_weight(electrons))
    T = build_truncated_observables(obs, S)
    if expected_energy is not None and abs(T.lambda_min_S - expected_energy) > ENERGY_CHECK_TOL:
        raise InvalidInstance(
            f"{name}: sector ground energy {T.lambda_min_S:.12f} disagrees with header {expected_energy:.12f}")
    shift = 0.0
    if T.lambda_min_S >= 0:
        shift = -(T.lambda_min_S + 1.0)
        obs = obs.shifted(shift)
    if initial_bits is None and electrons is not None:
        initial_bits = "0" * (n - electrons) + "1" * electrons
    return ProblemInstance(name, "vqe", obs, S, target_state=T.argmin_state, shift=shift,
                           initial_bits=initial_bits,
                           metadata={"electrons": electrons, "ground_energy": T.lambda_min_S})


def load_vqe_hamiltonian(path: str | Path, electrons: int | None = None, name: str | None = None) -> ProblemInstance:
    """Load a Pauli-term fixture; header keys ``ground_energy`` and ``electrons``
    are optional and the energy, when present, is re-verified."""
    obs, meta = load_pauli_file(path)
    return _vqe_from_parsed(obs, meta, electrons, name or Path(path).stem, str(path))


def _vqe_from_parsed(obs, meta, electrons, name, path):
    try:
        if electrons is None and "electrons" in meta:
            electrons = int(meta["electrons"])
        expected = float(meta["ground_energy"]) if "ground_energy" in meta else None
    except ValueError as exc:
        raise ParseError(f"bad header value: {exc}", None, path) from None
    return vqe_instance(obs, electrons, name=name, expected_energy=expected)


def brute_force_solution(P: ProblemInstance):
    """Exhaustive minimum over the subspace, independent of the encoders' bookkeeping.

    QAOA: ``(min value, set of basis indices)``.  VQE: ``(min value, state vector)``.
    """
    if P.n > MAX_QUBITS:
        raise InvalidInstance(f"brute force limited to {MAX_QUBITS} qubits")
    M = P.dense_observable
    idx = P.subspace.indices
    if P.kind == "qaoa":
        diag = np.real(np.diagonal(M))
        best = diag[idx].min()
        return float(best), {int(i) for i in idx if abs(diag[i] - best) < 1e-9}
    block = M[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(block)
    psi = np.zeros(1 << P.n, dtype=complex)
    psi[idx] = vecs[:, 0]
    return float(vals[0]), psi


# -- shipped benchmarks -------------------------------------------------------


def data_path(name: str) -> Path:
    return Path(str(resources.files("noisyvqa") / "data" / name))


def load_graph(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid graph JSON: {exc.msg}", exc.lineno, str(path)) from None


BENCHMARKS = {
    # name: (loader, blocks, noise rate per Pauli)
    "qaoa-mc": ("maxcut_4cycle.json", 5, 0.03),
    "qaoa-vc": ("vc_path4.json", 5, 0.03),
    "qaoa-tsp": ("tsp_triangle.json", 5, 0.01),
    "vqe-h2": ("h2_jw.txt", 5, 0.03),
    "vqe-lih": ("lih_jw.txt", 5, 0.01),
    "vqe-beh2": ("beh2_jw.txt", 5, 0.01),
}


def load_benchmark(name: str, path: str | Path | None = None) -> ProblemInstance:
    """Instantiate a shipped benchmark; ``path`` swaps in another instance file."""
    if name not in BENCHMARKS:
        raise KeyError(f"unknown benchmark {name!r}; valid: {', '.join(BENCHMARKS)}")
    fname = BENCHMARKS[name][0]
    path = Path(path) if path is not None else data_path(fname)
    if name == "qaoa-mc":
        return encode_maxcut(load_graph(path), name=name)
    if name == "qaoa-vc":
        return encode_vertex_cover(load_graph(path), name=name)
    if name == "qaoa-tsp":
        return encode_tsp(load_graph(path), name=name)
    return load_vqe_hamiltonian(path, name=name)


def parse_vqe_text(text: str, electrons: int | None = None, name: str = "vqe") -> ProblemInstance:
    obs, meta = parse_pauli_text(text)
    return _vqe_from_parsed(obs, meta, electrons, name, None)
