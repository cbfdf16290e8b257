"""Symmetry subspaces and the truncated observables built on them.

For an observable O and a subspace S spanned by computational basis states:

* ``O1 = P_S O P_S`` (equal to the sum of O's eigenpairs inside S when O
  commutes with the projector P_S, which holds for every shipped benchmark),
* ``O2 = P_S``,
* ``O1' = O1 - k1 I`` and ``O2' = O2 - k2 I`` with ``k = Tr(.)/2^n``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .density import DensityMatrix, basis_probabilities
from .errors import DimensionMismatch, EmptySubspace, NonHermitian
from .pauli import (
    HERMITIAN_TOL,
    MAX_VECTOR_QUBITS,
    PauliObservable,
    decompose,
    materialize,
)


@dataclass(frozen=True)
class Predicate:
    """Named, composable predicate on basis indices."""

    name: str
    func: Callable[[int], bool]

    def __call__(self, index: int) -> bool:
        return bool(self.func(index))

    def __and__(self, other: "Predicate") -> "Predicate":
        return Predicate(f"{self.name} & {other.name}", lambda i: self(i) and other(i))


def fixed_bit(pos: int, val: int) -> Predicate:
    return Predicate(f"fixed_bit({pos}, {val})", lambda i: (i >> pos) & 1 == val)


def fixed_bits(mask: int, val: int) -> Predicate:
    return Predicate(f"fixed_bits({mask:#b}, {val:#b})", lambda i: i & mask == val & mask)


def hamming_weight(k: int) -> Predicate:
    return Predicate(f"hamming_weight({k})", lambda i: bin(i).count("1") == k)


def all_states() -> Predicate:
    return Predicate("all", lambda i: True)


_PREDICATES = {
    "fixed_bit": fixed_bit,
    "fixed_bits": fixed_bits,
    "hamming_weight": hamming_weight,
    "all": all_states,
}
_CALL_RE = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def parse_predicate(text: str) -> Predicate:
    """Parse e.g. ``"fixed_bit(0, 1) & hamming_weight(2)"``.

    Integer arguments accept Python literals, so masks may be written ``0b11``.
    """
    parts = [p for p in text.split("&")]
    preds = []
    for part in parts:
        m = _CALL_RE.match(part)
        if not m or m.group(1) not in _PREDICATES:
            raise ValueError(f"unknown subspace predicate {part.strip()!r}; "
                             f"valid: {', '.join(_PREDICATES)}")
        args = [a.strip() for a in (m.group(2) or "").split(",") if a.strip()]
        try:
            values = [int(a, 0) for a in args]
            preds.append(_PREDICATES[m.group(1)](*values))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"bad arguments in {part.strip()!r}: {exc}") from None
    out = preds[0]
    for p in preds[1:]:
        out = out & p
    return out


@dataclass(frozen=True, eq=False)
class Subspace:
    n: int
    indices: np.ndarray
    origin: str = ""

    def __post_init__(self):
        idx = np.unique(np.asarray(self.indices, dtype=np.int64))
        if idx.size == 0:
            raise EmptySubspace(f"subspace {self.origin!r} has no basis states")
        if idx[0] < 0 or idx[-1] >= 1 << self.n:
            raise DimensionMismatch(f"basis index outside [0, 2^{self.n})")
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)

    @property
    def dim(self) -> int:
        return int(self.indices.size)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(1 << self.n, dtype=bool)
        m[self.indices] = True
        return m

    def __contains__(self, index) -> bool:
        return bool(np.any(self.indices == index))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.indices, other.indices)

    def projector(self) -> PauliObservable:
        diag = self.mask.astype(float)
        return diagonal_observable(diag)


def subspace_from_predicate(n: int, predicate: Predicate | Callable[[int], bool],
                            origin: str | None = None) -> Subspace:
    idx = [i for i in range(1 << n) if predicate(i)]
    if origin is None:
        origin = getattr(predicate, "name", "custom")
    if not idx:
        raise EmptySubspace(f"no {n}-qubit basis state satisfies {origin}")
    return Subspace(n, np.array(idx), origin)


def diagonal_observable(values: np.ndarray, tol: float = 1e-12) -> PauliObservable:
    """Pauli form of diag(values) via the Walsh-Hadamard transform (I/Z strings only)."""
    values = np.asarray(values, dtype=float)
    n = values.size.bit_length() - 1
    if values.size != 1 << n:
        raise DimensionMismatch(f"diagonal of length {values.size} is not 2^n")
    t = values.copy()
    for k in range(n):
        t = t.reshape(2**k, 2, -1)
        t = np.stack([t[:, 0] + t[:, 1], t[:, 0] - t[:, 1]], axis=1)
    t = t.reshape(-1) / values.size
    terms = {}
    for z, c in enumerate(t):
        if abs(c) > tol:
            # bit k of z (from the most significant end) is qubit n-1-k
            letters = "".join("Z" if (z >> (n - 1 - k)) & 1 else "I" for k in range(n))
            terms[letters] = float(c)
    return PauliObservable(n, terms)


@dataclass(frozen=True, eq=False)
class TruncatedObservables:
    """O1, O2 and their traceless versions, with the data cost functions need.

    ``o1_matrix``/``o1_diag``: exactly one is set, depending on whether O1 is
    diagonal in the computational basis.  ``argmin_state`` is the normalized
    eigenvector of the smallest eigenvalue of O1 inside S; ``argmin_index`` is
    its basis index when that eigenvector is a basis state.
    """

    subspace: Subspace
    O1: PauliObservable
    O2: PauliObservable
    O1p: PauliObservable
    O2p: PauliObservable
    k1: float
    k2: float
    eigenvalues_S: np.ndarray
    lambda_min_S: float
    lambda_max_S: float
    argmin_index: int | None
    argmin_state: np.ndarray
    o1_diag: np.ndarray | None
    o1_matrix: np.ndarray | None
    _vectors: dict

    @property
    def n(self) -> int:
        return self.subspace.n

    @property
    def w1(self) -> np.ndarray:
        return self._coefficient_vector("w1", self.O1)

    @property
    def w2(self) -> np.ndarray:
        return self._coefficient_vector("w2", self.O2)

    def _coefficient_vector(self, key, obs):
        if key not in self._vectors:
            self._vectors[key] = obs.to_vector(include_identity=False)
        return self._vectors[key]

    def trace_o1(self, rho: DensityMatrix) -> float:
        if self.o1_diag is not None:
            return float(basis_probabilities(rho) @ self.o1_diag)
        return float(np.sum(rho.data.T * self.o1_matrix).real)

    def trace_o2(self, rho: DensityMatrix) -> float:
        return subspace_weight(rho, self.subspace)


def build_truncated_observables(O: PauliObservable | np.ndarray, S: Subspace) -> TruncatedObservables:
    if isinstance(O, PauliObservable):
        n = O.n
        diagonal = O.is_diagonal()
        O_dense = None if diagonal else materialize(O)
        diag_vals = O.diagonal() if diagonal else None
    else:
        O_dense = np.asarray(O)
        dim = O_dense.shape[0]
        n = dim.bit_length() - 1
        if O_dense.shape != (dim, dim) or dim != 1 << n:
            raise DimensionMismatch(f"expected a 2^n x 2^n matrix, got {O_dense.shape}")
        dev = np.max(np.abs(O_dense - O_dense.conj().T))
        if dev > HERMITIAN_TOL:
            raise NonHermitian(f"max |O - O^dagger| = {dev:.3e}")
        off = O_dense - np.diag(np.diagonal(O_dense))
        diagonal = not np.any(np.abs(off) > 1e-14)
        diag_vals = np.diagonal(O_dense).real.copy() if diagonal else None
    if n != S.n:
        raise DimensionMismatch(f"{n}-qubit observable with {S.n}-qubit subspace")
    dim = 1 << n
    idx = S.indices
    mask = S.mask

    if diagonal:
        o1_diag = np.where(mask, diag_vals, 0.0)
        vals = diag_vals[idx]
        order = np.argsort(vals, kind="stable")  # ties -> lowest index
        i_star = int(idx[order[0]])
        eig = np.sort(vals)
        argmin_state = np.zeros(dim)
        argmin_state[i_star] = 1.0
        O1 = diagonal_observable(o1_diag)
        o1_matrix = None
        argmin_index = i_star
    else:
        o1_matrix = np.zeros((dim, dim), dtype=O_dense.dtype)
        o1_matrix[np.ix_(idx, idx)] = O_dense[np.ix_(idx, idx)]
        eig, vecs = np.linalg.eigh(O_dense[np.ix_(idx, idx)])
        v = vecs[:, 0]
        # fix the global phase: largest-magnitude component real and positive
        j = int(np.argmax(np.abs(v)))
        v = v * (abs(v[j]) / v[j])
        argmin_state = np.zeros(dim, dtype=complex)
        argmin_state[idx] = v
        argmin_index = int(idx[j]) if np.isclose(abs(v[j]), 1.0, atol=1e-10) else None
        if n <= MAX_VECTOR_QUBITS:
            O1 = decompose(o1_matrix)
        else:  # pragma: no cover - beyond every shipped size
            raise DimensionMismatch("dense truncated observables need n <= 10")
        o1_diag = None
        if np.isrealobj(argmin_state) or not np.any(np.abs(argmin_state.imag) > 1e-14):
            argmin_state = argmin_state.real.copy()

    O2 = S.projector()
    k1 = O1.identity_coefficient
    k2 = S.dim / dim
    return TruncatedObservables(
        subspace=S,
        O1=O1,
        O2=O2,
        O1p=O1.traceless(),
        O2p=O2.traceless(),
        k1=k1,
        k2=k2,
        eigenvalues_S=np.asarray(eig, dtype=float),
        lambda_min_S=float(eig[0]),
        lambda_max_S=float(eig[-1]),
        argmin_index=argmin_index,
        argmin_state=argmin_state,
        o1_diag=o1_diag,
        o1_matrix=o1_matrix,
        _vectors={},
    )


def subspace_weight(rho: DensityMatrix, S: Subspace) -> float:
    if rho.n != S.n:
        raise DimensionMismatch(f"{rho.n}-qubit state with {S.n}-qubit subspace")
    return float(np.sum(basis_probabilities(rho)[S.indices]))
