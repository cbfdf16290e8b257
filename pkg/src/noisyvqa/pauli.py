"""Pauli-string algebra for n-qubit operators.

Conventions used throughout the package:

* A Pauli string is a ``str`` of ``n`` letters from ``"IXYZ"``; the *rightmost*
  letter acts on qubit 0.  ``"ZI"`` is Z on qubit 1.
* Computational-basis index ``b`` has qubit ``k`` in bit ``k`` (so the bitstring
  written with qubit 0 rightmost is ``format(b, f"0{n}b")``).
* The full coefficient vector of an operator is indexed in base 4 with the
  leftmost letter most significant and ``I, X, Y, Z -> 0, 1, 2, 3``.  Index 0 is
  the identity string; lexicographic order of strings equals index order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionMismatch, DimensionOverflow, NonHermitian, ParseError

LETTERS = "IXYZ"
MAX_DENSE_QUBITS = 12
MAX_VECTOR_QUBITS = 10
PRUNE_TOL = 1e-12
HERMITIAN_TOL = 1e-10

# rows: I, X, Y, Z; columns: block entries (00, 01, 10, 11) of a 2x2 matrix.
# Row s gives Tr(sigma_s M) for M = [[m00, m01], [m10, m11]].
_TRACE_MAP = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1j, -1j, 0],
        [1, 0, 0, -1],
    ],
    dtype=complex,
)
_INV_TRACE_MAP = np.linalg.inv(_TRACE_MAP)
_STRING_RE = re.compile(r"^[IXYZ]+$")


def string_index(s: str) -> int:
    idx = 0
    for ch in s:
        idx = idx * 4 + LETTERS.index(ch)
    return idx


def index_string(idx: int, n: int) -> str:
    letters = []
    for _ in range(n):
        idx, r = divmod(idx, 4)
        letters.append(LETTERS[r])
    return "".join(reversed(letters))


def _masks(s: str) -> tuple[int, int, int]:
    """Return (x_mask, z_mask, number of Y letters) for a Pauli string."""
    n = len(s)
    x = z = ny = 0
    for pos, ch in enumerate(s):
        bit = 1 << (n - 1 - pos)
        if ch in "XY":
            x |= bit
        if ch in "ZY":
            z |= bit
        if ch == "Y":
            ny += 1
    return x, z, ny


def _popcount_parity(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    parity = np.zeros_like(v)
    while np.any(v):
        parity ^= v & 1
        v >>= 1
    return parity


def pauli_matrix(s: str) -> np.ndarray:
    """Dense matrix of a single Pauli string.

    Uses sigma = i^{#Y} X^x Z^z, so column c has its only non-zero entry in row
    c ^ x with value i^{#Y} (-1)^{popcount(c & z)}.
    """
    n = len(s)
    if n > MAX_DENSE_QUBITS:
        raise DimensionOverflow(f"{n} qubits exceeds dense cap {MAX_DENSE_QUBITS}")
    dim = 1 << n
    x, z, ny = _masks(s)
    cols = np.arange(dim)
    signs = 1 - 2 * _popcount_parity(cols & z)
    out = np.zeros((dim, dim), dtype=complex)
    out[cols ^ x, cols] = (1j**ny) * signs
    return out


def _apply_per_qubit(t: np.ndarray, n: int, mat: np.ndarray) -> np.ndarray:
    for k in range(n):
        t = t.reshape(4**k, 4, 4 ** (n - k - 1))
        t = np.matmul(mat, t)
    return t.reshape(-1)


def trace_coefficients(matrix: np.ndarray) -> np.ndarray:
    """Full vector of Tr(sigma_i M) over all 4^n strings, in O(n 4^n)."""
    matrix = np.asarray(matrix)
    dim = matrix.shape[0]
    if matrix.shape != (dim, dim) or dim & (dim - 1):
        raise DimensionMismatch(f"expected a 2^n x 2^n matrix, got {matrix.shape}")
    n = dim.bit_length() - 1
    if n > MAX_VECTOR_QUBITS:
        raise DimensionOverflow(f"{n} qubits exceeds coefficient-vector cap {MAX_VECTOR_QUBITS}")
    t = matrix.reshape((2,) * (2 * n))
    # interleave (row bit, column bit) per qubit, most significant qubit first
    order = [ax for k in range(n) for ax in (k, n + k)]
    t = t.transpose(order).reshape((4,) * n)
    return _apply_per_qubit(t.astype(complex), n, _TRACE_MAP)


def matrix_from_trace_coefficients(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`trace_coefficients`: rebuild M from Tr(sigma_i M)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = (coeffs.size.bit_length() - 1) // 2
    if 4**n != coeffs.size:
        raise DimensionMismatch(f"coefficient vector of length {coeffs.size} is not 4^n")
    if n > MAX_VECTOR_QUBITS:
        raise DimensionOverflow(f"{n} qubits exceeds coefficient-vector cap {MAX_VECTOR_QUBITS}")
    t = _apply_per_qubit(coeffs, n, _INV_TRACE_MAP).reshape((2, 2) * n)
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return t.transpose(order).reshape(1 << n, 1 << n)


@dataclass(frozen=True, eq=False)
class PauliObservable:
    """Real linear combination of n-qubit Pauli strings.

    ``terms`` always includes the identity string when its coefficient is
    non-zero (that coefficient is Tr(H)/2^n).  Zero coefficients are never stored.
    """

    n: int
    terms: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("qubit count must be positive")
        clean = {}
        for s, c in self.terms.items():
            if len(s) != self.n or not _STRING_RE.match(s):
                raise ValueError(f"invalid {self.n}-qubit Pauli string {s!r}")
            if isinstance(c, complex) or np.iscomplexobj(c):
                if abs(np.imag(c)) > HERMITIAN_TOL:
                    raise NonHermitian(f"complex coefficient {c} on {s}")
                c = np.real(c)
            c = float(c)
            if c != 0.0:
                clean[s] = clean.get(s, 0.0) + c
        clean = {s: clean[s] for s in sorted(clean) if clean[s] != 0.0}
        object.__setattr__(self, "terms", MappingProxyType(clean))

    @classmethod
    def from_vector(cls, vec: np.ndarray, n: int | None = None, tol: float = PRUNE_TOL):
        """Build from a full 4^n coefficient vector (identity first)."""
        vec = np.asarray(vec)
        if n is None:
            n = (vec.size.bit_length() - 1) // 2
        if vec.size != 4**n:
            raise DimensionMismatch(f"vector of length {vec.size} is not 4^{n}")
        if np.iscomplexobj(vec):
            if np.max(np.abs(vec.imag), initial=0.0) > HERMITIAN_TOL:
                raise NonHermitian("coefficient vector has imaginary parts")
            vec = vec.real
        nz = np.flatnonzero(np.abs(vec) > tol)
        return cls(n, {index_string(int(i), n): float(vec[i]) for i in nz})

    @classmethod
    def identity(cls, n: int, coeff: float = 1.0):
        return cls(n, {"I" * n: coeff})

    def coefficient(self, s: str) -> float:
        return self.terms.get(s, 0.0)

    @property
    def identity_coefficient(self) -> float:
        return self.terms.get("I" * self.n, 0.0)

    def traceless(self) -> "PauliObservable":
        return PauliObservable(self.n, {s: c for s, c in self.terms.items() if set(s) != {"I"}})

    def shifted(self, shift: float) -> "PauliObservable":
        terms = dict(self.terms)
        key = "I" * self.n
        terms[key] = terms.get(key, 0.0) + shift
        return PauliObservable(self.n, terms)

    def __add__(self, other: "PauliObservable") -> "PauliObservable":
        if not isinstance(other, PauliObservable):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"adding {self.n}- and {other.n}-qubit observables")
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms.get(s, 0.0) + c
        return PauliObservable(self.n, terms)

    def __sub__(self, other: "PauliObservable") -> "PauliObservable":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "PauliObservable":
        return PauliObservable(self.n, {s: scalar * c for s, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PauliObservable):
            return NotImplemented
        return self.n == other.n and dict(self.terms) == dict(other.terms)

    def __len__(self):
        return len(self.terms)

    def allclose(self, other: "PauliObservable", atol: float = 1e-12) -> bool:
        if self.n != other.n:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= atol for k in keys)

    def is_diagonal(self) -> bool:
        return all(set(s) <= {"I", "Z"} for s in self.terms)

    def diagonal(self) -> np.ndarray:
        """Diagonal of the materialized matrix, computed without building it."""
        if self.n > MAX_DENSE_QUBITS:
            raise DimensionOverflow(f"{self.n} qubits exceeds dense cap {MAX_DENSE_QUBITS}")
        basis = np.arange(1 << self.n)
        out = np.zeros(1 << self.n)
        for s, c in self.terms.items():
            x, z, _ = _masks(s)
            if x:
                continue
            out += c * (1 - 2 * _popcount_parity(basis & z))
        return out

    def to_vector(self, include_identity: bool = True) -> np.ndarray:
        """Dense coefficient vector; without identity it has 4^n - 1 entries."""
        if self.n > MAX_VECTOR_QUBITS:
            raise DimensionOverflow(f"{self.n} qubits exceeds coefficient-vector cap {MAX_VECTOR_QUBITS}")
        vec = np.zeros(4**self.n)
        for s, c in self.terms.items():
            vec[string_index(s)] = c
        return vec if include_identity else vec[1:]

    def to_matrix(self) -> np.ndarray:
        return materialize(self)

    def to_text(self, header: Iterable[str] = ()) -> str:
        return format_pauli_text(self, header)


def decompose(H: np.ndarray, tol: float = PRUNE_TOL) -> PauliObservable:
    """Pauli representation of a Hermitian matrix; coefficients Tr(H sigma)/2^n."""
    H = np.asarray(H)
    dim = H.shape[0]
    if H.ndim != 2 or H.shape != (dim, dim) or dim < 2 or dim & (dim - 1):
        raise DimensionMismatch(f"expected a 2^n x 2^n matrix, got {H.shape}")
    dev = np.max(np.abs(H - H.conj().T))
    if dev > HERMITIAN_TOL:
        raise NonHermitian(f"max |H - H^dagger| = {dev:.3e}")
    coeffs = trace_coefficients(H) / dim
    return PauliObservable.from_vector(coeffs.real, dim.bit_length() - 1, tol)


def materialize(P: PauliObservable, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    if P.n > max_qubits:
        raise DimensionOverflow(f"{P.n} qubits exceeds dense cap {max_qubits}")
    dim = 1 << P.n
    if len(P.terms) > dim and P.n <= MAX_VECTOR_QUBITS:
        return matrix_from_trace_coefficients(P.to_vector() * dim)
    out = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for s, c in P.terms.items():
        x, z, ny = _masks(s)
        signs = 1 - 2 * _popcount_parity(cols & z)
        out[cols ^ x, cols] += c * (1j**ny) * signs
    return out


def rank(P: PauliObservable) -> int:
    return len(P.terms)


def pauli_inner(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"coefficient vectors of shapes {a.shape} and {b.shape}")
    return float(np.dot(a, b))


# -- text format ------------------------------------------------------------


def parse_pauli_text(text: str, path: str | None = None) -> tuple[PauliObservable, dict[str, str]]:
    """Parse ``<coefficient> <letters>`` lines; ``#`` comment lines may carry
    ``key=value`` metadata, returned as the second element."""
    meta: dict[str, str] = {}
    terms: dict[str, float] = {}
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k.strip()] = v.strip()
            continue
        line = line.split("#", 1)[0].strip()
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<coefficient> <letters>', got {raw!r}", lineno, path)
        try:
            coeff = float(parts[0])
        except ValueError:
            raise ParseError(f"bad coefficient {parts[0]!r}", lineno, path) from None
        letters = parts[1].upper()
        if not _STRING_RE.match(letters):
            raise ParseError(f"bad Pauli string {parts[1]!r}", lineno, path)
        if n is None:
            n = len(letters)
        elif len(letters) != n:
            raise ParseError(f"string {letters!r} has {len(letters)} letters, expected {n}", lineno, path)
        terms[letters] = terms.get(letters, 0.0) + coeff
    if n is None:
        raise ParseError("no Pauli terms found", None, path)
    return PauliObservable(n, terms), meta


def load_pauli_file(path: str | Path) -> tuple[PauliObservable, dict[str, str]]:
    path = Path(path)
    return parse_pauli_text(path.read_text(), str(path))


def format_pauli_text(P: PauliObservable, header: Iterable[str] = ()) -> str:
    lines = [h if h.startswith("#") else f"# {h}" for h in header]
    lines += [f"{c:.16e} {s}" for s, c in P.terms.items()]
    return "\n".join(lines) + "\n"
