"""Exact density-matrix simulation with local Pauli noise.

Qubit ``k`` is bit ``k`` of the computational-basis index (qubit 0 rightmost in
bitstrings).  Local operations reshape the 2^n x 2^n matrix so the qubit's
row/column bit is a separate axis and act on that axis only, which keeps a
single-qubit gate or channel at O(4^n).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConsistencyError,
    DimensionMismatch,
    DimensionOverflow,
    InvalidNoiseModel,
    NonUnitary,
    UnnormalizedTarget,
)
from .pauli import MAX_VECTOR_QUBITS, trace_coefficients

UNITARY_TOL = 1e-10
PROB_CLAMP = 1e-9


class DensityMatrix:
    """Immutable n-qubit density matrix.

    Construction only checks the shape; :meth:`check` verifies the physical
    invariants (Hermitian, unit trace, PSD) on demand because an eigen-solve per
    circuit evaluation would dominate the simulation cost.
    """

    __slots__ = ("data", "n")

    def __init__(self, data: np.ndarray):
        data = np.array(data)
        data = data.astype(complex if np.iscomplexobj(data) else float)
        dim = data.shape[0]
        if data.ndim != 2 or data.shape != (dim, dim) or dim < 2 or dim & (dim - 1):
            raise DimensionMismatch(f"density matrix must be 2^n x 2^n, got {data.shape}")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "n", dim.bit_length() - 1)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    def __repr__(self):
        return f"DensityMatrix(n={self.n})"

    @property
    def dim(self) -> int:
        return 1 << self.n

    @classmethod
    def _wrap(cls, data: np.ndarray) -> "DensityMatrix":
        # internal constructor: takes ownership without copying
        obj = object.__new__(cls)
        data.flags.writeable = False
        object.__setattr__(obj, "data", data)
        object.__setattr__(obj, "n", data.shape[0].bit_length() - 1)
        return obj

    @classmethod
    def basis_state(cls, n: int, index: int = 0) -> "DensityMatrix":
        data = np.zeros((1 << n, 1 << n))
        data[index, index] = 1.0
        return cls._wrap(data)

    @classmethod
    def from_bits(cls, bits: str) -> "DensityMatrix":
        """State |bits> with qubit 0 the rightmost character."""
        return cls.basis_state(len(bits), int(bits, 2))

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls._wrap(np.eye(1 << n) / (1 << n))

    @classmethod
    def from_statevector(cls, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls._wrap(np.outer(psi, psi.conj()))

    @classmethod
    def from_diagonal(cls, probs: np.ndarray) -> "DensityMatrix":
        return cls(np.diag(np.asarray(probs)))

    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def check(self, tol: float = 1e-10, eig_tol: float = 1e-9) -> None:
        """Raise ConsistencyError unless Hermitian, trace 1 and PSD."""
        herm = np.max(np.abs(self.data - self.data.conj().T))
        if herm > tol:
            raise ConsistencyError(f"not Hermitian: deviation {herm:.3e}")
        tr = np.trace(self.data)
        if abs(tr - 1) > tol:
            raise ConsistencyError(f"trace {tr} != 1")
        emin = np.linalg.eigvalsh(self.data).min()
        if emin < -eig_tol:
            raise ConsistencyError(f"negative eigenvalue {emin:.3e}")

    def is_valid(self, tol: float = 1e-10) -> bool:
        try:
            self.check(tol)
        except ConsistencyError:
            return False
        return True

    def to_json(self) -> str:
        """Row-major dump as nested [re, im] pairs."""
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in self.data]
        return json.dumps({"n": self.n, "data": rows})

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        obj = json.loads(text)
        arr = np.array(obj["data"], dtype=float)
        return cls(arr[..., 0] + 1j * arr[..., 1])


@dataclass(frozen=True)
class NoiseModel:
    """Uniform single-qubit Pauli channel applied to every wire."""

    q_x: float = 0.0
    q_y: float = 0.0
    q_z: float = 0.0

    def __post_init__(self):
        for name in ("q_x", "q_y", "q_z"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise InvalidNoiseModel(f"{name} must be a non-negative probability, got {v}")
        total = self.q_x + self.q_y + self.q_z
        if total > 1 + 1e-15:
            raise InvalidNoiseModel(f"q_x + q_y + q_z = {total} exceeds 1")

    @classmethod
    def uniform(cls, p: float) -> "NoiseModel":
        return cls(p, p, p)

    @property
    def is_noiseless(self) -> bool:
        return self.q_x == self.q_y == self.q_z == 0.0

    def contraction_factors(self) -> tuple[float, float, float]:
        """Multipliers applied to the X, Y, Z Pauli coefficients of one qubit."""
        qx, qy, qz = self.q_x, self.q_y, self.q_z
        return 1 - 2 * qy - 2 * qz, 1 - 2 * qx - 2 * qz, 1 - 2 * qx - 2 * qy

    @property
    def strength(self) -> float:
        return max(self.contraction_factors())

    @property
    def contraction(self) -> float:
        """Largest |factor|; equals ``strength`` unless some factor is negative."""
        return max(abs(f) for f in self.contraction_factors())


def noise_strength(nm: NoiseModel) -> float:
    return nm.strength


def _split(data: np.ndarray, n: int, k: int) -> np.ndarray:
    # axes: (row high, row bit k, row low, col high, col bit k, col low)
    hi, lo = 1 << (n - 1 - k), 1 << k
    return data.reshape(hi, 2, lo, hi, 2, lo)


def apply_single_qubit(rho: DensityMatrix, gate: np.ndarray, qubit: int) -> DensityMatrix:
    """G rho G^dagger for a 2x2 gate acting on one qubit."""
    n = rho.n
    if not 0 <= qubit < n:
        raise DimensionMismatch(f"qubit {qubit} out of range for {n} qubits")
    return DensityMatrix._wrap(_gate_on(rho.data, n, np.asarray(gate), qubit))


def _gate_on(data: np.ndarray, n: int, gate: np.ndarray, k: int) -> np.ndarray:
    dim = 1 << n
    hi, lo = 1 << (n - 1 - k), 1 << k
    if np.iscomplexobj(gate) and not np.any(gate.imag):
        gate = gate.real
    left = np.matmul(gate, data.reshape(hi, 2, lo * dim))
    right = np.matmul(gate.conj(), left.reshape(dim * hi, 2, lo))
    return right.reshape(dim, dim)


def apply_unitary(rho: DensityMatrix, U: np.ndarray, check: bool = True) -> DensityMatrix:
    U = np.asarray(U)
    if U.shape != rho.data.shape:
        raise DimensionMismatch(f"unitary of shape {U.shape} on {rho.n}-qubit state")
    if check:
        dev = np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0])))
        if dev > UNITARY_TOL:
            raise NonUnitary(f"max |U U^dagger - I| = {dev:.3e}")
    return DensityMatrix._wrap(U @ rho.data @ U.conj().T)


def apply_permutation(rho: DensityMatrix, perm: np.ndarray) -> DensityMatrix:
    """Apply the basis permutation |b> -> |perm[b]>."""
    inv = np.argsort(perm)
    return DensityMatrix._wrap(rho.data[np.ix_(inv, inv)])


def _channel_on(data: np.ndarray, n: int, nm: NoiseModel, k: int) -> np.ndarray:
    qx, qy, qz = nm.q_x, nm.q_y, nm.q_z
    t = _split(data, n, k)
    out = np.empty_like(t)
    keep_diag = 1 - qx - qy
    flip = qx + qy
    keep_off = 1 - qx - qy - 2 * qz
    swap_off = qx - qy
    r00, r11 = t[:, 0, :, :, 0, :], t[:, 1, :, :, 1, :]
    r01, r10 = t[:, 0, :, :, 1, :], t[:, 1, :, :, 0, :]
    out[:, 0, :, :, 0, :] = keep_diag * r00 + flip * r11
    out[:, 1, :, :, 1, :] = keep_diag * r11 + flip * r00
    out[:, 0, :, :, 1, :] = keep_off * r01 + swap_off * r10
    out[:, 1, :, :, 0, :] = keep_off * r10 + swap_off * r01
    return out.reshape(data.shape)


def _superoperator(nm: NoiseModel) -> np.ndarray:
    """4x4 action of the single-qubit channel on block entries (00, 01, 10, 11)."""
    qx, qy, qz = nm.q_x, nm.q_y, nm.q_z
    kd, f = 1 - qx - qy, qx + qy
    ko, so = 1 - qx - qy - 2 * qz, qx - qy
    return np.array([[kd, 0, 0, f], [0, ko, so, 0], [0, so, ko, 0], [f, 0, 0, kd]])


def _channel_all(data: np.ndarray, n: int, nm: NoiseModel) -> np.ndarray:
    """Channel on every qubit: interleave (row bit, col bit) per qubit into a
    size-4 axis and contract each axis with the 4x4 superoperator."""
    dim = 1 << n
    order = [ax for k in range(n) for ax in (k, n + k)]
    t = data.reshape((2,) * (2 * n)).transpose(order).reshape((4,) * n)
    S = _superoperator(nm)
    for k in range(n):
        t = np.matmul(S, t.reshape(4**k, 4, 4 ** (n - k - 1)))
    back = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return t.reshape((2,) * (2 * n)).transpose(back).reshape(dim, dim)


def apply_local_pauli_channel(rho: DensityMatrix, nm: NoiseModel, qubits=None) -> DensityMatrix:
    """Apply the Pauli channel independently to each listed qubit (default: all)."""
    if nm.is_noiseless:
        return rho
    if qubits is None:
        return DensityMatrix._wrap(_channel_all(rho.data, rho.n, nm))
    data = rho.data
    for k in qubits:
        data = _channel_on(data, rho.n, nm, k)
    return DensityMatrix._wrap(data)


def pauli_coefficients(rho: DensityMatrix) -> np.ndarray:
    """a_i = Tr(rho sigma_i) over the 4^n - 1 non-identity strings."""
    if rho.n > MAX_VECTOR_QUBITS:
        raise DimensionOverflow(f"{rho.n} qubits exceeds coefficient-vector cap {MAX_VECTOR_QUBITS}")
    return trace_coefficients(rho.data)[1:].real


def basis_probabilities(rho: DensityMatrix) -> np.ndarray:
    p = np.diagonal(rho.data).real.copy()
    low = p.min()
    if low < -PROB_CLAMP:
        raise ConsistencyError(f"probability {low:.3e} is negative beyond numerical noise")
    p[p < 0] = 0.0
    return p


def fidelity_to_pure(rho: DensityMatrix, target: np.ndarray) -> float:
    """<psi| rho |psi> for a normalized pure target."""
    psi = np.asarray(target, dtype=complex).reshape(-1)
    if psi.size != rho.dim:
        raise DimensionMismatch(f"target of length {psi.size} for {rho.n} qubits")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-10:
        raise UnnormalizedTarget(f"target norm {norm}")
    f = float(np.real(psi.conj() @ rho.data @ psi))
    return min(max(f, 0.0), 1.0)
