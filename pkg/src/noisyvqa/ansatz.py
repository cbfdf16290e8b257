"""Hardware-efficient ansatz: layered single-qubit rotations plus CX entanglers.

One block = a rotation on every qubit followed by the entangler; the noise
channel acts on all wires once per block, after the entangler.  The optional
``initial_bits`` preparation (X gates) runs noise-free before block 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .density import (
    DensityMatrix,
    NoiseModel,
    _channel_all,
    _gate_on,
)
from .errors import DimensionMismatch, InvalidSize

MAX_QUBITS = 10
ROTATION_AXES = ("Y", "Z", "X", "XYZ")
ENTANGLERS = ("chain", "ring", "none")

# Generator of R_a(theta) = exp(-i theta sigma_a / 2) is sigma_a / 2: one
# non-zero Pauli coefficient of magnitude 1/2.
GENERATOR_TERMS = 1
GENERATOR_NORM_INF = 0.5


def rotation(axis: str, theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if axis == "Y":
        return np.array([[c, -s], [s, c]])
    if axis == "X":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if axis == "Z":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=complex)
    raise ValueError(f"unknown rotation axis {axis!r}")


_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_X_GATE = _PAULI["X"]


def _cx_permutation(n: int, edges) -> np.ndarray:
    perm = np.arange(1 << n)
    for control, target in edges:
        flip = ((perm >> control) & 1) << target
        perm = perm ^ flip
    return perm


@dataclass(frozen=True)
class AnsatzSpec:
    n: int
    blocks: int
    rotation_axis: str = "Y"
    entangler: str = "chain"
    initial_bits: str | None = None

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise InvalidSize(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n}")
        if self.blocks < 1:
            raise InvalidSize(f"block count must be >= 1, got {self.blocks}")
        if self.rotation_axis not in ROTATION_AXES:
            raise InvalidSize(f"rotation_axis must be one of {ROTATION_AXES}")
        if self.entangler not in ENTANGLERS:
            raise InvalidSize(f"entangler must be one of {ENTANGLERS}")
        if self.initial_bits is not None:
            if len(self.initial_bits) != self.n or set(self.initial_bits) - {"0", "1"}:
                raise InvalidSize(f"initial_bits must be a {self.n}-character bitstring")

    @property
    def parameter_count(self) -> int:
        return self.n * self.blocks

    def axis_of_block(self, block: int) -> str:
        if self.rotation_axis == "XYZ":
            return "XYZ"[block % 3]
        return self.rotation_axis

    def slot(self, index: int) -> tuple[int, int]:
        """(block, qubit) driven by parameter ``index``."""
        if not 0 <= index < self.parameter_count:
            raise IndexError(index)
        return divmod(index, self.n)

    @property
    def entangler_edges(self) -> list[tuple[int, int]]:
        if self.entangler == "none" or self.n == 1:
            return []
        edges = [(j, j + 1) for j in range(self.n - 1)]
        if self.entangler == "ring" and self.n > 2:
            edges.append((self.n - 1, 0))
        return edges

    @cached_property
    def _perm_inverse(self) -> np.ndarray:
        return np.argsort(_cx_permutation(self.n, self.entangler_edges))

    @property
    def generator_terms(self) -> int:
        return GENERATOR_TERMS

    @property
    def generator_norm_inf(self) -> float:
        return GENERATOR_NORM_INF

    def initial_state(self) -> DensityMatrix:
        return DensityMatrix.from_bits(self.initial_bits or "0" * self.n)

    def bind(self, theta) -> "BoundCircuit":
        return BoundCircuit(self, np.asarray(theta, dtype=float))


def build_hea(n: int, blocks: int, rotation_axis: str = "Y", entangler: str = "chain",
              initial_bits: str | None = None) -> AnsatzSpec:
    return AnsatzSpec(n, blocks, rotation_axis, entangler, initial_bits)


@dataclass(frozen=True, eq=False)
class BoundCircuit:
    spec: AnsatzSpec
    theta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if theta.size != self.spec.parameter_count:
            raise DimensionMismatch(
                f"theta has {theta.size} entries, ansatz needs {self.spec.parameter_count}")
        theta.flags.writeable = False
        object.__setattr__(self, "theta", theta)

    def shifted(self, index: int, delta: float) -> "BoundCircuit":
        theta = self.theta.copy()
        theta[index] += delta
        return BoundCircuit(self.spec, theta)

    def block_unitary(self, block: int) -> np.ndarray:
        """Dense unitary of one block (rotations then entangler)."""
        return _block_matrix(self.spec, self.theta, block)


def _prepare(spec: AnsatzSpec, rho: DensityMatrix) -> np.ndarray:
    data = rho.data
    if spec.initial_bits:
        for k, bit in enumerate(reversed(spec.initial_bits)):
            if bit == "1":
                data = _gate_on(data, spec.n, _X_GATE, k)
    return data


def _block_matrix(spec: AnsatzSpec, theta: np.ndarray, block: int) -> np.ndarray:
    axis = spec.axis_of_block(block)
    gates = [rotation(axis, theta[block * spec.n + q]) for q in reversed(range(spec.n))]
    U = reduce(np.kron, gates)
    if spec.n > 1 and spec.entangler != "none":
        U = U[spec._perm_inverse]
    return U


def _block(spec: AnsatzSpec, data: np.ndarray, theta: np.ndarray, block: int) -> np.ndarray:
    V = _block_matrix(spec, theta, block)
    return V @ data @ V.conj().T


def execute_noisy(c: BoundCircuit, nm: NoiseModel, input: DensityMatrix | None = None,
                  keep_trajectory: bool = True):
    """Run blocks alternating with the noise channel.

    Returns ``(rho_L, trajectory)`` where ``trajectory[l]`` is the state after
    block ``l + 1`` and its channel.  With ``keep_trajectory=False`` the list is
    empty.
    """
    spec = c.spec
    rho = spec.initial_state() if input is None else input
    if rho.n != spec.n:
        raise DimensionMismatch(f"{rho.n}-qubit input for a {spec.n}-qubit ansatz")
    data = _prepare(spec, rho)
    trajectory = []
    for block in range(spec.blocks):
        data = _block(spec, data, c.theta, block)
        if not nm.is_noiseless:
            data = _channel_all(data, spec.n, nm)
        if keep_trajectory:
            trajectory.append(DensityMatrix._wrap(data))
    out = DensityMatrix._wrap(data) if not keep_trajectory else trajectory[-1]
    return out, trajectory


def execute_noiseless(c: BoundCircuit, input: DensityMatrix | None = None) -> DensityMatrix:
    return execute_noisy(c, NoiseModel(), input, keep_trajectory=False)[0]


def final_state(c: BoundCircuit, nm: NoiseModel, input: DensityMatrix | None = None) -> DensityMatrix:
    return execute_noisy(c, nm, input, keep_trajectory=False)[0]
