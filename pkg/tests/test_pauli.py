import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from noisyvqa.errors import DimensionMismatch, NonHermitian, ParseError
from noisyvqa.pauli import (
    PauliObservable,
    decompose,
    index_string,
    load_pauli_file,
    materialize,
    parse_pauli_text,
    pauli_inner,
    rank,
    string_index,
)

PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]),
}


def kron_string(s):
    m = np.array([[1.0]])
    for ch in s:
        m = np.kron(m, PAULI[ch])
    return m


def brute_decompose(H):
    n = H.shape[0].bit_length() - 1
    out = {}
    for letters in itertools.product("IXYZ", repeat=n):
        s = "".join(letters)
        c = np.trace(kron_string(s) @ H).real / H.shape[0]
        if abs(c) > 1e-12:
            out[s] = c
    return out


def random_observable(n, rng, terms=6):
    strings = {index_string(int(i), n) for i in rng.integers(0, 4**n, terms)}
    return PauliObservable(n, {s: float(rng.normal()) for s in strings})


# -- spec examples --------------------------------------------------------


def test_decompose_identity():
    P = decompose(np.eye(4))
    assert dict(P.terms) == {"II": 1.0}


def test_decompose_z():
    P = decompose(np.diag([1.0, -1.0]))
    assert dict(P.terms) == {"Z": 1.0}
    assert P.identity_coefficient == 0.0


def test_decompose_projector_matches_brute_force():
    H = np.diag([1.0, 0, 0, 1.0])
    P = decompose(H)
    assert P.allclose(PauliObservable(2, {"II": 0.5, "ZZ": 0.5}))
    assert P.allclose(PauliObservable(2, brute_decompose(H)))


def test_materialize_examples():
    assert np.allclose(materialize(PauliObservable(1, {"Z": 1.0})), np.diag([1, -1]))
    assert np.allclose(materialize(PauliObservable(2, {"II": 0.5, "ZZ": 0.5})), np.diag([1, 0, 0, 1]))
    assert np.allclose(materialize(PauliObservable(2, {})), np.zeros((4, 4)))


def test_rank_examples():
    assert rank(PauliObservable(1, {"Z": 1.0})) == 1
    assert rank(PauliObservable(2, {"II": 0.5, "ZZ": 0.5})) == 2
    assert rank(PauliObservable(3, {})) == 0


def test_pauli_inner_examples(rng):
    w = rng.normal(size=15)
    assert pauli_inner(np.zeros(15), w) == 0.0
    assert pauli_inner(w, w) == pytest.approx(np.sum(w**2))
    with pytest.raises(DimensionMismatch):
        pauli_inner(np.zeros(3), np.zeros(15))


# -- conventions ------------------------------------------------------------


def test_qubit_zero_is_rightmost():
    # Z on qubit 0 flips sign on odd basis indices
    assert np.allclose(PauliObservable(2, {"IZ": 1.0}).diagonal(), [1, -1, 1, -1])
    assert np.allclose(PauliObservable(2, {"ZI": 1.0}).diagonal(), [1, 1, -1, -1])


def test_string_index_round_trip():
    for i in range(4**3):
        assert string_index(index_string(i, 3)) == i
    assert string_index("ZI") == 12


def test_materialize_matches_kron(rng):
    for n in (1, 2, 3):
        P = random_observable(n, rng)
        dense = sum(c * kron_string(s) for s, c in P.terms.items())
        assert np.allclose(materialize(P), dense, atol=1e-12)


def test_dense_path_matches_sparse_path(rng):
    # many terms triggers the vector route
    P = random_observable(2, rng, terms=40)
    vec = P.to_vector()
    dense = sum(vec[i] * kron_string(index_string(i, 2)) for i in range(16))
    assert np.allclose(materialize(P), dense)


def test_diagonal_without_materializing(rng):
    P = PauliObservable(3, {"ZIZ": 0.3, "IZI": -1.2, "III": 0.5, "XII": 2.0})
    assert np.allclose(P.diagonal(), np.diagonal(materialize(P)).real)


def test_non_hermitian_rejected():
    with pytest.raises(NonHermitian):
        decompose(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NonHermitian):
        PauliObservable(1, {"X": 1 + 1j})


def test_bad_shapes_rejected():
    with pytest.raises(DimensionMismatch):
        decompose(np.eye(3))
    with pytest.raises(ValueError):
        PauliObservable(2, {"XYZ": 1.0})


def test_arithmetic_and_traceless():
    A = PauliObservable(2, {"II": 1.0, "XZ": 2.0})
    B = PauliObservable(2, {"XZ": -2.0, "ZZ": 1.0})
    assert dict((A + B).terms) == {"II": 1.0, "ZZ": 1.0}
    assert dict(A.traceless().terms) == {"XZ": 2.0}
    assert A.shifted(-1.0) == PauliObservable(2, {"XZ": 2.0})
    assert (2 * A).coefficient("XZ") == 4.0


# -- text format ------------------------------------------------------------


def test_text_round_trip(tmp_path, rng):
    P = random_observable(3, rng)
    path = tmp_path / "h.txt"
    path.write_text(P.to_text(["energy=-1.5 electrons=2"]))
    Q, meta = load_pauli_file(path)
    assert Q == P
    assert meta == {"energy": "-1.5", "electrons": "2"}


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_pauli_text("1.0 ZZ\nabc ZZ\n", "bad.txt")
    assert exc.value.line == 2
    assert "bad.txt" in str(exc.value)


def test_parse_rejects_mixed_lengths():
    with pytest.raises(ParseError):
        parse_pauli_text("1.0 ZZ\n0.5 Z\n")


# -- properties -------------------------------------------------------------


@st.composite
def hermitian(draw, max_qubits=3):
    n = draw(st.integers(1, max_qubits))
    dim = 1 << n
    vals = draw(st.lists(st.floats(-5, 5), min_size=2 * dim * dim, max_size=2 * dim * dim))
    A = np.array(vals[: dim * dim]).reshape(dim, dim) + 1j * np.array(vals[dim * dim:]).reshape(dim, dim)
    return (A + A.conj().T) / 2


@given(hermitian())
def test_decompose_materialize_round_trip(H):
    assert np.allclose(materialize(decompose(H)), H, atol=1e-10)


@given(hermitian(max_qubits=2))
def test_decompose_matches_brute_force(H):
    P = decompose(H)
    assert P.allclose(PauliObservable(P.n, brute_decompose(H)), atol=1e-10)


@given(hermitian(), hermitian())
def test_trace_identity(H, K):
    # Tr(HK) = 2^n sum of coefficient products
    if H.shape != K.shape:
        return
    a, b = decompose(H).to_vector(), decompose(K).to_vector()
    assert np.trace(H @ K).real == pytest.approx(H.shape[0] * pauli_inner(a, b), abs=1e-8)


@given(hermitian())
def test_identity_coefficient_is_normalized_trace(H):
    P = decompose(H)
    assert P.identity_coefficient == pytest.approx(np.trace(H).real / H.shape[0], abs=1e-12)
