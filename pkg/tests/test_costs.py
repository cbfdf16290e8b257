import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from noisyvqa.ansatz import build_hea, final_state
from noisyvqa.costs import (
    CostKind,
    analytic_grad_c1,
    analytic_grad_c2,
    analytic_gradients,
    auto_beta,
    c2_parts,
    clip_gradient,
    eval_c0,
    eval_c1,
    eval_c2,
    evaluate,
    grad_c1_from_coefficients,
    grad_central_difference,
)
from noisyvqa.density import DensityMatrix, NoiseModel, pauli_coefficients
from noisyvqa.errors import SingularDenominator, VanishingSubspaceWeight
from noisyvqa.pauli import PauliObservable
from noisyvqa.problems import load_benchmark
from noisyvqa.subspace import Subspace, build_truncated_observables
from noisyvqa.theory import example_observables, random_density, random_hermitian, random_subspace

EXAMPLE_STATE = DensityMatrix.from_diagonal([0.7, 0.04, 0.0, 0.26])
SINGULAR_STATE = DensityMatrix.from_diagonal([0.5, 0.5, 0.0, 0.0])


@pytest.fixture
def T():
    return example_observables()


# -- spec examples --------------------------------------------------------


def test_c0_examples(T):
    O = np.diag([0.8, 0.0, 0.0, 0.2])
    assert eval_c0(DensityMatrix.basis_state(2, 3), O) == pytest.approx(0.2)
    assert eval_c0(DensityMatrix.maximally_mixed(2), O) == pytest.approx(0.25)
    assert eval_c0(EXAMPLE_STATE, T.O1) == pytest.approx(0.612)


def test_c1_examples(T):
    assert eval_c1(EXAMPLE_STATE, T) == pytest.approx(0.6375)
    assert eval_c1(DensityMatrix.basis_state(2, T.argmin_index), T) == pytest.approx(T.lambda_min_S)
    assert eval_c1(DensityMatrix.maximally_mixed(2), T) == pytest.approx(0.5)


def test_c1_vanishing_weight(T):
    with pytest.raises(VanishingSubspaceWeight):
        eval_c1(DensityMatrix.basis_state(2, 1), T)


def test_c2_examples(T):
    assert eval_c2(EXAMPLE_STATE, T) == pytest.approx(0.362 / 0.46)
    assert eval_c2(EXAMPLE_STATE, T) == pytest.approx(0.786957, abs=1e-6)
    with pytest.raises(SingularDenominator):
        eval_c2(SINGULAR_STATE, T, CostKind("c2raw"))
    assert eval_c2(SINGULAR_STATE, T, CostKind("c2reg", 0.1, 0.0)) == pytest.approx(1.5)


def test_evaluate_dispatch(T):
    assert evaluate(EXAMPLE_STATE, CostKind("c1"), T) == eval_c1(EXAMPLE_STATE, T)
    assert evaluate(EXAMPLE_STATE, CostKind("c0"), T, T.O1) == eval_c0(EXAMPLE_STATE, T.O1)
    with pytest.raises(ValueError):
        evaluate(EXAMPLE_STATE, CostKind("c0"), T)


def test_cost_kind_validation():
    with pytest.raises(ValueError):
        CostKind("c3")
    with pytest.raises(ValueError):
        CostKind("c2reg", alpha=0.0)
    with pytest.raises(ValueError):
        CostKind("c2reg", beta=-1.0)


def test_central_difference_examples():
    res = grad_central_difference(lambda th: 3.0, np.zeros(4))
    assert np.array_equal(res.grad, np.zeros(4))
    assert res.evaluations == 8
    for eps in (1e-1, 1e-2, 0.5):
        assert grad_central_difference(lambda th: th[0] ** 2, np.array([1.0]), eps).grad[0] == pytest.approx(2.0,
                                                                                                              abs=1e-12)
    with pytest.raises(ValueError):
        grad_central_difference(lambda th: 0.0, np.zeros(1), eps=0)


def test_central_difference_reports_component(T):
    def f(theta):
        if theta[1] > 0.05:
            raise SingularDenominator("boom")
        return 0.0

    with pytest.raises(SingularDenominator) as exc:
        grad_central_difference(f, np.zeros(3), eps=0.1)
    assert exc.value.component == 1


def test_clip_examples():
    assert np.array_equal(clip_gradient([0.1, -0.2], 1), [0.1, -0.2])
    assert np.allclose(clip_gradient([3, -4], 1), [0.75, -1.0])
    assert np.array_equal(clip_gradient(np.zeros(3), 1), np.zeros(3))


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=20), st.floats(1e-3, 10))
def test_clip_properties(g, thr):
    g = np.array(g)
    c = clip_gradient(g, thr)
    assert np.max(np.abs(c)) <= thr * (1 + 1e-12)
    # direction preserved: c is a non-negative multiple of g
    assert np.allclose(c, g * (np.dot(c, g) / np.dot(g, g)) if np.dot(g, g) > 0 else c)


# -- gradients ------------------------------------------------------------------


def test_analytic_gradient_stationary_point():
    # noise-free |00> with theta = 0 is a stationary point of a ZZ + Z cost on {00, 11}
    T = build_truncated_observables(PauliObservable(2, {"ZZ": 1.0, "IZ": 0.5}), Subspace(2, np.array([0, 3])))
    A = build_hea(2, 2)
    c = A.bind(np.zeros(A.parameter_count))
    for k in range(A.parameter_count):
        assert abs(analytic_grad_c1(c, NoiseModel(), T, k)) < 1e-9


def test_decohered_limit_has_zero_gradient():
    a = np.zeros(15)
    g = np.zeros(15)
    T = example_observables()
    assert grad_c1_from_coefficients(a, g, T) == 0.0


def test_analytic_matches_central_difference(rng):
    T = example_observables()
    A = build_hea(2, 3)
    nm = NoiseModel.uniform(0.02)
    theta = rng.uniform(0, 2 * np.pi, A.parameter_count)
    fd1 = grad_central_difference(lambda th: eval_c1(final_state(A.bind(th), nm), T), theta, 1e-4).grad
    d1, d2 = analytic_gradients(A.bind(theta), nm, T)
    assert np.allclose(d1, fd1, atol=1e-6)
    if abs(c2_parts(final_state(A.bind(theta), nm), T)[1]) > 0.1:
        fd2 = grad_central_difference(lambda th: eval_c2(final_state(A.bind(th), nm), T), theta, 1e-4).grad
        assert np.allclose(d2, fd2, atol=1e-6)
        assert analytic_grad_c2(A.bind(theta), nm, T, 0) == pytest.approx(d2[0])


# -- auto beta ---------------------------------------------------------------


def test_auto_beta_values():
    expected = {"qaoa-mc": 0.7, "qaoa-vc": 9.35, "vqe-h2": 0.383}
    for name, beta in expected.items():
        assert auto_beta(load_benchmark(name).truncated, 0.1) == pytest.approx(beta, abs=5e-3)


def test_auto_beta_makes_leaving_s_costly():
    # along weight m on the argmin (rest outside S), C2reg must decrease in m
    # on the branch m > k2 - alpha that training starts from
    for name in ("qaoa-mc", "qaoa-vc", "vqe-h2"):
        T = load_benchmark(name).truncated
        kind = CostKind("c2reg", 0.1, auto_beta(T, 0.1))
        lam = T.lambda_min_S
        m = np.linspace(T.k2, 1, 20)
        vals = (lam * m - T.k1 + kind.beta) / (m - T.k2 + kind.alpha)
        assert np.all(np.diff(vals) < 0)


# -- properties -------------------------------------------------------------


@given(st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_c1_pauli_form(n, seed):
    rng = np.random.default_rng(seed)
    T = build_truncated_observables(random_hermitian(n, rng), random_subspace(n, rng, proper=False))
    rho = random_density(n, rng)
    a = pauli_coefficients(rho)
    num = T.k1 + a @ T.w1
    den = T.k2 + a @ T.w2
    assert eval_c1(rho, T) == pytest.approx(num / den, abs=1e-10)


@given(st.integers(1, 3), st.integers(0, 2**31 - 1), st.floats(0.01, 1), st.floats(0, 2))
def test_c2reg_is_shifted_c1_ratio(n, seed, alpha, beta):
    rng = np.random.default_rng(seed)
    T = build_truncated_observables(random_hermitian(n, rng), random_subspace(n, rng))
    rho = random_density(n, rng)
    den = T.trace_o2(rho) - T.k2 + alpha
    if abs(den) < 1e-6:
        return
    expected = (T.trace_o1(rho) - T.k1 + beta) / den
    assert eval_c2(rho, T, CostKind("c2reg", alpha, beta)) == pytest.approx(expected, rel=1e-9, abs=1e-9)


@given(st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_c1_within_spectrum(n, seed):
    rng = np.random.default_rng(seed)
    T = build_truncated_observables(random_hermitian(n, rng), random_subspace(n, rng, proper=False))
    rho = random_density(n, rng)
    c1 = eval_c1(rho, T)
    assert T.lambda_min_S - 1e-9 <= c1 <= T.lambda_max_S + 1e-9
