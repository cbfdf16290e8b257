import math

import numpy as np
import pytest

from noisyvqa.ansatz import build_hea
from noisyvqa.costs import eval_c1, eval_c2
from noisyvqa.density import DensityMatrix, NoiseModel
from noisyvqa.problems import load_benchmark
from noisyvqa.theory import (
    ALL_CLAIMS,
    BoundReport,
    check_amplification,
    check_c1_identity,
    check_gradient_bound_c0,
    check_gradient_bound_c1,
    check_gradient_crossval,
    check_singularity_profile,
    check_solution_space,
    check_state_decay,
    check_surrogate_convergence,
    check_traceless_derivative,
    crafted_state,
    default_m_grid,
    example_observables,
    lemma21_bound,
    run_claim,
    singular_profile,
    theorem31_constants,
)

NM = NoiseModel.uniform(0.03)


def test_report_bookkeeping():
    rep = BoundReport("x")
    assert not rep.passed  # vacuous
    rep.record(0.5)
    rep.record(-1e-12)
    assert rep.passed and rep.applicable == 2
    rep.record(-1.0)
    assert rep.violations == 1 and not rep.passed
    d = rep.to_dict()
    assert d["min_slack"] == -1.0 and "slacks" not in d


def test_state_decay_noiseless_and_mixed():
    rep = check_state_decay(build_hea(3, 3), NoiseModel(), 5)
    assert rep.passed and rep.min_slack >= -1e-12
    rep = check_state_decay(build_hea(3, 3), NM, 3, input=DensityMatrix.maximally_mixed(3))
    assert rep.passed
    # a = 0 at every layer, so slack equals the bound itself
    assert rep.min_slack == pytest.approx(0.88**3 * math.sqrt(7))


def test_state_decay_4_qubits():
    assert check_state_decay(build_hea(4, 5), NM, 100).violations == 0


def test_gradient_bound_c0():
    assert lemma21_bound(2, 1.0, 3) == pytest.approx(math.sqrt(6) / 2)
    rep = check_gradient_bound_c0(build_hea(4, 5), NM, 10)
    assert rep.passed and rep.applicable == 200


def test_gradient_bound_c1_mc():
    T = load_benchmark("qaoa-mc").truncated
    rep = check_gradient_bound_c1(build_hea(4, 5), NM, T, 20)
    assert rep.violations == 0
    assert rep.applicable + rep.inapplicable == 20


def test_theorem31_constants_mc():
    T = load_benchmark("qaoa-mc").truncated
    c = theorem31_constants(T, 4, 0.88, 0.1)
    assert c["L0"] == 12
    assert c["s"] == pytest.approx(0.00213, rel=1e-2)
    rep = check_amplification(build_hea(4, 5), NM, T, 3)
    assert rep.applicable == 0 and rep.inapplicable == 3  # L too shallow


def test_amplification_deep_circuit():
    T = load_benchmark("qaoa-mc").truncated
    rep = check_amplification(build_hea(4, 26), NM, T, 5, params_per_sample=2)
    assert rep.violations == 0 and rep.applicable >= 1


def test_singularity_profile():
    T = example_observables()
    rep = check_singularity_profile(T)
    assert rep.passed and rep.applicable == 50
    m = T.k2 + 1e-6
    c2 = eval_c2(crafted_state(T, m), T)
    assert c2 < -1e4
    assert c2 == pytest.approx(singular_profile(T, m), rel=1e-9)
    grid = default_m_grid(T)
    assert grid.min() == pytest.approx(T.k2 + 1e-6) and grid.max() == pytest.approx(1.0)


def test_solution_space_examples(rng):
    T = example_observables()
    assert eval_c1(DensityMatrix.basis_state(2, T.argmin_index), T) == pytest.approx(T.lambda_min_S)
    mix = DensityMatrix.from_diagonal([0, 0.5, 0, 0.5])
    assert eval_c1(mix, T) == pytest.approx(0.2)
    rep = check_solution_space(T, 10)
    assert rep.passed
    assert all(abs(s) <= 1e-10 + 1e-10 for s in rep.slacks)


def test_traceless_derivative_noise_independent():
    A = build_hea(3, 2)
    a = check_traceless_derivative(A, NM, 1)
    b = check_traceless_derivative(A, NoiseModel(), 1)
    assert a.passed and b.passed


def test_c1_identity_and_crossval_small():
    assert check_c1_identity(50).passed
    rep = check_gradient_crossval(10)
    assert rep.violations == 0


def test_surrogate_convergence():
    rep = check_surrogate_convergence(seeds=(0,))
    assert rep.passed and rep.applicable == 2


def test_run_claim_dispatch():
    assert set(ALL_CLAIMS) >= {"lemma2.1", "lemma2.2", "prop3.2", "theorem3.1", "prop3.5", "prop3.6",
                               "lemmaA.1", "prop3.3", "gradients", "theorem3.2"}
    with pytest.raises(KeyError):
        run_claim("lemma9.9")
    assert run_claim("prop3.5").passed
    assert run_claim("lemma2.2", samples=5).passed
