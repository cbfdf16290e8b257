import numpy as np
import pytest

from noisyvqa.ansatz import build_hea, execute_noiseless
from noisyvqa.costs import CostKind
from noisyvqa.density import DensityMatrix, NoiseModel
from noisyvqa.errors import WrongBenchmarkKind
from noisyvqa.problems import encode_maxcut, load_benchmark, parse_vqe_text
from noisyvqa.theory import toy_problems
from noisyvqa.trainer import (
    CSV_COLUMNS,
    TrainConfig,
    default_ansatz,
    gradient_norm_survey,
    initial_parameters,
    metric,
    parameter_quality,
    success_rate,
    train,
)

NOISELESS = NoiseModel()


@pytest.fixture(scope="module")
def toy_z():
    return toy_problems()[0]


@pytest.fixture(scope="module")
def path2():
    return encode_maxcut((2, [(0, 1)]))


def test_toy_converges_on_c2reg(toy_z):
    P, A = toy_z
    rec = train(P, A, NOISELESS, TrainConfig(iterations=200, cost=CostKind("c2reg"), seed=0))
    assert rec.aborted is None
    assert rec.final_c1 == pytest.approx(-1.0, abs=1e-3)
    assert parameter_quality(rec.theta_final, A, P) == pytest.approx(1.0, abs=1e-3)


def test_zero_learning_rate_keeps_theta(path2):
    A = default_ansatz(path2, blocks=2)
    rec = train(path2, A, NoiseModel.uniform(0.03), TrainConfig(iterations=5, lr0=0.0, cost=CostKind("c1")))
    assert np.array_equal(rec.theta_final, rec.theta_init)
    c1 = [r[1] for r in rec.rows]
    assert len(set(c1)) == 1
    assert len(set(rec.theta_hashes)) == 1


def test_record_shape_and_csv(path2):
    A = default_ansatz(path2, blocks=2)
    rec = train(path2, A, NoiseModel.uniform(0.03), TrainConfig(iterations=4, cost=CostKind("c2reg", 0.1, 0.7)))
    assert [r[0] for r in rec.rows] == list(range(5))
    assert rec.rows[-1][3] == 0.0
    lines = rec.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 6
    s = rec.summary()
    assert s["iterations_completed"] == 5 and s["aborted"] is None


def test_deterministic_per_seed(path2):
    A = default_ansatz(path2, blocks=2)
    cfg = TrainConfig(iterations=6, seed=3, cost=CostKind("c2reg", 0.1, 0.7))
    a = train(path2, A, NoiseModel.uniform(0.03), cfg)
    b = train(path2, A, NoiseModel.uniform(0.03), cfg)
    assert a.to_csv() == b.to_csv()
    assert a.theta_hashes == b.theta_hashes
    c = train(path2, A, NoiseModel.uniform(0.03), TrainConfig(iterations=6, seed=4, cost=cfg.cost))
    assert c.theta_hashes[0] != a.theta_hashes[0]


def test_paired_runs_share_initial_theta():
    P = load_benchmark("qaoa-mc")
    A = default_ansatz(P)
    nm = NoiseModel.uniform(0.03)
    t1, n1 = initial_parameters(A, nm, P, TrainConfig(seed=1, cost=CostKind("c1")))
    t2, n2 = initial_parameters(A, nm, P, TrainConfig(seed=1, cost=CostKind("c2reg")))
    assert np.array_equal(t1, t2) and n1 == n2


def test_threads_do_not_change_results(path2):
    A = default_ansatz(path2, blocks=2)
    cfg = TrainConfig(iterations=3, seed=0, cost=CostKind("c1"))
    a = train(path2, A, NoiseModel.uniform(0.03), cfg)
    b = train(path2, A, NoiseModel.uniform(0.03), TrainConfig(iterations=3, seed=0, cost=CostKind("c1"), workers=2))
    assert a.to_csv() == b.to_csv()


def test_raw_c2_singularity_aborts_with_partial_record():
    # C2raw from an init that puts the weight at exactly k2
    P = encode_maxcut((2, [(0, 1)]))
    A = build_hea(2, 1, entangler="none")
    theta0 = np.array([np.pi / 2, 0.0])  # qubit 0 in |+>: weight 1/2 = k2
    rec = train(P, A, NOISELESS, TrainConfig(iterations=3, cost=CostKind("c2raw")), theta0=theta0)
    assert rec.aborted is not None
    assert len(rec.rows) >= 1


def test_success_rate_examples(path2):
    assert success_rate(DensityMatrix.basis_state(2, 1), path2) == 1.0
    assert success_rate(DensityMatrix.maximally_mixed(2), path2) == pytest.approx(0.25)
    rho = DensityMatrix.from_diagonal([0, 0.6, 0.4, 0])
    assert success_rate(rho, path2) == pytest.approx(0.6)
    with pytest.raises(WrongBenchmarkKind):
        success_rate(rho, load_benchmark("vqe-h2"))


def test_parameter_quality_is_noiseless_metric(path2, rng):
    A = default_ansatz(path2, blocks=2)
    theta = rng.uniform(0, 2 * np.pi, A.parameter_count)
    assert parameter_quality(theta, A, path2) == success_rate(execute_noiseless(A.bind(theta)), path2)


def test_vqe_toy_fidelity():
    P = parse_vqe_text("1.0 Z\n")
    A = build_hea(1, 1)
    assert parameter_quality([np.pi], A, P) == pytest.approx(1.0)
    assert metric(DensityMatrix.basis_state(1, 1), P) == pytest.approx(1.0)


def test_survey_control_ratio_is_one(path2):
    A = default_ansatz(path2, blocks=2)
    res = gradient_norm_survey(path2, A, NOISELESS, samples=5, kinds=(CostKind("c1"), CostKind("c1")))
    assert res.applicable
    assert res.mean_ratio == pytest.approx(1.0)
    assert len(res.to_csv().splitlines()) == 6


def test_survey_full_space_inapplicable(toy_z):
    P, A = toy_z
    res = gradient_norm_survey(P, A, NOISELESS, samples=5)
    assert not res.applicable
    assert "undefined" in res.inapplicable_reason


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(iterations=0)
    with pytest.raises(ValueError):
        TrainConfig(lr0=-1)
    with pytest.raises(ValueError):
        TrainConfig(init="normal")
    cfg = TrainConfig(iterations=10, lr0=0.5)
    assert cfg.lr(0) == 0.5 and cfg.lr(5) == 0.25
