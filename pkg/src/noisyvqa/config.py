"""Run configuration: TOML files resolved into validated objects.

A config file has the sections ``benchmark``, ``ansatz``, ``noise``, ``cost``,
``train``, ``run`` and optionally ``survey``.  Every section is optional; a
missing field takes the benchmark's default.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import tomli

from .ansatz import ENTANGLERS, ROTATION_AXES, AnsatzSpec
from .costs import TRAIN_EPS, VARIANTS, CostKind, auto_beta
from .density import NoiseModel
from .errors import ConfigError, InvalidNoiseModel, NoisyVQAError
from .problems import BENCHMARKS, ProblemInstance, load_benchmark
from .trainer import TrainConfig

SECTIONS = {
    "benchmark": {"name", "instance"},
    "ansatz": {"blocks", "rotation_axis", "entangler", "initial_bits"},
    "noise": {"q_x", "q_y", "q_z"},
    "cost": {"kind", "compare", "alpha", "beta", "fd_eps", "clip_threshold"},
    "train": {"iterations", "lr0", "init"},
    "run": {"seeds", "out", "parallel"},
    "survey": {"samples", "seed", "costs"},
}


@dataclass
class RunConfig:
    benchmark: str
    instance: str | None
    problem: ProblemInstance
    ansatz: AnsatzSpec
    noise: NoiseModel
    costs: tuple[CostKind, ...]
    train: TrainConfig  # cost and seed are filled in per run
    seeds: tuple[int, ...]
    out: str
    parallel: int
    survey_samples: int
    survey_seed: int
    survey_costs: tuple[CostKind, ...]
    raw: dict = field(default_factory=dict)
    source: str | None = None

    @property
    def config_hash(self) -> str:
        """Hash of the resolved settings that change results; seeds, output
        path and parallelism are left out so per-run files stay valid."""
        plan = self.plan()
        for key in ("seeds", "out", "parallel", "runs"):
            plan.pop(key)
        return config_hash(plan)

    def run_config(self, cost: CostKind, seed: int) -> TrainConfig:
        t = self.train
        return TrainConfig(iterations=t.iterations, lr0=t.lr0, clip_threshold=t.clip_threshold,
                           cost=cost, seed=seed, init=t.init, fd_eps=t.fd_eps)

    def plan(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "instance": self.instance,
            "kind": self.problem.kind,
            "n": self.problem.n,
            "subspace": self.problem.subspace.origin,
            "subspace_dim": self.problem.subspace.dim,
            "shift": self.problem.shift,
            "ansatz": {"blocks": self.ansatz.blocks, "rotation_axis": self.ansatz.rotation_axis,
                       "entangler": self.ansatz.entangler, "initial_bits": self.ansatz.initial_bits,
                       "parameters": self.ansatz.parameter_count},
            "noise": {"q_x": self.noise.q_x, "q_y": self.noise.q_y, "q_z": self.noise.q_z,
                      "strength": self.noise.strength},
            "costs": [cost_dict(c) for c in self.costs],
            "train": {"iterations": self.train.iterations, "lr0": self.train.lr0,
                      "clip_threshold": self.train.clip_threshold, "fd_eps": self.train.fd_eps,
                      "init": self.train.init},
            "seeds": list(self.seeds),
            "out": self.out,
            "parallel": self.parallel,
            "runs": [f"{c.variant}-seed{s}" for c in self.costs for s in self.seeds],
        }


def cost_dict(c: CostKind) -> dict:
    d = {"variant": c.variant}
    if c.variant == "c2reg":
        d.update(alpha=c.alpha, beta=c.beta)
    return d


def config_hash(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _get(sec: dict, key: str, typ, section: str, default):
    if key not in sec:
        return default
    v = sec[key]
    if typ is float and isinstance(v, int) and not isinstance(v, bool):
        v = float(v)
    if not isinstance(v, typ) or isinstance(v, bool) and typ is not bool:
        raise ConfigError(f"{section}.{key} must be {typ.__name__}, got {v!r}", field=f"{section}.{key}")
    return v


def _cost(name: str, alpha: float, beta, problem: ProblemInstance, fieldname: str) -> CostKind:
    if name not in VARIANTS:
        raise ConfigError(f"unknown cost {name!r}; valid: {', '.join(VARIANTS)}", field=fieldname)
    if name != "c2reg":
        return CostKind(name)
    if beta == "auto":
        beta = auto_beta(problem.truncated, alpha)
    try:
        return CostKind("c2reg", alpha, float(beta))
    except ValueError as exc:
        raise ConfigError(str(exc), field="cost.alpha" if "alpha" in str(exc) else "cost.beta") from None


def parse_config(text: str, source: str | None = None, base_dir: Path | None = None) -> RunConfig:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{source or 'config'}: {exc}") from None
    return resolve_config(raw, source, base_dir)


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path), path.parent)


def resolve_config(raw: dict, source: str | None = None, base_dir: Path | None = None) -> RunConfig:
    for section, value in raw.items():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]; valid: {', '.join(SECTIONS)}", field=section)
        if not isinstance(value, dict):
            raise ConfigError(f"[{section}] must be a table", field=section)
        extra = set(value) - SECTIONS[section]
        if extra:
            key = sorted(extra)[0]
            raise ConfigError(f"unknown field {section}.{key}", field=f"{section}.{key}")
    b = raw.get("benchmark", {})
    name = _get(b, "name", str, "benchmark", None)
    if name is None:
        raise ConfigError("benchmark.name is required", field="benchmark.name")
    if name not in BENCHMARKS:
        raise ConfigError(f"unknown benchmark {name!r}; valid: {', '.join(BENCHMARKS)}", field="benchmark.name")
    instance = _get(b, "instance", str, "benchmark", None)
    if instance is not None:
        ipath = Path(instance)
        if not ipath.is_absolute() and base_dir is not None:
            ipath = base_dir / ipath
        if not ipath.exists():
            raise ConfigError(f"instance file {instance} does not exist", field="benchmark.instance")
        instance = str(ipath)
    try:
        problem = load_benchmark(name, instance)
    except NoisyVQAError as exc:
        raise ConfigError(f"cannot build benchmark: {exc}", field="benchmark.instance") from None
    _, default_blocks, default_q = BENCHMARKS[name]

    a = raw.get("ansatz", {})
    blocks = _get(a, "blocks", int, "ansatz", default_blocks)
    axis = _get(a, "rotation_axis", str, "ansatz", "Y")
    ent = _get(a, "entangler", str, "ansatz", "chain")
    bits = _get(a, "initial_bits", str, "ansatz", problem.initial_bits)
    if blocks < 1:
        raise ConfigError("ansatz.blocks must be >= 1", field="ansatz.blocks")
    if axis not in ROTATION_AXES:
        raise ConfigError(f"ansatz.rotation_axis must be one of {ROTATION_AXES}", field="ansatz.rotation_axis")
    if ent not in ENTANGLERS:
        raise ConfigError(f"ansatz.entangler must be one of {ENTANGLERS}", field="ansatz.entangler")
    if bits is not None and (len(bits) != problem.n or set(bits) - {"0", "1"}):
        raise ConfigError(f"ansatz.initial_bits must be a {problem.n}-character bitstring",
                          field="ansatz.initial_bits")
    ansatz = AnsatzSpec(problem.n, blocks, axis, ent, bits)

    nz = raw.get("noise", {})
    qs = {k: _get(nz, k, float, "noise", default_q) for k in ("q_x", "q_y", "q_z")}
    for k, v in qs.items():
        if not 0 <= v <= 1:
            raise ConfigError(f"noise.{k} = {v} outside [0, 1]", field=f"noise.{k}")
    if sum(qs.values()) > 1:
        raise ConfigError(f"noise.q_x + noise.q_y + noise.q_z = {sum(qs.values())} exceeds 1",
                          field="noise.q_x+q_y+q_z")
    try:
        noise = NoiseModel(**qs)
    except InvalidNoiseModel as exc:  # pragma: no cover - caught above
        raise ConfigError(str(exc), field="noise") from None

    c = raw.get("cost", {})
    alpha = _get(c, "alpha", float, "cost", 0.1)
    beta = c.get("beta", "auto")
    if not (beta == "auto" or isinstance(beta, (int, float)) and not isinstance(beta, bool)):
        raise ConfigError("cost.beta must be a number or \"auto\"", field="cost.beta")
    compare = c.get("compare")
    kind = _get(c, "kind", str, "cost", None)
    if compare is None:
        names = [kind] if kind is not None else ["c1", "c2reg"]
    else:
        if not isinstance(compare, list) or not compare or not all(isinstance(x, str) for x in compare):
            raise ConfigError("cost.compare must be a non-empty list of cost names", field="cost.compare")
        names = list(compare)
    costs = tuple(_cost(x, alpha, beta, problem, "cost.compare" if compare else "cost.kind") for x in names)
    fd_eps = _get(c, "fd_eps", float, "cost", TRAIN_EPS)
    clip = _get(c, "clip_threshold", float, "cost", 1.0)
    if not fd_eps > 0:
        raise ConfigError("cost.fd_eps must be positive", field="cost.fd_eps")
    if not clip > 0:
        raise ConfigError("cost.clip_threshold must be positive", field="cost.clip_threshold")

    t = raw.get("train", {})
    iterations = _get(t, "iterations", int, "train", 300)
    lr0 = _get(t, "lr0", float, "train", 0.1)
    init = _get(t, "init", str, "train", "uniform")
    if iterations < 1:
        raise ConfigError("train.iterations must be >= 1", field="train.iterations")
    if lr0 < 0:
        raise ConfigError("train.lr0 must be >= 0", field="train.lr0")
    if init not in ("uniform", "zeros"):
        raise ConfigError("train.init must be \"uniform\" or \"zeros\"", field="train.init")
    train = TrainConfig(iterations=iterations, lr0=lr0, clip_threshold=clip, cost=costs[0],
                        init=init, fd_eps=fd_eps)

    r = raw.get("run", {})
    seeds = r.get("seeds", [0, 1, 2])
    if not isinstance(seeds, list) or not seeds or not all(isinstance(s, int) and s >= 0 for s in seeds):
        raise ConfigError("run.seeds must be a non-empty list of non-negative integers", field="run.seeds")
    out = _get(r, "out", str, "run", f"results/{name}")
    parallel = _get(r, "parallel", int, "run", 1)
    if parallel < 1:
        raise ConfigError("run.parallel must be >= 1", field="run.parallel")

    s = raw.get("survey", {})
    samples = _get(s, "samples", int, "survey", 20)
    sseed = _get(s, "seed", int, "survey", 0)
    snames = s.get("costs", ["c1", "c2raw"])
    if not isinstance(snames, list) or len(snames) != 2:
        raise ConfigError("survey.costs must list exactly two cost names", field="survey.costs")
    if samples < 1:
        raise ConfigError("survey.samples must be >= 1", field="survey.samples")
    survey_costs = tuple(_cost(x, alpha, beta, problem, "survey.costs") for x in snames)

    return RunConfig(name, instance, problem, ansatz, noise, costs, train, tuple(seeds), out, parallel,
                     samples, sseed, survey_costs, raw=raw, source=source)
