"""Command-line entry point: ``noisyvqa run|compare|survey|bounds-check``.

Exit codes: 0 success, 1 configuration error, 2 runtime failure (the failing
stage is named on stderr).
"""
from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, cost_dict, load_config, resolve_config
from .costs import CostKind
from .errors import ConfigError, NoisyVQAError
from .theory import ALL_CLAIMS, run_claim
from .trainer import gradient_norm_survey, train

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class RuntimeFailure(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def shipped_config(name: str) -> Path | None:
    p = Path(str(resources.files("noisyvqa") / "configs" / f"{name.removesuffix('.toml')}.toml"))
    return p if p.exists() else None


def _load(path: str, args) -> RunConfig:
    p = Path(path)
    if not p.exists():
        shipped = shipped_config(path)
        if shipped is None:
            raise ConfigError(f"config file {path} not found")
        p = shipped
    cfg = load_config(p)
    raw = json.loads(json.dumps(cfg.raw))
    run = raw.setdefault("run", {})
    if getattr(args, "seed", None):
        run["seeds"] = args.seed
    if getattr(args, "out", None):
        run["out"] = args.out
    if getattr(args, "parallel", None):
        run["parallel"] = args.parallel
    if getattr(args, "samples", None) and args.command == "survey":
        raw.setdefault("survey", {})["samples"] = args.samples
    return resolve_config(raw, cfg.source, p.parent)


def scientific_hash(cfg: RunConfig) -> str:
    return cfg.config_hash


def provenance(cfg: RunConfig, wall: float) -> dict:
    return {
        "config_hash": scientific_hash(cfg),
        "config_source": cfg.source,
        "code_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "wall_time_s": round(wall, 3),
        "finished_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _run_one(raw: dict, source, base_dir, cost: dict, seed: int):
    cfg = resolve_config(raw, source, Path(base_dir) if base_dir else None)
    kind = CostKind(**cost)
    rec = train(cfg.problem, cfg.ansatz, cfg.noise, cfg.run_config(kind, seed))
    return rec


def _run_name(cost: CostKind, seed: int) -> str:
    return f"{cost.variant}-seed{seed}"


def _check_existing(out: Path, name: str, h: str):
    meta = out / f"{name}.json"
    if not meta.exists():
        return None
    try:
        data = json.loads(meta.read_text())
    except json.JSONDecodeError:
        return None
    if data.get("config_hash") != h:
        raise ConfigError(
            f"{meta} was produced by config {data.get('config_hash')}, current config is {h}; "
            "use a fresh --out directory", field="run.out")
    if data.get("complete") and (out / f"{name}.csv").exists():
        return data
    return None


def execute_runs(cfg: RunConfig, log=print) -> dict:
    """Train every (cost, seed) pair; reuse complete results with a matching hash."""
    out = Path(cfg.out)
    h = scientific_hash(cfg)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise RuntimeFailure("output", f"cannot create {out}: {exc.strerror}") from None
    tasks, results = [], {}
    for cost in cfg.costs:
        for seed in cfg.seeds:
            name = _run_name(cost, seed)
            done = _check_existing(out, name, h)
            if done is not None:
                log(f"[resume] {name}: reusing {out / (name + '.json')}")
                results[name] = done
            else:
                tasks.append((cost, seed, name))
    base = str(Path(cfg.source).parent) if cfg.source else None
    jobs = [(cfg.raw, cfg.source, base, cost_dict(c), s) for c, s, _ in tasks]
    try:
        if cfg.parallel > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(cfg.parallel) as pool:
                records = list(pool.map(_run_one, *zip(*jobs)))
        else:
            records = [_run_one(*j) for j in jobs]
    except NoisyVQAError as exc:
        raise RuntimeFailure("train", str(exc)) from None
    for (cost, seed, name), rec in zip(tasks, records):
        csv_text = f"# config_hash={h}\n" + rec.to_csv()
        summary = {"run": name, "config_hash": h, "cost": cost_dict(cost), "seed": seed,
                   "metric": "success_rate" if cfg.problem.kind == "qaoa" else "fidelity",
                   "complete": rec.aborted is None, **rec.summary()}
        try:
            (out / f"{name}.csv").write_text(csv_text)
            (out / f"{name}.json").write_text(json.dumps(summary, indent=2) + "\n")
        except OSError as exc:
            raise RuntimeFailure("write", f"{name}: {exc.strerror}") from None
        log(f"[done] {name}: final C1 {rec.final_c1:.6f}, {summary['metric']} {rec.final_metric:.4f}, "
            f"parameter quality {rec.parameter_quality:.4f} ({rec.wall_time:.1f}s)")
        results[name] = summary
    return results


def _stats(values):
    arr = np.asarray(values, dtype=float)
    out = {"per_seed": arr.tolist(), "mean": float(arr.mean())}
    if arr.size > 1:
        out["std"] = float(arr.std(ddof=1))
    return out


def comparison_table(cfg: RunConfig, results: dict) -> dict:
    metric = "success_rate" if cfg.problem.kind == "qaoa" else "fidelity"
    table = {}
    for cost in cfg.costs:
        runs = [results[_run_name(cost, s)] for s in cfg.seeds]
        label = cost.variant
        table[label] = {
            metric: _stats([r["final_metric"] for r in runs]),
            "parameter_quality": _stats([r["parameter_quality"] for r in runs]),
            "final_c1": _stats([r["final_c1"] for r in runs]),
        }
    return {"benchmark": cfg.benchmark, "metric": metric, "seeds": list(cfg.seeds), "table": table}


def cmd_run(args, compare: bool = False) -> int:
    cfg = _load(args.config, args)
    if args.dry_run:
        print(json.dumps({"config_hash": scientific_hash(cfg)} | cfg.plan(), indent=2))
        return EXIT_OK
    start = time.perf_counter()
    results = execute_runs(cfg)
    out = Path(cfg.out)
    summary = comparison_table(cfg, results)
    summary["provenance"] = provenance(cfg, time.perf_counter() - start)
    summary["config"] = cfg.plan()
    name = "comparison.json" if compare else "summary.json"
    (out / name).write_text(json.dumps(summary, indent=2) + "\n")
    if compare:
        print(format_table(summary))
    print(f"wrote {out / name}")
    return EXIT_OK


def format_table(summary: dict) -> str:
    metric = summary["metric"]
    lines = [f"{'cost':8s} {metric:>14s} {'param_quality':>14s} {'final_c1':>12s}"]
    for label, row in summary["table"].items():
        lines.append(f"{label:8s} {row[metric]['mean']:14.4f} {row['parameter_quality']['mean']:14.4f} "
                     f"{row['final_c1']['mean']:12.6f}")
    return "\n".join(lines)


def cmd_survey(args) -> int:
    cfg = _load(args.config, args)
    seed = args.seed[0] if args.seed else cfg.survey_seed
    if args.dry_run:
        print(json.dumps({"config_hash": scientific_hash(cfg), "benchmark": cfg.benchmark,
                          "samples": cfg.survey_samples, "seed": seed,
                          "costs": [cost_dict(c) for c in cfg.survey_costs], "out": cfg.out}, indent=2))
        return EXIT_OK
    start = time.perf_counter()
    try:
        res = gradient_norm_survey(cfg.problem, cfg.ansatz, cfg.noise, cfg.survey_samples, seed,
                                   kinds=cfg.survey_costs, eps=cfg.train.fd_eps)
    except NoisyVQAError as exc:
        raise RuntimeFailure("survey", str(exc)) from None
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    h = scientific_hash(cfg)
    (out / "survey.csv").write_text(f"# config_hash={h}\n" + res.to_csv())
    summary = {"benchmark": cfg.benchmark, "samples": cfg.survey_samples, "seed": seed,
               "costs": [cost_dict(c) for c in cfg.survey_costs], "applicable": res.applicable,
               "inapplicable_reason": res.inapplicable_reason, "mean_ratio": res.mean_ratio,
               "singular_samples": res.singular_samples,
               "provenance": provenance(cfg, time.perf_counter() - start)}
    (out / "survey.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"mean |grad {cfg.survey_costs[1].variant}| / |grad {cfg.survey_costs[0].variant}| = "
          f"{res.mean_ratio:.3f} over {cfg.survey_samples} samples")
    print(f"wrote {out / 'survey.csv'}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    claims = [args.claim] if args.claim else list(ALL_CLAIMS)
    for c in claims:
        if c not in ALL_CLAIMS:
            raise ConfigError(f"unknown claim {c!r}; valid: {', '.join(ALL_CLAIMS)}", field="--claim")
    seed = args.seed[0] if args.seed else 0
    if args.dry_run:
        print(json.dumps({"claims": claims, "samples": args.samples, "seed": seed, "out": args.out}, indent=2))
        return EXIT_OK
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    failed = []
    for c in claims:
        try:
            rep = run_claim(c, args.samples, seed)
        except NoisyVQAError as exc:
            raise RuntimeFailure(f"bounds-check {c}", str(exc)) from None
        d = rep.to_dict()
        text = json.dumps(d, indent=2, default=float)
        if out:
            (out / f"{c}.json").write_text(text + "\n")
        print(text)
        if not rep.passed:
            failed.append(c)
    if failed:
        print(f"claims with violations or no applicable samples: {', '.join(failed)}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _seed_list(text: str) -> list[int]:
    try:
        seeds = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be comma-separated integers, got {text!r}") from None
    if not seeds or any(s < 0 for s in seeds):
        raise argparse.ArgumentTypeError("seeds must be non-negative")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisyvqa", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"noisyvqa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("config", help="TOML config file or shipped config name (e.g. qaoa_mc)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=_seed_list, help="comma-separated seed list")
        p.add_argument("--parallel", type=int, help="worker processes")
        p.add_argument("--dry-run", action="store_true", help="validate and print the plan only")

    common(sub.add_parser("run", help="train every configured cost for every seed"))
    common(sub.add_parser("compare", help="paired runs plus a C1 vs C2 table"))
    s = sub.add_parser("survey", help="gradient norms at random parameters")
    common(s)
    s.add_argument("--samples", type=int)
    b = sub.add_parser("bounds-check", help="numerical checks of the bounds and identities")
    common(b, config=False)
    b.add_argument("--claim", help=f"one of: {', '.join(ALL_CLAIMS)}")
    b.add_argument("--samples", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "parallel", None) is not None and args.parallel < 1:
        parser.error("--parallel must be >= 1")
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "compare":
            return cmd_run(args, compare=True)
        if args.command == "survey":
            return cmd_survey(args)
        return cmd_bounds(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeFailure as exc:
        print(f"runtime failure in stage {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
