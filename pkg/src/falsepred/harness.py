"""Experiment orchestration, parallel history execution and serialization.

Every experiment is fully determined by its configuration and base seed:
per-history world seeds are derived from (base seed, history index), workers
share nothing, and results are merged in index order, so output bytes do not
depend on the parallelism level.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__ as _version
from .errors import ConfigError
from .hypotheses import Structure
from .learner import LearnerConfig, RestartPolicy, StepRecord, online_learn
from .metrics import HistoryStats, Table1Row, analyze_history, regret_trace, table1
from .model import WorldConfig, derive_seed_int, generate_stream
from .monitor import MonitorConfig, masquerade_report
from .oracle import eq8_monte_carlo, survival_trial

FLOAT_FORMAT = "%.6f"


@dataclass(frozen=True)
class ExperimentConfig:
    world: WorldConfig = WorldConfig(n_redundant=12, alpha=0.8, seed=20120613)
    learner: LearnerConfig = LearnerConfig()
    monitor: MonitorConfig = MonitorConfig()
    histories: int = 1000
    max_m: int = 240
    batch: int = 20
    life_attribution: str = "birth"
    parallelism: int = 0  # 0 -> all available cores
    out_dir: str = "out"
    format: str = "csv"

    def __post_init__(self):
        if self.histories < 1:
            raise ConfigError(f"histories must be >= 1, got {self.histories}")
        if self.max_m < 1:
            raise ConfigError(f"max_m must be >= 1, got {self.max_m}")
        if self.batch < 1:
            raise ConfigError(f"batch must be >= 1, got {self.batch}")
        if self.parallelism < 0:
            raise ConfigError("parallelism must be >= 0")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.life_attribution not in ("birth", "death", "span"):
            raise ConfigError(f"unknown life_attribution {self.life_attribution!r}")

    def history_world(self, index: int) -> WorldConfig:
        return dataclasses.replace(
            self.world, seed=derive_seed_int(self.world.seed, index)
        )

    def effective_parallelism(self) -> int:
        return self.parallelism or os.cpu_count() or 1

    def to_dict(self) -> dict:
        return {
            "world": dataclasses.asdict(self.world),
            "learner": {
                "restart_policy": self.learner.restart_policy.value,
                "initial_structure": list(self.learner.initial_structure.vars),
                "allow_x0_in_body": self.learner.allow_x0_in_body,
                "max_structure_size": self.learner.max_structure_size,
                "stop_at_ground_truth": self.learner.stop_at_ground_truth,
            },
            "monitor": dataclasses.asdict(self.monitor),
            "histories": self.histories,
            "max_m": self.max_m,
            "batch": self.batch,
            "life_attribution": self.life_attribution,
            "parallelism": self.parallelism,
            "out_dir": self.out_dir,
            "format": self.format,
        }

    def provenance_dict(self) -> dict:
        """Config echo for reports: everything that affects result values.

        Parallelism and the output location are execution details with no
        effect on any computed number, so they are omitted; this keeps report
        bytes identical across worker counts.
        """
        d = self.to_dict()
        del d["parallelism"]
        del d["out_dir"]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        base = cls()
        world = dataclasses.replace(base.world, **d.get("world", {}))
        ld = dict(d.get("learner", {}))
        if "restart_policy" in ld:
            ld["restart_policy"] = RestartPolicy(ld["restart_policy"])
        if "initial_structure" in ld:
            ld["initial_structure"] = Structure(tuple(ld["initial_structure"]))
        learner = dataclasses.replace(base.learner, **ld)
        monitor = dataclasses.replace(base.monitor, **d.get("monitor", {}))
        rest = {
            k: d[k]
            for k in (
                "histories",
                "max_m",
                "batch",
                "life_attribution",
                "parallelism",
                "out_dir",
                "format",
            )
            if k in d
        }
        return cls(world=world, learner=learner, monitor=monitor, **rest)


def _run_one_history(args) -> list[tuple]:
    world, learner, max_m = args
    records = online_learn(world, learner, max_m)
    # plain tuples keep inter-process payloads small
    return [
        (r.m, r.structure.vars, r.errors, r.is_false_predictor, r.is_ground_truth)
        for r in records
    ]


def _revive(rows: list[tuple]) -> list[StepRecord]:
    return [
        StepRecord(
            m=m,
            structure=Structure(tuple(vars)),
            errors=errors,
            is_false_predictor=fp,
            is_ground_truth=gt,
        )
        for (m, vars, errors, fp, gt) in rows
    ]


def run_histories(config: ExperimentConfig) -> list[list[StepRecord]]:
    """Run all online histories, deterministically and optionally in
    parallel; results come back in history-index order."""
    jobs = [
        (config.history_world(i), config.learner, config.max_m)
        for i in range(config.histories)
    ]
    workers = config.effective_parallelism()
    if workers <= 1 or config.histories == 1:
        raw = [_run_one_history(j) for j in jobs]
    else:
        chunk = max(1, config.histories // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_one_history, jobs, chunksize=chunk))
    return [_revive(rows) for rows in raw]


@dataclass
class RunReport:
    config: dict
    version: str = _version
    table1: list[dict] = field(default_factory=list)
    exit_mean: float | None = None
    exit_sd: float | None = None
    exit_count: int = 0
    hop_mean: float | None = None
    hop_unit_fraction: float | None = None
    masquerades: list[dict] = field(default_factory=list)
    eq8: list[dict] = field(default_factory=list)
    survival_mean: float | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def _exit_and_hop_stats(stats: Sequence[HistoryStats], report: RunReport) -> None:
    exits = [s.exit_m for s in stats if s.exit_m is not None]
    report.exit_count = len(exits)
    if exits:
        report.exit_mean = float(np.mean(exits))
        report.exit_sd = float(np.std(exits))
    hops = [h for s in stats for h in s.hops]
    if hops:
        arr = np.array(hops)
        report.hop_mean = float(arr.mean())
        report.hop_unit_fraction = float((arr == 1).mean())


def run_table1(config: ExperimentConfig) -> RunReport:
    """Full stability experiment: histories, batched size/life table, exit
    and hop statistics; writes table1.csv (or .json) and report.json."""
    histories = run_histories(config)
    stats = [analyze_history(r) for r in histories]
    n_batches = config.max_m // config.batch
    rows = table1(
        stats, config.batch, attribution=config.life_attribution, max_batches=n_batches
    )
    report = RunReport(config=config.provenance_dict())
    report.table1 = [dataclasses.asdict(r) for r in rows]
    _exit_and_hop_stats(stats, report)
    _write_table1(config, rows)
    _write_report(config, report)
    return report


def run_eq8(config: ExperimentConfig, s: int, m: int, trials: int) -> RunReport:
    mc_mean, analytic = eq8_monte_carlo(config.world, s, m, trials)
    rel_err = abs(mc_mean - analytic) / analytic if analytic else float("nan")
    report = RunReport(config=config.provenance_dict())
    report.eq8 = [
        {"s": s, "m": m, "trials": trials, "analytic": analytic, "mc_mean": mc_mean, "rel_err": rel_err}
    ]
    _write_rows(
        config,
        "eq8",
        ["s", "m", "trials", "analytic", "mc_mean", "rel_err"],
        [[s, m, trials, analytic, mc_mean, rel_err]],
    )
    _write_report(config, report)
    return report


def run_survival(config: ExperimentConfig, s: int, warmup_m: int, trials: int) -> RunReport:
    mean_life = survival_trial(config.world, s, warmup_m, trials)
    report = RunReport(config=config.provenance_dict())
    report.survival_mean = mean_life
    _write_rows(
        config,
        "survival",
        ["s", "warmup_m", "trials", "mean_life"],
        [[s, warmup_m, trials, mean_life]],
    )
    _write_report(config, report)
    return report


def run_regret(config: ExperimentConfig) -> RunReport:
    """Regret trace of a single history (small n only)."""
    learner = dataclasses.replace(config.learner, stop_at_ground_truth=False)
    world = config.history_world(0)
    records = online_learn(world, learner, config.max_m)
    stream = generate_stream(world, config.max_m)
    trace = regret_trace(records, stream, world.n_redundant)
    report = RunReport(config=config.provenance_dict())
    rows = [[m + 1, r, rate] for m, (r, rate) in enumerate(zip(trace.r, trace.rate))]
    _write_rows(config, "regret", ["m", "regret", "regret_per_m"], rows)
    _write_report(config, report)
    return report


def run_monitor_demo(config: ExperimentConfig) -> RunReport:
    """Run histories, apply the rule of thumb everywhere, and report every
    approved false predictor."""
    histories = run_histories(config)
    pairs = [(records, analyze_history(records)) for records in histories]
    entries = masquerade_report(pairs, config.monitor)
    report = RunReport(config=config.provenance_dict())
    report.masquerades = [
        {"history": h, "m": m, "structure": list(s.vars)} for (h, m, s) in entries
    ]
    _exit_and_hop_stats([st for _, st in pairs], report)
    _write_rows(
        config,
        "masquerade",
        ["history", "m", "structure"],
        [[h, m, " ".join(map(str, s.vars))] for (h, m, s) in entries],
    )
    _write_report(config, report)
    return report


def run_history_dump(config: ExperimentConfig, index: int) -> dict:
    """One seeded history as a JSON-ready dict."""
    if not 0 <= index < config.histories:
        raise ConfigError(f"history index {index} out of range [0, {config.histories})")
    records = online_learn(config.history_world(index), config.learner, config.max_m)
    stats = analyze_history(records)
    payload = {
        "config": config.to_dict(),
        "history": index,
        "steps": [
            {
                "m": r.m,
                "structure": list(r.structure.vars),
                "errors": r.errors,
                "is_false_predictor": r.is_false_predictor,
                "is_ground_truth": r.is_ground_truth,
            }
            for r in records
        ],
        "exit_m": stats.exit_m,
        "hops": list(stats.hops),
    }
    out = _out_dir(config) / f"history_{index}.json"
    _write_text(out, json.dumps(payload, indent=2, sort_keys=True))
    return payload


def _out_dir(config: ExperimentConfig) -> Path:
    path = Path(config.out_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc}") from exc
    return path


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _fmt(value) -> str:
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def _write_rows(config: ExperimentConfig, name: str, header: list[str], rows) -> Path:
    out = _out_dir(config)
    if config.format == "json":
        path = out / f"{name}.json"
        payload = [dict(zip(header, row)) for row in rows]
        _write_text(path, json.dumps(payload, indent=2, sort_keys=True))
        return path
    path = out / f"{name}.csv"
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _write_table1(config: ExperimentConfig, rows: list[Table1Row]) -> Path:
    return _write_rows(
        config,
        "table1",
        ["range_lo", "range_hi", "mean_size", "sd_size", "mean_life", "sd_life"],
        [
            [r.range_lo, r.range_hi, r.mean_size, r.sd_size, r.mean_life, r.sd_life]
            for r in rows
        ],
    )


def _write_report(config: ExperimentConfig, report: RunReport) -> Path:
    path = _out_dir(config) / "report.json"
    _write_text(path, report.to_json())
    return path
