"""End-to-end acceptance gate.

Eight numbered criteria, each printing one PASS/FAIL line (run pytest with
``-s`` or ``-rA`` to see all of them).  Criteria 1-3 compare the learner's
long-run statistics against fixed reference targets; where the reference
protocol leaves a choice open, every implemented policy variant is tried and
the criterion passes if any variant does.
"""

import dataclasses

import numpy as np
import pytest

from falsepred import (
    LearnerConfig,
    MonitorConfig,
    RestartPolicy,
    Structure,
    WorldConfig,
    analyze_history,
    eq8_monte_carlo,
    exhaustive_best,
    fit_hypothesis,
    hill_climb,
    history_rate_trace,
    masquerade_report,
    structural_distance,
    survival_trial,
    table1,
    training_errors,
    universal_stability_violations,
)
from falsepred.harness import ExperimentConfig, run_histories, run_table1
from conftest import brute_force_min_errors, fitted_errors, mk

REFERENCE_WORLD = WorldConfig(n_redundant=12, alpha=0.8, seed=20120613)
HISTORIES = 1000
MAX_M = 400
BATCH = 20
N_BATCHES = 12


def check(name: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def _experiment(learner: LearnerConfig) -> ExperimentConfig:
    return ExperimentConfig(
        world=REFERENCE_WORLD,
        learner=learner,
        histories=HISTORIES,
        max_m=MAX_M,
        batch=BATCH,
    )


VARIANTS = {
    "warm": LearnerConfig(restart_policy=RestartPolicy.WARM_START),
    "restart": LearnerConfig(restart_policy=RestartPolicy.RESTART_FROM_INITIAL),
    "warm_no_x0": LearnerConfig(
        restart_policy=RestartPolicy.WARM_START, allow_x0_in_body=False
    ),
}


@pytest.fixture(scope="session")
def variant_stats():
    """HistoryStats per policy variant over the full reference experiment."""
    out = {}
    for name, learner in VARIANTS.items():
        histories = run_histories(_experiment(learner))
        out[name] = (histories, [analyze_history(r) for r in histories])
    return out


def test_criterion_1_stability_table(variant_stats):
    lo_first, hi_first = 3.69 - 2 * 1.83, 3.69 + 2 * 1.83
    results = []
    any_ok = False
    for name, (_, stats) in variant_stats.items():
        rows = table1(stats, BATCH, attribution="span", max_batches=N_BATCHES)
        sizes = [r.mean_size for r in rows]
        lives = [r.mean_life for r in rows]
        a = len(rows) == N_BATCHES and all(
            sizes[i] <= sizes[i + 1] for i in range(len(sizes) - 1)
        )
        b = lo_first <= sizes[0] <= hi_first
        c = 11.3 <= sizes[-1] <= 12.0
        d = all(lives[i] <= lives[i + 1] for i in range(len(lives) - 1))
        e = 126 * 0.6 <= lives[-1] <= 126 * 1.4
        results.append(
            f"{name}: a={a} b={b}({sizes[0]:.2f}) c={c}({sizes[-1]:.2f}) "
            f"d={d} e={e}({lives[-1]:.1f})"
        )
        any_ok = any_ok or (a and b and c and d and e)
    check("1 table-trend", any_ok, "; ".join(results))


def test_criterion_2_exit_time(variant_stats):
    results = []
    any_ok = False
    for name in ("warm", "restart"):
        _, stats = variant_stats[name]
        exits = [s.exit_m for s in stats if s.exit_m is not None]
        mean = float(np.mean(exits)) if exits else float("nan")
        sd = float(np.std(exits)) if exits else float("nan")
        ok = len(exits) > 0 and 55 <= mean <= 177
        results.append(f"{name}: exits={len(exits)}/{HISTORIES} mean={mean:.1f} sd={sd:.1f}")
        any_ok = any_ok or ok
    check("2 exit-time", any_ok, "; ".join(results))


def test_criterion_3_hop_size(variant_stats):
    results = []
    any_ok = False
    for name, (_, stats) in variant_stats.items():
        hops = np.array([h for s in stats for h in s.hops])
        mean = float(hops.mean())
        frac1 = float((hops == 1).mean())
        results.append(f"{name}: mean={mean:.3f} frac1={frac1:.3f}")
        any_ok = any_ok or (mean <= 1.2 and frac1 >= 0.90)
    check("3 hop-size", any_ok, "; ".join(results))


def test_criterion_4_census_expectation():
    from test_oracle import direct_census

    from falsepred import count_false_predictors, generate_stream

    # exact equivalence of the census formula for s <= 3
    data = generate_stream(WorldConfig(n_redundant=4, alpha=0.8, seed=31), 6)
    exact_ok = all(
        count_false_predictors(data, 4, s).exact_count == direct_census(data, 4, s)
        for s in (1, 2, 3)
    )

    results = []
    mc_ok = True
    for n, s, m in ((6, 2, 4), (8, 3, 6), (10, 4, 10)):
        world = dataclasses.replace(REFERENCE_WORLD, n_redundant=n)
        mc, analytic = eq8_monte_carlo(world, s, m, trials=5000)
        rel = abs(mc - analytic) / analytic
        mc_ok = mc_ok and rel <= 0.10
        results.append(f"(n={n},s={s},m={m}): analytic={analytic:.4g} mc={mc:.4g} rel={rel:.3f}")
    check("4 census-expectation", exact_ok and mc_ok, f"exact={exact_ok}; " + "; ".join(results))


def test_criterion_5_survival():
    world = WorldConfig(n_redundant=6, alpha=0.8, seed=314)
    mean = survival_trial(world, 3, warmup_m=3, trials=10_000)
    check("5 survival", 1.8 <= mean <= 2.2, f"mean={mean:.3f} target [1.8, 2.2]")


def test_criterion_6_masquerade_existence(variant_stats):
    histories, stats = variant_stats["warm"]
    entries = masquerade_report(list(zip(histories, stats)), MonitorConfig())
    check(
        "6 masquerade",
        len(entries) > 0,
        f"{len(entries)} approved false-predictor steps over {HISTORIES} histories",
    )


def test_criterion_7_properties(tmp_path):
    problems = []

    # byte-identical outputs, rerun and across parallelism levels
    cfg = ExperimentConfig(
        world=WorldConfig(n_redundant=5, alpha=0.8, seed=606),
        histories=8,
        max_m=40,
        batch=20,
        out_dir=str(tmp_path / "p1"),
        parallelism=1,
    )
    run_table1(cfg)
    run_table1(dataclasses.replace(cfg, out_dir=str(tmp_path / "p2"), parallelism=2))
    for name in ("table1.csv", "report.json"):
        if (tmp_path / "p1" / name).read_bytes() != (tmp_path / "p2" / name).read_bytes():
            problems.append(f"{name} differs across parallelism")

    # metric axioms (spot check; full property suite in test_metrics)
    a, b, c = Structure.of(1, 2), Structure.of(2, 3), Structure.of(4)
    if structural_distance(a, c) > structural_distance(a, b) + structural_distance(b, c):
        problems.append("triangle inequality")

    # XOR local optimum and greedy-vs-exhaustive ordering
    xor = [mk(0, 0, 0, 0), mk(1, 0, 1, 0), mk(1, 0, 0, 1), mk(0, 0, 1, 1)]
    greedy = hill_climb(Structure(()), xor, LearnerConfig())
    best = exhaustive_best(xor, 2)
    if greedy.structure != Structure(()) or best.structure != Structure.of(1, 2):
        problems.append("XOR local optimum")
    if training_errors(best, xor) > training_errors(greedy, xor):
        problems.append("exhaustive worse than greedy")

    # fitted-table optimality against brute force
    data = [mk(1, 0, 1, 1), mk(0, 1, 1, 0), mk(1, 1, 0, 1), mk(0, 0, 0, 0)]
    for mask in range(8):
        s = Structure.from_mask(mask)
        if fitted_errors(s, data) != brute_force_min_errors(s, data):
            problems.append(f"fit suboptimal for mask {mask}")

    check("7 properties", not problems, "all property spot checks hold" if not problems else "; ".join(problems))


def test_criterion_8_universal_stability_falsified():
    learner = LearnerConfig(stop_at_ground_truth=False)
    cfg = ExperimentConfig(
        world=REFERENCE_WORLD, learner=learner, histories=100, max_m=50
    )
    histories = run_histories(cfg)
    with_violation = 0
    for i, records in enumerate(histories):
        trace = history_rate_trace(cfg.history_world(i), records, test_m=10_000)
        if universal_stability_violations(trace):
            with_violation += 1
    frac = with_violation / len(histories)
    check(
        "8 universal-stability",
        frac >= 0.5,
        f"violations in {with_violation}/100 histories ({frac:.0%})",
    )
