"""Operational stability gates and the rule-of-thumb verdict.

The monitor estimates false/missed alarm rates on held-out streams, checks
the per-maintenance-interval threshold conditions, flags every step where a
rate increased after a new training example, and renders the three-part
structural rule-of-thumb verdict, including detection of redundant structures
that satisfy it (masquerades).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, MonitorError
from .hypotheses import Hypothesis, Structure, fit_hypothesis, predict_array
from .learner import StepRecord
from .metrics import HistoryStats
from .model import DOMAIN_TEST, Sample, WorldConfig, generate_stream_arrays, samples_to_arrays


@dataclass(frozen=True)
class MonitorConfig:
    m_star: int = 20
    t_false: float = 0.25
    t_missed: float = 0.25
    minor_hop_max: int = 1
    window: int = 3
    life_increase_span: int = 3
    test_set_size: int = 10_000

    def __post_init__(self):
        if not 0.0 <= self.t_false <= 1.0 or not 0.0 <= self.t_missed <= 1.0:
            raise ConfigError("rate thresholds must be in [0, 1]")
        if self.m_star < 1:
            raise ConfigError("m_star must be >= 1")


@dataclass(frozen=True)
class RateEstimate:
    p_false: float
    p_missed: float
    test_m: int


@dataclass(frozen=True)
class Verdict:
    cond1_long_stability: bool
    cond2_minor_refinements: bool
    cond3_increasing_lives: bool

    @property
    def approved(self) -> bool:
        return (
            self.cond1_long_stability
            and self.cond2_minor_refinements
            and self.cond3_increasing_lives
        )


def rates_on_arrays(h: Hypothesis, bits: np.ndarray, xa: np.ndarray) -> RateEstimate:
    pred = predict_array(h, bits)
    normal = xa == 0
    anomalous = xa == 1
    if not normal.any() or not anomalous.any():
        raise MonitorError("a class is absent from the test set; increase test_m")
    p_false = float((pred[normal] == 1).mean())
    p_missed = float((pred[anomalous] == 0).mean())
    return RateEstimate(p_false=p_false, p_missed=p_missed, test_m=len(xa))


def evaluate_rates(h: Hypothesis, world: WorldConfig, test_m: int) -> RateEstimate:
    """Monte Carlo false/missed alarm rates on a held-out stream drawn from a
    seed domain disjoint from training."""
    if test_m < 1:
        raise ConfigError("test_m must be >= 1")
    bits, xa = generate_stream_arrays(world, test_m, domain=DOMAIN_TEST)
    return rates_on_arrays(h, bits, xa)


def evaluate_rates_on(h: Hypothesis, samples: Sequence[Sample]) -> RateEstimate:
    """Rates on caller-provided samples (self-consistency checks in tests)."""
    n = len(samples[0].redundant)
    bits, xa = samples_to_arrays(samples, n)
    return rates_on_arrays(h, bits, xa)


def check_operational(rates: Sequence[RateEstimate], config: MonitorConfig) -> bool | None:
    """Do both alarm rates stay below their thresholds for the first m_star
    post-checkpoint steps?  Returns None (inconclusive) when fewer than
    m_star steps are available."""
    if len(rates) < config.m_star:
        return None
    window = rates[: config.m_star]
    return all(r.p_false < config.t_false and r.p_missed < config.t_missed for r in window)


def universal_stability_violations(rates: Sequence[RateEstimate]) -> list[int]:
    """Indices whose rate estimate increased relative to the previous step.

    An empty result over the whole sequence is exactly the universal
    stability property; for this learner the list is typically non-empty.
    """
    if len(rates) < 2:
        raise ConfigError("need at least two rate estimates")
    out = []
    for i in range(1, len(rates)):
        if rates[i].p_false > rates[i - 1].p_false or rates[i].p_missed > rates[i - 1].p_missed:
            out.append(i)
    return out


def history_rate_trace(
    world: WorldConfig, records: Sequence[StepRecord], test_m: int
) -> list[RateEstimate]:
    """Per-step held-out rate estimates for one online history.

    Each step's selected structure is refitted to its training prefix and
    evaluated on a single held-out stream from the test seed domain.
    """
    if test_m < 1:
        raise ConfigError("test_m must be >= 1")
    n = world.n_redundant
    max_m = max(r.m for r in records)
    train_bits, train_xa = generate_stream_arrays(world, max_m)
    from .model import arrays_to_samples

    train = arrays_to_samples(train_bits, train_xa, n)
    test_bits, test_xa = generate_stream_arrays(world, test_m, domain=DOMAIN_TEST)
    out = []
    for rec in records:
        h = fit_hypothesis(rec.structure, train[: rec.m])
        out.append(rates_on_arrays(h, test_bits, test_xa))
    return out


def _life_index_at(stats: HistoryStats, at_m: int) -> int:
    for i, life in enumerate(stats.life_times):
        if life.birth_m <= at_m <= life.death_m:
            return i
    raise ConfigError(f"at_m={at_m} is outside the history")


def rule_of_thumb(stats: HistoryStats, config: MonitorConfig, at_m: int) -> Verdict:
    """Three structural stability conditions evaluated at training size at_m.

    1. The current structure's ongoing life exceeds the maintenance interval.
    2. The last `window` structure changes were all minor hops.
    3. The last `life_increase_span` completed lives are non-decreasing.

    Missing data (not enough changes or completed lives yet) makes the
    corresponding condition false.
    """
    idx = _life_index_at(stats, at_m)
    current = stats.life_times[idx]
    ongoing = at_m - current.birth_m + 1
    cond1 = ongoing > config.m_star

    # One hop per change; change j created life j+1.
    hops_so_far = stats.hops[:idx]
    cond2 = len(hops_so_far) >= config.window and all(
        h <= config.minor_hop_max for h in hops_so_far[-config.window :]
    )

    completed = [life.length for life in stats.life_times[:idx]]
    span = config.life_increase_span
    cond3 = len(completed) >= span and all(
        completed[i] <= completed[i + 1] for i in range(len(completed) - span, len(completed) - 1)
    )
    return Verdict(
        cond1_long_stability=cond1,
        cond2_minor_refinements=cond2,
        cond3_increasing_lives=cond3,
    )


def masquerade_report(
    histories: Sequence[tuple[Sequence[StepRecord], HistoryStats]],
    config: MonitorConfig,
) -> list[tuple[int, int, Structure]]:
    """Every (history, m) where the rule of thumb approves a structure that
    was a false predictor at selection time."""
    out = []
    for hist_id, (records, stats) in enumerate(histories):
        for rec in records:
            if not rec.is_false_predictor:
                continue
            if rule_of_thumb(stats, config, rec.m).approved:
                out.append((hist_id, rec.m, rec.structure))
    return out
