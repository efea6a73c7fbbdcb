"""Stability metrics: structural size and distance, life times, hop sizes,
batched summaries and the online regret trace."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import GuardError
from .hypotheses import Structure, fit_hypothesis, predict
from .learner import StepRecord
from .model import Sample, samples_to_arrays

REGRET_N_GUARD = 16


def structural_size(s: Structure) -> int:
    return s.size()


def structural_distance(a: Structure, b: Structure) -> int:
    """Minimum number of single-variable refinements between two structures,
    i.e. the symmetric-difference cardinality."""
    return len(set(a.vars) ^ set(b.vars))


@dataclass(frozen=True)
class LifeSpan:
    structure: Structure
    birth_m: int
    length: int
    closed: bool  # False for the life still running when the history ends

    @property
    def death_m(self) -> int:
        """Last m at which the structure was still selected."""
        return self.birth_m + self.length - 1


@dataclass(frozen=True)
class HistoryStats:
    life_times: tuple[LifeSpan, ...]
    hops: tuple[int, ...]
    exit_m: int | None
    sizes: tuple[int, ...]  # structural size per step
    first_m: int

    def step_ms(self) -> range:
        return range(self.first_m, self.first_m + len(self.sizes))


def analyze_history(records: Sequence[StepRecord]) -> HistoryStats:
    """Lives, hops and exit time of one online history.

    A life is the number of consecutive steps a structure stays selected (the
    final, possibly unfinished life is included and flagged); a hop is the
    structural distance recorded at each change; exit is the first m whose
    selection is the ground-truth structure.
    """
    if not records:
        raise ValueError("analyze_history requires a non-empty history")
    lives: list[LifeSpan] = []
    hops: list[int] = []
    exit_m = None
    sizes = []
    birth = records[0].m
    prev = records[0].structure
    for rec in records:
        sizes.append(rec.structure.size())
        if exit_m is None and rec.is_ground_truth:
            exit_m = rec.m
        if rec.structure != prev:
            hops.append(structural_distance(prev, rec.structure))
            lives.append(LifeSpan(prev, birth, rec.m - birth, closed=True))
            prev = rec.structure
            birth = rec.m
    lives.append(
        LifeSpan(prev, birth, records[-1].m - birth + 1, closed=False)
    )
    return HistoryStats(
        life_times=tuple(lives),
        hops=tuple(hops),
        exit_m=exit_m,
        sizes=tuple(sizes),
        first_m=records[0].m,
    )


@dataclass(frozen=True)
class Table1Row:
    range_lo: int
    range_hi: int
    mean_size: float
    sd_size: float
    mean_life: float
    sd_life: float
    n_size: int
    n_life: int


def _batch_of(m: int, batch: int) -> int:
    return (m - 1) // batch


def table1(
    histories: Sequence[HistoryStats],
    batch: int,
    *,
    attribution: str = "birth",
    max_batches: int | None = None,
) -> list[Table1Row]:
    """Batched mean/sd of structural size and life time across histories.

    Only pre-exit steps contribute (the step selecting the ground truth and
    anything after it are dropped), so the summary describes the false
    predictor phase.  Unfinished lives are excluded from the life averages to
    avoid censoring bias.  ``attribution`` places a completed life in the
    batch of its birth m (default), its death m, or every batch it overlaps
    (``"span"``).
    """
    if batch < 1:
        raise ValueError(f"batch must be >= 1, got {batch}")
    if attribution not in ("birth", "death", "span"):
        raise ValueError(f"unknown life attribution {attribution!r}")
    if not histories:
        return []

    size_acc: dict[int, list[int]] = {}
    life_acc: dict[int, list[int]] = {}
    for stats in histories:
        cutoff = stats.exit_m  # exclusive upper bound on contributing m
        for m, size in zip(stats.step_ms(), stats.sizes):
            if cutoff is not None and m >= cutoff:
                break
            size_acc.setdefault(_batch_of(m, batch), []).append(size)
        for life in stats.life_times:
            if not life.closed:
                continue
            if cutoff is not None and life.death_m >= cutoff:
                continue
            if attribution == "birth":
                targets = [_batch_of(life.birth_m, batch)]
            elif attribution == "death":
                targets = [_batch_of(life.death_m, batch)]
            else:
                targets = range(_batch_of(life.birth_m, batch), _batch_of(life.death_m, batch) + 1)
            for b in targets:
                life_acc.setdefault(b, []).append(life.length)

    if not size_acc and not life_acc:
        return []
    n_batches = max(list(size_acc) + list(life_acc)) + 1
    if max_batches is not None:
        n_batches = min(n_batches, max_batches)
    rows = []
    for b in range(n_batches):
        sizes = size_acc.get(b, [])
        lives = life_acc.get(b, [])
        rows.append(
            Table1Row(
                range_lo=b * batch,
                range_hi=(b + 1) * batch - 1,
                mean_size=float(np.mean(sizes)) if sizes else float("nan"),
                sd_size=float(np.std(sizes)) if sizes else float("nan"),
                mean_life=float(np.mean(lives)) if lives else float("nan"),
                sd_life=float(np.std(lives)) if lives else float("nan"),
                n_size=len(sizes),
                n_life=len(lives),
            )
        )
    return rows


@dataclass(frozen=True)
class RegretTrace:
    r: tuple[int, ...]  # cumulative online loss minus best-in-hindsight loss
    rate: tuple[float, ...]  # r[m] / m


def regret_trace(records: Sequence[StepRecord], stream: Sequence[Sample], n: int) -> RegretTrace:
    """Regret of the selected-hypothesis sequence against the best fixed
    hypothesis in hindsight.

    The online predictor for sample i is the structure selected after i-1
    samples, refitted to those i-1 samples (for i=1: the empty structure on
    no data, predicting 0).  The comparator is the exhaustive minimum over
    all structures of the fitted-table training errors on the full prefix.
    """
    if n > REGRET_N_GUARD:
        raise GuardError(f"regret_trace supports n <= {REGRET_N_GUARD}, got {n}")
    m_total = len(stream)
    bits, xa = samples_to_arrays(stream, n)
    all_masks = np.arange(1 << (n + 1), dtype=np.int64)

    online_losses = []
    for i in range(1, m_total + 1):
        if i == 1:
            structure = Structure(())
        else:
            structure = records[i - 2].structure
        h = fit_hypothesis(structure, list(stream[: i - 1]))
        online_losses.append(1 if predict(h, stream[i - 1]) != stream[i - 1].x_a else 0)

    r = []
    rate = []
    cum = 0
    for m in range(1, m_total + 1):
        cum += online_losses[m - 1]
        comparator = int(kernels.errors_for_masks(bits[:m], xa[:m], all_masks).min())
        r.append(cum - comparator)
        rate.append((cum - comparator) / m)
    return RegretTrace(r=tuple(r), rate=tuple(rate))
