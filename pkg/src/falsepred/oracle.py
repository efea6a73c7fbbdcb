"""Brute-force ground-truth machinery.

Everything here trades speed for exactness: exhaustive enumeration over
structures and full prediction tables, arbitrary-precision counting of
surviving false predictors, and Monte Carlo cross-checks of the analytic
expectation C(n,s) * 2^(2^s - m).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from . import kernels
from .errors import ConfigError, GuardError
from .hypotheses import Hypothesis, Structure, fit_hypothesis, project
from .learner import Score
from .model import (
    DOMAIN_ORACLE,
    Sample,
    WorldConfig,
    arrays_to_samples,
    derive_seed,
    samples_to_arrays,
)

CENSUS_S_GUARD = 16
EXHAUSTIVE_N_GUARD = 16


@dataclass(frozen=True)
class CensusResult:
    """Exact count of surviving (structure, full table) false predictors."""

    exact_count: int
    log2_count: float
    per_structure: tuple[tuple[Structure, int, bool], ...]  # (structure, k, consistent)


def _log2_int(value: int) -> float:
    if value <= 0:
        return float("-inf")
    bl = value.bit_length()
    if bl <= 53:
        return math.log2(value)
    shift = bl - 53
    return math.log2(value >> shift) + shift


def _structure_survivors(structure: Structure, data: Sequence[Sample]) -> tuple[int, bool]:
    """(distinct observed patterns, consistency) of a structure on data."""
    forced: dict[tuple[int, ...], int] = {}
    for s in data:
        p = project(s, structure)
        prev = forced.get(p)
        if prev is None:
            forced[p] = s.x_a
        elif prev != s.x_a:
            return len({project(t, structure) for t in data}), False
    return len(forced), True


def count_false_predictors(data: Sequence[Sample], n: int, s: int) -> CensusResult:
    """Census of redundant size-s structures paired with fully specified
    tables that classify every training sample correctly.

    A consistent structure (no observed pattern carrying both x_a values)
    contributes 2^(2^s - k) full tables: its k observed rows are forced and
    the remaining rows are free.
    """
    if s > n:
        raise ConfigError(f"s={s} exceeds n={n}")
    if s > CENSUS_S_GUARD:
        raise GuardError(f"census supports s <= {CENSUS_S_GUARD}, got {s}")
    rows = 1 << s
    per_structure = []
    total = 0
    for combo in itertools.combinations(range(1, n + 1), s):
        structure = Structure(combo)
        k, consistent = _structure_survivors(structure, data)
        per_structure.append((structure, k, consistent))
        if consistent:
            total += 1 << (rows - k)
    return CensusResult(
        exact_count=total,
        log2_count=_log2_int(total),
        per_structure=tuple(per_structure),
    )


def expected_false_predictors(n: int, s: int, m: int) -> float:
    """Analytic expectation C(n,s) * 2^(2^s - m)."""
    c = math.comb(n, s)
    e = (1 << s) - m
    log2_value = _log2_int(c) + e
    if log2_value > 1023:
        return float("inf")
    if c.bit_length() <= 53:
        try:
            return math.ldexp(c, e)  # exact: binomial times a power of two
        except OverflowError:  # pragma: no cover - excluded by the log2 guard
            return float("inf")
    return 2.0 ** log2_value


class SampleSource(Protocol):
    """Anything that can draw packed samples; used to stub the world out."""

    n_redundant: int

    def draw(self, rng: np.random.Generator, count: int) -> tuple[np.ndarray, np.ndarray]:
        ...


def _draw(world, rng: np.random.Generator, count: int) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(world, WorldConfig):
        n = world.n_redundant
        cols = rng.integers(0, 2, size=(count, n + 1), dtype=np.uint8)
        coupling = rng.random(count)
        x0 = cols[:, 0]
        xa = np.where(coupling < world.alpha, x0, 1 - x0).astype(np.uint8)
        bits = np.zeros(count, dtype=np.int64)
        for j in range(n + 1):
            bits |= cols[:, j].astype(np.int64) << j
        return bits, xa
    return world.draw(rng, count)


def eq8_monte_carlo(
    world: WorldConfig, s: int, m: int, trials: int
) -> tuple[float, float]:
    """Monte Carlo mean of the false-predictor census over fresh training
    sets, alongside the analytic expectation."""
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    n = world.n_redundant
    total = 0
    for t in range(trials):
        rng = np.random.default_rng(derive_seed(world.seed, DOMAIN_ORACLE, 0, t))
        bits, xa = _draw(world, rng, m)
        data = arrays_to_samples(bits, xa, n)
        total += count_false_predictors(data, n, s).exact_count
    if total.bit_length() > 970:
        raise GuardError("Monte Carlo census mean exceeds float range")
    mc_mean = float(total) / trials
    return mc_mean, expected_false_predictors(n, s, m)


def survival_trial(
    world,
    s: int,
    warmup_m: int,
    trials: int,
    *,
    seed: int | None = None,
    max_steps: int = 10_000,
    max_redraws: int = 100,
) -> float:
    """Mean survival (in new samples) of a uniformly chosen surviving false
    predictor.

    Each trial draws a warmup training set, picks one surviving (structure,
    full table) pair uniformly among the census survivors, then extends the
    stream sample by sample until the table misclassifies.  Survival is the
    1-based index of the falsifying sample.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if s > CENSUS_S_GUARD:
        raise GuardError(f"survival_trial supports s <= {CENSUS_S_GUARD}, got {s}")
    n = world.n_redundant
    base_seed = seed if seed is not None else getattr(world, "seed", 0)
    total_life = 0
    for t in range(trials):
        life = None
        for redraw in range(max_redraws):
            ss = derive_seed(base_seed, DOMAIN_ORACLE, 1, t, redraw)
            rng = np.random.default_rng(ss)
            picker = random.Random(int(ss.generate_state(2)[1]))
            bits, xa = _draw(world, rng, warmup_m)
            data = arrays_to_samples(bits, xa, n)
            census = count_false_predictors(data, n, s)
            if census.exact_count == 0:
                continue
            structure, table = _pick_survivor(census, data, picker, s)
            life = _extend_until_falsified(world, structure, table, rng, max_steps)
            break
        if life is None:
            raise GuardError(
                f"no surviving false predictor after {max_redraws} redraws (trial {t})"
            )
        total_life += life
    return total_life / trials


def _pick_survivor(census: CensusResult, data, picker: random.Random, s: int):
    """Uniform draw over all surviving (structure, full table) pairs."""
    rows = 1 << s
    weights = []
    survivors = []
    for structure, k, consistent in census.per_structure:
        if consistent:
            survivors.append((structure, k))
            weights.append(1 << (rows - k))
    r = picker.randrange(sum(weights))
    for (structure, k), w in zip(survivors, weights):
        if r < w:
            break
        r -= w
    forced = {project(t, structure): t.x_a for t in data}
    table = np.empty(rows, dtype=np.uint8)
    for idx in range(rows):
        pattern = tuple((idx >> j) & 1 for j in range(s))
        if pattern in forced:
            table[idx] = forced[pattern]
        else:
            table[idx] = picker.getrandbits(1)
    return structure, table


def _extend_until_falsified(world, structure, table, rng, max_steps: int) -> int:
    mask = structure.mask
    for step in range(1, max_steps + 1):
        bits, xa = _draw(world, rng, 1)
        idx = int(kernels.pattern_indices(bits, mask)[0])
        if int(table[idx]) != int(xa[0]):
            return step
    raise GuardError(f"false predictor survived {max_steps} samples; degenerate source?")


def exhaustive_best(data: Sequence[Sample], n: int) -> Hypothesis:
    """Global optimum over all structures, under the learner's score order."""
    if n > EXHAUSTIVE_N_GUARD:
        raise GuardError(f"exhaustive_best supports n <= {EXHAUSTIVE_N_GUARD}, got {n}")
    if not data:
        raise ConfigError("exhaustive_best requires non-empty data")
    bits, xa = samples_to_arrays(data, n)
    masks = np.arange(1 << (n + 1), dtype=np.int64)
    errs = kernels.errors_for_masks(bits, xa, masks)
    best_mask = None
    best_score = None
    for mask, err in zip(masks.tolist(), errs.tolist()):
        sc = Score.of_mask(mask, err)
        if best_score is None or sc < best_score:
            best_score = sc
            best_mask = mask
    return fit_hypothesis(Structure.from_mask(best_mask), data)
