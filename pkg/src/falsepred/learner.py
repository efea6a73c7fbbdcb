"""Greedy refinement hill climbing and the online learning loop.

Candidates are scored lexicographically by (training errors, structure size,
canonical tie-break key), so equal-error moves to smaller structures are
accepted and the search is fully deterministic.  The tie-break prefers higher
variable indices (larger bitmask), which keeps tie resolution from being
biased toward x_0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .hypotheses import GROUND_TRUTH_STRUCTURE, Hypothesis, Structure, fit_hypothesis
from .model import Sample, WorldConfig, generate_stream_arrays, samples_to_arrays


class RestartPolicy(str, enum.Enum):
    WARM_START = "warm_start"
    RESTART_FROM_INITIAL = "restart_from_initial"


@dataclass(frozen=True)
class LearnerConfig:
    restart_policy: RestartPolicy = RestartPolicy.WARM_START
    initial_structure: Structure = GROUND_TRUTH_STRUCTURE
    allow_x0_in_body: bool = True
    max_structure_size: int | None = None
    stop_at_ground_truth: bool = True

    def __post_init__(self):
        if self.max_structure_size is not None and self.max_structure_size < 0:
            raise ConfigError("max_structure_size must be >= 0 or None")


@dataclass(frozen=True, order=True)
class Score:
    """Total order on candidates: fewer errors, then smaller, then key."""

    errors: int
    size: int
    tiebreak: int

    @classmethod
    def of_mask(cls, mask: int, errors: int) -> "Score":
        return cls(errors=errors, size=kernels.popcount(mask), tiebreak=-mask)

    @classmethod
    def of(cls, structure: Structure, errors: int) -> "Score":
        return cls(errors=errors, size=structure.size(), tiebreak=structure.tiebreak_key())


@dataclass(frozen=True)
class StepRecord:
    m: int
    structure: Structure
    errors: int
    is_false_predictor: bool
    is_ground_truth: bool


def refine(
    structure: Structure,
    n: int,
    *,
    allow_x0_in_body: bool = True,
    max_structure_size: int | None = None,
) -> list[Structure]:
    """All structures at refinement distance one: single additions from the
    allowed index set and single removals."""
    out = []
    for m in _neighbor_masks(
        structure.mask, n, allow_x0_in_body=allow_x0_in_body, max_structure_size=max_structure_size
    ):
        out.append(Structure.from_mask(m))
    out.sort(key=lambda s: s.vars)
    return out


def _neighbor_masks(
    mask: int,
    n: int,
    *,
    allow_x0_in_body: bool = True,
    max_structure_size: int | None = None,
) -> list[int]:
    size = kernels.popcount(mask)
    out = []
    for j in range(n + 1):
        present = (mask >> j) & 1
        if not present:
            if j == 0 and not allow_x0_in_body:
                continue
            if max_structure_size is not None and size >= max_structure_size:
                continue
        out.append(mask ^ (1 << j))
    return out


def _hill_climb_masks(
    bits: np.ndarray,
    xa: np.ndarray,
    n: int,
    start_mask: int,
    *,
    allow_x0_in_body: bool = True,
    max_structure_size: int | None = None,
) -> tuple[int, int]:
    """Array-level hill climb; returns (mask, errors) of the local optimum."""
    cur = start_mask
    cur_err = kernels.errors_for_mask(bits, xa, cur)
    while True:
        neighbors = _neighbor_masks(
            cur, n, allow_x0_in_body=allow_x0_in_body, max_structure_size=max_structure_size
        )
        errs = kernels.errors_for_masks(bits, xa, neighbors)
        best_mask = None
        best_score = None
        for mask, err in zip(neighbors, errs.tolist()):
            sc = Score.of_mask(mask, err)
            if best_score is None or sc < best_score:
                best_score = sc
                best_mask = mask
        if best_score is not None and best_score < Score.of_mask(cur, cur_err):
            cur = best_mask
            cur_err = best_score.errors
        else:
            return cur, cur_err


def hill_climb(start: Structure, data: list[Sample], config: LearnerConfig) -> Hypothesis:
    """Iterate best-neighbor moves until no candidate scores strictly better,
    then return the fitted hypothesis of the local optimum."""
    if not data:
        raise ConfigError("hill_climb requires non-empty data")
    n = len(data[0].redundant)
    bits, xa = samples_to_arrays(data, n)
    mask, _ = _hill_climb_masks(
        bits,
        xa,
        n,
        start.mask,
        allow_x0_in_body=config.allow_x0_in_body,
        max_structure_size=config.max_structure_size,
    )
    return fit_hypothesis(Structure.from_mask(mask), data)


def online_learn(world: WorldConfig, learner: LearnerConfig, max_m: int) -> list[StepRecord]:
    """Grow the training stream one sample at a time, re-learn after each.

    Under warm start each step's climb begins at the previous selection;
    under restart it begins at the configured initial structure.  If
    ``stop_at_ground_truth`` is set the history ends as soon as the selected
    structure is exactly {x_0}.
    """
    if max_m < 1:
        raise ConfigError(f"max_m must be >= 1, got {max_m}")
    n = world.n_redundant
    bits, xa = generate_stream_arrays(world, max_m)
    initial_mask = learner.initial_structure.mask
    if initial_mask >> (n + 1):
        raise ConfigError("initial_structure has variables beyond the world's index range")

    records: list[StepRecord] = []
    cur = initial_mask
    warm = learner.restart_policy == RestartPolicy.WARM_START
    gt_mask = GROUND_TRUTH_STRUCTURE.mask
    for m in range(1, max_m + 1):
        start = cur if warm else initial_mask
        cur, err = _hill_climb_masks(
            bits[:m],
            xa[:m],
            n,
            start,
            allow_x0_in_body=learner.allow_x0_in_body,
            max_structure_size=learner.max_structure_size,
        )
        structure = Structure.from_mask(cur)
        is_gt = cur == gt_mask
        records.append(
            StepRecord(
                m=m,
                structure=structure,
                errors=err,
                is_false_predictor=structure.is_redundant() and err == 0,
                is_ground_truth=is_gt,
            )
        )
        if learner.stop_at_ground_truth and is_gt:
            break
    return records
