"""Structures, patterns, binary prediction tables and their fitting.

A hypothesis is a set of body variables (the structure) plus a 0/1 prediction
table keyed by the observed body-variable patterns.  Fitting picks, per
pattern, the majority value of the dependent bit; this minimizes the training
error count over all binary tables for the structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .model import Sample, samples_to_arrays

# A pattern is the tuple of body-variable values in structure order.
Pattern = tuple[int, ...]


@dataclass(frozen=True)
class Structure:
    """Sorted, duplicate-free body-variable index set.  Index 0 is x_0."""

    vars: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.vars))) != self.vars:
            raise ValueError(f"structure vars must be sorted and unique: {self.vars}")
        if self.vars and self.vars[0] < 0:
            raise ValueError(f"negative variable index: {self.vars}")

    @classmethod
    def of(cls, *vars: int) -> "Structure":
        return cls(tuple(sorted(set(vars))))

    @classmethod
    def from_mask(cls, mask: int) -> "Structure":
        return cls(tuple(kernels.mask_positions(mask)))

    @property
    def mask(self) -> int:
        m = 0
        for v in self.vars:
            m |= 1 << v
        return m

    def size(self) -> int:
        return len(self.vars)

    def is_redundant(self) -> bool:
        """True iff x_0 is absent, i.e. only decoupled variables appear."""
        return 0 not in self.vars

    def tiebreak_key(self) -> int:
        """Canonical tie-break key; lower is preferred.

        Among structures of equal error count and size, the candidate with
        the larger bitmask (i.e. higher variable indices) wins.
        """
        return -self.mask


GROUND_TRUTH_STRUCTURE = Structure((0,))


@dataclass(frozen=True)
class BinaryCpt:
    """Pattern -> {0,1} prediction map with a fallback for unseen patterns."""

    entries: Mapping[Pattern, int]
    default_prediction: int = 0

    def __post_init__(self):
        lengths = {len(p) for p in self.entries}
        if len(lengths) > 1:
            raise ValueError(f"inconsistent pattern lengths: {sorted(lengths)}")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))


@dataclass(frozen=True)
class Hypothesis:
    structure: Structure
    cpt: BinaryCpt

    def __post_init__(self):
        for p in self.cpt.entries:
            if len(p) != self.structure.size():
                raise ValueError("CPT pattern length does not match structure size")
            break


def project(sample: Sample, structure: Structure) -> Pattern:
    """Extract the sample's values of the structure variables, in order."""
    values = sample.values
    for v in structure.vars:
        if v >= len(values):
            raise IndexError(f"variable {v} out of range for sample with {len(values)} vars")
    return tuple(values[v] for v in structure.vars)


def fit_cpt(structure: Structure, data: Sequence[Sample]) -> BinaryCpt:
    """Majority fit: per observed pattern the majority of x_a, ties to 0.

    The default prediction for unseen patterns is the global majority of x_a
    (tie again to 0).  No binary table for this structure achieves fewer
    training errors.
    """
    ones: dict[Pattern, int] = {}
    totals: dict[Pattern, int] = {}
    global_ones = 0
    for s in data:
        p = project(s, structure)
        totals[p] = totals.get(p, 0) + 1
        ones[p] = ones.get(p, 0) + s.x_a
        global_ones += s.x_a
    entries = {p: (1 if 2 * ones[p] > totals[p] else 0) for p in totals}
    default = 1 if 2 * global_ones > len(data) else 0
    return BinaryCpt(entries=entries, default_prediction=default)


def fit_hypothesis(structure: Structure, data: Sequence[Sample]) -> Hypothesis:
    return Hypothesis(structure=structure, cpt=fit_cpt(structure, data))


def predict(h: Hypothesis, sample: Sample) -> int:
    p = project(sample, h.structure)
    return h.cpt.entries.get(p, h.cpt.default_prediction)


def predict_array(h: Hypothesis, bits: np.ndarray) -> np.ndarray:
    """Vectorized predictions for packed samples."""
    s = h.structure.size()
    idx = kernels.pattern_indices(bits, h.structure.mask)
    table = np.full(1 << s, h.cpt.default_prediction, dtype=np.uint8)
    for pattern, value in h.cpt.entries.items():
        j = 0
        for bit_pos, bit in enumerate(pattern):
            j |= bit << bit_pos
        table[j] = value
    return table[idx]


def training_errors(h: Hypothesis, data: Sequence[Sample]) -> int:
    """Number of samples whose predicted value differs from x_a."""
    return sum(1 for s in data if predict(h, s) != s.x_a)


def min_training_errors(structure: Structure, data: Sequence[Sample]) -> int:
    """Training errors of the majority-fitted table, computed via the kernel."""
    if not data:
        return 0
    n = len(data[0].redundant)
    bits, xa = samples_to_arrays(data, n)
    return kernels.errors_for_mask(bits, xa, structure.mask)


def is_false_predictor(structure: Structure, data: Sequence[Sample]) -> bool:
    """True iff the structure is redundant and some binary table classifies
    every training sample correctly (non-empty data)."""
    if not data or not structure.is_redundant():
        return False
    return min_training_errors(structure, data) == 0
