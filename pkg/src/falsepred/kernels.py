"""Hot numeric kernels.

The inner loop of the whole laboratory is: given ``m`` packed samples and a
set of candidate variable masks, count for each mask the minimum number of
0/1-table misclassifications (sum over observed patterns of the minority
class count).  Everything else is orchestration.

Two implementations are provided:

* a numba ``@njit`` kernel (default), and
* a pure-numpy fallback, selected by setting the environment variable
  ``FALSEPRED_DISABLE_NUMBA=1`` (also used automatically when numba is not
  importable).

``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import GuardError

# Patterns with more bits than this would need >2**MAX_PATTERN_BITS counter
# slots per mask; refuse instead of thrashing memory.
MAX_PATTERN_BITS = 25


def _numba_disabled() -> bool:
    return os.environ.get("FALSEPRED_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")


USING_NUMBA = False
if not _numba_disabled():
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        USING_NUMBA = False


def mask_positions(mask: int) -> list[int]:
    """Ascending bit positions set in ``mask``."""
    out = []
    j = 0
    while mask >> j:
        if (mask >> j) & 1:
            out.append(j)
        j += 1
    return out


def popcount(mask: int) -> int:
    return int(mask).bit_count()


def _errors_for_masks_numpy(bits: np.ndarray, xa: np.ndarray, masks: np.ndarray) -> np.ndarray:
    out = np.empty(len(masks), dtype=np.int64)
    m = len(bits)
    xa64 = xa.astype(np.int64)
    total_ones = int(xa64.sum())
    for i, mask in enumerate(masks.tolist()):
        pos = mask_positions(mask)
        s = len(pos)
        if s == 0:
            out[i] = min(total_ones, m - total_ones)
            continue
        idx = np.zeros(m, dtype=np.int64)
        for j, p in enumerate(pos):
            idx |= ((bits >> p) & 1) << j
        counts = np.bincount((idx << 1) | xa64, minlength=1 << (s + 1))
        pairs = counts.reshape(-1, 2)
        out[i] = int(np.minimum(pairs[:, 0], pairs[:, 1]).sum())
    return out


if USING_NUMBA:

    @njit(cache=True)
    def _errors_for_masks_numba(bits, xa, masks):  # pragma: no cover - jitted
        n_masks = masks.shape[0]
        m = bits.shape[0]
        out = np.empty(n_masks, dtype=np.int64)
        pos = np.empty(64, dtype=np.int64)
        for i in range(n_masks):
            mask = masks[i]
            s = 0
            for b in range(64):
                if (mask >> b) & 1:
                    pos[s] = b
                    s += 1
            if s == 0:
                ones = 0
                for t in range(m):
                    ones += xa[t]
                out[i] = min(ones, m - ones)
                continue
            size = 1 << s
            c0 = np.zeros(size, dtype=np.int64)
            c1 = np.zeros(size, dtype=np.int64)
            for t in range(m):
                v = bits[t]
                idx = 0
                for j in range(s):
                    idx |= ((v >> pos[j]) & 1) << j
                if xa[t]:
                    c1[idx] += 1
                else:
                    c0[idx] += 1
            e = 0
            for q in range(size):
                e += min(c0[q], c1[q])
            out[i] = e
        return out


def errors_for_masks(bits: np.ndarray, xa: np.ndarray, masks) -> np.ndarray:
    """Minimum 0/1-table training errors for each candidate mask.

    ``bits`` packs body-variable values (bit j = variable j), ``xa`` holds the
    dependent bit.  For a mask the optimum table predicts the majority value
    of ``xa`` within each observed pattern, so its error count is the sum of
    per-pattern minority counts.
    """
    masks = np.asarray(masks, dtype=np.int64)
    if masks.ndim != 1:
        raise ValueError("masks must be one-dimensional")
    if len(bits) != len(xa):
        raise ValueError("bits and xa length mismatch")
    for mask in masks.tolist():
        if popcount(mask) > MAX_PATTERN_BITS:
            raise GuardError(
                f"mask {mask:#x} has more than {MAX_PATTERN_BITS} pattern bits"
            )
    bits = np.ascontiguousarray(bits, dtype=np.int64)
    xa = np.ascontiguousarray(xa, dtype=np.uint8)
    if USING_NUMBA:
        return _errors_for_masks_numba(bits, xa, masks)
    return _errors_for_masks_numpy(bits, xa, masks)


def errors_for_mask(bits: np.ndarray, xa: np.ndarray, mask: int) -> int:
    return int(errors_for_masks(bits, xa, [mask])[0])


def pattern_indices(bits: np.ndarray, mask: int) -> np.ndarray:
    """Compressed pattern index of each sample under ``mask``.

    Bit ``j`` of the result is the value of the j-th lowest variable of the
    mask, matching the structure-order pattern layout.
    """
    pos = mask_positions(mask)
    idx = np.zeros(len(bits), dtype=np.int64)
    for j, p in enumerate(pos):
        idx |= ((np.asarray(bits, dtype=np.int64) >> p) & 1) << j
    return idx


def fit_prediction_table(
    bits: np.ndarray, xa: np.ndarray, mask: int
) -> tuple[np.ndarray, np.ndarray, int]:
    """Vectorized majority fit over the full pattern space of ``mask``.

    Returns ``(table, seen, default)``: per-pattern majority predictions
    (ties and unseen patterns resolve to the default), a seen-pattern flag
    array, and the global-majority default (tie resolves to 0).
    """
    s = popcount(mask)
    if s > MAX_PATTERN_BITS:
        raise GuardError(f"mask {mask:#x} has more than {MAX_PATTERN_BITS} pattern bits")
    m = len(bits)
    ones = int(np.asarray(xa).astype(np.int64).sum())
    default = 1 if ones > m - ones else 0
    size = 1 << s
    idx = pattern_indices(bits, mask)
    c1 = np.bincount(idx, weights=np.asarray(xa, dtype=np.float64), minlength=size)
    ctot = np.bincount(idx, minlength=size)
    seen = ctot > 0
    table = np.full(size, default, dtype=np.uint8)
    table[seen] = (2 * c1[seen] > ctot[seen]).astype(np.uint8)
    return table, seen, default
