"""Ground-truth world model.

The world consists of one dependent bit ``x_a``, one informative bit ``x_0``
and ``n_redundant`` independent fair bits ``x_1 .. x_n``.  All bits except
``x_a`` are independent and uniform; ``x_a`` equals ``x_0`` with probability
``alpha`` and its complement otherwise.

Randomness comes from numpy's PCG64 generator.  Streams are derived from
``(seed, domain)`` via ``numpy.random.SeedSequence`` spawn keys, so identical
configurations always reproduce bit-identical streams, and the training,
testing and Monte Carlo domains never overlap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# Seed domains.  Training streams, held-out monitor streams and oracle trials
# must never share generator state.
DOMAIN_TRAIN = 0
DOMAIN_TEST = 1
DOMAIN_ORACLE = 2


@dataclass(frozen=True)
class WorldConfig:
    """Parameters of the ground-truth joint distribution."""

    n_redundant: int
    alpha: float
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.n_redundant < 0:
            raise ConfigError(f"n_redundant must be >= 0, got {self.n_redundant}")


@dataclass(frozen=True)
class Sample:
    """One complete joint observation."""

    x_a: int
    x_0: int
    redundant: tuple[int, ...]

    @property
    def values(self) -> tuple[int, ...]:
        """Body-variable values indexed 0..n, where index 0 is x_0."""
        return (self.x_0,) + self.redundant


def derive_seed(base_seed: int, *domain: int) -> np.random.SeedSequence:
    """Deterministically derive an independent seed from a base seed.

    Parallel callers (histories, trials) mix their index into the spawn key
    so that streams are independent and order-insensitive.
    """
    return np.random.SeedSequence(entropy=base_seed, spawn_key=tuple(domain))


def derive_seed_int(base_seed: int, *domain: int) -> int:
    return int(derive_seed(base_seed, *domain).generate_state(1)[0])


def sample_world(config: WorldConfig, rng: np.random.Generator) -> Sample:
    """Draw a single sample using the caller's generator state."""
    x_0 = int(rng.integers(0, 2))
    redundant = tuple(int(b) for b in rng.integers(0, 2, size=config.n_redundant))
    x_a = x_0 if rng.random() < config.alpha else 1 - x_0
    return Sample(x_a=x_a, x_0=x_0, redundant=redundant)


def generate_stream_arrays(
    config: WorldConfig, m: int, domain: int = DOMAIN_TRAIN
) -> tuple[np.ndarray, np.ndarray]:
    """Packed form of :func:`generate_stream`.

    Returns ``(bits, xa)`` where ``bits[i]`` packs the body-variable values of
    sample ``i`` (bit ``j`` is the value of variable ``j``, with variable 0
    being x_0) and ``xa[i]`` is the dependent bit.

    The two underlying generator streams are consumed row-by-row, so the
    length-``m`` stream is a prefix of the length-``m+1`` stream.
    """
    if m < 0:
        raise ConfigError(f"stream length must be >= 0, got {m}")
    ss = derive_seed(config.seed, domain)
    bits_ss, coupling_ss = ss.spawn(2)
    rng_bits = np.random.default_rng(bits_ss)
    rng_coupling = np.random.default_rng(coupling_ss)

    n = config.n_redundant
    cols = rng_bits.integers(0, 2, size=(m, n + 1), dtype=np.uint8)
    coupling = rng_coupling.random(m)

    x0 = cols[:, 0]
    xa = np.where(coupling < config.alpha, x0, 1 - x0).astype(np.uint8)
    bits = np.zeros(m, dtype=np.int64)
    for j in range(n + 1):
        bits |= cols[:, j].astype(np.int64) << j
    return bits, xa


def generate_stream(
    config: WorldConfig, m: int, domain: int = DOMAIN_TRAIN
) -> list[Sample]:
    """Draw ``m`` samples; same seed yields the identical list, and shorter
    streams are prefixes of longer ones."""
    bits, xa = generate_stream_arrays(config, m, domain)
    return arrays_to_samples(bits, xa, config.n_redundant)


def arrays_to_samples(bits: np.ndarray, xa: np.ndarray, n_redundant: int) -> list[Sample]:
    out = []
    for b, a in zip(bits.tolist(), xa.tolist()):
        out.append(
            Sample(
                x_a=int(a),
                x_0=b & 1,
                redundant=tuple((b >> j) & 1 for j in range(1, n_redundant + 1)),
            )
        )
    return out


def samples_to_arrays(data, n_redundant: int) -> tuple[np.ndarray, np.ndarray]:
    """Pack a list of samples into the ``(bits, xa)`` kernel layout."""
    m = len(data)
    bits = np.zeros(m, dtype=np.int64)
    xa = np.zeros(m, dtype=np.uint8)
    for i, s in enumerate(data):
        if len(s.redundant) != n_redundant:
            raise ConfigError(
                f"sample {i} has {len(s.redundant)} redundant bits, expected {n_redundant}"
            )
        b = s.x_0
        for j, v in enumerate(s.redundant, start=1):
            b |= v << j
        bits[i] = b
        xa[i] = s.x_a
    return bits, xa
