import numpy as np
import pytest

from falsepred import (
    ConfigError,
    WorldConfig,
    derive_seed_int,
    generate_stream,
    generate_stream_arrays,
    sample_world,
)
from falsepred.model import DOMAIN_TEST


def test_config_validation():
    with pytest.raises(ConfigError):
        WorldConfig(n_redundant=4, alpha=1.5, seed=0)
    with pytest.raises(ConfigError):
        WorldConfig(n_redundant=-1, alpha=0.5, seed=0)


def test_alpha_one_couples_exactly():
    world = WorldConfig(n_redundant=3, alpha=1.0, seed=11)
    for s in generate_stream(world, 500):
        assert s.x_a == s.x_0


def test_alpha_zero_anticouples_exactly():
    world = WorldConfig(n_redundant=3, alpha=0.0, seed=11)
    for s in generate_stream(world, 500):
        assert s.x_a == 1 - s.x_0


def test_coupling_fraction_near_alpha():
    world = WorldConfig(n_redundant=2, alpha=0.8, seed=42)
    stream = generate_stream(world, 100_000)
    frac = sum(1 for s in stream if s.x_a == s.x_0) / len(stream)
    assert 0.79 <= frac <= 0.81


def test_alpha_half_decouples():
    world = WorldConfig(n_redundant=1, alpha=0.5, seed=42)
    stream = generate_stream(world, 100_000)
    xa = np.array([s.x_a for s in stream], dtype=float)
    x0 = np.array([s.x_0 for s in stream], dtype=float)
    corr = np.corrcoef(xa, x0)[0, 1]
    assert abs(corr) < 0.02


def test_xa_marginal_uniform_for_any_alpha():
    for alpha in (0.0, 0.3, 0.8, 1.0):
        world = WorldConfig(n_redundant=1, alpha=alpha, seed=7)
        _, xa = generate_stream_arrays(world, 100_000)
        assert abs(float(xa.mean()) - 0.5) < 0.01


def test_xa_independent_of_redundant_bits():
    # 2x2 chi-square of x_a against each redundant bit; with one degree of
    # freedom the 0.001 critical value is 10.83.
    world = WorldConfig(n_redundant=3, alpha=0.8, seed=99)
    stream = generate_stream(world, 100_000)
    m = len(stream)
    xa = np.array([s.x_a for s in stream])
    for j in range(3):
        xj = np.array([s.redundant[j] for s in stream])
        chi2 = 0.0
        for a in (0, 1):
            for b in (0, 1):
                observed = int(((xa == a) & (xj == b)).sum())
                expected = ((xa == a).sum() * (xj == b).sum()) / m
                chi2 += (observed - expected) ** 2 / expected
        assert chi2 < 10.83


def test_stream_empty_and_determinism():
    world = WorldConfig(n_redundant=2, alpha=0.8, seed=5)
    assert generate_stream(world, 0) == []
    assert generate_stream(world, 25) == generate_stream(world, 25)


def test_stream_prefix_property():
    world = WorldConfig(n_redundant=4, alpha=0.8, seed=123)
    assert generate_stream(world, 10) == generate_stream(world, 11)[:10]
    b_small, xa_small = generate_stream_arrays(world, 40)
    b_big, xa_big = generate_stream_arrays(world, 200)
    assert np.array_equal(b_small, b_big[:40])
    assert np.array_equal(xa_small, xa_big[:40])


def test_seed_domains_are_disjoint_streams():
    world = WorldConfig(n_redundant=4, alpha=0.8, seed=123)
    train, _ = generate_stream_arrays(world, 50)
    test, _ = generate_stream_arrays(world, 50, domain=DOMAIN_TEST)
    assert not np.array_equal(train, test)


def test_derive_seed_int_varies_with_index():
    seeds = {derive_seed_int(7, i) for i in range(100)}
    assert len(seeds) == 100


def test_sample_world_matches_declared_shape():
    world = WorldConfig(n_redundant=5, alpha=0.8, seed=1)
    rng = np.random.default_rng(0)
    s = sample_world(world, rng)
    assert len(s.redundant) == 5
    assert s.values[0] == s.x_0
    assert s.values[1:] == s.redundant
