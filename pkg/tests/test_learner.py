import pytest

from falsepred import (
    ConfigError,
    GROUND_TRUTH_STRUCTURE,
    LearnerConfig,
    RestartPolicy,
    Score,
    Structure,
    WorldConfig,
    exhaustive_best,
    hill_climb,
    is_false_predictor,
    online_learn,
    refine,
    structural_distance,
    training_errors,
)
from conftest import mk


def struct(*vars):
    return Structure.of(*vars)


# --- refine ------------------------------------------------------------------

def test_refine_examples():
    assert refine(struct(1), 3) == [
        Structure(()),
        struct(0, 1),
        struct(1, 2),
        struct(1, 3),
    ]
    assert refine(Structure(()), 2) == [struct(0), struct(1), struct(2)]
    full = Structure(tuple(range(4)))
    neighbors = refine(full, 3)
    assert len(neighbors) == 4
    assert all(n.size() == 3 for n in neighbors)


def test_refine_respects_flags():
    without_x0 = refine(struct(1), 3, allow_x0_in_body=False)
    assert struct(0, 1) not in without_x0
    assert Structure(()) in without_x0  # removals always allowed
    capped = refine(struct(1), 3, max_structure_size=1)
    assert all(n.size() <= 1 for n in capped)


def test_refine_neighbors_at_distance_one():
    for n in (2, 4):
        for mask in range(1 << (n + 1)):
            s = Structure.from_mask(mask)
            for nb in refine(s, n):
                assert structural_distance(s, nb) == 1


# --- Score -------------------------------------------------------------------

def test_score_orders_lexicographically():
    assert Score.of(struct(1, 2, 3), 0) < Score.of(struct(1), 1)
    assert Score.of(struct(1), 0) < Score.of(struct(1, 2), 0)
    # equal errors and size: larger mask wins
    assert Score.of(struct(2), 0) < Score.of(struct(1), 0)
    assert Score.of_mask(0b110, 3) == Score.of(struct(1, 2), 3)


# --- hill_climb ----------------------------------------------------------------

def test_hill_climb_finds_separable_signal():
    data = [mk(i & 1, (i >> 1) & 1, i & 1, (i >> 2) & 1) for i in range(8)]
    cfg = LearnerConfig()
    h = hill_climb(Structure(()), data, cfg)
    assert h.structure == struct(1)
    assert training_errors(h, data) == 0
    best = exhaustive_best(data, 2)
    assert training_errors(best, data) == 0


def test_hill_climb_fixed_point():
    data = [mk(1, 1), mk(0, 0), mk(1, 1)]
    h = hill_climb(GROUND_TRUTH_STRUCTURE, data, LearnerConfig())
    assert h.structure == GROUND_TRUTH_STRUCTURE


def test_hill_climb_xor_local_optimum():
    data = [
        mk(0, 0, 0, 0),
        mk(1, 0, 1, 0),
        mk(1, 0, 0, 1),
        mk(0, 0, 1, 1),
    ]
    h = hill_climb(Structure(()), data, LearnerConfig())
    assert h.structure == Structure(())
    assert training_errors(h, data) == 2
    best = exhaustive_best(data, 2)
    assert best.structure == struct(1, 2)
    assert training_errors(best, data) == 0


def test_hill_climb_rejects_empty_data():
    with pytest.raises(ConfigError):
        hill_climb(Structure(()), [], LearnerConfig())


def test_overfitting_cascade_sheds_ground_truth():
    # One noisy sample makes {0} imperfect; the climb walks through a mixed
    # structure and ends on the pure redundant predictor {1}.
    data = [
        mk(1, 1, 1, 0),
        mk(0, 0, 0, 0),
        mk(1, 1, 1, 0),
        mk(0, 0, 0, 0),
        mk(1, 0, 1, 0),
    ]
    h = hill_climb(GROUND_TRUTH_STRUCTURE, data, LearnerConfig())
    assert h.structure == struct(1)
    assert is_false_predictor(h.structure, data)


def test_greedy_never_beats_exhaustive():
    for seed in range(5):
        world = WorldConfig(n_redundant=4, alpha=0.8, seed=seed)
        from falsepred import generate_stream

        data = generate_stream(world, 25)
        greedy = hill_climb(Structure(()), data, LearnerConfig())
        best = exhaustive_best(data, 4)
        g = Score.of(greedy.structure, training_errors(greedy, data))
        b = Score.of(best.structure, training_errors(best, data))
        assert b <= g


# --- online_learn --------------------------------------------------------------

def test_online_learn_single_step():
    world = WorldConfig(n_redundant=2, alpha=0.8, seed=1)
    records = online_learn(world, LearnerConfig(), 1)
    assert len(records) == 1
    assert records[0].m == 1


def test_online_learn_deterministic():
    world = WorldConfig(n_redundant=5, alpha=0.8, seed=21)
    cfg = LearnerConfig()
    assert online_learn(world, cfg, 40) == online_learn(world, cfg, 40)


def test_online_learn_m_strictly_increasing_and_stop():
    world = WorldConfig(n_redundant=3, alpha=0.8, seed=2)
    cfg = LearnerConfig(restart_policy=RestartPolicy.RESTART_FROM_INITIAL)
    records = online_learn(world, cfg, 120)
    ms = [r.m for r in records]
    assert ms == sorted(set(ms))
    for r in records[:-1]:
        assert not r.is_ground_truth
    if records[-1].is_ground_truth:
        assert records[-1].structure == GROUND_TRUTH_STRUCTURE


def test_online_learn_no_stop_flag_runs_to_max_m():
    world = WorldConfig(n_redundant=3, alpha=0.8, seed=2)
    cfg = LearnerConfig(
        restart_policy=RestartPolicy.RESTART_FROM_INITIAL, stop_at_ground_truth=False
    )
    records = online_learn(world, cfg, 50)
    assert len(records) == 50


def test_online_learn_flags_false_predictors():
    world = WorldConfig(n_redundant=6, alpha=0.8, seed=33)
    records = online_learn(world, LearnerConfig(), 60)
    for r in records:
        assert r.is_false_predictor == (r.structure.is_redundant() and r.errors == 0)


def test_online_learn_rejects_oversized_initial_structure():
    world = WorldConfig(n_redundant=2, alpha=0.8, seed=1)
    cfg = LearnerConfig(initial_structure=Structure.of(9))
    with pytest.raises(ConfigError):
        online_learn(world, cfg, 5)
