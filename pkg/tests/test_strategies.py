import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lockkeys.core import Keyring, RngStream, make_problem, random_keyring, random_keyrings
from lockkeys.strategies import (
    StrategyKind,
    batch_key_first,
    batch_lock_first,
    batch_totally_random,
    equivalent_on,
    play,
    play_key_first,
    play_lock_first,
    play_totally_random,
)


def all_rings(n_keys):
    return (Keyring(o) for o in itertools.permutations(range(1, n_keys + 1)))


@st.composite
def instances(draw, max_keys=12):
    keys = draw(st.integers(1, max_keys))
    locks = draw(st.integers(0, keys))
    perm = draw(st.permutations(range(1, keys + 1)))
    return make_problem(locks, keys), Keyring(tuple(perm))


# hand traces

def test_lock_first_hand_traces():
    t = play_lock_first(make_problem(2, 2), Keyring((2, 1)))
    assert (t.per_lock, t.total) == ((2, 1), 3)
    t = play_lock_first(make_problem(2, 3), Keyring((3, 1, 2)))
    assert (t.per_lock, t.total) == ((2, 2), 4)
    t = play_lock_first(make_problem(1, 1), Keyring((1,)))
    assert (t.per_lock, t.total) == ((1,), 1)


def test_key_first_hand_traces():
    assert play_key_first(make_problem(2, 3), Keyring((3, 1, 2))).total == 4
    assert play_key_first(make_problem(2, 2), Keyring((2, 1))).total == 3
    assert play_key_first(make_problem(1, 5), Keyring((5, 1, 2, 3, 4))).total == 2


def test_key_first_interval_charging():
    # key 3 fails twice, key 1 opens lock 1, key 2 opens lock 2
    t = play_key_first(make_problem(2, 3), Keyring((3, 1, 2)), charge="interval")
    assert t.per_lock == (3, 1)
    # per-lock charging: lock 1 tried by keys 3 and 1, lock 2 by keys 3 and 2
    assert play_key_first(make_problem(2, 3), Keyring((3, 1, 2))).per_lock == (2, 2)


def test_empty_game():
    p = make_problem(0, 3)
    assert play_lock_first(p, Keyring((2, 1, 3))).total == 0
    assert play_key_first(p, Keyring((2, 1, 3))).total == 0
    assert play_totally_random(p, RngStream(0)).total == 0


def test_ring_size_must_match():
    with pytest.raises(ValueError):
        play_lock_first(make_problem(2, 3), Keyring((1, 2)))


def test_play_dispatch():
    p, r = make_problem(2, 3), Keyring((3, 1, 2))
    assert play(p, StrategyKind.LOCK_FIRST, ring=r).total == 4
    assert play(p, StrategyKind.KEY_FIRST, ring=r).total == 4
    with pytest.raises(ValueError):
        play(p, StrategyKind.TOTALLY_RANDOM)
    with pytest.raises(ValueError):
        play(p, StrategyKind.KEY_FIRST)


# invariants

@given(instances())
def test_deterministic_players_are_pure_and_consistent(inst):
    problem, ring = inst
    for player in (play_lock_first, play_key_first):
        a, b = player(problem, ring), player(problem, ring)
        assert a == b
        assert a.total == sum(a.per_lock)
        assert len(a.per_lock) == problem.locks


@given(instances())
def test_lock_first_bounds(inst):
    problem, ring = inst
    t = play_lock_first(problem, ring)
    N = problem.keys
    for i, x in enumerate(t.per_lock, start=1):
        assert 1 <= x <= N - i + 1
    assert problem.locks <= t.total <= sum(N - i + 1 for i in range(1, problem.locks + 1))


@given(instances(max_keys=30))
def test_equivalence_property(inst):
    problem, ring = inst
    assert equivalent_on(problem, ring)


@given(instances(max_keys=20))
def test_key_first_per_lock_matches_lock_first(inst):
    problem, ring = inst
    assert play_key_first(problem, ring).per_lock == play_lock_first(problem, ring).per_lock


def test_equivalence_examples():
    assert equivalent_on(make_problem(2, 3), Keyring((3, 1, 2)))
    assert equivalent_on(make_problem(1, 1), Keyring((1,)))


@pytest.mark.parametrize("keys", range(1, 8))
def test_equivalence_exhaustive_small(keys):
    for locks in range(keys + 1):
        p = make_problem(locks, keys)
        assert all(equivalent_on(p, r) for r in all_rings(keys))


def test_lock_first_x1_uniform_n3():
    p = make_problem(3, 3)
    counts = Counter(play_lock_first(p, r).per_lock[0] for r in all_rings(3))
    assert counts == {1: 2, 2: 2, 3: 2}


@pytest.mark.parametrize("locks,keys", [(2, 3), (3, 5), (4, 6)])
def test_key_first_marginals_uniform_by_enumeration(locks, keys):
    p = make_problem(locks, keys)
    marg = [Counter() for _ in range(locks)]
    for r in all_rings(keys):
        for i, x in enumerate(play_key_first(p, r).per_lock):
            marg[i][x] += 1
    total = math.factorial(keys)
    for i, c in enumerate(marg, start=1):
        assert c == {k: total // (keys - i + 1) for k in range(1, keys - i + 2)}


def test_interval_charging_not_uniform_with_blanks():
    p = make_problem(2, 3)
    c = Counter(play_key_first(p, r, charge="interval").per_lock[0] for r in all_rings(3))
    assert c == {1: 2, 2: 2, 3: 1, 4: 1}


# totally random

def test_totally_random_single_pair():
    for seed in range(10):
        assert play_totally_random(make_problem(1, 1), RngStream(seed)).total == 1


def test_totally_random_mean_8_8():
    m = 100_000
    totals = batch_totally_random(make_problem(8, 8), m, RngStream(21))
    assert abs(totals.mean() - 36) <= 3 * math.sqrt(168 / m)


def test_totally_random_mean_5_10():
    m = 100_000
    totals = batch_totally_random(make_problem(5, 10), m, RngStream(22))
    assert abs(totals.mean() - 40) <= 3 * math.sqrt(290 / m)


def test_scalar_totally_random_mean():
    # the scalar player is slow; a smaller run at a wider band
    m = 20_000
    rng = RngStream(23)
    totals = [play_totally_random(make_problem(5, 10), rng).total for _ in range(m)]
    assert abs(np.mean(totals) - 40) <= 3 * math.sqrt(290 / m)


def test_scalar_totally_random_trace():
    t = play_totally_random(make_problem(4, 6), RngStream(3))
    assert len(t.per_lock) == 4 and t.total == sum(t.per_lock)


# batch players agree with scalar players

@pytest.mark.parametrize("locks,keys", [(0, 4), (1, 1), (3, 3), (5, 8), (10, 20), (30, 50)])
def test_batch_players_match_scalar(locks, keys):
    p = make_problem(locks, keys)
    rings = random_keyrings(keys, 300, RngStream(keys))
    lf = batch_lock_first(p, rings)
    kf = batch_key_first(p, rings)
    for row, a, b in zip(rings, lf, kf):
        ring = Keyring(tuple(row))
        assert a == play_lock_first(p, ring).total
        assert b == play_key_first(p, ring).total


def test_batch_players_exhaustive_n4():
    for locks in range(5):
        p = make_problem(locks, 5)
        rings = np.array(list(itertools.permutations(range(1, 6))))
        expect = [play_lock_first(p, Keyring(tuple(r))).total for r in rings]
        assert batch_lock_first(p, rings).tolist() == expect
        assert batch_key_first(p, rings).tolist() == expect


def test_scalar_keyring_and_batch_share_law():
    # position-1 frequencies from the scalar shuffle feed the scalar player
    rng = RngStream(30)
    p = make_problem(2, 3)
    totals = Counter(play_lock_first(p, random_keyring(3, rng)).total for _ in range(60_000))
    for t, prob in {2: 1 / 6, 3: 1 / 3, 4: 1 / 3, 5: 1 / 6}.items():
        assert abs(totals[t] / 60_000 - prob) < 4 * math.sqrt(prob * (1 - prob) / 60_000)
