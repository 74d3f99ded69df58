import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from lockkeys.core import (
    Keyring,
    Problem,
    RngStream,
    TrialTrace,
    make_problem,
    random_keyring,
    random_keyrings,
)


def test_make_problem_paper_instance():
    assert make_problem(5, 10) == Problem(5, 10)


def test_make_problem_empty_game():
    p = make_problem(0, 0)
    assert (p.locks, p.keys) == (0, 0)


@pytest.mark.parametrize("locks,keys", [(4, 3), (-1, 2), (1, -1)])
def test_make_problem_rejects(locks, keys):
    with pytest.raises(ValueError):
        make_problem(locks, keys)


def test_make_problem_rejects_non_integers():
    with pytest.raises(TypeError):
        make_problem(1.5, 3)
    with pytest.raises(TypeError):
        make_problem(True, 3)


def test_keyring_must_be_permutation():
    Keyring((2, 3, 1))
    with pytest.raises(ValueError):
        Keyring((1, 1, 2))
    with pytest.raises(ValueError):
        Keyring((0, 1))


def test_trial_trace_total_matches_sum():
    assert TrialTrace.from_counts([2, 1]).total == 3
    with pytest.raises(ValueError):
        TrialTrace(4, (2, 1))
    with pytest.raises(ValueError):
        TrialTrace(0, (0,))


def test_rng_same_identity_same_words():
    a = RngStream(5).split(3)
    b = RngStream(5).split(3)
    assert np.array_equal(a.words(16), b.words(16))
    assert not np.array_equal(RngStream(5).split(4).words(16), RngStream(5).split(3).words(16))


def test_rng_words_regression():
    words = RngStream(5).split(3).words(3)
    assert [int(w) for w in words] == [
        13285265546148745481, 12814295584180038702, 11776615803035385180,
    ]


@given(st.integers(0, 2**32), st.integers(1, 2**40))
def test_bounded_in_range(seed, bound):
    rng = RngStream(seed)
    assert 0 <= rng.bounded(bound) < bound
    arr = rng.bounded_array(np.full(7, bound))
    assert arr.min() >= 0 and arr.max() < bound


def test_bounded_array_rejects_huge_remainders():
    # bound just over 2**63 rejects almost half of all words; the loop must still finish
    bound = (1 << 63) + 1
    arr = RngStream(1).bounded_array(np.full(1000, bound, dtype=np.uint64))
    assert np.all(arr.astype(np.uint64) < np.uint64(bound))


def test_random_keyring_single_key():
    for seed in range(5):
        assert random_keyring(1, RngStream(seed)).order == (1,)


def test_random_keyring_seed_regression():
    assert random_keyring(3, RngStream(2024)).order == (3, 2, 1)
    assert random_keyring(10, RngStream(2024)).order == (8, 10, 6, 4, 1, 5, 3, 9, 2, 7)


def test_random_keyring_first_position_frequencies():
    m = 100_000
    rng = RngStream(11)
    first = Counter(random_keyring(8, rng).order[0] for _ in range(m))
    band = 3 * math.sqrt((1 / 8) * (7 / 8) / m)
    for label in range(1, 9):
        assert abs(first[label] / m - 1 / 8) <= band


def test_random_keyring_chi_square_n5():
    m = 100_000
    rngs = RngStream(12)
    first = Counter(random_keyring(5, rngs).order[0] for _ in range(m))
    obs = [first[k] for k in range(1, 6)]
    assert stats.chisquare(obs).pvalue > 1e-4


def test_shuffle_unbiased_n3():
    m = 100_000
    rng = RngStream(13)
    seen = Counter(random_keyring(3, rng).order for _ in range(m))
    assert set(seen) == set(itertools.permutations((1, 2, 3)))
    band = 4 * math.sqrt((1 / 6) * (5 / 6) / m)
    for count in seen.values():
        assert abs(count / m - 1 / 6) <= band


def test_batch_keyrings_are_permutations_and_uniform():
    m = 100_000
    rings = random_keyrings(3, m, RngStream(14))
    assert np.all(np.sort(rings, axis=1) == np.arange(1, 4))
    codes = Counter(map(tuple, rings.tolist()))
    band = 4 * math.sqrt((1 / 6) * (5 / 6) / m)
    assert len(codes) == 6
    for count in codes.values():
        assert abs(count / m - 1 / 6) <= band
