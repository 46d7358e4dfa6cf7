"""Length curriculum: advancement, caps, sampling."""

import numpy as np
import pytest

from urex.curriculum import CurriculumState


def test_perfect_window_advances():
    cur = CurriculumState(window=100)
    for _ in range(99):
        cur.record_episode(2.0, 2.0)
        assert cur.current_max_length == 2
    cur.record_episode(2.0, 2.0)
    assert cur.current_max_length == 3
    assert len(cur.ratios) == 0  # window cleared on advance


def test_below_threshold_holds():
    cur = CurriculumState(window=50, advance_threshold=0.95)
    for _ in range(500):
        cur.record_episode(0.9, 1.0)
    assert cur.current_max_length == 2


def test_cap_is_respected():
    cur = CurriculumState(window=10, length_cap=33)
    cur.current_max_length = 33
    for _ in range(100):
        cur.record_episode(1.0, 1.0)
    assert cur.current_max_length == 33


def test_monotone_non_decreasing():
    rng = np.random.default_rng(0)
    cur = CurriculumState(window=20)
    prev = cur.current_max_length
    for _ in range(2000):
        cur.record_episode(float(rng.uniform(-1, 1)), 1.0)
        assert cur.current_max_length >= prev
        prev = cur.current_max_length


def test_no_episode_counts_twice():
    cur = CurriculumState(window=10, advance_threshold=0.5)
    for _ in range(10):
        cur.record_episode(1.0, 1.0)
    assert cur.current_max_length == 3
    # nine further mediocre episodes must not advance on leftovers
    for _ in range(9):
        cur.record_episode(0.6, 1.0)
    assert cur.current_max_length == 3


def test_rejects_nonpositive_max_reward():
    with pytest.raises(ValueError):
        CurriculumState().record_episode(1.0, 0.0)


def test_sample_length_bounds_and_frequencies():
    cur = CurriculumState()
    rng = np.random.default_rng(1)
    assert all(cur.sample_length(rng) == 2 for _ in range(50))
    cur.current_max_length = 5
    draws = np.array([cur.sample_length(rng) for _ in range(10_000)])
    assert draws.min() == 2 and draws.max() == 5
    counts = np.bincount(draws, minlength=6)[2:6]
    sigma = np.sqrt(10_000 * 0.25 * 0.75)
    assert np.all(np.abs(counts - 2500) < 3 * sigma)
