"""Gradient clipping and Adam ascent behavior."""

import numpy as np
import pytest

from urex.trainers import AdamState, adam_update, clip_gradient


def test_clip_under_threshold_unchanged():
    g = np.array([0.3, -0.4])  # norm 0.5
    out = clip_gradient(g, 1.0)
    assert out is g


def test_clip_rescales_to_exact_norm():
    rng = np.random.default_rng(0)
    g = rng.normal(size=300)
    g *= 200.0 / np.linalg.norm(g)
    out = clip_gradient(g, 100.0)
    assert abs(np.linalg.norm(out) - 100.0) < 1e-9
    cosine = np.dot(out, g) / (np.linalg.norm(out) * np.linalg.norm(g))
    assert abs(cosine - 1.0) < 1e-12


def test_clip_idempotent():
    rng = np.random.default_rng(1)
    for _ in range(50):
        g = rng.normal(size=64) * rng.uniform(0.1, 50)
        c = float(rng.uniform(0.5, 5))
        once = clip_gradient(g, c)
        twice = clip_gradient(once, c)
        assert np.max(np.abs(twice - once)) <= 1e-12 * max(1.0, c)


def test_clip_rejects_bad_norm():
    with pytest.raises(ValueError):
        clip_gradient(np.ones(3), 0.0)


def test_adam_zero_gradient_no_move():
    params = np.array([1.0, -2.0, 3.0])
    state = AdamState.like(params)
    out = adam_update(params, np.zeros(3), state, 0.1)
    assert np.array_equal(out, params)


def test_adam_constant_gradient_step_size():
    # with a constant gradient the per-coordinate step approaches eta * sign(g)
    params = np.zeros(4)
    g = np.array([1.0, -2.0, 0.5, 10.0])
    state = AdamState.like(params)
    prev = params
    for _ in range(300):
        new = adam_update(prev, g, state, 0.01)
        delta = new - prev
        prev = new
    assert np.allclose(np.abs(delta), 0.01, rtol=1e-3)
    assert np.all(np.sign(delta) == np.sign(g))


def test_adam_ascends():
    # maximize -||x - 3||^2
    params = np.zeros(5)
    state = AdamState.like(params)
    for _ in range(2000):
        grad = -2.0 * (params - 3.0)
        params = adam_update(params, grad, state, 0.05)
    assert np.allclose(params, 3.0, atol=1e-3)


def test_adam_deterministic():
    rng = np.random.default_rng(5)
    grads = rng.normal(size=(20, 8))

    def run():
        p = np.ones(8)
        st = AdamState.like(p)
        for g in grads:
            p = adam_update(p, g, st, 0.01)
        return p

    assert np.array_equal(run(), run())
