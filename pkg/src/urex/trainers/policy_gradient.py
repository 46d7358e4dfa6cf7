"""Batched policy-gradient training step for the episodic tasks.

One step draws N fresh environment latents, samples K trajectories from
each (400 samples at the default K=10, N=40), turns the group rewards and
log-probs into per-trajectory coefficients for the configured method, and
applies clipped Adam ascent.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .coefficients import (importance_weights, ment_coefficients,
                           urex_coefficients, weight_variance)
from .optim import AdamState, adam_update, clip_gradient

METHODS = ("ment", "urex")


@dataclass
class TrainConfig:
    method: str
    tau: float
    learning_rate: float = 0.01
    clip_norm: float = 10.0
    k: int = 10
    n: int = 40
    max_steps: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "urex" and self.tau <= 0:
            raise ValueError("urex requires tau > 0")
        if self.tau < 0 or self.learning_rate <= 0 or self.clip_norm <= 0:
            raise ValueError("tau >= 0, learning_rate > 0 and clip_norm > 0 required")
        if self.k < 2:
            raise ValueError("K >= 2 required for within-group centering")


@dataclass
class StepMetrics:
    step: int
    method: str
    tau: float
    eta: float
    clip: float
    mean_reward: float
    coef_mean: float
    coef_std: float
    grad_norm_pre: float
    grad_norm_post: float
    wall_ms: float
    max_len: int | None = None
    weight_variance: float | None = None

    def record(self) -> dict:
        row = asdict(self)
        if self.weight_variance is None:
            row.pop("weight_variance")
        return row


def group_coefficients(config: TrainConfig, groups) -> tuple[np.ndarray, float | None]:
    """Flat coefficient vector for a list of trajectory groups.

    Also returns the mean importance-weight variance across groups when
    the method uses importance weights.
    """
    n = len(groups)
    coeffs = []
    variances = []
    for group in groups:
        rewards = np.array([t.total_reward for t in group])
        log_probs = np.array([t.log_prob for t in group])
        if config.method == "urex":
            coeffs.append(urex_coefficients(rewards, log_probs, config.tau, num_groups=n))
            variances.append(weight_variance(importance_weights(rewards, log_probs, config.tau)))
        else:
            coeffs.append(ment_coefficients(rewards, log_probs, config.tau, num_groups=n))
    wvar = float(np.mean(variances)) if variances else None
    return np.concatenate(coeffs), wvar


class PolicyGradientTrainer:
    """Owns the optimizer state and RNG streams for one training run.

    ``env_factory(seed, length)`` must return an unreset environment;
    ``length`` is None when no curriculum is attached.
    """

    def __init__(self, policy, env_factory, config: TrainConfig, curriculum=None):
        self.policy = policy
        self.env_factory = env_factory
        self.config = config
        self.curriculum = curriculum
        self.optim = AdamState.like(policy.params.flat)
        root = np.random.SeedSequence(config.seed)
        seeds = root.spawn(3)
        self.env_seed_rng = np.random.Generator(np.random.PCG64(seeds[0]))
        self.sample_rng = np.random.Generator(np.random.PCG64(seeds[1]))
        self.length_rng = np.random.Generator(np.random.PCG64(seeds[2]))
        self.step_count = 0

    def step(self) -> StepMetrics:
        t0 = time.perf_counter()
        cfg = self.config
        envs = []
        for _ in range(cfg.n):
            seed = int(self.env_seed_rng.integers(0, 2**63))
            length = None
            if self.curriculum is not None:
                length = self.curriculum.sample_length(self.length_rng)
            env = self.env_factory(seed, length)
            env.reset()
            envs.append(env)
        groups, grad_fn = self.policy.collect(envs, cfg.k, self.sample_rng)
        coeffs, wvar = group_coefficients(cfg, groups)
        grad = grad_fn(coeffs)
        norm_pre = float(np.linalg.norm(grad))
        grad = clip_gradient(grad, cfg.clip_norm)
        norm_post = float(np.linalg.norm(grad))
        self.policy.params.flat[:] = adam_update(
            self.policy.params.flat, grad, self.optim, cfg.learning_rate
        )
        totals = [t.total_reward for group in groups for t in group]
        if self.curriculum is not None:
            for group in groups:
                for traj in group:
                    self.curriculum.record_episode(traj.total_reward, traj.max_total_reward)
        self.step_count += 1
        return StepMetrics(
            step=self.step_count,
            method=cfg.method,
            tau=cfg.tau,
            eta=cfg.learning_rate,
            clip=cfg.clip_norm,
            mean_reward=float(np.mean(totals)),
            coef_mean=float(np.mean(coeffs)),
            coef_std=float(np.std(coeffs)),
            grad_norm_pre=norm_pre,
            grad_norm_post=norm_post,
            wall_ms=(time.perf_counter() - t0) * 1e3,
            max_len=None if self.curriculum is None else self.curriculum.current_max_length,
            weight_variance=wvar,
        )


def train_step(policy, optim: AdamState, envs, config: TrainConfig, rng) -> StepMetrics:
    """Single-shot variant operating on pre-reset group envs.

    Convenience wrapper for tests; long runs should use
    ``PolicyGradientTrainer`` which also owns seed streams and curriculum.
    """
    t0 = time.perf_counter()
    groups, grad_fn = policy.collect(envs, config.k, rng)
    coeffs, wvar = group_coefficients(config, groups)
    grad = grad_fn(coeffs)
    norm_pre = float(np.linalg.norm(grad))
    grad = clip_gradient(grad, config.clip_norm)
    policy.params.flat[:] = adam_update(policy.params.flat, grad, optim, config.learning_rate)
    totals = [t.total_reward for group in groups for t in group]
    return StepMetrics(
        step=optim.t, method=config.method, tau=config.tau, eta=config.learning_rate,
        clip=config.clip_norm, mean_reward=float(np.mean(totals)),
        coef_mean=float(np.mean(coeffs)), coef_std=float(np.std(coeffs)),
        grad_norm_pre=norm_pre, grad_norm_post=float(np.linalg.norm(grad)),
        wall_ms=(time.perf_counter() - t0) * 1e3, weight_variance=wvar,
    )
