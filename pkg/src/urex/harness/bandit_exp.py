"""Large-action bandit comparison between the two policy-gradient methods.

Each repeat draws a fresh payoff vector and feature matrix; within a
repeat every (method, eta, tau, restart) combination trains a linear
softmax policy from its own random initialization on the same instance.
The best hyper-parameters per method are chosen by final expected reward
aggregated over all repeats, and the per-repeat advantage is measured at
those settings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..envs.bandit import BanditEnv
from ..policy.linear import LinearBanditPolicy
from ..trainers import AdamState, TrainConfig, adam_update, clip_gradient, group_coefficients


@dataclass
class BanditExperimentConfig:
    num_actions: int = 1000
    dim: int = 30
    beta: float = 8.0
    repeats: int = 20
    restarts: int = 5
    steps: int = 400
    k: int = 10
    etas: tuple = (0.1, 0.01)
    ment_taus: tuple = (0.0, 0.01)
    urex_taus: tuple = (0.1,)
    clip: float = 10.0
    init_scale: float = 0.1
    record_every: int = 10
    seed: int = 0

    def grid(self, method: str):
        taus = self.urex_taus if method == "urex" else self.ment_taus
        return [(eta, tau) for eta in self.etas for tau in taus]


@dataclass
class BanditExperimentResult:
    config: BanditExperimentConfig
    best_settings: dict = field(default_factory=dict)  # method -> (eta, tau)
    final_rewards: dict = field(default_factory=dict)  # method -> (repeats,) array
    curves: dict = field(default_factory=dict)  # method -> (mean, std) over repeats
    record_steps: list = field(default_factory=list)

    @property
    def advantage_per_repeat(self) -> np.ndarray:
        return self.final_rewards["urex"] - self.final_rewards["ment"]

    def to_csv(self) -> str:
        lines = ["step,ment_mean,ment_std,urex_mean,urex_std"]
        m_mean, m_std = self.curves["ment"]
        u_mean, u_std = self.curves["urex"]
        for i, step in enumerate(self.record_steps):
            lines.append(f"{step},{m_mean[i]},{m_std[i]},{u_mean[i]},{u_std[i]}")
        return "\n".join(lines) + "\n"


def train_bandit_policy(env: BanditEnv, method: str, tau: float, eta: float,
                        cfg: BanditExperimentConfig, restart_seed: int) -> np.ndarray:
    """Train one linear policy on one fixed instance; returns the expected
    reward trace sampled every ``record_every`` steps."""
    rng = np.random.Generator(np.random.PCG64(restart_seed))
    policy = LinearBanditPolicy(cfg.dim)
    policy.init_params(rng, scale=cfg.init_scale)
    optim = AdamState.like(policy.params.flat)
    train_cfg = TrainConfig(method=method, tau=tau, learning_rate=eta,
                            clip_norm=cfg.clip, k=cfg.k, n=1, max_steps=cfg.steps)
    trace = []
    for step in range(1, cfg.steps + 1):
        groups, grad_fn = policy.collect([env], cfg.k, rng)
        coeffs, _ = group_coefficients(train_cfg, groups)
        grad = clip_gradient(grad_fn(coeffs), cfg.clip)
        policy.params.flat[:] = adam_update(policy.params.flat, grad, optim, eta)
        if step % cfg.record_every == 0 or step == cfg.steps:
            trace.append(policy.expected_reward(env))
    return np.array(trace)


def run_bandit_experiment(cfg: BanditExperimentConfig) -> BanditExperimentResult:
    root = np.random.SeedSequence(cfg.seed)
    repeat_seeds = root.generate_state(cfg.repeats)
    restart_base = int(root.generate_state(1, dtype=np.uint64)[0] >> 1)

    # traces[method][(eta, tau)][repeat][restart] -> expected-reward trace
    traces = {m: {g: [] for g in cfg.grid(m)} for m in ("ment", "urex")}
    for rep in range(cfg.repeats):
        env = BanditEnv(int(repeat_seeds[rep]), num_actions=cfg.num_actions,
                        beta=cfg.beta, dim=cfg.dim)
        env.reset()
        for method in ("ment", "urex"):
            for eta, tau in cfg.grid(method):
                runs = []
                for restart in range(cfg.restarts):
                    seed = restart_base + rep * 1000 + restart
                    runs.append(train_bandit_policy(env, method, tau, eta, cfg, seed))
                traces[method][(eta, tau)].append(np.stack(runs))

    result = BanditExperimentResult(config=cfg)
    steps = [s for s in range(cfg.record_every, cfg.steps + 1, cfg.record_every)]
    if not steps or steps[-1] != cfg.steps:
        steps.append(cfg.steps)
    result.record_steps = steps
    for method in ("ment", "urex"):
        best, best_final = None, -np.inf
        for setting, per_repeat in traces[method].items():
            final = float(np.mean([runs[:, -1].mean() for runs in per_repeat]))
            if final > best_final:
                best, best_final = setting, final
        result.best_settings[method] = best
        per_repeat = traces[method][best]
        repeat_curves = np.stack([runs.mean(axis=0) for runs in per_repeat])
        result.curves[method] = (repeat_curves.mean(axis=0), repeat_curves.std(axis=0))
        result.final_rewards[method] = repeat_curves[:, -1]
    return result
