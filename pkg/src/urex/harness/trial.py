"""Run one training trial to completion or early success."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..curriculum import CurriculumState
from ..envs import TAPE_TASKS, EnvConfig, TaskId, make_env
from ..policy import PolicyDivergence, RecurrentPolicy
from ..trainers import DoubleQLearner, PolicyGradientTrainer, QConfig, TrainConfig
from .profiles import TrialSpec

FINAL_REWARD_BATCHES = 10
_EVAL_STREAM = 0x5EED


@dataclass
class TrialResult:
    spec_key: str
    success: bool
    success_step: int | None
    final_expected_reward: float
    steps_run: int
    reward_curve: list = field(default_factory=list)
    weight_variance_curve: list = field(default_factory=list)
    eval_history: list = field(default_factory=list)  # (step, mean_reward, accuracy)
    failure_cause: str | None = None
    policy: object = None  # trained policy (or Q-learner); not serialized

    def record(self) -> dict:
        row = {
            "key": self.spec_key,
            "success": self.success,
            "success_step": self.success_step,
            "final_expected_reward": self.final_expected_reward,
            "steps_run": self.steps_run,
            "failure_cause": self.failure_cause,
        }
        return row


def env_factory_for(spec: TrialSpec, env_config: EnvConfig | None = None):
    cfg = env_config or EnvConfig()
    task = spec.task
    if task in TAPE_TASKS:
        def factory(seed, length):
            length_range = (length, length) if length else (2, spec.length_cap)
            return make_env(task, seed, length_range, cfg)
    elif task is TaskId.BINARY_SEARCH:
        def factory(seed, length=None):
            return make_env(task, seed, cfg.search_n_range, cfg)
    else:
        raise ValueError(f"run_trial does not handle task {task}; "
                         "use run_bandit_experiment for the bandit")
    return factory


def evaluate_greedy(policy, spec: TrialSpec, eval_rng, env_config=None):
    """Greedy decoding over eval_episodes random instances across the
    configured length range; returns (mean_reward, accuracy)."""
    factory = env_factory_for(spec, env_config)
    envs = []
    for _ in range(spec.eval_episodes):
        seed = int(eval_rng.integers(0, 2**63))
        length = None
        if spec.task in TAPE_TASKS:
            length = int(eval_rng.integers(2, spec.length_cap + 1))
        env = factory(seed, length)
        env.reset()
        envs.append(env)
    if isinstance(policy, DoubleQLearner):
        trajs = [policy.greedy_episode(env) for env in envs]
    else:
        trajs, _ = policy.rollout(envs, greedy=True)
    totals = np.array([t.total_reward for t in trajs])
    perfect = np.array([t.total_reward >= t.max_total_reward for t in trajs])
    return float(totals.mean()), float(perfect.mean())


def is_success(spec: TrialSpec, mean_reward: float, accuracy: float) -> bool:
    if spec.success_rule == "perfect":
        return accuracy >= 1.0
    return spec.success_threshold is not None and mean_reward >= spec.success_threshold


def run_trial(spec: TrialSpec, metrics_path=None, env_config=None) -> TrialResult:
    """Train per ``spec`` until the step budget or first successful
    evaluation; deterministic given the spec."""
    if spec.method == "qlearn":
        return _run_q_trial(spec, metrics_path, env_config)

    factory = env_factory_for(spec, env_config)
    curriculum = None
    if spec.task in TAPE_TASKS:
        curriculum = CurriculumState(window=spec.curriculum_window,
                                     advance_threshold=spec.curriculum_threshold,
                                     length_cap=spec.length_cap)
    probe_env = factory(0, 2 if spec.task in TAPE_TASKS else None)
    policy = RecurrentPolicy(probe_env.num_observations, probe_env.action_heads,
                             spec.hidden_size)
    policy.init_params(np.random.Generator(np.random.PCG64(spec.restart_seed)))
    config = TrainConfig(method=spec.method, tau=spec.tau, learning_rate=spec.eta,
                         clip_norm=spec.clip, k=spec.k, n=spec.n,
                         max_steps=spec.max_steps, seed=spec.restart_seed)
    trainer = PolicyGradientTrainer(policy, factory, config, curriculum)
    eval_rng = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence([spec.restart_seed, _EVAL_STREAM])))

    result = TrialResult(spec_key=spec.key(), success=False, success_step=None,
                         final_expected_reward=float("nan"), steps_run=0)
    sink = open(metrics_path, "w") if metrics_path else None
    try:
        for step in range(1, spec.max_steps + 1):
            try:
                metrics = trainer.step()
            except PolicyDivergence as err:
                result.failure_cause = f"divergence: {err}"
                break
            result.reward_curve.append(metrics.mean_reward)
            if metrics.weight_variance is not None:
                result.weight_variance_curve.append(metrics.weight_variance)
            result.steps_run = step
            if sink:
                sink.write(json.dumps(metrics.record()) + "\n")
            if step % spec.eval_every == 0 or step == spec.max_steps:
                mean_reward, accuracy = evaluate_greedy(policy, spec, eval_rng, env_config)
                result.eval_history.append((step, mean_reward, accuracy))
                if is_success(spec, mean_reward, accuracy):
                    result.success = True
                    result.success_step = step
                    break
    finally:
        if sink:
            sink.close()
    tail = result.reward_curve[-FINAL_REWARD_BATCHES:]
    result.final_expected_reward = float(np.mean(tail)) if tail else float("nan")
    result.policy = policy
    return result


def _run_q_trial(spec: TrialSpec, metrics_path=None, env_config=None) -> TrialResult:
    factory = env_factory_for(spec, env_config)
    qconf = QConfig(learning_rate=spec.eta, hidden_size=spec.hidden_size,
                    seed=spec.restart_seed)
    probe = factory(0, 2 if spec.task in TAPE_TASKS else None)
    probe.reset()
    learner = DoubleQLearner(probe, qconf)
    env_seed_rng = np.random.Generator(np.random.PCG64(spec.restart_seed))
    length_rng = np.random.Generator(np.random.PCG64(spec.restart_seed + 1))
    eval_rng = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence([spec.restart_seed, _EVAL_STREAM])))
    result = TrialResult(spec_key=spec.key(), success=False, success_step=None,
                         final_expected_reward=float("nan"), steps_run=0)
    sink = open(metrics_path, "w") if metrics_path else None
    try:
        for step in range(1, spec.max_steps + 1):
            length = None
            if spec.task in TAPE_TASKS:
                length = int(length_rng.integers(2, spec.length_cap + 1))
            env = factory(int(env_seed_rng.integers(0, 2**63)), length)
            metrics = learner.train_step(env)
            result.reward_curve.append(metrics["episode_reward"])
            result.steps_run = step
            if sink:
                sink.write(json.dumps(metrics) + "\n")
            if step % spec.eval_every == 0 or step == spec.max_steps:
                mean_reward, accuracy = evaluate_greedy(learner, spec, eval_rng, env_config)
                result.eval_history.append((step, mean_reward, accuracy))
                if is_success(spec, mean_reward, accuracy):
                    result.success = True
                    result.success_step = step
                    break
    finally:
        if sink:
            sink.close()
    tail = result.reward_curve[-FINAL_REWARD_BATCHES:]
    result.final_expected_reward = float(np.mean(tail)) if tail else float("nan")
    result.policy = learner
    return result
