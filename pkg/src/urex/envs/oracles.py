"""Perfect-policy rollouts used as reward oracles in tests and traces."""

from __future__ import annotations

from ..types import Trajectory
from .base import Env, EpisodeError
from .search import BinarySearchEnv, action_index, oracle_search_rollout
from .tape import (MOVE_LEFT, MOVE_RIGHT, CopyEnv, DuplicatedInputEnv,
                   RepeatCopyEnv, ReverseEnv, ReversedAdditionEnv, TapeAction)

TAPE_ENV_TYPES = (CopyEnv, DuplicatedInputEnv, RepeatCopyEnv, ReverseEnv, ReversedAdditionEnv)


def oracle_rollout(env: Env, strategy: str = "binary") -> Trajectory:
    """Run a scripted perfect policy on a fresh episode of ``env``.

    Tape tasks walk the pointer and emit the target directly; the search
    task runs the scripted linear or binary search.  The returned
    trajectory has ``log_prob`` 0 since no policy was involved.
    """
    obs0 = env.restart()
    if isinstance(env, BinarySearchEnv):
        actions, rewards, observations = oracle_search_rollout(env, strategy)
        actions = [(action_index(a),) for a in actions]  # store head-index tuples
    elif isinstance(env, TAPE_ENV_TYPES):
        actions = _tape_oracle_actions(env)
        rewards, observations = _apply(env, obs0, actions)
    else:
        raise EpisodeError(f"no oracle for task {type(env).__name__}")
    return Trajectory(
        observations=observations,
        actions=[tuple(a) for a in actions],
        rewards=rewards,
        total_reward=float(sum(rewards)),
        log_prob=0.0,
        env_seed=env.seed,
        max_total_reward=env.max_total_reward(),
        cause=None,
    )


def _apply(env: Env, obs0: int, actions) -> tuple[list[float], list[int]]:
    rewards = []
    observations = []
    obs = obs0
    for action in actions:
        observations.append(obs)
        res = env.step(action)
        rewards.append(res.reward)
        obs = res.obs
        if res.done:
            break
    if len(rewards) != len(actions):
        raise EpisodeError("oracle script ended before its action list")
    return rewards, observations


def _tape_oracle_actions(env) -> list[TapeAction]:
    if isinstance(env, ReversedAdditionEnv):
        # march right along the top row, writing one sum digit per step
        return [TapeAction(MOVE_RIGHT, 1, d) for d in env.target]
    tape = env.tape
    n = len(tape)
    if isinstance(env, CopyEnv):
        return [TapeAction(MOVE_RIGHT, 1, s) for s in tape]
    if isinstance(env, DuplicatedInputEnv):
        # write on even cells, skip odd ones; stop right after the last emission
        walk = [TapeAction(MOVE_RIGHT, 1 - (i % 2), tape[i]) for i in range(n)]
        return walk[: 2 * len(env.target) - 1]
    if isinstance(env, ReverseEnv):
        walk = [TapeAction(MOVE_RIGHT, 0, 0) for _ in range(n)]
        emit = [TapeAction(MOVE_LEFT, 1, tape[n - 1 - i]) for i in range(n)]
        return walk + emit
    if isinstance(env, RepeatCopyEnv):
        fwd = [TapeAction(MOVE_RIGHT, 1, tape[i]) for i in range(n)]
        back = [TapeAction(MOVE_LEFT, 1, tape[n - 1 - i]) for i in range(n)]
        return fwd + back + fwd
    raise EpisodeError(f"no tape oracle for {type(env).__name__}")
