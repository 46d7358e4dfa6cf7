"""Environment semantics: determinism, rewards, termination, latent shapes."""

import numpy as np
import pytest

from urex.envs import (COMPLETED, STEP_LIMIT, WRONG_EMISSION, EnvConfig,
                       TaskId, make_env, oracle_rollout, replay_trace)
from urex.envs.base import EpisodeError
from urex.envs.search import (CMP_EQ, CMP_GT, CMP_LT, CMP_NONE, OP_AVG,
                              OP_CMP, OP_DIV, OP_INC, SearchAction)
from urex.envs.tape import MOVE_LEFT, MOVE_RIGHT, TapeAction

TAPE_TASKS = [TaskId.COPY, TaskId.DUPLICATED_INPUT, TaskId.REPEAT_COPY,
              TaskId.REVERSE, TaskId.REVERSED_ADDITION]


def random_actions(env, rng, n):
    acts = []
    for _ in range(n):
        move = int(rng.integers(0, env.n_moves))
        write = int(rng.integers(0, 2))
        symbol = int(rng.integers(0, env.base))
        acts.append(TapeAction(move, write, symbol))
    return acts


@pytest.mark.parametrize("task", TAPE_TASKS + [TaskId.BINARY_SEARCH])
def test_identical_construction_identical_episodes(task):
    rng = np.random.default_rng(0)
    for seed in rng.integers(0, 2**31, size=5):
        a = make_env(task, int(seed))
        b = make_env(task, int(seed))
        obs_a, obs_b = a.reset(), b.reset()
        assert obs_a == obs_b
        if task is TaskId.BINARY_SEARCH:
            actions = [SearchAction(int(o), int(r))
                       for o, r in zip(rng.integers(0, 4, 30), rng.integers(0, 3, 30))]
        else:
            actions = random_actions(a, rng, 30)
        for act in actions:
            ra = a.step(act)
            rb = b.step(act)
            assert ra == rb
            if ra.done:
                break


@pytest.mark.parametrize("task", TAPE_TASKS)
def test_oracle_reward_equals_max_total_reward(task):
    # reward accounting across 1000 random seeds per task
    env = make_env(task, 20240101, (2, 15))
    for _ in range(1000):
        env.reset()
        traj = oracle_rollout(env)
        assert traj.total_reward == env.max_total_reward()
        assert env.done and abs(sum(traj.rewards) - traj.total_reward) < 1e-12


def test_copy_basics():
    env = make_env(TaskId.COPY, 7, (5, 5))
    env.reset()
    assert env.reset() is not None
    # first observation is the first tape symbol
    obs = env.restart()
    assert obs == env.tape[0]
    # correct full emission earns one reward per symbol
    total = 0.0
    for sym in env.tape:
        res = env.step(TapeAction(MOVE_RIGHT, 1, sym))
        total += res.reward
    assert total == len(env.tape) == env.max_total_reward()
    assert res.done and res.cause == COMPLETED


def test_wrong_emission_ends_episode():
    env = make_env(TaskId.COPY, 11, (4, 4))
    env.reset()
    wrong = (env.target[0] + 1) % env.base
    res = env.step(TapeAction(MOVE_RIGHT, 1, wrong))
    assert res.reward == -0.5 and res.done and res.cause == WRONG_EMISSION
    with pytest.raises(EpisodeError):
        env.step(TapeAction(MOVE_RIGHT, 0, 0))


def test_step_limit_penalty():
    env = make_env(TaskId.COPY, 13, (3, 3))
    env.reset()
    res = None
    for _ in range(env.step_limit):
        res = env.step(TapeAction(MOVE_LEFT, 0, 0))
    assert res.done and res.cause == STEP_LIMIT and res.reward == -1.0


def test_blank_observation_off_tape():
    env = make_env(TaskId.COPY, 17, (3, 3))
    env.reset()
    res = env.step(TapeAction(MOVE_LEFT, 0, 0))  # pointer to -1
    assert res.obs == env.blank


def test_duplicated_input_layout():
    env = make_env(TaskId.DUPLICATED_INPUT, 3, (6, 6))
    env.reset()
    assert len(env.tape) % 2 == 0
    assert env.tape[0::2] == env.tape[1::2]  # each symbol doubled
    assert env.target == env.tape[0::2]


def test_repeat_copy_target():
    env = make_env(TaskId.REPEAT_COPY, 5, (4, 4))
    env.reset()
    n = len(env.tape)
    assert env.max_total_reward() == 3 * n
    assert env.target == env.tape + env.tape[::-1] + env.tape


def test_reverse_small_case():
    env = make_env(TaskId.REVERSE, 23, (2, 2))
    env.reset()
    traj = oracle_rollout(env)
    assert traj.total_reward == 2.0
    assert env.target == env.tape[::-1]


def test_reversed_addition_grid():
    cfg = EnvConfig()
    for seed in range(50):
        env = make_env(TaskId.REVERSED_ADDITION, seed, (2, 12), cfg)
        env.reset()
        assert len(env.grid) == 2
        assert all(d in (0, 1, 2) for row in env.grid for d in row)
        # little-endian sum matches integer addition
        n = env.input_length
        a = sum(d * 3**i for i, d in enumerate(env.grid[0]))
        b = sum(d * 3**i for i, d in enumerate(env.grid[1]))
        s = sum(d * 3**i for i, d in enumerate(env.target))
        assert a + b == s
        assert len(env.target) in (n, n + 1)


def test_binary_search_latent_and_registers():
    env = make_env(TaskId.BINARY_SEARCH, 99)
    for _ in range(50):
        env.reset()
        assert 32 <= env.n <= 512
        assert all(x < y for x, y in zip(env.array, env.array[1:]))
        assert env.array[env.query_pos] == env.query
        assert env.registers == [env.n, 0, 0]


def test_binary_search_register_ops():
    env = make_env(TaskId.BINARY_SEARCH, 1)
    env.set_latent(512, 100)
    env.step(SearchAction(OP_AVG, 2))
    assert env.registers == [512, 0, 256]
    res = env.step(SearchAction(OP_CMP, 2))
    assert res.obs == CMP_LT  # query at position 100 sits below cell 256
    env.step(SearchAction(OP_DIV, 0))
    assert env.registers == [256, 0, 256]
    env.step(SearchAction(OP_INC, 1))
    assert env.registers == [256, 1, 256]


def test_binary_search_found_reward_and_limit():
    env = make_env(TaskId.BINARY_SEARCH, 2)
    env.set_latent(40, 0)
    res = env.step(SearchAction(OP_CMP, 1))  # register 1 holds 0
    assert res.done and res.cause == "found_query"
    assert res.reward == 10.0 * (1.0 - 1.0 / 81.0)

    env.set_latent(40, 19)
    res = None
    for _ in range(2 * 40 + 1):
        res = env.step(SearchAction(OP_DIV, 2))  # never compares
    assert res.done and res.cause == STEP_LIMIT and res.reward == 0.0


def test_bandit_payoffs_shape_and_range():
    from urex.envs import bandit_payoffs

    r, phi = bandit_payoffs(4, num_actions=1000, beta=8.0, dim=30)
    assert r.shape == (1000,) and phi.shape == (1000, 30)
    assert r.min() >= 0.0 and r.max() < 1.0
    r2, phi2 = bandit_payoffs(4, num_actions=1000, beta=8.0, dim=30)
    assert np.array_equal(r, r2) and np.array_equal(phi, phi2)
    r1, _ = bandit_payoffs(4, num_actions=1000, beta=1.0, dim=3)
    # identity exponent keeps payoffs uniform on [0, 1)
    assert abs(r1.mean() - 0.5) < 0.05


def test_bandit_step():
    env = make_env(TaskId.BANDIT, 8, config=EnvConfig(bandit_actions=16))
    env.reset()
    res = env.step((3,))
    assert res.done and res.reward == env.payoffs[3]


def test_clone_shares_latent_fresh_episode():
    env = make_env(TaskId.COPY, 31, (4, 4))
    env.reset()
    env.step(TapeAction(MOVE_RIGHT, 0, 0))
    clone = env.clone()
    assert clone.tape == env.tape and clone.steps == 0 and not clone.done
    with pytest.raises(EpisodeError):
        clone.reset()


def test_trace_dump_format():
    env = make_env(TaskId.COPY, 41, (3, 3))
    env.reset()
    traj = oracle_rollout(env)
    lines = replay_trace(env, [env.decode_action(a) for a in traj.actions])
    assert len(lines) == len(traj.actions)
    first = lines[0].split(", ")
    assert first[0] == "1" and first[3] == "1" and first[4] == "0"
    assert lines[-1].endswith(", 1")  # done flag on the final step
