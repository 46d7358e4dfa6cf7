"""Task registry: deterministic, seedable episodic environments.

Every environment is fully determined by ``(task, seed, length_range,
config)``: identical constructions replayed with identical action
sequences produce identical observation and reward sequences.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .bandit import BanditEnv, bandit_payoffs
from .base import (COMPLETED, FOUND_QUERY, STEP_LIMIT, WRONG_EMISSION, Env,
                   EpisodeError, StepResult, replay_trace, trace_line)
from .oracles import TAPE_ENV_TYPES, oracle_rollout
from .search import (CMP_EQ, CMP_GT, CMP_LT, CMP_NONE, BinarySearchEnv,
                     SearchAction, action_from_index, action_index,
                     scripted_binary_search, scripted_linear_search)
from .tape import (CopyEnv, DuplicatedInputEnv, RepeatCopyEnv, ReverseEnv,
                   ReversedAdditionEnv, TapeAction, TapeEnv)


class TaskId(enum.Enum):
    COPY = "Copy"
    DUPLICATED_INPUT = "DuplicatedInput"
    REPEAT_COPY = "RepeatCopy"
    REVERSE = "Reverse"
    REVERSED_ADDITION = "ReversedAddition"
    BINARY_SEARCH = "BinarySearch"
    BANDIT = "Bandit"

    @classmethod
    def parse(cls, name: str) -> "TaskId":
        for task in cls:
            if task.value.lower() == name.lower() or task.name.lower() == name.lower():
                return task
        raise ValueError(f"unknown task {name!r}")


TAPE_TASKS = (
    TaskId.COPY,
    TaskId.DUPLICATED_INPUT,
    TaskId.REPEAT_COPY,
    TaskId.REVERSE,
    TaskId.REVERSED_ADDITION,
)

# Required average total reward over 100 evaluation episodes.  The tape
# task numbers are the upstream benchmark defaults, not values measured
# here; the search threshold is part of the task definition.
SUCCESS_THRESHOLDS = {
    TaskId.COPY: 25.0,
    TaskId.DUPLICATED_INPUT: 9.0,
    TaskId.REPEAT_COPY: 75.0,
    TaskId.REVERSE: 25.0,
    TaskId.REVERSED_ADDITION: 25.0,
    TaskId.BINARY_SEARCH: 9.0,
}

TRAIN_LENGTH_RANGE = (2, 33)
SEARCH_N_RANGE = (32, 512)


@dataclass
class EnvConfig:
    """Per-task knobs with documented defaults."""

    base_alphabet: int = 5  # symbol alphabet for the four 1-D tape tasks
    addition_base: int = 3
    step_limit_factor: int = 4
    step_limit_offset: int = 4
    search_n_range: tuple = SEARCH_N_RANGE
    bandit_actions: int = 10_000
    bandit_dim: int = 30
    bandit_beta: float = 8.0
    thresholds: dict = field(default_factory=lambda: dict(SUCCESS_THRESHOLDS))


_TAPE_CLASSES = {
    TaskId.COPY: CopyEnv,
    TaskId.DUPLICATED_INPUT: DuplicatedInputEnv,
    TaskId.REPEAT_COPY: RepeatCopyEnv,
    TaskId.REVERSE: ReverseEnv,
    TaskId.REVERSED_ADDITION: ReversedAdditionEnv,
}


def make_env(task: TaskId, seed: int, length_range=None, config: EnvConfig | None = None) -> Env:
    """Build an unreset environment for ``task``.

    ``length_range`` bounds the hidden input length for tape tasks (the
    training curriculum keeps it inside [2, 33]; evaluation may go
    longer) and the array size for the search task.
    """
    config = config or EnvConfig()
    if task in _TAPE_CLASSES:
        cls = _TAPE_CLASSES[task]
        length_range = length_range or TRAIN_LENGTH_RANGE
        base = config.addition_base if task is TaskId.REVERSED_ADDITION else config.base_alphabet
        env = cls(seed, length_range, base=base,
                  limit_factor=config.step_limit_factor,
                  limit_offset=config.step_limit_offset)
    elif task is TaskId.BINARY_SEARCH:
        env = BinarySearchEnv(seed, length_range or config.search_n_range)
    elif task is TaskId.BANDIT:
        env = BanditEnv(seed, num_actions=config.bandit_actions,
                        beta=config.bandit_beta, dim=config.bandit_dim)
    else:
        raise ValueError(f"unknown task {task!r}")
    env.task = task
    return env


def max_total_reward(env: Env) -> float:
    """Total reward a perfect policy collects on the current episode."""
    return env.max_total_reward()
