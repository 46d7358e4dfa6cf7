"""Shared value types passed between environments, policies and trainers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Trajectory:
    """One finished episode.

    ``actions`` holds one tuple of head indices per step, e.g. ``(move,
    write, symbol)`` for tape tasks or a 1-tuple for single-head tasks.
    ``log_prob`` is the policy log-probability of the whole action
    sequence as recorded at sampling time (0.0 for scripted policies).
    """

    observations: list = field(default_factory=list)
    actions: list = field(default_factory=list)
    rewards: list = field(default_factory=list)
    total_reward: float = 0.0
    log_prob: float = 0.0
    env_seed: int = 0
    max_total_reward: float = 0.0
    cause: str | None = None

    def check(self) -> None:
        assert len(self.actions) == len(self.rewards) == len(self.observations)
        assert abs(sum(self.rewards) - self.total_reward) < 1e-9


@dataclass
class GradientEstimate:
    """Flat parameter-shaped gradient plus the number of trajectories used."""

    values: np.ndarray
    sample_count: int

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError("non-finite gradient estimate")
