"""Pointer-on-a-tape emission tasks.

Four of the tasks read a one-dimensional symbol tape through a movable
pointer; the addition task reads a 2 x n digit grid.  Every action is a
``(move, write, symbol)`` triple: the write is scored against the next
expected output symbol, then the pointer moves, then the new cell (or a
blank, outside the written region) is observed.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .base import COMPLETED, STEP_LIMIT, WRONG_EMISSION, Env, StepResult

MOVE_LEFT, MOVE_RIGHT, MOVE_UP, MOVE_DOWN = 0, 1, 2, 3
_MOVE_NAMES = ("left", "right", "up", "down")


class TapeAction(NamedTuple):
    move: int
    write: int  # 0 or 1
    symbol: int  # ignored by the env when write is 0


class TapeEnv(Env):
    """Common emission/reward/step-limit logic for all tape tasks."""

    n_moves = 2

    def __init__(self, seed: int, length_range: tuple[int, int], base: int = 5,
                 limit_factor: int = 4, limit_offset: int = 4):
        super().__init__(seed)
        lo, hi = int(length_range[0]), int(length_range[1])
        if lo < 2 or hi < lo:
            raise ValueError(f"bad length range {length_range!r}")
        self.length_range = (lo, hi)
        self.base = int(base)
        self.limit_factor = limit_factor
        self.limit_offset = limit_offset
        self.num_observations = self.base + 1  # symbols plus blank
        self.action_heads = (("move", self.n_moves), ("write", 2), ("out", self.base))

    @property
    def blank(self) -> int:
        return self.base

    # -- latent -------------------------------------------------------------
    def _draw_latent(self, stream):
        lo, hi = self.length_range
        self.input_length = int(stream.integers(lo, hi + 1))
        self._make_tape(stream)
        self.target = self._make_target()
        self.step_limit = self.limit_factor * self.input_length + self.limit_offset

    def _make_tape(self, stream):
        self.tape = tuple(int(s) for s in stream.integers(0, self.base, size=self.input_length))

    def _make_target(self) -> tuple:
        raise NotImplementedError

    def max_total_reward(self) -> float:
        return float(len(self.target))

    # -- episode -------------------------------------------------------------
    def _begin(self) -> int:
        self.pos = 0
        self.emitted = 0
        return self._observe()

    def _observe(self) -> int:
        pos = self.pos
        if 0 <= pos < len(self.tape):
            return self.tape[pos]
        return self.blank

    def step(self, action) -> StepResult:
        self._require_running()
        move, write, symbol = action
        if not 0 <= move < self.n_moves:
            raise ValueError(f"move {move} out of range for {self.task}")
        self.steps += 1
        reward = 0.0
        cause = None
        if write:
            if self.emitted < len(self.target) and symbol == self.target[self.emitted]:
                reward = 1.0
                self.emitted += 1
                if self.emitted == len(self.target):
                    self.done = True
                    cause = COMPLETED
            else:
                reward = -0.5
                self.done = True
                cause = WRONG_EMISSION
        if not self.done and self.steps >= self.step_limit:
            reward += -1.0
            self.done = True
            cause = STEP_LIMIT
        self._move(move)
        return StepResult(self._observe(), reward, self.done, cause)

    def _move(self, move: int) -> None:
        self.pos += 1 if move == MOVE_RIGHT else -1

    # -- formatting ------------------------------------------------------------
    def action_str(self, action) -> str:
        move, write, symbol = action
        out = str(symbol) if write else "."
        return f"{_MOVE_NAMES[move]},{'w' if write else '-'},{out}"

    def obs_str(self, obs: int) -> str:
        return "_" if obs == self.blank else str(obs)


class CopyEnv(TapeEnv):
    def _make_target(self):
        return self.tape


class DuplicatedInputEnv(TapeEnv):
    """Tape holds each hidden symbol twice; the target is one copy of each."""

    duplication = 2

    def _make_tape(self, stream):
        groups = max(1, self.input_length // self.duplication)
        symbols = stream.integers(0, self.base, size=groups)
        self.tape = tuple(int(s) for s in symbols for _ in range(self.duplication))
        self.input_length = len(self.tape)

    def _make_target(self):
        return self.tape[:: self.duplication]


class RepeatCopyEnv(TapeEnv):
    def _make_target(self):
        return self.tape + self.tape[::-1] + self.tape


class ReverseEnv(TapeEnv):
    def _make_target(self):
        return self.tape[::-1]


class ReversedAdditionEnv(TapeEnv):
    """2 x n grid of base-3 digits; target is the little-endian digit sum."""

    n_moves = 4

    def __init__(self, seed, length_range, base: int = 3, **kw):
        super().__init__(seed, length_range, base=base, **kw)

    def _make_tape(self, stream):
        self.grid = tuple(
            tuple(int(d) for d in stream.integers(0, self.base, size=self.input_length))
            for _ in range(2)
        )

    def _make_target(self):
        digits = []
        carry = 0
        for a, b in zip(*self.grid):
            s = a + b + carry
            digits.append(s % self.base)
            carry = s // self.base
        if carry:
            digits.append(carry)
        return tuple(digits)

    def _begin(self) -> int:
        self.row = 0
        self.col = 0
        self.emitted = 0
        return self._observe()

    def _observe(self) -> int:
        if 0 <= self.row < 2 and 0 <= self.col < self.input_length:
            return self.grid[self.row][self.col]
        return self.blank

    def _move(self, move: int) -> None:
        if move == MOVE_LEFT:
            self.col -= 1
        elif move == MOVE_RIGHT:
            self.col += 1
        elif move == MOVE_UP:
            self.row -= 1
        else:
            self.row += 1
