"""Recurrent sequence policy: gated memory cell, factored softmax heads,
ancestral sampling and analytic backpropagation through time.

The network consumes a one-hot of the current observation concatenated
with one-hots of the previous step's action factors (zeros on the first
step), runs one LSTM layer, and emits one categorical head per action
factor.  The joint action log-probability is the sum over heads; the
gradient of any coefficient-weighted sum of trajectory log-probabilities
is computed exactly by unrolling the cell backwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..types import Trajectory
from .params import ParamVector

INIT_SCALE = 0.08
FORGET_BIAS = 1.0


class PolicyDivergence(RuntimeError):
    """Raised when the forward pass produces non-finite activations."""


@dataclass
class _StepCache:
    """One time step, stored compactly for the rows still running."""

    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    i: np.ndarray
    f: np.ndarray
    o: np.ndarray
    g: np.ndarray
    tanh_c: np.ndarray
    h: np.ndarray
    logits: list
    probs: list
    actions: np.ndarray  # (n_alive, n_heads) ints
    idx: np.ndarray  # alive row indices into the full batch


@dataclass
class RolloutCache:
    batch_size: int = 0
    steps: list = field(default_factory=list)
    lengths: np.ndarray | None = None  # per-trajectory step counts


def _sigmoid(z):
    # tanh form: stable for any magnitude, single ufunc pass
    return 0.5 * np.tanh(0.5 * z) + 0.5


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


class RecurrentPolicy:
    """Single recurrent layer with per-factor categorical heads."""

    def __init__(self, obs_dim: int, heads, hidden_size: int = 128):
        self.obs_dim = int(obs_dim)
        self.heads = tuple((str(n), int(s)) for n, s in heads)
        self.hidden_size = int(hidden_size)
        self.input_dim = self.obs_dim + sum(s for _, s in self.heads)
        h, d = self.hidden_size, self.input_dim
        segments = [("lstm_wx", (4 * h, d)), ("lstm_wh", (4 * h, h)), ("lstm_b", (4 * h,))]
        for name, size in self.heads:
            segments += [(f"head_{name}_w", (size, h)), (f"head_{name}_b", (size,))]
        self.params = ParamVector(segments)

    def init_params(self, rng: np.random.Generator) -> None:
        self.params.flat[:] = rng.uniform(-INIT_SCALE, INIT_SCALE, size=self.params.size)
        h = self.hidden_size
        self.params.view("lstm_b")[h : 2 * h] += FORGET_BIAS

    def spawn_like(self) -> "RecurrentPolicy":
        other = RecurrentPolicy(self.obs_dim, self.heads, self.hidden_size)
        other.params.flat[:] = self.params.flat
        return other

    def meta(self) -> dict:
        return {
            "kind": "recurrent",
            "obs_dim": self.obs_dim,
            "heads": [list(h) for h in self.heads],
            "hidden_size": self.hidden_size,
        }

    @classmethod
    def from_meta(cls, meta: dict) -> "RecurrentPolicy":
        return cls(meta["obs_dim"], [tuple(h) for h in meta["heads"]], meta["hidden_size"])

    # -- forward pieces ------------------------------------------------------
    def _cell(self, x, h_prev, c_prev):
        hs = self.hidden_size
        p = self.params
        z = x @ p.view("lstm_wx").T + h_prev @ p.view("lstm_wh").T + p.view("lstm_b")
        gates = _sigmoid(z[:, : 3 * hs])
        i = gates[:, :hs]
        f = gates[:, hs : 2 * hs]
        o = gates[:, 2 * hs :]
        g = np.tanh(z[:, 3 * hs :])
        c = f * c_prev + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        return i, f, o, g, c, tanh_c, h

    def _head_logits(self, name, h):
        p = self.params
        return h @ p.view(f"head_{name}_w").T + p.view(f"head_{name}_b")

    def _stacked_heads(self):
        """Concatenated head weights for one fused logits matmul."""
        p = self.params
        w = np.concatenate([p.view(f"head_{n}_w") for n, _ in self.heads], axis=0)
        b = np.concatenate([p.view(f"head_{n}_b") for n, _ in self.heads])
        return w, b

    def _encode(self, obs, prev_actions):
        """One-hot observation plus one-hot previous action factors."""
        n = obs.shape[0]
        x = np.zeros((n, self.input_dim))
        rows = np.arange(n)
        x[rows, obs] = 1.0
        if prev_actions is not None:
            offset = self.obs_dim
            for k, (_, size) in enumerate(self.heads):
                x[rows, offset + prev_actions[:, k]] = 1.0
                offset += size
        return x

    # -- rollout ------------------------------------------------------------
    def rollout(self, envs, rng=None, greedy=False, eps=None, collect=False):
        """Run one episode per env in lockstep.

        Sampling draws each head ancestrally; ``greedy`` takes per-head
        argmax (ties to the lowest index); ``eps`` mixes argmax with
        uniformly random actions for epsilon-greedy control.
        Returns (trajectories, cache); the cache is None unless
        ``collect`` is set.
        """
        B = len(envs)
        for env in envs:
            if env.num_observations > self.obs_dim:
                raise ValueError("env observation space exceeds policy input")
        obs = np.array([env.restart() for env in envs], dtype=np.int64)
        trajs = [
            Trajectory(env_seed=env.seed, max_total_reward=env.max_total_reward())
            for env in envs
        ]
        h = np.zeros((B, self.hidden_size))
        c = np.zeros((B, self.hidden_size))
        idx = np.arange(B)
        prev_actions = None
        logp_total = np.zeros(B)
        cache = RolloutCache(batch_size=B) if collect else None
        n_heads = len(self.heads)
        w_all, b_all = self._stacked_heads()
        while idx.size:
            # only the still-running rows are computed; random draws stay
            # full-batch so trajectories do not depend on batch compaction
            x = self._encode(obs[idx], None if prev_actions is None else prev_actions[idx])
            i, f, o, g, c_new, tanh_c, h_new = self._cell(x, h[idx], c[idx])
            if not np.all(np.isfinite(h_new)):
                raise PolicyDivergence("non-finite recurrent state during rollout")
            n_alive = idx.size
            rows = np.arange(n_alive)
            actions_full = np.zeros((B, n_heads), dtype=np.int64)
            actions = np.zeros((n_alive, n_heads), dtype=np.int64)
            logits_all = h_new @ w_all.T + b_all
            if not greedy:
                u_all = rng.random((B, n_heads))
            logits_list, probs_list = [], []
            logp_step = np.zeros(n_alive)
            off = 0
            for k, (name, size) in enumerate(self.heads):
                logits = logits_all[:, off : off + size]
                off += size
                logp = _log_softmax(logits)
                probs = np.exp(logp)
                if greedy:
                    a = logits.argmax(axis=1)
                elif eps is not None:
                    a = logits.argmax(axis=1)
                    randa = rng.integers(0, size, size=B)
                    a = np.where(u_all[idx, k] < eps, randa[idx], a)
                else:
                    cdf = np.cumsum(probs, axis=1)
                    u = u_all[idx, k][:, None]
                    a = np.minimum((cdf < u).sum(axis=1), size - 1)
                actions[:, k] = a
                logp_step += logp[rows, a]
                if collect:
                    logits_list.append(logits)
                    probs_list.append(probs)
            actions_full[idx] = actions
            logp_total[idx] += logp_step
            if collect:
                cache.steps.append(
                    _StepCache(x, h[idx], c[idx], i, f, o, g, tanh_c, h_new,
                               logits_list, probs_list, actions, idx)
                )
            h[idx] = h_new
            c[idx] = c_new
            action_rows = actions.tolist()
            survivors = []
            for j, b in enumerate(idx):
                traj = trajs[b]
                head_tuple = tuple(action_rows[j])
                res = envs[b].step(envs[b].decode_action(head_tuple))
                traj.observations.append(int(obs[b]))
                traj.actions.append(head_tuple)
                traj.rewards.append(res.reward)
                obs[b] = res.obs
                if res.done:
                    traj.cause = res.cause
                else:
                    survivors.append(b)
            idx = np.array(survivors, dtype=np.int64)
            prev_actions = actions_full
        for b, traj in enumerate(trajs):
            traj.total_reward = float(sum(traj.rewards))
            traj.log_prob = float(logp_total[b])
        if collect:
            cache.lengths = np.array([len(t.actions) for t in trajs])
        return trajs, cache

    # -- teacher-forced replay -------------------------------------------------
    def replay(self, trajectories, collect=False):
        """Recompute per-trajectory log-probs for fixed action sequences.

        Returns (log_probs array, cache or None).
        """
        B = len(trajectories)
        lengths = np.array([len(t.actions) for t in trajectories])
        T = int(lengths.max())
        n_heads = len(self.heads)
        obs_seq = np.zeros((T, B), dtype=np.int64)
        act_seq = np.zeros((T, B, n_heads), dtype=np.int64)
        for b, traj in enumerate(trajectories):
            L = lengths[b]
            obs_seq[:L, b] = traj.observations
            act_seq[:L, b] = traj.actions
        h = np.zeros((B, self.hidden_size))
        c = np.zeros((B, self.hidden_size))
        logp_total = np.zeros(B)
        cache = RolloutCache(batch_size=B) if collect else None
        w_all, b_all = self._stacked_heads()
        for t in range(T):
            idx = np.flatnonzero(t < lengths)
            prev = act_seq[t - 1][idx] if t > 0 else None
            x = self._encode(obs_seq[t][idx], prev)
            i, f, o, g, c_new, tanh_c, h_new = self._cell(x, h[idx], c[idx])
            actions = act_seq[t][idx]
            rows = np.arange(idx.size)
            logits_all = h_new @ w_all.T + b_all
            logits_list, probs_list = [], []
            logp_step = np.zeros(idx.size)
            off = 0
            for k, (name, size) in enumerate(self.heads):
                logits = logits_all[:, off : off + size]
                off += size
                logp = _log_softmax(logits)
                logp_step += logp[rows, actions[:, k]]
                if collect:
                    logits_list.append(logits)
                    probs_list.append(np.exp(logp))
            logp_total[idx] += logp_step
            if collect:
                cache.steps.append(
                    _StepCache(x, h[idx], c[idx], i, f, o, g, tanh_c, h_new,
                               logits_list, probs_list, actions, idx)
                )
            h[idx] = h_new
            c[idx] = c_new
        if collect:
            cache.lengths = lengths
        return logp_total, cache

    def log_prob(self, trajectory: Trajectory) -> float:
        logp, _ = self.replay([trajectory])
        return float(logp[0])

    def weighted_logprob(self, trajectories, coefficients) -> float:
        logp, _ = self.replay(trajectories)
        return float(np.dot(np.asarray(coefficients, dtype=float), logp))

    # -- backward ------------------------------------------------------------
    def backward(self, cache: RolloutCache, dlogits_fn) -> np.ndarray:
        """Backpropagate through time from per-step head-logit gradients.

        ``dlogits_fn(t, step) -> (B, total_head_size)`` supplies the
        gradient at the concatenated head logits (already masked for
        finished rows).  Returns a flat gradient the shape of ``params``.
        """
        p = self.params
        grad = ParamVector([(n, shape) for n, (_, shape) in p.segments.items()])
        g_wx = grad.view("lstm_wx")
        g_wh = grad.view("lstm_wh")
        g_b = grad.view("lstm_b")
        wh = p.view("lstm_wh")
        w_all, _ = self._stacked_heads()
        total = w_all.shape[0]
        g_w_all = np.zeros((total, self.hidden_size))
        g_b_all = np.zeros(total)
        hs = self.hidden_size
        B = cache.batch_size
        dh_next = np.zeros((B, hs))
        dc_next = np.zeros((B, hs))
        for t in range(len(cache.steps) - 1, -1, -1):
            st = cache.steps[t]
            idx = st.idx
            dl = dlogits_fn(t, st)
            g_w_all += dl.T @ st.h
            g_b_all += dl.sum(axis=0)
            dh = dh_next[idx] + dl @ w_all
            do = dh * st.tanh_c
            dc = dc_next[idx] + dh * st.o * (1.0 - st.tanh_c**2)
            di = dc * st.g
            df = dc * st.c_prev
            dg = dc * st.i
            dz = np.empty((idx.size, 4 * hs))
            np.multiply(di * st.i, 1.0 - st.i, out=dz[:, :hs])
            np.multiply(df * st.f, 1.0 - st.f, out=dz[:, hs : 2 * hs])
            np.multiply(do * st.o, 1.0 - st.o, out=dz[:, 2 * hs : 3 * hs])
            np.multiply(dg, 1.0 - st.g**2, out=dz[:, 3 * hs :])
            g_wx += dz.T @ st.x
            g_wh += dz.T @ st.h_prev
            g_b += dz.sum(axis=0)
            dh_next = np.zeros((B, hs))
            dh_next[idx] = dz @ wh
            dc_next = np.zeros((B, hs))
            dc_next[idx] = dc * st.f
        off = 0
        for name, size in self.heads:
            grad.view(f"head_{name}_w")[:] = g_w_all[off : off + size]
            grad.view(f"head_{name}_b")[:] = g_b_all[off : off + size]
            off += size
        bad = grad.nonfinite_segments()
        if bad:
            raise PolicyDivergence(f"non-finite gradient in segments {bad}")
        return grad.flat

    def grad_weighted_logprob(self, cache: RolloutCache, coefficients) -> np.ndarray:
        """Gradient of sum_j coeff_j * log pi(trajectory_j) from a cache."""
        coeffs = np.asarray(coefficients, dtype=float)

        def dlogits_fn(t, st):
            scale = coeffs[st.idx]
            rows = np.arange(st.idx.size)
            dl = np.concatenate(st.probs, axis=1) * (-scale[:, None])
            off = 0
            for k, (_, size) in enumerate(self.heads):
                dl[rows, off + st.actions[:, k]] += scale
                off += size
            return dl

        return self.backward(cache, dlogits_fn)

    def weighted_grad(self, trajectories, coefficients) -> np.ndarray:
        _, cache = self.replay(trajectories, collect=True)
        return self.grad_weighted_logprob(cache, coefficients)

    # -- env collection protocol (shared with the linear policy) ---------------
    def collect(self, group_envs, k: int, rng: np.random.Generator):
        """Sample k trajectories per group env (same latent state within a group).

        Returns (groups, grad_fn) where groups is a list of trajectory
        lists and grad_fn maps flat per-trajectory coefficients to the
        gradient of the coefficient-weighted log-prob sum.
        """
        clones = []
        for env in group_envs:
            clones.extend(env.clone() for _ in range(k))
        trajs, cache = self.rollout(clones, rng=rng, collect=True)
        groups = [trajs[i * k : (i + 1) * k] for i in range(len(group_envs))]
        return groups, lambda coeffs: self.grad_weighted_logprob(cache, coeffs)
