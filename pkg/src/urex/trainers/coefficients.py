"""Per-trajectory gradient coefficients for the two policy-gradient methods.

Both methods weight the score-function term of each sampled trajectory;
the weights differ:

* maximum-entropy REINFORCE: ``reward - tau * log_prob - tau``, centered
  within the sample group and scaled by 1/(N*K);
* under-appreciated reward exploration: ``r_hat / K + tau * w_hat`` scaled
  by 1/N, where ``r_hat`` is the group-mean-centered reward and ``w_hat``
  the self-normalized importance weights ``softmax(r / tau - log_prob)``
  (deliberately not mean-centered).
"""

from __future__ import annotations

import numpy as np


def _check_finite(name, arr):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite {name}")


def importance_weights(rewards, log_probs, tau: float) -> np.ndarray:
    """Normalized weights softmax(r / tau - log pi), max-subtracted.

    Invariant under adding a constant to all rewards or to all log-probs;
    sums to 1.
    """
    if tau <= 0:
        raise ValueError("tau must be positive for importance weighting")
    rewards = np.asarray(rewards, dtype=float)
    log_probs = np.asarray(log_probs, dtype=float)
    _check_finite("rewards", rewards)
    _check_finite("log_probs", log_probs)
    z = rewards / tau - log_probs
    z -= z.max()
    w = np.exp(z)
    return w / w.sum()


def urex_coefficients(rewards, log_probs, tau: float, *, num_groups: int = 1,
                      center_rewards: bool = True) -> np.ndarray:
    """Coefficients for one group of K trajectories sharing a latent state.

    ``center_rewards=False`` drops the mean-reward baseline (used by the
    estimator-expectation tests, where the baseline's small finite-K bias
    would obscure the comparison).
    """
    rewards = np.asarray(rewards, dtype=float)
    k = rewards.size
    if k < 2 and center_rewards:
        raise ValueError("reward centering needs K >= 2")
    r_hat = rewards - rewards.mean() if center_rewards else rewards
    w_hat = importance_weights(rewards, log_probs, tau)
    return (r_hat / k + tau * w_hat) / num_groups


def ment_coefficients(rewards, log_probs, tau: float, *, num_groups: int = 1,
                      center: bool = True) -> np.ndarray:
    """Entropy-regularized REINFORCE coefficients for one group.

    At tau=0 with centering this is REINFORCE with a mean-reward baseline.
    """
    rewards = np.asarray(rewards, dtype=float)
    log_probs = np.asarray(log_probs, dtype=float)
    _check_finite("rewards", rewards)
    _check_finite("log_probs", log_probs)
    k = rewards.size
    if k < 2 and center:
        raise ValueError("centering needs K >= 2")
    raw = rewards - tau * log_probs - tau
    if center:
        raw = raw - raw.mean()
    return raw / (num_groups * k)


def weight_variance(weights) -> float:
    """Population variance of one group's normalized importance weights."""
    weights = np.asarray(weights, dtype=float)
    return float(np.var(weights))
