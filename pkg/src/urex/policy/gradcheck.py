"""Central finite-difference oracle for the analytic gradients."""

from __future__ import annotations

import numpy as np

MAX_CHECK_PARAMS = 5000


def finite_diff_check(policy, trajectories, coefficients, epsilon: float = 1e-5,
                      env=None) -> float:
    """Max relative error between analytic and central-difference gradients
    of ``sum_j coeff_j * log pi(trajectory_j)``.

    Perturbs every coordinate, so the parameter count must stay small.
    ``env`` is required for the linear bandit policy (features live there).
    Relative error is measured against a floor of 1e-3 times the gradient
    scale so near-zero coordinates do not dominate.
    """
    if policy.params.size > MAX_CHECK_PARAMS:
        raise ValueError(f"too many parameters to perturb ({policy.params.size})")

    def value():
        if env is not None:
            return policy.weighted_logprob(trajectories, coefficients, env)
        return policy.weighted_logprob(trajectories, coefficients)

    if env is not None:
        analytic = policy.weighted_grad(trajectories, coefficients, env)
    else:
        analytic = policy.weighted_grad(trajectories, coefficients)

    flat = policy.params.flat
    fd = np.zeros_like(flat)
    for idx in range(flat.size):
        orig = flat[idx]
        flat[idx] = orig + epsilon
        up = value()
        flat[idx] = orig - epsilon
        down = value()
        flat[idx] = orig
        fd[idx] = (up - down) / (2.0 * epsilon)

    floor = 1e-3 * max(1.0, float(np.abs(fd).max()))
    denom = np.maximum(floor, np.maximum(np.abs(fd), np.abs(analytic)))
    return float((np.abs(analytic - fd) / denom).max())
