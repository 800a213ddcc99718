"""Exponential-cost kernel transformations.

Everything downstream of the raw model works with the twisted kernel
e^{theta*c_i(x,a,b)} * P(y|x,a,b) and its mixed-strategy normalization: the
normalizing constant c~_i(x, phi, psi), the log-normalizer c^_i = ln c~_i,
and the normalized probability kernel P^_i.  This module also provides the
twisted next-state measure that attains the entropy dual, relative entropy
itself, and plain bilinear strategy mixing of the transition law.

Sums of exponentials are evaluated in log space whenever overflow is
possible; at desk scale both routes agree to machine precision.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game_model import GameInstance, StationaryStrategy


@dataclass(frozen=True, eq=False)
class TwistedKernel:
    """Entrywise e^{theta*cost_i} * transition, indexed [x][a][b][y]."""

    player: int
    table: np.ndarray


@dataclass(frozen=True, eq=False)
class MixedEvaluation:
    """Normalized twisted kernel at one state under a mixed-action pair.

    c_tilde is the normalizing constant (in [1, e^{theta*c_bar}]), c_hat its
    logarithm, and p_hat the normalized next-state probability row.
    """

    x: int
    phi: np.ndarray
    psi: np.ndarray
    c_tilde: float
    c_hat: float
    p_hat: np.ndarray


def _check_simplex(name: str, w: np.ndarray, size: int) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (size,):
        raise ValueError(f"{name} must have shape ({size},), got {w.shape}")
    if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"{name} is not a probability vector: {w!r}")
    return w


def twist(instance: GameInstance, player: int) -> TwistedKernel:
    """Twisted kernel e^{theta*c_i} * P for the given player."""
    weight = np.exp(instance.theta * instance.cost(player))
    return TwistedKernel(player, weight[..., None] * instance.transition)


def log_twisted_tensor(instance: GameInstance, player: int) -> np.ndarray:
    """ln of the twisted kernel, [x][a][b][y]; -inf where P vanishes."""
    with np.errstate(divide="ignore"):
        log_p = np.log(instance.transition)
    return instance.theta * instance.cost(player)[..., None] + log_p


def mix_transition(instance: GameInstance, x: int, phi, psi) -> np.ndarray:
    """Transition row at x under mixed actions: sum_{a,b} P(.|x,a,b) phi(a) psi(b)."""
    phi = _check_simplex("phi", phi, instance.n_actions_a)
    psi = _check_simplex("psi", psi, instance.n_actions_b)
    return np.einsum("a,b,aby->y", phi, psi, instance.transition[x])


def normalizer(instance: GameInstance, player: int, x: int, phi, psi) -> float:
    """Normalizing constant sum_{a,b} e^{theta*c_i(x,a,b)} phi(a) psi(b)."""
    phi = _check_simplex("phi", phi, instance.n_actions_a)
    psi = _check_simplex("psi", psi, instance.n_actions_b)
    return float(
        np.einsum("a,b,ab->", phi, psi, np.exp(instance.theta * instance.cost(player)[x]))
    )


def normalized_kernel(instance: GameInstance, player: int, x: int, phi, psi) -> MixedEvaluation:
    """Mixed twisted row at x, normalized into a probability row.

    p_hat(y) = sum_{a,b} e^{theta*c_i} P(y|x,a,b) phi(a) psi(b) / c_tilde.
    Division is safe because c_tilde >= 1 for nonnegative costs.
    """
    phi = _check_simplex("phi", phi, instance.n_actions_a)
    psi = _check_simplex("psi", psi, instance.n_actions_b)
    weight = np.exp(instance.theta * instance.cost(player)[x])
    mixed = np.einsum("a,b,aby->y", phi, psi, weight[..., None] * instance.transition[x])
    c_tilde = float(np.einsum("a,b,ab->", phi, psi, weight))
    return MixedEvaluation(
        x=x, phi=phi, psi=psi,
        c_tilde=c_tilde, c_hat=float(np.log(c_tilde)), p_hat=mixed / c_tilde,
    )


def twisted_measure(p_hat: np.ndarray, v: np.ndarray) -> np.ndarray:
    """The measure proportional to e^{v(y)} p_hat(y).

    This is the maximizer of mu -> integral of v d(mu) - KL(mu || p_hat)
    over probability measures on next states.
    """
    p_hat = np.asarray(p_hat, dtype=float)
    v = np.asarray(v, dtype=float)
    w = p_hat * np.exp(v - v.max())
    total = w.sum()
    if total <= 0.0:
        raise ValueError("p_hat has no mass")
    return w / total


def relative_entropy(p, q) -> float:
    """KL divergence sum p ln(p/q), with 0 ln 0 = 0 and +inf off support."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    on = p > 0.0
    if np.any(q[on] == 0.0):
        return float("inf")
    return float(np.sum(p[on] * np.log(p[on] / q[on])))


def frozen_pair_instance(
    instance: GameInstance,
    player: int,
    Phi: StationaryStrategy,
    Psi: StationaryStrategy,
) -> GameInstance:
    """Single-action game equivalent to holding both strategies fixed.

    The new transition rows are the normalized twisted rows P^_i(.|x, Phi(x),
    Psi(x)) and the player's cost is c^_i / theta, so running value iteration
    on the result reproduces the frozen pair's ergodic value.  The other
    player's cost is zeroed (irrelevant once both strategies are frozen).
    """
    nx = instance.n_states
    transition = np.empty((nx, 1, 1, nx))
    own_cost = np.empty((nx, 1, 1))
    for x in range(nx):
        ev = normalized_kernel(instance, player, x, Phi.rows[x], Psi.rows[x])
        transition[x, 0, 0] = ev.p_hat
        own_cost[x, 0, 0] = ev.c_hat / instance.theta
    zero = np.zeros((nx, 1, 1))
    cost1, cost2 = (own_cost, zero) if player == 1 else (zero, own_cost)
    return GameInstance(transition, cost1, cost2, instance.theta, instance.anchor_state)
