"""Spectral oracle for the ergodic value of a frozen strategy pair.

Once both players commit to stationary strategies, the expectation
E_x[e^{theta * accumulated cost over n steps}] is the x-th entry of Q^n 1,
where Q is the strategy-mixed twisted matrix.  The long-run growth rate is
therefore ln of the spectral radius of Q — an independent check on the
Bellman solvers that involves no optimization at all.  Positive matrices
make the radius simple: power iteration with max-normalization converges
geometrically.

finite_horizon_growth returns the n-th increment of the log moment
generating function, ln (Q^n 1)(x) - ln (Q^{n-1} 1)(x), which converges to
the ergodic value geometrically (at the eigenvalue-ratio rate); the plain
time average (1/n) ln (Q^n 1)(x), exposed as horizon_log_mgf / n, carries an
O(1/n) bias from the eigenvector spread and is kept for documentation of
the prelimit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game_model import GameInstance, StationaryStrategy

DEFAULT_TOL = 1e-12
MAX_POWER_STEPS = 100_000


@dataclass(frozen=True, eq=False)
class TwistedMatrix:
    """Strategy-mixed twisted matrix Q[x][y] plus the anchor used for scaling."""

    player: int
    matrix: np.ndarray
    anchor_state: int = 0


def _mix_rows(instance: GameInstance, Phi: StationaryStrategy, Psi: StationaryStrategy):
    if Phi.player != 1 or Psi.player != 2:
        raise ValueError("Phi must belong to player 1 and Psi to player 2")
    if Phi.rows.shape != (instance.n_states, instance.n_actions_a):
        raise ValueError(f"Phi rows {Phi.rows.shape} do not match the instance")
    if Psi.rows.shape != (instance.n_states, instance.n_actions_b):
        raise ValueError(f"Psi rows {Psi.rows.shape} do not match the instance")
    return Phi.rows, Psi.rows


def twisted_matrix(
    instance: GameInstance, player: int, Phi: StationaryStrategy, Psi: StationaryStrategy
) -> TwistedMatrix:
    """Q[x][y] = sum_{a,b} Phi(a|x) Psi(b|x) e^{theta*c_i(x,a,b)} P(y|x,a,b)."""
    phi, psi = _mix_rows(instance, Phi, Psi)
    weight = np.exp(instance.theta * instance.cost(player))
    q = np.einsum("xa,xb,xaby->xy", phi, psi, weight[..., None] * instance.transition)
    return TwistedMatrix(player, q, instance.anchor_state)


def perron_value(Q, tol: float = DEFAULT_TOL) -> tuple[float, np.ndarray]:
    """Log spectral radius and right eigenvector of a positive matrix.

    Power iteration with per-step max-normalization; the eigenvalue estimate
    is the normalization factor.  Stops when both the eigenvalue change and
    the vector change drop below tol.  Returns (ln r, w) with w scaled so
    w[anchor] = 1 (anchor 0 for a bare matrix).

    Raises:
        ValueError: if the matrix is not strictly positive.
        RuntimeError: if the step cap is hit (cannot happen for strictly
            positive matrices; kept as a defensive guard).
    """
    anchor = 0
    if isinstance(Q, TwistedMatrix):
        anchor = Q.anchor_state
        Q = Q.matrix
    q = np.asarray(Q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {q.shape}")
    if np.any(q <= 0.0):
        raise ValueError("perron_value requires a strictly positive matrix")
    u = np.ones(q.shape[0])
    lam = 0.0
    for _ in range(MAX_POWER_STEPS):
        nxt = q @ u
        lam_next = nxt.max()
        nxt /= lam_next
        done = abs(lam_next - lam) < tol * max(1.0, lam) and np.abs(nxt - u).max() < tol
        u, lam = nxt, lam_next
        if done:
            return float(np.log(lam)), u / u[anchor]
    raise RuntimeError(f"power iteration did not converge in {MAX_POWER_STEPS} steps")


def ergodic_cost(
    instance: GameInstance, player: int, Phi: StationaryStrategy, Psi: StationaryStrategy
) -> float:
    """Risk-sensitive ergodic value of a frozen pair: ln spectral radius of Q.

    Equals the limit of (1/n) ln E_x[e^{theta * n-step cost}], independent of
    the start state for strictly positive transition laws.
    """
    ln_r, _ = perron_value(twisted_matrix(instance, player, Phi, Psi))
    return ln_r


def _log_power_vectors(q: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(ln Q^{n-1} 1, ln Q^n 1) via max-normalized products; no overflow."""
    u = np.ones(q.shape[0])
    shift = 0.0
    prev = np.zeros(q.shape[0])  # ln Q^0 1
    for _ in range(n):
        prev = np.log(u) + shift
        u = q @ u
        m = u.max()
        u /= m
        shift += np.log(m)
    return prev, np.log(u) + shift


def finite_horizon_growth(
    instance: GameInstance,
    player: int,
    Phi: StationaryStrategy,
    Psi: StationaryStrategy,
    x: int,
    n: int,
) -> float:
    """Exact n-step growth of the twisted expectation from state x.

    Returns ln E_x[e^{theta S_n}] - ln E_x[e^{theta S_{n-1}}], the per-step
    increment of the log moment generating function (S_k the k-step cost
    sum), computed by n log-stabilized matrix-vector products.  The
    increments converge geometrically to :func:`ergodic_cost`; at n = 1 the
    value is ln of the twisted row sum at x.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    q = twisted_matrix(instance, player, Phi, Psi).matrix
    prev, last = _log_power_vectors(q, int(n))
    return float(last[x] - prev[x])


def horizon_log_mgf(
    instance: GameInstance,
    player: int,
    Phi: StationaryStrategy,
    Psi: StationaryStrategy,
    x: int,
    n: int,
) -> float:
    """Exact ln E_x[e^{theta * n-step cost}] = ln (Q^n 1)(x).

    The time average of this quantity approaches the ergodic value only at
    rate O(1/n); it is the distribution target for Monte Carlo validation.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    q = twisted_matrix(instance, player, Phi, Psi).matrix
    _, last = _log_power_vectors(q, int(n))
    return float(last[x])
