"""Span seminorm, the one-player log-exponential Bellman operators, and
relative value iteration against a fixed opponent strategy.

With the opponent's stationary strategy mixed into the twisted kernel, the
operator for the remaining player is

    (Tv)(x) = min over own pure actions k of
              ln sum_y M(x, k, y) e^{v(y)},

where M is the opponent-mixed twisted kernel.  The objective is the
logarithm of a functional linear in the player's mixing weights, so the
minimum over mixed actions is attained at a pure action; the full tied set
is tracked because equilibria may mix over ties.  Relative value iteration
anchors iterates at the instance's anchor state and stops on the span of
successive differences, yielding the optimal ergodic value rho and the
relative value function v with v(anchor) = 0.

Everything is evaluated with log-sum-exp so large theta * cost products
cannot overflow.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .game_model import (
    GameInstance,
    StationaryStrategy,
    require_solvable,
)
from .transforms import log_twisted_tensor, normalized_kernel, relative_entropy, twisted_measure

#: default stopping tolerance on span(v_{k+1} - v_k)
DEFAULT_TOL = 1e-12
#: default iteration cap for relative value iteration
DEFAULT_MAX_ITER = 100_000
#: absolute tolerance at which per-state action values count as tied
TIE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Fixed point of one player's optimality equation vs. a fixed opponent.

    rho is the optimal ergodic value, v the relative value function with
    v[anchor] = 0, selector a per-state minimizing pure action (lowest index
    among ties), residual the final span of successive differences, and
    iterations the number of operator applications.
    """

    rho: float
    v: np.ndarray
    selector: np.ndarray
    residual: float
    iterations: int
    converged: bool = True


def span(v) -> float:
    """Span seminorm max(v) - min(v); zero exactly on constant vectors."""
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        raise ValueError("span of an empty vector")
    return float(v.max() - v.min())


def _opponent_axis(player: int) -> int:
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player!r}")
    return 2 if player == 1 else 1


def _log_mixed_kernel(
    instance: GameInstance, player: int, opponent: StationaryStrategy
) -> np.ndarray:
    """ln M[x, own-action, y]: twisted kernel with the opponent mixed in."""
    axis = _opponent_axis(player)
    if opponent.player == player:
        raise ValueError(f"opponent strategy belongs to player {opponent.player}")
    n_opp = instance.n_actions_b if player == 1 else instance.n_actions_a
    if opponent.rows.shape != (instance.n_states, n_opp):
        raise ValueError(
            f"opponent rows {opponent.rows.shape} do not match "
            f"({instance.n_states}, {n_opp})"
        )
    lt = log_twisted_tensor(instance, player)
    with np.errstate(divide="ignore"):
        lw = np.log(opponent.rows)
    shape = [1, 1, 1, 1]
    shape[0], shape[axis] = instance.n_states, n_opp
    return logsumexp(lt + lw.reshape(shape), axis=axis)


def action_values(
    instance: GameInstance,
    player: int,
    opponent_strategy: StationaryStrategy,
    v: np.ndarray,
) -> np.ndarray:
    """Per-state, per-own-pure-action operator values [x][k].

    Entry (x, k) is ln sum_y M(x,k,y) e^{v(y)}; (Tv)(x) is its row minimum.
    """
    ln_m = _log_mixed_kernel(instance, player, opponent_strategy)
    return _values_from_kernel(ln_m, np.asarray(v, dtype=float))


def _values_from_kernel(ln_m: np.ndarray, v: np.ndarray) -> np.ndarray:
    return logsumexp(ln_m + v, axis=-1)


def apply_T(
    instance: GameInstance,
    player: int,
    opponent_strategy: StationaryStrategy,
    v: np.ndarray,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """One application of the player's operator.

    Returns:
        (Tv, tied): the per-state minimal values and, per state, the sorted
        array of pure actions within TIE_TOL of the minimum.
    """
    vals = action_values(instance, player, opponent_strategy, v)
    tv = vals.min(axis=1)
    tied = [np.flatnonzero(vals[x] <= tv[x] + TIE_TOL) for x in range(vals.shape[0])]
    return tv, tied


def mixed_objective(
    instance: GameInstance, player: int, x: int, phi, psi, v
) -> float:
    """Direct form of the operator objective at a fully mixed action pair.

    c^_i(x, phi, psi) + ln sum_y e^{v(y)} P^_i(y | x, phi, psi).  For player
    2 this is the inner objective as a function of psi; for player 1, of phi.
    """
    ev = normalized_kernel(instance, player, x, phi, psi)
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        log_p = np.log(ev.p_hat)
    return ev.c_hat + float(logsumexp(log_p + v))


def dual_value(instance: GameInstance, player: int, x: int, phi, psi, v) -> float:
    """Entropy form of the operator objective.

    Evaluates c^ + integral of v d(mu*) - KL(mu* || P^) at the twisted
    measure mu*(y) proportional to e^{v(y)} P^(y).  Agrees with
    :func:`mixed_objective` to ~1e-10; the twisted measure maximizes the
    bracketed concave functional over all next-state measures.
    """
    ev = normalized_kernel(instance, player, x, phi, psi)
    v = np.asarray(v, dtype=float)
    mu = twisted_measure(ev.p_hat, v)
    return ev.c_hat + float(mu @ v) - relative_entropy(mu, ev.p_hat)


def solve_optimality(
    instance: GameInstance,
    player: int,
    opponent_strategy: StationaryStrategy,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    v0: np.ndarray | None = None,
) -> SolveResult:
    """Relative value iteration for one player against a fixed opponent.

    Iterates v <- Tv - (Tv)(anchor) from v0 (zero by default) until
    span(v_{k+1} - v_k) < tol, then reads rho and a minimizing selector off
    a final operator application.  At the fixed point rho + v = Tv, rho is
    the player's optimal ergodic value against the fixed opponent, and every
    stationary strategy supported on per-state argmins attains it.

    Args:
        tol: stopping tolerance on the span of successive differences.
        max_iter: iteration cap; on hitting it the last iterate is returned
            with converged=False and the final residual.
        v0: optional starting vector (re-anchored internally); useful for
            warm starts.

    Raises:
        AssumptionError: if the instance has nonpositive transition entries.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    require_solvable(instance)
    ln_m = _log_mixed_kernel(instance, player, opponent_strategy)
    anchor = instance.anchor_state
    if v0 is None:
        v = np.zeros(instance.n_states)
    else:
        v = np.asarray(v0, dtype=float)
        if v.shape != (instance.n_states,):
            raise ValueError(f"v0 shape {v.shape} != ({instance.n_states},)")
        v = v - v[anchor]
    residual = np.inf
    converged = False
    iterations = 0
    for iterations in range(1, int(max_iter) + 1):
        tv = _values_from_kernel(ln_m, v).min(axis=1)
        v_next = tv - tv[anchor]
        residual = span(v_next - v)
        v = v_next
        if residual < tol:
            converged = True
            break
    vals = _values_from_kernel(ln_m, v)
    tv = vals.min(axis=1)
    selector = vals.argmin(axis=1)
    return SolveResult(
        rho=float(tv[anchor]),
        v=v,
        selector=selector,
        residual=residual,
        iterations=iterations,
        converged=converged,
    )


def measured_contraction(
    instance: GameInstance,
    player: int,
    opponent_strategy: StationaryStrategy,
    n_pairs: int = 500,
    span_cap: float = 5.0,
    seed: int = 0,
) -> float:
    """Empirical contraction modulus of T on vectors of span <= span_cap.

    Samples n_pairs pairs (v1, v2) uniformly from [0, span_cap]^X and
    reports the largest span(Tv1 - Tv2) / span(v1 - v2).  Pairs with a
    degenerate denominator are resampled.  No closed-form modulus is
    available, so the value is measured and regression-pinned; it must come
    out < 1 on instances that pass validation.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    if span_cap <= 0.0:
        raise ValueError("span_cap must be > 0")
    if instance.n_states == 1:
        return 0.0  # every Tv is a scalar; the ratio is identically zero
    ln_m = _log_mixed_kernel(instance, player, opponent_strategy)
    rng = np.random.default_rng(seed)

    def batch_tv(vs: np.ndarray) -> np.ndarray:
        return logsumexp(ln_m[None] + vs[:, None, None, :], axis=-1).min(axis=-1)

    worst = 0.0
    remaining = int(n_pairs)
    for _ in range(100):
        v1 = rng.uniform(0.0, span_cap, size=(remaining, instance.n_states))
        v2 = rng.uniform(0.0, span_cap, size=(remaining, instance.n_states))
        diff = v1 - v2
        denom = diff.max(axis=1) - diff.min(axis=1)
        ok = denom > 1e-12
        if np.any(ok):
            num = batch_tv(v1[ok]) - batch_tv(v2[ok])
            ratios = (num.max(axis=1) - num.min(axis=1)) / denom[ok]
            worst = max(worst, float(ratios.max()))
        remaining -= int(ok.sum())
        if remaining == 0:
            return worst
    raise RuntimeError("could not sample enough nondegenerate pairs")
