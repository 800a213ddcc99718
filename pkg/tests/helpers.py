"""Shared corpus builders for the test suite."""
from __future__ import annotations

import numpy as np

import rsgame as rs


def corpus_instance(seed: int, arat: bool = False, dims=None) -> rs.GameInstance:
    """Seeded random instance with dimensions drawn from the seed.

    States in 2..6, action counts in 1..4, min_prob 0.02 -- small enough
    to solve in bulk, varied enough to exercise degenerate shapes.
    """
    rng = np.random.default_rng(1000 + seed)
    if dims is None:
        dims = (
            int(rng.integers(2, 7)),
            int(rng.integers(1, 5)),
            int(rng.integers(1, 5)),
        )
    return rs.random_instance(seed, dims=dims, min_prob=0.02, arat_flag=arat)


def random_pair(instance: rs.GameInstance, rng: np.random.Generator):
    phi = rs.StationaryStrategy(
        1, rng.dirichlet(np.ones(instance.n_actions_a), size=instance.n_states)
    )
    psi = rs.StationaryStrategy(
        2, rng.dirichlet(np.ones(instance.n_actions_b), size=instance.n_states)
    )
    return phi, psi


def enumerate_delta(instance: rs.GameInstance) -> float:
    """Exhaustive minorization defect: max TV distance over pure tuples."""
    t = instance.transition
    n, na, nb, _ = t.shape
    worst = 0.0
    for x in range(n):
        for a in range(na):
            for b in range(nb):
                for xp in range(n):
                    for ap in range(na):
                        for bp in range(nb):
                            tv = 0.0
                            for y in range(n):
                                tv += abs(t[x, a, b, y] - t[xp, ap, bp, y])
                            worst = max(worst, 0.5 * tv)
    return worst


def enumerate_kappa(instance: rs.GameInstance) -> float:
    """Exhaustive likelihood-ratio bound over action tuples and state pairs."""
    t = instance.transition
    n, na, nb, _ = t.shape
    worst = 1.0
    for a in range(na):
        for b in range(nb):
            for y in range(n):
                for x in range(n):
                    for xp in range(n):
                        num = t[x, a, b, y]
                        den = t[xp, a, b, y]
                        if num == 0.0 and den == 0.0:
                            continue
                        if den == 0.0:
                            return float("inf")
                        worst = max(worst, num / den)
    return worst
