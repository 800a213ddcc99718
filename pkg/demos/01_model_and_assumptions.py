"""Build a game instance and check the standing assumptions.

The model is a finite two-player stochastic game where each player i pays
an exponential (risk-sensitive) ergodic cost

    J_i = limsup_n (1/n) ln E_x[ exp(theta * sum of c_i along the path) ].

Everything downstream (solvers, equilibrium search) requires a handful of
structural assumptions: strictly positive transition rows, a minorization
bound delta < 1, and a finite likelihood-ratio bound kappa.  This script
builds the bundled 2-state fixture, inspects its diagnostics, and shows
what a violation report looks like.
"""
import numpy as np

import rsgame as rs

# ---------------------------------------------------------------------------
# the bundled fixture: 2 states, 2x2 actions, additive structure
# ---------------------------------------------------------------------------
g2 = rs.g2_instance()
print("instance:", g2.n_states, "states,",
      g2.n_actions_a, "x", g2.n_actions_b, "actions, theta =", g2.theta)
print("transition row at (x=0, a=0, b=0):", g2.transition[0, 0, 0])
print("cost tables bounded by c_bar =", g2.c_bar)

diag = rs.validate(g2)
print("\nvalidation passed:", diag.passed)
print(f"delta (minorization defect)  = {diag.delta}")
print(f"kappa (likelihood ratio)     = {diag.kappa}")
print(f"span bound ln(kappa)+3*theta*c_bar = {diag.span_bound:.6f}")
for key, check in diag.checks.items():
    print(f"  assumption {key:5s} {check.status}")

# the fixture carries an additive decomposition: transition and cost are
# sums of per-player components, which is what guarantees an equilibrium
# exists in stationary strategies
arat = g2.arat
recon = arat.p1[:, :, None, :] + arat.p2[:, None, :, :]
print("\nadditive transition reconstruction error:",
      float(np.abs(recon - g2.transition).max()))

# ---------------------------------------------------------------------------
# what failure looks like: a transition row with a zero entry
# ---------------------------------------------------------------------------
t = np.zeros((2, 1, 1, 2))
t[0, 0, 0, 0] = 1.0   # state 0 jumps to 0 surely
t[1, 0, 0, 1] = 1.0   # state 1 stays at 1 surely
bad = rs.GameInstance(t, np.zeros((2, 1, 1)), np.zeros((2, 1, 1)))
report = rs.validate(bad)
print("\ndegenerate chain passes:", report.passed)
for check in report.failures():
    print(" ", check.message)

# random instances come pre-padded to a strictly positive floor
inst = rs.random_instance(seed=7, dims=(4, 3, 2), min_prob=0.05)
print("\nrandom 4-state instance min transition entry:",
      float(inst.transition.min()), ">= 0.05")
print("its diagnostics pass:", rs.validate(inst, min_prob=0.05).passed)
