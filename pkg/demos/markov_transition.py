#!/usr/bin/env python3
"""Block positivity of a Choi-type operator built from a nonnegative matrix.

For entrywise nonnegative A, pair it with B = diag(A) - (J - I) and ask when
the pair is pairwise copositive.  Membership reduces to a scalar criterion:
g(t) = sum_i t_i / (t_i + (A t)_i) must stay <= 1 over the positive orthant.
The boundary is sharp and easy to explore numerically.
"""

import numpy as np

from conekit import quantum as qt
from conekit.cones import Verdict
from conekit.pairwise import copcp_form_value, pair_form

np.set_printoptions(precision=4, suppress=True)

# -- the flat one-parameter family ------------------------------------------

n = 5
print(f"A = x J_{n}: membership flips at x = 1 - 1/n = {1 - 1/n}")
for x in (0.75, 0.79, 0.80, 0.81, 0.85):
    v = qt.markov_choi_check(x * np.ones((n, n)))
    g = v.certificate["g_max"]
    line = f"  x = {x:.2f}: {v.status.value:10s} g_max = {g:.6f}"
    if v.status is Verdict.NON_MEMBER:
        A = x * np.ones((n, n))
        pair = pair_form(A, np.diag(np.diag(A)) - (np.ones((n, n)) - np.eye(n)))
        val = copcp_form_value(pair, v.certificate["v"], v.certificate["w"])
        line += f"  refuting value {val:+.2e}"
    print(line)

# -- diagonal input: the criterion closes over the diagonal -----------------

print()
print("diagonal A: member exactly when sum 1/(1 + a_i) <= 1")
for a in ([4.0] * 5, [3.0, 4.0, 4.0, 4.0, 4.0]):
    v = qt.markov_choi_check(np.diag(a))
    s = sum(1 / (1 + ai) for ai in a)
    print(f"  a = {a}: sum = {s:.4f} -> {v.status.value}")

# -- the cushioned family is always inside ----------------------------------

print()
rng = np.random.default_rng(0)
a = rng.uniform(0, 3, size=5)
A = np.diag(a) + (np.ones((5, 5)) - np.eye(5))
v = qt.markov_choi_check(A)
print(f"A = diag(a) + off-diagonal ones, a = {np.round(a, 3)}:")
print(f"  {v.status.value}, g_max = {v.certificate['g_max']:.6f} "
      f"(always <= 1 for this family)")

# -- scale invariance of the criterion --------------------------------------

print()
A = np.abs(rng.normal(size=(4, 4)))
t = rng.uniform(0.2, 1.0, size=4)
print("g is invariant under rescaling of t:")
for alpha in (1.0, 0.1, 25.0):
    print(f"  g({alpha:5.1f} t) = {qt._markov_g(A, alpha * t):.10f}")
