#!/usr/bin/env python3
"""Walk the cone chain CP < DNN < (PSD, EWP) and SPN < K^(1) < K^(2) < COP
on the two classical 5x5 boundary examples, printing the certificate that
each verdict ships with.
"""

import numpy as np

from conekit import cones
from conekit.cones import Verdict, berman_matrix, horn_matrix
from conekit.linalg import inner

np.set_printoptions(precision=4, suppress=True)


def show(title, verdict):
    bits = [f"{title}: {verdict.status.value}"]
    if verdict.level is not None:
        bits.append(f"level {verdict.level}")
    if verdict.value is not None:
        bits.append(f"value {verdict.value:+.6f}")
    print("  " + ", ".join(bits))


# -- the copositive-but-not-SPN matrix --------------------------------------

H = horn_matrix()
print("five-cycle matrix H (entries +1, -1 on the cycle):")
print(H)

spn = cones.is_spn(H)
show("H in SPN", spn)
X = spn.certificate["X"]
print(f"  dual witness X: doubly nonnegative, trace {np.trace(X):.3f}, "
      f"<X, H> = {inner(X, H):+.6f}")

cop = cones.is_cop(H)
show("H in COP", cop)
print("  membership enters the sum-of-squares hierarchy at level "
      f"{cop.level}; the Gram certificate re-checks: "
      f"{cones.verify_gram(5, cop.level, H, cop.certificate['gram'])}")

# -- the doubly nonnegative but not completely positive matrix --------------

B = berman_matrix()
print()
print("doubly nonnegative matrix B:")
print(B)

prof = cones.classify_elementary(B)
print(f"  entrywise nonnegative: {prof.in_ewp}, psd: {prof.in_psd} "
      f"(min eigenvalue {prof.min_eig:+.4f})")

cp = cones.is_cp(B)
show("B in CP", cp)
W = cp.certificate["witness"]
print(f"  separating witness: scaled five-cycle form on support "
      f"{cp.certificate['support']}, <W, B> = {inner(W, B):+.6f} = -1/195")

for r in (0, 1):
    dual = cones.in_kr_dual(B, r)
    show(f"B in K^({r})*", dual)
print("  so B sits in the level-0 dual cone (SPN* = DNN for n = 5) but "
      "already falls out at level 1.")

# -- a random completely positive matrix factors explicitly -----------------

rng = np.random.default_rng(1)
F = np.abs(rng.normal(size=(5, 8)))
M = F @ F.T
cp2 = cones.is_cp(M)
show("random F F^T in CP", cp2)
Bf = cp2.certificate["factor"]
print(f"  recovered nonnegative factor: shape {Bf.shape}, "
      f"min entry {Bf.min():.2e}, residual "
      f"{np.max(np.abs(Bf @ Bf.T - M)):.2e}")
