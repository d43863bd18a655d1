"""Why a nearly empty stratum hurts back-door adjustment.

In the 301 records below, Z=0 covers 101 rows but only one of them has X=0.
That single row decides P(Y | X=0, Z=0) outright.
"""
import numpy as np

from cavs import do_effect, estimate_conditional
from cavs.datasets import SPARSE_STRATUM_COUNTS, sparse_stratum_dataset

d = sparse_stratum_dataset()
print("(x, z) -> rows with y=0, y=1")
for key, counts in SPARSE_STRATUM_COUNTS.items():
    print("  ", key, counts)

for xl in ("0", "1"):
    for zl in ("0", "1"):
        p, n = estimate_conditional(d, "Y", {"X": xl, "Z": zl})
        print(f"P(Y=1 | X={xl}, Z={zl}) = {p[1]:.2f}   from {n} row(s)")

r = do_effect(d, "X", "Y", ["Z"])
n, total = r.weights_exact[0]
print(f"\nP(Z=0) = {n}/{total} = {n / total:.3f}")
print("sparse strata:", r.diagnostics.sparse)
print("P(Y=1 | do(X)) raw:      ", np.round(r.per_x[:, 1], 4))

# One pseudo-count per cell pulls the lone-row estimate toward its neighbours.
smooth = do_effect(d, "X", "Y", ["Z"], smoothing=1.0)
print("P(Y=1 | do(X)) smoothed: ", np.round(smooth.per_x[:, 1], 4))
