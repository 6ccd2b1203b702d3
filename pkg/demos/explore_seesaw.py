"""Compare the seesaw search against a brute-force grid on random 2 x 2 subspaces."""

import numpy as np

from zecap.subspace import span
from zecap.unext import grid_minimum, seesaw_search

rng = np.random.default_rng(3)
print(" dim   grid     seesaw")
for k in (1, 2, 3):
    for _ in range(3):
        g = rng.normal(size=(k, 2, 2)) + 1j * rng.normal(size=(k, 2, 2))
        s = span(list(g), 2)
        w = seesaw_search(s, seed=0, restarts=50)
        print(f" {k:3d}  {grid_minimum(s, n=40):.4f}   {w.residual:.4f}")
