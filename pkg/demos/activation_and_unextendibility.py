"""Zero-error activation of an entanglement-breaking channel by a noiseless qubit.

Shows the search evidence that the channel alone has one-shot capacity zero,
then the d-word code that the qubit unlocks.
Run with ``python3 demos/activation_and_unextendibility.py [d]``.
"""

import sys

from zecap.catalog import theorem2_channel
from zecap.channel import compute_k_space, rank_one_kraus_test
from zecap.protocols import theorem2_activation
from zecap.unext import SearchConfig, decide_extendibility

d = int(sys.argv[1]) if len(sys.argv) > 1 else 3
e = theorem2_channel(d)
k = compute_k_space(e)
print(f"E on C^2 (x) C^{d}: {e.n_kraus} Kraus operators, rank one: {rank_one_kraus_test(e)}")

for structural in (True, False):
    rep = decide_extendibility(k, SearchConfig(restarts=200, seed=1, structural=structural))
    res = "-" if rep.min_residual is None else f"{rep.min_residual:.4f}"
    print(f"decide_extendibility(structural={structural}): {rep.verdict}, "
          f"rule {rep.structural_rule}, search min residual {res}")

tr = theorem2_activation(d)
print(f"\nactivation code: {tr.verdict}, worst residual {tr.max_residual():.1e}")
for b in tr.bounds:
    print(f"  {b.quantity} >= {b.lower} on {b.uses} use")
