"""Walk through the feedback-assisted bit transmission over the cfb channel.

A single use of the channel cannot carry even one bit without error. With
feedback, two uses build an ebit and a third use sends the bit over it.
Run with ``python3 demos/feedback_activation.py``.
"""

import numpy as np

from zecap.catalog import cfb_channel
from zecap.channel import compute_k_space
from zecap.protocols import ZeroErrorCode, cfb_protocol, verify_code
from zecap.unext import structural_rules

ch = cfb_channel()
k = compute_k_space(ch)
print(f"cfb channel: qubit in, dim {ch.dim_out} out, K(E) has dim {k.dim}")
print("structural rule for K(E):", structural_rules(k))

plain = verify_code(ZeroErrorCode(ch, [[1, 0], [0, 1]]))
print("basis states as a one-use code:", plain.verdict,
      f"(output overlap {plain.ledger['max_overlap']:.3f})")

tr = cfb_protocol()
print(f"\nprotocol: {tr.verdict}, {len(tr.steps)} checks over {len(tr.branches)} branches")
probs = np.array([b.probability for b in tr.branches])
print(f"branch probabilities sum to {probs.sum():.12f}")
print(f"worst ebit fidelity {min(b.fidelity for b in tr.branches):.12f}")
for key, val in tr.ledger.items():
    print(f"  {key} {val}")
