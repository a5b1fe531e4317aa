"""Why unicast alone cannot identify a star network, and how merging fixes it.

Three channels meet at an internal node.  Pairwise unicast measures the
products q1 q2, q2 q3, q1 q3, which always admit two antipodal sign
solutions; the merge protocol adds the triple product q1 q2 q3 and the
ambiguity collapses.

Run:  python demos/02_sign_ambiguity_and_merge.py
"""

import numpy as np

from qnt import PauliChannel, mergecast_prob, unicast_prob, estimate_q_mergecast, sample_protocol
from qnt.protocols import consistent_sign_assignments

# dephasing-style channels keep any q_Z in [-1, 1] completely positive
q = (-0.5, 0.25, -0.35)
channels = tuple(PauliChannel(0.0, 0.0, v) for v in q)
print("true q_Z parameters:", q)

pairs = (q[0] * q[1], q[1] * q[2], q[0] * q[2])
print("\npairwise unicast products:", tuple(round(p, 5) for p in pairs))
solutions = consistent_sign_assignments([abs(v) for v in q], pairs)
print("sign assignments consistent with the pairwise products:", solutions)

triple = q[0] * q[1] * q[2]
print("\nmerge-protocol triple product:", round(triple, 6))
resolved = consistent_sign_assignments([abs(v) for v in q], pairs, triple_product=triple)
print("after adding the triple product:", resolved)

print("\n== Monte Carlo estimate of q_Z,1 from the two protocols ==")
p_merge = mergecast_prob(channels[0], [channels[1]], [channels[2]])
p_uni = unicast_prob([channels[1], channels[2]])
print(f"analytic probabilities: merge {p_merge:.6f}, unicast {p_uni:.6f}")
for n in (1_000, 100_000, 10_000_000):
    merge = sample_protocol(p_merge, n, seed=1)
    uni = sample_protocol(p_uni, n, seed=2)
    estimate = estimate_q_mergecast(merge, uni)
    print(f"  n = {n:>10,d}   q_hat = {estimate:+.4f}   (truth {q[0]:+.2f})")
