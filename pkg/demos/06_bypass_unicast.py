"""BypassUnicast: when every channel is bypassable, skip the merge entirely.

A bit-flip channel preserves the X axis, so a |+> state crosses it
untouched.  Sandwiching each non-target channel in the gates that rotate
the probe onto its preserved axis isolates the target channel exactly, with
one sample set per target instead of two.

Run:  python demos/06_bypass_unicast.py
"""

import numpy as np

from qnt import PauliChannel, SpamModel, bypass_unicast_prob, sample_protocol
from qnt.protocols import spam_ms_bypass_prob
from qnt.stats import substream

target = PauliChannel.bit_flip(0.1)  # q_Z = 0.8
others = [PauliChannel.bit_flip(0.25), PauliChannel.bit_flip(0.4)]

print("route: three bit-flip channels, target q_Z =", target.q_z)
p = bypass_unicast_prob(others, target)
print(f"P(0) with the others bypassed: {p:.4f} = (1 + q_Z,target)/2")

print("\nthe bypassed channels' strengths are irrelevant:")
for flip in (0.05, 0.5, 0.95):
    varied = [PauliChannel.bit_flip(flip), PauliChannel.phase_flip(flip)]
    print(f"  flip probability {flip:.2f}: P(0) = {bypass_unicast_prob(varied, target):.6f}")

print("\nestimates from one sample set (no ratio, no merge):")
for n in (1_000, 100_000):
    draws = []
    for trial in range(50):
        out = sample_protocol(p, n, substream(5, f"demo-bypass|{n}", trial))
        draws.append(2 * out.empirical_p - 1)
    print(f"  n = {n:>7,d}: q_hat = {np.mean(draws):.4f} +- {np.std(draws):.4f}")

print("\nbypassing the whole route also exposes the SPAM product ms:")
spam = SpamModel(0.9, 0.95)
p_ms = spam_ms_bypass_prob(others + [target], spam)
print(f"  P(0) = {p_ms:.6f} -> ms estimate {2 * p_ms - 1:.4f} (truth {spam.m * spam.s:.4f})")
