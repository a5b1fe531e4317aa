"""Estimating preparation (s) and measurement (m) errors in-network.

Neither parameter is observable alone through a plain send-and-measure
(only the product ms q1 q2 appears); a CNOT merge of two erroneous
preparations squares s, and a joint two-branch measurement squares m,
letting ratio estimators split them.  Phase cycling first reduces general
diagonal SPAM to the two scalars.

Run:  python demos/04_spam_estimation.py
"""

import numpy as np

from qnt import PauliChannel, SpamModel
from qnt.protocols import (
    ALL_CYCLING_VARIANTS,
    RawSpamVectors,
    cycled_zero_prob,
    effective_spam_after_cycling,
    estimate_m,
    estimate_s,
    sample_protocol,
    spam_m_protocol_probs,
    spam_s_protocol_prob,
    unicast_prob,
)
from qnt.stats import substream

path = [PauliChannel(0.5, 0.5, 0.5), PauliChannel(0.25, 0.25, 0.25)]
spam = SpamModel(s=0.9, m=0.9)

print("== Phase cycling flattens raw SPAM vectors ==")
raw = RawSpamVectors(prep=np.array([1.0, 0.2, -0.1, 0.9]), meas=np.array([0.95, 0.15, 0.1, 0.9]))
avg = np.mean([cycled_zero_prob(raw, path, v) for v in ALL_CYCLING_VARIANTS])
reduced = effective_spam_after_cycling(raw)
print(f"  averaged over 8 variants: P(0) = {avg:.6f}")
print(f"  two-parameter model (s = {reduced.s}, m = {reduced.m}): "
      f"P(0) = {(1 + reduced.m * reduced.s * 0.125) / 2:.6f}")

print("\n== Analytic probabilities of the three estimation circuits ==")
p0 = unicast_prob(path, spam)
p1 = spam_s_protocol_prob(path, spam)
p2 = spam_m_protocol_probs(path, path, spam)[4]
print(f"  unicast          p0 = {p0:.6f}   (1 + m s   q1 q2)/2")
print(f"  merged preps     p1 = {p1:.6f}   (1 + m s^2 q1 q2)/2")
print(f"  joint readout    p2 = {p2:.6f}   (1 + m^2 s q1 q2)/2")
print(f"  exact ratios: s = {estimate_s(p1, p0):.6f}, m = {estimate_m(p2, p0):.6f}")

print("\n== Monte Carlo estimates (n samples per circuit) ==")
for n in (10_000, 1_000_000):
    draws_s, draws_m = [], []
    for trial in range(50):
        p1_hat = sample_protocol(p1, n, substream(7, f"demo-s|{n}", trial))
        p2_hat = sample_protocol(p2, n, substream(7, f"demo-m|{n}", trial))
        p0_hat = sample_protocol(p0, n, substream(7, f"demo-u|{n}", trial))
        draws_s.append(estimate_s(p1_hat, p0_hat))
        draws_m.append(estimate_m(p2_hat, p0_hat))
    print(f"  n = {n:>9,d}: mean s_hat = {np.mean(draws_s):.4f} +- {np.std(draws_s):.4f}, "
          f"mean m_hat = {np.mean(draws_m):.4f} +- {np.std(draws_m):.4f}")
