"""Tour of the Pauli-Liouville algebra: states, channels, gates, dressing.

Run:  python demos/01_pauli_algebra.py
"""

import numpy as np

from qnt import (
    Dressing,
    PauliChannel,
    PauliVector1Q,
    apply_ptm,
    dress_channel,
    is_bypassable,
    ptm_of_channel,
    z_measurement_probs,
)
from qnt.oracle import density_to_pauli, evolve_kraus, kraus_of_channel, pauli_to_density

print("== States as Pauli coefficient vectors ==")
for name, state in (("|0>", PauliVector1Q.ket0()), ("|+>", PauliVector1Q.plus())):
    print(f"  {name:3s} -> {state.coeffs}")

print("\n== A bit-flip channel leaves |+> untouched ==")
bit_flip = PauliChannel.bit_flip(0.3)
print("  PTM diagonal:", np.diag(ptm_of_channel(bit_flip)))
out = apply_ptm(ptm_of_channel(bit_flip), PauliVector1Q.plus())
print("  |+> after the channel:", out.coeffs)

print("\n== ... but attenuates |0>, shifting the measurement odds ==")
out = apply_ptm(ptm_of_channel(bit_flip), PauliVector1Q.ket0())
print("  |0> after the channel:", out.coeffs, "-> P(0), P(1) =", z_measurement_probs(out))

print("\n== Bypassability: a unit PTM entry besides the leading 1 ==")
for ch, label in ((bit_flip, "bit flip"), (PauliChannel.depolarizing(0.3), "depolarizing")):
    print(f"  {label:12s} q = {ch.q}  bypassable: {is_bypassable(ch)}")

print("\n== Channel dressing permutes which parameter sits in the Z slot ==")
ch = PauliChannel(0.5, 0.3, 0.2)
for dressing in Dressing:
    print(f"  {dressing.value:15s} -> q = {dress_channel(ch, dressing).q}")

print("\n== The density-matrix oracle agrees with the fast path ==")
state = PauliVector1Q.from_bloch(0.3, -0.4, 0.5)
fast = apply_ptm(ptm_of_channel(ch), state)
slow = density_to_pauli(evolve_kraus(pauli_to_density(state), kraus_of_channel(ch)))
print("  max deviation:", np.max(np.abs(fast.coeffs - slow.coeffs)))
