"""Brute-force density-matrix reference for the Pauli-Liouville algebra.

Everything here works on explicit 2x2 / 4x4 complex matrices: states evolve
as ``sum_k K rho K^+`` under Kraus operators or ``U rho U^+`` under
unitaries, and convert to and from Pauli coefficient vectors via
``x_P = Tr[P rho]``.  It is deliberately slow and direct so it can serve as
an independent oracle for every operation in :mod:`qnt.pauli`; it ships in
the library so derived reference values are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .pauli import (
    ATOL,
    PAULI_LABELS,
    PauliChannel,
    PauliVector1Q,
    PauliVector2Q,
    QubitSlot,
)

EIG_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI_1Q = {"I": I2, "X": X, "Y": Y, "Z": Z}

H_GATE = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
S_GATE = np.array([[1, 0], [0, 1j]], dtype=complex)

# Basis order |00>, |01>, |10>, |11> with the first qubit most significant.
CNOT_CONTROL_FIRST = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CNOT_CONTROL_SECOND = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)

NAMED_UNITARIES = {
    "H": H_GATE,
    "S": S_GATE,
    "CNOT": CNOT_CONTROL_FIRST,
}


class OracleValidationError(ValueError):
    """A matrix fails the density-matrix or Kraus-channel checks."""


def pauli_basis(n_qubits: int) -> list[np.ndarray]:
    """Pauli basis matrices in the module's flat ordering (row-major pairs)."""
    if n_qubits == 1:
        return [PAULI_1Q[p] for p in PAULI_LABELS]
    return [np.kron(PAULI_1Q[p], PAULI_1Q[q]) for p in PAULI_LABELS for q in PAULI_LABELS]


@dataclass(frozen=True)
class DensityMatrix:
    """A validated 2x2 or 4x4 density matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape not in ((2, 2), (4, 4)):
            raise OracleValidationError(f"unsupported dimension {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL:
            raise OracleValidationError("matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > ATOL or abs(np.trace(mat).imag) > ATOL:
            raise OracleValidationError(f"trace is {np.trace(mat)}, expected 1")
        eigs = np.linalg.eigvalsh(mat)
        if eigs.min() < -EIG_TOL:
            raise OracleValidationError(f"negative eigenvalue {eigs.min()}")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class KrausChannel:
    """A channel given by Kraus operators with sum_k K^+ K = I."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops:
            raise OracleValidationError("at least one Kraus operator required")
        dim = ops[0].shape[0]
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(dim))) > ATOL:
            raise OracleValidationError("Kraus operators are not trace preserving")
        for k in ops:
            k.flags.writeable = False
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def kraus_of_channel(channel: PauliChannel) -> KrausChannel:
    """Kraus form sqrt(p_P) P of a Pauli channel."""
    probs = channel.probabilities()
    ops = []
    for p, label in zip(probs, PAULI_LABELS):
        if p > 0.0:
            ops.append(np.sqrt(p) * PAULI_1Q[label])
    return KrausChannel(tuple(ops))


def amplitude_damping_kraus(gamma: float) -> KrausChannel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel((k0, k1))


def phase_damping_kraus(lam: float) -> KrausChannel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=complex)
    k1 = np.array([[0, 0], [0, np.sqrt(lam)]], dtype=complex)
    return KrausChannel((k0, k1))


def pauli_to_density(vec: Union[PauliVector1Q, PauliVector2Q]) -> DensityMatrix:
    """rho = 2^-n sum_P x_P P; validation rejects non-physical vectors."""
    if isinstance(vec, PauliVector1Q):
        basis, norm = pauli_basis(1), 2.0
    else:
        basis, norm = pauli_basis(2), 4.0
    mat = sum(c * p for c, p in zip(vec.coeffs, basis)) / norm
    return DensityMatrix(mat)


def density_to_pauli(rho: DensityMatrix) -> Union[PauliVector1Q, PauliVector2Q]:
    """Coefficients x_P = Tr[P rho] (1 qubit) or Tr[(P (x) Q) rho] (2 qubits)."""
    n = 1 if rho.dim == 2 else 2
    coeffs = np.array([np.trace(p @ rho.matrix).real for p in pauli_basis(n)])
    return PauliVector1Q(coeffs) if n == 1 else PauliVector2Q(coeffs)


def evolve_kraus(rho: DensityMatrix, channel: KrausChannel) -> DensityMatrix:
    if rho.dim != channel.dim:
        raise OracleValidationError(f"dimension mismatch: state {rho.dim}, channel {channel.dim}")
    out = sum(k @ rho.matrix @ k.conj().T for k in channel.operators)
    return DensityMatrix(out)


def evolve_unitary(rho: DensityMatrix, unitary: Union[str, np.ndarray]) -> DensityMatrix:
    u = NAMED_UNITARIES[unitary] if isinstance(unitary, str) else np.asarray(unitary, dtype=complex)
    if rho.dim != u.shape[0]:
        raise OracleValidationError(f"dimension mismatch: state {rho.dim}, unitary {u.shape}")
    return DensityMatrix(u @ rho.matrix @ u.conj().T)


def evolve_channel_on_qubit(
    rho: DensityMatrix, channel: PauliChannel, slot: QubitSlot
) -> DensityMatrix:
    """Apply a one-qubit Pauli channel to one qubit of a two-qubit state."""
    ops = []
    for k in kraus_of_channel(channel).operators:
        full = np.kron(k, I2) if slot == "first" else np.kron(I2, k)
        ops.append(full)
    return evolve_kraus(rho, KrausChannel(tuple(ops)))


def partial_trace_density(rho: DensityMatrix, discard: QubitSlot) -> DensityMatrix:
    """Trace out one qubit of a two-qubit density matrix."""
    if rho.dim != 4:
        raise OracleValidationError("partial trace requires a two-qubit state")
    t = rho.matrix.reshape(2, 2, 2, 2)
    kept = np.einsum("ijik->jk", t) if discard == "first" else np.einsum("ijkj->ik", t)
    return DensityMatrix(kept)


def measurement_probs(rho: DensityMatrix) -> tuple[float, ...]:
    """Diagonal of rho: computational-basis outcome probabilities."""
    return tuple(float(v.real) for v in np.diag(rho.matrix))


def conjugation_table(unitary: np.ndarray, basis: Sequence[np.ndarray]) -> list[tuple[int, int]]:
    """Where conjugation by ``unitary`` sends each basis element, with sign.

    Returns (image index, sign) per source index; raises if any image is not
    exactly another signed basis element (true for all Clifford gates used
    here).  This regenerates the frozen CNOT tables in :mod:`qnt.pauli`.
    """
    out = []
    for p in basis:
        image = unitary @ p @ unitary.conj().T
        for idx, q in enumerate(basis):
            overlap = np.trace(q.conj().T @ image) / q.shape[0]
            if abs(overlap - 1.0) < ATOL:
                out.append((idx, 1))
                break
            if abs(overlap + 1.0) < ATOL:
                out.append((idx, -1))
                break
        else:
            raise OracleValidationError("conjugation image is not a signed Pauli")
    return out
