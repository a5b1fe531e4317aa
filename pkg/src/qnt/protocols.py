"""Tomography protocols: analytic outcome probabilities, Monte Carlo
sampling, ratio estimators, SPAM estimation, phase cycling, and the
progressive-etching driver.

Every probability here is computed by running the actual state pipeline
(preparation, channels, CNOT merge, partial trace, measurement) in the
Pauli-Liouville representation, never by a closed-form shortcut; the
closed forms quoted in the tests serve as independent pins.

Conventions:

* State preparation with error parameter ``s`` produces ``[1, 0, 0, s]``;
  measurement with error parameter ``m`` uses the effect ``[1, 0, 0, m]``
  for outcome 0, so a bare prepare-and-measure sees ``(1 + ms)/2``.
* ``basis`` selects which Pauli parameter is estimated.  Estimating q_X or
  q_Y reuses the Z-basis machinery by dressing every channel on the wire
  (diag permutation), which is the same arithmetic as preparing and
  measuring in the rotated basis.
* In the merge step the target-side qubit is the CNOT control and is the
  one discarded; the relayed qubit is the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import network
from .network import EtchingState, Topology, natural_key
from .pauli import (
    Dressing,
    PauliChannel,
    PauliVector1Q,
    apply_channel,
    apply_cnot,
    bypass_dressing,
    compose_channels,
    dress_channel,
    joint_z_measurement_probs,
    partial_trace,
    tensor,
)
from .stats import substream

DEGENERATE_DENOMINATOR_TOL = 1e-9

BASIS_DRESSINGS = {
    "Z": Dressing.NONE,
    "X": Dressing.HADAMARD,
    "Y": Dressing.HADAMARD_PHASE,
}

# Known SPAM attenuation prefactor f(m, s) of each pipeline: the final
# outcome satisfies p0 = (1 + f * prod q)/2 with q the (dressed) channel
# parameters involved.
SPAM_PREFACTORS = {
    "unicast": lambda s, m: m * s,
    "mergecast": lambda s, m: m * s * s,
    "bypass_unicast": lambda s, m: m * s,
    "spam_s": lambda s, m: m * s * s,
    "spam_m_sum": lambda s, m: m * m * s,
    "spam_ms_bypass": lambda s, m: m * s,
}


class ProtocolError(ValueError):
    """A protocol precondition is violated (empty path, zero parameter, ...)."""


class EstimationError(RuntimeError):
    """An estimator denominator is too close to zero to divide."""


@dataclass(frozen=True)
class SpamModel:
    """State-preparation and measurement error parameters.

    ``s = m = 1`` is the error-free case; ``s = m = 0`` yields completely
    random outcomes (maximally mixed preparation, uninformative readout).
    """

    s: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        for name, value in (("s", self.s), ("m", self.m)):
            if not 0.0 <= value <= 1.0:
                raise ProtocolError(f"{name} = {value} outside [0, 1]")

    def prepared_state(self) -> PauliVector1Q:
        return PauliVector1Q.from_bloch(0.0, 0.0, self.s)


PERFECT_SPAM = SpamModel(1.0, 1.0)


@dataclass(frozen=True)
class ProtocolOutcome:
    """Result of repeating one protocol: analytic p0 plus observed counts."""

    p0_analytic: float
    n0: int
    n_total: int
    seed: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.n0 <= self.n_total:
            raise ProtocolError(f"n0 = {self.n0} outside [0, {self.n_total}]")

    @property
    def empirical_p(self) -> float:
        return self.n0 / self.n_total


@dataclass(frozen=True)
class EstimateRecord:
    """One produced estimate, with the sample sizes that went into it."""

    target: str
    value: float
    sample_sizes: tuple[int, int]
    method: str


@dataclass(frozen=True)
class ChannelEstimate:
    """Raw per-basis estimates of a channel's (q_X, q_Y, q_Z).

    Estimates are reported unclamped, so sampling noise can push them
    outside [-1, 1]; they are deliberately not a validated PauliChannel.
    """

    q_x: float
    q_y: float
    q_z: float

    def component(self, basis: str) -> float:
        return {"X": self.q_x, "Y": self.q_y, "Z": self.q_z}[basis]


def _require_nonzero_dressed(channels: Iterable[PauliChannel], basis: str, context: str):
    for ch in channels:
        if dress_channel(ch, BASIS_DRESSINGS[basis]).q_z == 0.0:
            raise ProtocolError(
                f"{context}: channel with zero {basis} parameter cannot be characterized"
            )


def _send(state: PauliVector1Q, channels: Iterable[PauliChannel]) -> PauliVector1Q:
    for ch in channels:
        state = apply_channel(ch, state)
    return state


def _prob_zero(state: PauliVector1Q, m: float) -> float:
    return (1.0 + m * state.z) / 2.0


def unicast_prob(
    path: Sequence[PauliChannel], spam: SpamModel = PERFECT_SPAM, basis: str = "Z"
) -> float:
    """P(outcome 0) for a single qubit sent down ``path`` and measured.

    Equals (1 + ms * prod_l q_l)/2 with q taken in the dressed basis.
    """
    if not path:
        raise ProtocolError("unicast path must be nonempty")
    _require_nonzero_dressed(path, basis, "unicast")
    dressing = BASIS_DRESSINGS[basis]
    state = _send(spam.prepared_state(), (dress_channel(ch, dressing) for ch in path))
    return _prob_zero(state, spam.m)


def mergecast_prob(
    target: PauliChannel,
    branch_a2: Sequence[PauliChannel],
    branch_b: Sequence[PauliChannel],
    spam: SpamModel = PERFECT_SPAM,
    basis: str = "Z",
) -> float:
    """P(outcome 0) for the merge protocol.

    Two qubits are prepared, one crosses ``target`` (CNOT control, then
    discarded), the other crosses ``branch_a2`` (CNOT target); the merged
    qubit crosses ``branch_b`` and is measured.  Equals
    (1 + m s^2 * q_target * Q_A2 * Q_B)/2 with branch products Q in the
    dressed basis.
    """
    if not branch_a2 or not branch_b:
        raise ProtocolError("mergecast branches must be nonempty")
    _require_nonzero_dressed([target, *branch_a2, *branch_b], basis, "mergecast")
    dressing = BASIS_DRESSINGS[basis]
    control = apply_channel(dress_channel(target, dressing), spam.prepared_state())
    merged = _send(spam.prepared_state(), (dress_channel(ch, dressing) for ch in branch_a2))
    pair = apply_cnot(tensor(control, merged), control="first")
    relay = partial_trace(pair, discard="first")
    relay = _send(relay, (dress_channel(ch, dressing) for ch in branch_b))
    return _prob_zero(relay, spam.m)


def bypass_unicast_prob(
    bypassed: Sequence[PauliChannel],
    target: PauliChannel,
    spam: SpamModel = PERFECT_SPAM,
    tol: float = 1e-12,
) -> float:
    """P(outcome 0) when every non-target channel on the route is bypassed.

    Each bypassed channel is sandwiched by the gates that move its unit
    Pauli parameter into the Z slot, so the Z-axis qubit traverses it
    unchanged and only the target attenuates: p = (1 + m s q_Z,target)/2.
    Raises for non-bypassable channels in ``bypassed``.
    """
    state = spam.prepared_state()
    for ch in bypassed:
        state = apply_channel(dress_channel(ch, bypass_dressing(ch, tol)), state)
    state = apply_channel(target, state)
    return _prob_zero(state, spam.m)


def spam_s_protocol_prob(path: Sequence[PauliChannel], spam: SpamModel) -> float:
    """P(outcome 0) for the preparation-error protocol.

    Two erroneous preparations are merged by a CNOT at the sending node and
    the control discarded, leaving [1, 0, 0, s^2] on the wire; after
    ``path`` the measured probability is (1 + m s^2 * prod q_Z)/2.
    """
    if not path:
        raise ProtocolError("path must be nonempty")
    pair = apply_cnot(tensor(spam.prepared_state(), spam.prepared_state()), control="first")
    state = partial_trace(pair, discard="first")
    state = _send(state, path)
    return _prob_zero(state, spam.m)


def spam_m_protocol_probs(
    path_a: Sequence[PauliChannel],
    path_b: Sequence[PauliChannel],
    spam: SpamModel,
) -> tuple[float, float, float, float, float]:
    """Joint outcome probabilities for the measurement-error protocol.

    Each branch sends an erroneous preparation to the measuring node, where
    a CNOT entangles them (``path_b``'s qubit is the control) and both are
    measured with error.  Returns (p00, p01, p10, p11, p_sum) with
    p_sum = p00 + p11 = (1 + m^2 s * prod_{path_a} q_Z)/2.
    """
    if not path_a or not path_b:
        raise ProtocolError("both paths must be nonempty")
    qubit_a = _send(spam.prepared_state(), path_a)
    qubit_b = _send(spam.prepared_state(), path_b)
    pair = apply_cnot(tensor(qubit_b, qubit_a), control="first")
    p00, p01, p10, p11 = joint_z_measurement_probs(pair, m=spam.m)
    return (p00, p01, p10, p11, p00 + p11)


def spam_ms_bypass_prob(
    bypassed_path: Sequence[PauliChannel],
    spam: SpamModel,
    tol: float = 1e-12,
) -> float:
    """P(outcome 0) when the whole route is bypassed: (1 + ms)/2.

    Requires every channel on the path to be bypassable; the result is then
    independent of their flip probabilities.
    """
    state = spam.prepared_state()
    for ch in bypassed_path:
        state = apply_channel(dress_channel(ch, bypass_dressing(ch, tol)), state)
    return _prob_zero(state, spam.m)


def sample_protocol(
    p0: float,
    n: int,
    seed: Union[int, np.random.Generator],
) -> ProtocolOutcome:
    """Run a protocol ``n`` times: seeded Bernoulli(p0) trials, counted."""
    if not 0.0 <= p0 <= 1.0:
        raise ProtocolError(f"p0 = {p0} outside [0, 1]")
    if n < 1:
        raise ProtocolError("n must be at least 1")
    if isinstance(seed, np.random.Generator):
        rng, seed_field = seed, None
    else:
        rng, seed_field = substream(seed, "protocol", 0), int(seed)
    n0 = int(rng.binomial(n, p0))
    return ProtocolOutcome(p0_analytic=p0, n0=n0, n_total=n, seed=seed_field)


ProbabilityLike = Union[ProtocolOutcome, float]


def _p_hat(value: ProbabilityLike) -> float:
    return value.empirical_p if isinstance(value, ProtocolOutcome) else float(value)


def _ratio(numerator: ProbabilityLike, denominator: ProbabilityLike, what: str) -> float:
    num = 2.0 * _p_hat(numerator) - 1.0
    den = 2.0 * _p_hat(denominator) - 1.0
    if abs(den) < DEGENERATE_DENOMINATOR_TOL:
        raise EstimationError(f"{what}: denominator 2*p-1 = {den} is degenerate")
    return num / den


def estimate_q_mergecast(merge: ProbabilityLike, uni: ProbabilityLike) -> float:
    """Ratio estimator (2 p_merge - 1)/(2 p_uni - 1).

    On exact probabilities this returns s * q_target; with known SPAM the
    caller divides by the prefactor ratio f_merge/f_uni = s to isolate the
    target parameter.
    """
    return _ratio(merge, uni, "mergecast estimator")


def estimate_s(p1: ProbabilityLike, p0: ProbabilityLike) -> float:
    """Preparation-error estimator (2 p_SPAM,1 - 1)/(2 p_SPAM,0 - 1)."""
    return _ratio(p1, p0, "s estimator")


def estimate_m(p2: ProbabilityLike, p0: ProbabilityLike) -> float:
    """Measurement-error estimator (2 p_SPAM,2 - 1)/(2 p_SPAM,0 - 1)."""
    return _ratio(p2, p0, "m estimator")


# ---------------------------------------------------------------------------
# Progressive etching
# ---------------------------------------------------------------------------


@dataclass
class EtchingRun:
    """Output of one etching sweep over a topology.

    ``estimates`` holds the raw per-basis estimate triple for each edge,
    ``steps`` the 1-based round in which the edge was identified, and
    ``records`` one entry per (edge, basis) estimation.
    """

    estimates: dict = field(default_factory=dict)
    steps: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    state: Optional[EtchingState] = None


def run_progressive_etching(
    topology: Topology,
    spam: SpamModel,
    samples: tuple[int, int],
    seed: int,
    bases: Sequence[str] = ("Z", "X", "Y"),
) -> EtchingRun:
    """Identify every channel of a simplified topology, periphery inward.

    Rounds proceed on a frozen frontier snapshot: all edges currently
    touching an effective monitor are estimated (ascending natural edge-id
    order), then their internal endpoints are promoted at once, exposing the
    next layer.  A target whose effective-monitor endpoint is internal is
    reached through the chain of already-identified edges backing that
    monitor; the ratio estimate then includes the true chain product, and
    dividing by the *estimated* chain product (from earlier rounds)
    propagates earlier errors exactly as a real deployment would.

    Sampling uses independent substreams keyed by (seed, edge, basis,
    protocol), so a run is fully reproducible and edges may be processed in
    parallel without sharing generator state.
    """
    problems = network.validate(topology, require_simplified=True)
    if problems:
        raise ProtocolError("topology not ready for etching: " + "; ".join(map(str, problems)))
    m_samples, n_samples = samples
    state = EtchingState.initial(topology)
    run = EtchingRun(state=state)
    round_num = 0

    while True:
        frontier = sorted(network.peripheral_edges(topology, state), key=natural_key)
        if not frontier:
            break
        round_num += 1
        round_results: dict[str, dict[str, float]] = {}
        promotions: list[tuple[str, str]] = []

        for target in frontier:
            selection = network.select_mergecast_branches(topology, state, target)
            edges = topology.edges
            chain_true = [edges[e].channel for e in selection.target_chain]
            target_true = compose_channels([*chain_true, edges[target].channel])
            a2_true = [edges[e].channel for e in selection.full_a2]
            b_true = [edges[e].channel for e in selection.full_b]

            per_basis: dict[str, float] = {}
            for basis in bases:
                p_merge = mergecast_prob(target_true, a2_true, b_true, spam, basis)
                p_uni = unicast_prob([*a2_true, *b_true], spam, basis)
                merge_out = sample_protocol(
                    p_merge, m_samples, substream(seed, f"etch|{target}|{basis}|merge", 0)
                )
                uni_out = sample_protocol(
                    p_uni, n_samples, substream(seed, f"etch|{target}|{basis}|uni", 0)
                )
                ratio = estimate_q_mergecast(merge_out, uni_out)
                correction = spam.s
                for chain_edge in selection.target_chain:
                    correction *= state.identified[chain_edge][basis]
                if abs(correction) < DEGENERATE_DENOMINATOR_TOL:
                    raise EstimationError(
                        f"edge {target!r}, basis {basis}: chain correction {correction} degenerate"
                    )
                per_basis[basis] = ratio / correction
                run.records.append(
                    EstimateRecord(
                        target=target,
                        value=per_basis[basis],
                        sample_sizes=(m_samples, n_samples),
                        method=f"mergecast-{basis}",
                    )
                )
            round_results[target] = per_basis
            if selection.merge_node not in state.effective_monitors:
                promotions.append((selection.merge_node, target))

        for target, per_basis in round_results.items():
            state.identified[target] = per_basis
            run.steps[target] = round_num
            run.estimates[target] = ChannelEstimate(
                q_x=per_basis.get("X", math.nan),
                q_y=per_basis.get("Y", math.nan),
                q_z=per_basis.get("Z", math.nan),
            )
        for node, via_edge in promotions:
            if node not in state.effective_monitors:
                state.effective_monitors.add(node)
                state.promoted_via[node] = via_edge
        state.frontier = network.peripheral_edges(topology, state)

    return run


# ---------------------------------------------------------------------------
# Phase cycling: reducing general diagonal SPAM to the two-parameter model
# ---------------------------------------------------------------------------

X_GATE_DIAG = np.array([1.0, 1.0, -1.0, -1.0])
Z_GATE_DIAG = np.array([1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True)
class RawSpamVectors:
    """Un-cycled SPAM: preparation [1, s_X, s_Y, s_Z], effect [m_I, m_X, m_Y, m_Z]."""

    prep: np.ndarray
    meas: np.ndarray

    def __post_init__(self):
        prep = np.asarray(self.prep, dtype=float)
        meas = np.asarray(self.meas, dtype=float)
        if prep.shape != (4,) or meas.shape != (4,):
            raise ProtocolError("SPAM vectors must each have 4 components")
        if abs(prep[0] - 1.0) > 1e-12:
            raise ProtocolError("preparation vector must be trace normalized (first entry 1)")
        prep.flags.writeable = False
        meas.flags.writeable = False
        object.__setattr__(self, "prep", prep)
        object.__setattr__(self, "meas", meas)


@dataclass(frozen=True)
class CyclingVariant:
    """One randomized compilation: I/Z after preparation, I/X then I/Z before
    measurement.  Choosing the X gate flips the recorded outcome bit."""

    prep_z: bool
    meas_x: bool
    meas_z: bool

    @property
    def flips_outcome(self) -> bool:
        return self.meas_x


ALL_CYCLING_VARIANTS = tuple(
    CyclingVariant(p, x, z) for p in (False, True) for x in (False, True) for z in (False, True)
)


def phase_cycling_compile(n_variants: int, seed: int) -> tuple[CyclingVariant, ...]:
    """Draw uniformly random cycling variants for randomized compilation."""
    rng = substream(seed, "phase-cycling", 0)
    bits = rng.integers(0, 2, size=(n_variants, 3))
    return tuple(CyclingVariant(bool(a), bool(b), bool(c)) for a, b, c in bits)


def cycled_zero_prob(
    raw: RawSpamVectors,
    path: Sequence[PauliChannel],
    variant: CyclingVariant,
) -> float:
    """Probability that the *recorded* outcome is 0 under one variant."""
    vec = raw.prep.copy()
    if variant.prep_z:
        vec = Z_GATE_DIAG * vec
    for ch in path:
        vec = np.array([1.0, ch.q_x, ch.q_y, ch.q_z]) * vec
    if variant.meas_x:
        vec = X_GATE_DIAG * vec
    if variant.meas_z:
        vec = Z_GATE_DIAG * vec
    p0 = 0.5 * float(raw.meas @ vec)
    return 1.0 - p0 if variant.flips_outcome else p0


def effective_spam_after_cycling(raw: RawSpamVectors) -> SpamModel:
    """The two-parameter model reached by averaging over all variants.

    Averaging the 8 variants cancels every off-diagonal SPAM component,
    leaving preparation [1, 0, 0, s_Z] and effect [1, 0, 0, m_Z]; the tests
    verify this by exhaustive enumeration against :func:`cycled_zero_prob`.
    """
    return SpamModel(s=float(raw.prep[3]), m=float(raw.meas[3]))


# ---------------------------------------------------------------------------
# Sign ambiguity of pairwise products
# ---------------------------------------------------------------------------


def consistent_sign_assignments(
    magnitudes: Sequence[float],
    pair_products: Sequence[float],
    triple_product: Optional[float] = None,
    tol: float = 1e-9,
) -> list[tuple[int, int, int]]:
    """Sign vectors (s1, s2, s3) consistent with measured products.

    ``pair_products`` is (q1 q2, q2 q3, q1 q3) and ``magnitudes`` the known
    absolute values.  Without the triple product the answer always comes in
    antipodal pairs; adding q1 q2 q3 from the merge protocol breaks the
    symmetry.
    """
    a1, a2, a3 = (abs(v) for v in magnitudes)
    p12, p23, p13 = pair_products
    solutions = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                if abs(s1 * s2 * a1 * a2 - p12) > tol:
                    continue
                if abs(s2 * s3 * a2 * a3 - p23) > tol:
                    continue
                if abs(s1 * s3 * a1 * a3 - p13) > tol:
                    continue
                if triple_product is not None and abs(s1 * s2 * s3 * a1 * a2 * a3 - triple_product) > tol:
                    continue
                solutions.append((s1, s2, s3))
    return solutions
