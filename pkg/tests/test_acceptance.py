"""Acceptance suite: one test per exit criterion, each printing a PASS/FAIL
line with the measured numbers.

Criteria 5, 6 and 8 carry assertions that are faithful to their statements
but known to be unattainable (see the repository README): the
closed-form reference bounds sit an order of magnitude below the actual
variance of the ratio estimators at the pinned parameters, and two cutoffs
below the send interval produce bitwise-identical lossy runs, so their MSEs
are equal rather than ordered.  Those tests report the measured values and
fail honestly rather than loosening the thresholds.
"""

import time

import numpy as np
import pytest

from qnt import lossy, oracle, stats
from qnt.network import simplify_degree2, validate
from qnt.pauli import (
    PauliChannel,
    PauliVector1Q,
    apply_channel,
    apply_cnot,
    apply_ptm,
    gate_ptm,
    GateKind,
    is_bypassable,
    partial_trace,
    tensor,
    z_measurement_probs,
)
from qnt.protocols import (
    ALL_CYCLING_VARIANTS,
    RawSpamVectors,
    SpamModel,
    bypass_unicast_prob,
    consistent_sign_assignments,
    cycled_zero_prob,
    effective_spam_after_cycling,
    estimate_m,
    estimate_q_mergecast,
    estimate_s,
    mergecast_prob,
    run_progressive_etching,
    sample_protocol,
    spam_m_protocol_probs,
    spam_s_protocol_prob,
    unicast_prob,
)
from qnt.topo_io import bundled_topology

from conftest import random_channel, random_state

SEED = 12345

STAR = (
    PauliChannel(0.5, 0.5, 0.5),
    PauliChannel(0.25, 0.25, 0.25),
    PauliChannel(0.35, 0.35, 0.35),
)


def report(criterion: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[ACCEPTANCE] criterion {criterion}: {status} - {detail}")


# ---------------------------------------------------------------------------
# 1. algebra-oracle equivalence on random pipelines
# ---------------------------------------------------------------------------


def test_criterion_1_algebra_oracle_equivalence():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    n_pipelines = 10_000
    h_ptm = gate_ptm(GateKind.HADAMARD)
    s_ptm = gate_ptm(GateKind.PHASE)
    for i in range(n_pipelines):
        state = random_state(rng)
        rho = oracle.pauli_to_density(state)
        depth = int(rng.integers(1, 7))
        for _ in range(depth):
            op = rng.integers(0, 3)
            if op == 0:
                ch = random_channel(rng)
                state = apply_channel(ch, state)
                rho = oracle.evolve_kraus(rho, oracle.kraus_of_channel(ch))
            elif op == 1:
                state = apply_ptm(h_ptm, state)
                rho = oracle.evolve_unitary(rho, "H")
            else:
                state = apply_ptm(s_ptm, state)
                rho = oracle.evolve_unitary(rho, "S")
        worst = max(worst, float(np.max(np.abs(state.coeffs - oracle.density_to_pauli(rho).coeffs))))
        p0, _ = z_measurement_probs(state)
        worst = max(worst, abs(p0 - oracle.measurement_probs(rho)[0]))
        if i % 10 == 0:
            # two-qubit leg: tensor, per-slot channels, CNOT, partial trace
            other = random_state(rng)
            two = tensor(state, other)
            pair = oracle.DensityMatrix(np.kron(rho.matrix, oracle.pauli_to_density(other).matrix))
            ch_a, ch_b = random_channel(rng), random_channel(rng)
            two = apply_cnot(two, "first")
            pair = oracle.evolve_unitary(pair, "CNOT")
            from qnt.pauli import apply_channel_2q

            two = apply_channel_2q(ch_a, two, "first")
            two = apply_channel_2q(ch_b, two, "second")
            pair = oracle.evolve_channel_on_qubit(pair, ch_a, "first")
            pair = oracle.evolve_channel_on_qubit(pair, ch_b, "second")
            worst = max(
                worst, float(np.max(np.abs(two.coeffs - oracle.density_to_pauli(pair).coeffs)))
            )
            reduced = partial_trace(two, "first")
            reduced_rho = oracle.partial_trace_density(pair, "first")
            worst = max(
                worst,
                float(np.max(np.abs(reduced.coeffs - oracle.density_to_pauli(reduced_rho).coeffs))),
            )
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 10.0
    report(1, ok, f"max |deviation| = {worst:.2e} over {n_pipelines} pipelines in {elapsed:.1f}s")
    assert worst <= 1e-12
    assert elapsed < 10.0


# ---------------------------------------------------------------------------
# 2. closed-form pins
# ---------------------------------------------------------------------------


def test_criterion_2_closed_form_pins():
    p_merge = mergecast_prob(STAR[0], [STAR[1]], [STAR[2]])
    pin_ok = p_merge == 0.521875

    worst = 0.0
    grid = (0.2, 0.4, 0.6, 0.8, 1.0)
    qs = (-0.6, -0.2, 0.3, 0.7, 0.9)
    for s in grid:
        for m in grid:
            spam = SpamModel(s, m)
            for q1 in qs:
                for q2 in qs:
                    for qp in qs:
                        # dephasing-style channels (0, 0, q) stay completely
                        # positive over the whole q grid
                        path_a = [PauliChannel(0, 0, q1), PauliChannel(0, 0, q2)]
                        path_b = [PauliChannel(0, 0, qp), PauliChannel(0, 0, qp)]
                        qa = q1 * q2
                        qb = qp * qp
                        p00 = spam_m_protocol_probs(path_a, path_b, spam)[0]
                        closed = (1 + m * s * s * qa * qb + m * s * qb + m * m * s * qa) / 4
                        worst = max(worst, abs(p00 - closed))
    ok = pin_ok and worst <= 1e-12
    report(2, ok, f"mergecast pin == 0.521875: {pin_ok}; max |P(00) - polynomial| = {worst:.2e}")
    assert pin_ok
    assert worst <= 1e-12


# ---------------------------------------------------------------------------
# 3. exact identification on analytic probabilities
# ---------------------------------------------------------------------------


def test_criterion_3_exact_identification():
    rng = np.random.default_rng(SEED + 3)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        target = random_channel(rng, nonzero=True, min_q=0.1)
        branch_a2 = [random_channel(rng, nonzero=True, min_q=0.1)]
        branch_b = [random_channel(rng, nonzero=True, min_q=0.1)]
        spam = SpamModel(0.2 + 0.8 * rng.random(), 0.2 + 0.8 * rng.random())
        p_m = mergecast_prob(target, branch_a2, branch_b, spam)
        p_u = unicast_prob(branch_a2 + branch_b, spam)
        worst = max(worst, abs(estimate_q_mergecast(p_m, p_u) / spam.s - target.q_z))

        path = [target, branch_a2[0]]
        p0 = unicast_prob(path, spam)
        p1 = spam_s_protocol_prob(path, spam)
        p2 = spam_m_protocol_probs(path, branch_b + branch_a2, spam)[4]
        worst = max(worst, abs(estimate_s(p1, p0) - spam.s))
        worst = max(worst, abs(estimate_m(p2, p0) - spam.m))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 5.0
    report(3, ok, f"max |estimate - truth| = {worst:.2e} over 1000 draws in {elapsed:.1f}s")
    assert worst <= 1e-12
    assert elapsed < 5.0


# ---------------------------------------------------------------------------
# 4. sign-ambiguity demonstration
# ---------------------------------------------------------------------------


def test_criterion_4_sign_ambiguity():
    rng = np.random.default_rng(SEED + 4)
    ok = True
    for _ in range(100):
        mags = 0.05 + 0.95 * rng.random(3)
        signs = rng.choice([-1, 1], size=3)
        q = mags * signs
        pairs = (q[0] * q[1], q[1] * q[2], q[0] * q[2])
        two = consistent_sign_assignments(mags, pairs)
        one = consistent_sign_assignments(mags, pairs, triple_product=float(np.prod(q)))
        ok = ok and len(two) == 2 and one == [tuple(signs)]
    report(4, ok, "pairwise products leave 2 solutions; merge product leaves 1 (100 patterns)")
    assert ok


# ---------------------------------------------------------------------------
# 5. Monte Carlo MSE vs closed-form reference bound
# ---------------------------------------------------------------------------


def test_criterion_5_star_mse_vs_crb():
    start = time.perf_counter()
    p_merge = mergecast_prob(STAR[0], [STAR[1]], [STAR[2]])
    p_uni = unicast_prob([STAR[1], STAR[2]])
    estimates = []
    for trial in range(200):
        merge = sample_protocol(p_merge, 10_000, stats.substream(SEED, "acc5|merge", trial))
        uni = sample_protocol(p_uni, 10_000, stats.substream(SEED, "acc5|uni", trial))
        estimates.append(estimate_q_mergecast(merge, uni))
    agg = stats.aggregate_mse(estimates, STAR[0].q_z)
    crb = stats.crb_mergecast(10_000, 10_000, 0.5, 0.25, 0.35)
    ratio = agg.mse / crb
    elapsed = time.perf_counter() - start
    ok = 0.3 <= ratio <= 3.0 and elapsed < 60.0
    report(
        5,
        ok,
        f"empirical MSE = {agg.mse:.3e}, reference bound = {crb:.3e}, ratio = {ratio:.1f} "
        f"(bracket [0.3, 3.0]) in {elapsed:.1f}s",
    )
    assert crb == pytest.approx(8.071428571428572e-4, rel=1e-9)
    assert elapsed < 60.0
    assert 0.3 <= ratio <= 3.0, (
        "empirical MSE of the ratio estimator is ~20x the closed-form reference "
        "bound at these parameters; see the repository README"
    )


# ---------------------------------------------------------------------------
# 6. SPAM estimation convergence
# ---------------------------------------------------------------------------


def test_criterion_6_spam_estimation():
    spam = SpamModel(0.9, 0.9)
    path = [STAR[0], STAR[1]]
    p0 = unicast_prob(path, spam)
    p1 = spam_s_protocol_prob(path, spam)
    p2 = spam_m_protocol_probs(path, path, spam)[4]
    s_hats, m_hats = [], []
    for trial in range(200):
        root = sample_protocol(p1, 10_000, stats.substream(SEED, "acc6|root", trial))
        pair = sample_protocol(p2, 10_000, stats.substream(SEED, "acc6|pair", trial))
        uni_s = sample_protocol(p0, 10_000, stats.substream(SEED, "acc6|uni-s", trial))
        uni_m = sample_protocol(p0, 10_000, stats.substream(SEED, "acc6|uni-m", trial))
        s_hats.append(estimate_s(root, uni_s))
        m_hats.append(estimate_m(pair, uni_m))
    mean_s, mean_m = float(np.mean(s_hats)), float(np.mean(m_hats))
    agg_s = stats.aggregate_mse(s_hats, 0.9)
    agg_m = stats.aggregate_mse(m_hats, 0.9)
    crb_s = stats.crb_spam_s(10_000, 10_000, 0.5, 0.25, 0.9, 0.9)
    crb_m = stats.crb_spam_m(10_000, 10_000, 0.5, 0.25, 0.9, 0.9)
    ratio_s = agg_s.mse / crb_s
    ratio_m = agg_m.mse / crb_m
    means_ok = abs(mean_s - 0.9) <= 0.02 and abs(mean_m - 0.9) <= 0.02
    brackets_ok = 0.2 <= ratio_s <= 5.0 and 0.2 <= ratio_m <= 5.0
    report(
        6,
        means_ok and brackets_ok,
        f"mean s = {mean_s:.4f}, mean m = {mean_m:.4f} (target 0.9 +/- 0.02); "
        f"MSE/bound ratios s = {ratio_s:.1f}, m = {ratio_m:.1f} (bracket [0.2, 5.0])",
    )
    assert means_ok
    assert brackets_ok, (
        "SPAM estimator MSE is ~10x the closed-form reference bounds at these "
        "parameters; see the repository README"
    )


# ---------------------------------------------------------------------------
# 7. progressive etching on the 19-edge benchmark
# ---------------------------------------------------------------------------


def test_criterion_7_progressive_etching():
    start = time.perf_counter()
    topo = bundled_topology("fig1")
    spam = SpamModel(1.0, 1.0)
    trials = 100
    per_edge: dict[str, list[float]] = {e: [] for e in topo.edges}
    steps: dict[str, int] = {}
    for trial in range(trials):
        seed = int(stats.substream(SEED, "acc7|trial", trial).integers(0, 2**63))
        run = run_progressive_etching(topo, spam, samples=(10_000, 10_000), seed=seed)
        steps = run.steps
        for edge_id, est in run.estimates.items():
            per_edge[edge_id].append(est.q_z)
    all_estimated = set(per_edge) == set(topo.edges) and all(
        len(v) == trials for v in per_edge.values()
    )

    step_mse = {}
    for step in (1, 2, 3):
        edges = [e for e, s in steps.items() if s == step]
        step_mse[step] = float(
            np.mean([stats.aggregate_mse(per_edge[e], 0.8).mse for e in edges])
        )
    ordering_ok = step_mse[1] <= step_mse[2] <= step_mse[3]

    # BypassUnicast on the same targets, modeled as bit-flip channels with
    # q_Z = 0.8 everywhere; every non-target channel on the route is bypassed
    # so each target needs only its own sample set.
    bit_flip = PauliChannel.bit_flip(0.1)  # q_Z = 0.8
    p_bypass = bypass_unicast_prob([bit_flip, bit_flip], bit_flip)
    bypass_mse = []
    for idx in range(19):
        values = []
        for trial in range(trials):
            out = sample_protocol(
                p_bypass, 10_000, stats.substream(SEED, f"acc7|bypass|{idx}", trial)
            )
            values.append(2 * out.empirical_p - 1)
        bypass_mse.append(stats.aggregate_mse(values, 0.8).mse)
    bypass_ok = float(np.mean(bypass_mse)) <= step_mse[1]
    elapsed = time.perf_counter() - start
    ok = all_estimated and ordering_ok and bypass_ok and elapsed < 300.0
    report(
        7,
        ok,
        f"19 edges estimated: {all_estimated}; step MSE = "
        f"{step_mse[1]:.2e} <= {step_mse[2]:.2e} <= {step_mse[3]:.2e}: {ordering_ok}; "
        f"bypass MSE {float(np.mean(bypass_mse)):.2e} <= step-1: {bypass_ok}; {elapsed:.0f}s",
    )
    assert all_estimated
    assert ordering_ok
    assert bypass_ok
    assert elapsed < 300.0


# ---------------------------------------------------------------------------
# 8. lossy-memory experiment
# ---------------------------------------------------------------------------


def test_criterion_8_loss_experiment():
    start = time.perf_counter()
    fiber = lossy.FiberParams(length_km=10.0, speed_km_per_s=2e5, p0=0.5, alpha_per_km=0.05)
    survival = lossy.survival_prob(fiber)
    loss_pct = (1 - survival) * 100
    survival_ok = abs(loss_pct - 69.7) <= 0.1

    schedule = lossy.Schedule(send_interval_s=0.5, horizon_s=3600.0)
    mem_005 = lossy.MemoryParams(10.0, 1.0, 0.05)
    mem_035 = lossy.MemoryParams(10.0, 1.0, 0.35)
    counts_equal = True
    est_005, est_035 = [], []
    for trial in range(100):
        seed = int(stats.substream(SEED, "acc8|trial", trial).integers(0, 2**63))
        run_a = lossy.run_loss_experiment(STAR, fiber, mem_005, schedule, seed=seed)
        run_b = lossy.run_loss_experiment(STAR, fiber, mem_035, schedule, seed=seed)
        counts_equal = counts_equal and run_a.merged_count == run_b.merged_count
        est_005.append(run_a.estimate)
        est_035.append(run_b.estimate)
    mse_005 = stats.aggregate_mse(est_005, 0.5).mse
    mse_035 = stats.aggregate_mse(est_035, 0.5).mse
    mse_ordered = mse_005 < mse_035
    elapsed = time.perf_counter() - start
    ok = survival_ok and counts_equal and mse_ordered and elapsed < 300.0
    report(
        8,
        ok,
        f"loss = {loss_pct:.2f}% (target 69.7 +/- 0.1): {survival_ok}; "
        f"merged counts equal across T_c < T_send: {counts_equal}; "
        f"MSE(T_c=0.05) = {mse_005:.3e} < MSE(T_c=0.35) = {mse_035:.3e}: {mse_ordered}; "
        f"{elapsed:.0f}s",
    )
    assert survival_ok
    assert counts_equal
    assert elapsed < 300.0
    assert mse_ordered, (
        "both cutoffs sit below the send interval, so the two runs are "
        "bitwise identical and their MSEs are exactly equal; see the "
        "repository README"
    )


# ---------------------------------------------------------------------------
# 9. property suite
# ---------------------------------------------------------------------------


def test_criterion_9_property_suite():
    rng = np.random.default_rng(SEED + 9)

    # bypassability: definition (non-identity Pauli fixed point) matches the
    # two-unit-diagonal criterion on 10,000 random channels
    basis = oracle.pauli_basis(1)[1:]
    equivalence_ok = True
    for _ in range(10_000):
        ch = random_channel(rng)
        by_diag = is_bypassable(ch, tol=1e-9)
        kraus = oracle.kraus_of_channel(ch)
        by_fixed_point = any(
            np.max(np.abs(sum(k @ p @ k.conj().T for k in kraus.operators) - p)) <= 1e-9
            for p in basis
        )
        equivalence_ok = equivalence_ok and by_diag == by_fixed_point

    # decohere: semigroup plus fixed points
    mem = lossy.MemoryParams(10.0, 1.0, 1.0)
    semigroup_ok = True
    for _ in range(200):
        state = random_state(rng)
        a, b = rng.random(2)
        chained = lossy.decohere(lossy.decohere(state, float(a), mem), float(b), mem)
        direct = lossy.decohere(state, float(a + b), mem)
        semigroup_ok = semigroup_ok and np.max(np.abs(chained.coeffs - direct.coeffs)) <= 1e-12
    ground = PauliVector1Q.ket0()
    fixed_ok = np.max(np.abs(lossy.decohere(ground, 123.0, mem).coeffs - ground.coeffs)) <= 1e-12
    relaxed = lossy.decohere(random_state(rng), 1e7, mem)
    fixed_ok = fixed_ok and np.max(np.abs(relaxed.coeffs - ground.coeffs)) <= 1e-9

    # degree-2 simplification: idempotent and edge-count conserving
    from tests_support_chain import build_chain_heavy_topology

    topo = build_chain_heavy_topology()
    simplified, equivalents = simplify_degree2(topo)
    total_edges = sum(len(eq.edge_ids) for eq in equivalents) + sum(
        1 for e in simplified.edges if e in topo.edges
    )
    conservation_ok = total_edges == len(topo.edges)
    again, second_pass = simplify_degree2(simplified)
    idempotent_ok = second_pass == [] and set(again.edges) == set(simplified.edges)
    simplified_valid = validate(simplified, require_simplified=True) == []

    # phase cycling: exhaustive 8-variant average cancels off-diagonal SPAM
    cycling_ok = True
    for _ in range(50):
        prep = np.array([1.0, 0.4 * rng.normal(), 0.4 * rng.normal(), rng.random()])
        if float(prep[1] ** 2 + prep[2] ** 2 + prep[3] ** 2) > 1:
            continue
        meas = np.array([1.0, 0.4 * rng.normal(), 0.4 * rng.normal(), rng.random()])
        raw = RawSpamVectors(prep, meas)
        path = [random_channel(rng)]
        avg = float(np.mean([cycled_zero_prob(raw, path, v) for v in ALL_CYCLING_VARIANTS]))
        spam = effective_spam_after_cycling(raw)
        expected = (1 + spam.m * spam.s * path[0].q_z) / 2
        cycling_ok = cycling_ok and abs(avg - expected) <= 1e-12

    ok = (
        equivalence_ok
        and semigroup_ok
        and fixed_ok
        and conservation_ok
        and idempotent_ok
        and simplified_valid
        and cycling_ok
    )
    report(
        9,
        ok,
        f"bypassable equivalence: {equivalence_ok}; decohere semigroup/fixed points: "
        f"{semigroup_ok and fixed_ok}; simplification conservation/idempotence: "
        f"{conservation_ok and idempotent_ok}; phase-cycling cancellation: {cycling_ok}",
    )
    assert ok
