"""Experiment drivers: seeded Monte Carlo grids with CSV output.

Each driver sweeps a sample-size (or timing) grid, repeats the relevant
protocol estimate over ``trials`` independent substreams, and emits one CSV
row per grid cell (per edge, for etching).  The fixed column prefix is

    experiment,M,N,s,m,truth,mse,mse_std,crb,runtime_ms,seed

followed by context columns ``target,step,t_send_s,t_cutoff_s`` that are
blank where they do not apply.  The first line of every file is a ``#``
comment embedding the full configuration and seed.  Apart from the
``runtime_ms`` column, output is byte-identical for identical config and
seed.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import lossy, network, protocols, stats, topo_io
from .pauli import PauliChannel
from .protocols import SpamModel

CSV_COLUMNS = (
    "experiment",
    "M",
    "N",
    "s",
    "m",
    "truth",
    "mse",
    "mse_std",
    "crb",
    "runtime_ms",
    "seed",
    "target",
    "step",
    "t_send_s",
    "t_cutoff_s",
)

DESK_GRID = tuple(range(1000, 20001, 1000))
FULL_GRID = tuple(range(100, 20001, 100))


@dataclass
class ExperimentConfig:
    """Everything a driver needs; unset grids fall back to scale defaults."""

    experiment: str
    seed: int = 12345
    trials: int = 100
    s: float = 1.0
    m: float = 1.0
    m_samples: tuple[int, ...] = ()
    n_samples: tuple[int, ...] = ()
    q_params: tuple[float, ...] = (0.5, 0.25, 0.35)
    topology_path: Optional[str] = None
    spam_grid: tuple[tuple[float, float], ...] = ()
    t_send_s: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    t_cutoff_s: tuple[float, ...] = (0.05, 0.35, 0.75, 5.0, 10.0)
    horizon_s: float = 3600.0
    fiber_length_km: float = 10.0
    fiber_speed_km_per_s: float = 2.0e5
    fiber_p0: float = 0.5
    fiber_alpha_per_km: float = 0.05
    memory_t1_s: float = 10.0
    memory_t2_s: float = 1.0
    full_scale: bool = False
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        default = FULL_GRID if self.full_scale else DESK_GRID
        if not self.m_samples:
            self.m_samples = default
        if not self.n_samples:
            self.n_samples = default
        if self.full_scale and self.trials == 100:
            self.trials = 1000

    @property
    def spam(self) -> SpamModel:
        return SpamModel(self.s, self.m)


@dataclass(frozen=True)
class Row:
    experiment: str
    m_value: float
    n_value: float
    s: float
    m: float
    truth: float
    mse: float
    mse_std: float
    crb: Optional[float]
    runtime_ms: float
    seed: int
    target: str = ""
    step: Optional[int] = None
    t_send_s: Optional[float] = None
    t_cutoff_s: Optional[float] = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def rows_to_csv(cfg: ExperimentConfig, rows: Sequence[Row]) -> str:
    header = "# config " + json.dumps(dataclasses.asdict(cfg), sort_keys=True)
    lines = [header, ",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    row.experiment,
                    row.m_value,
                    row.n_value,
                    row.s,
                    row.m,
                    row.truth,
                    row.mse,
                    row.mse_std,
                    row.crb,
                    row.runtime_ms,
                    row.seed,
                    row.target,
                    row.step,
                    row.t_send_s,
                    row.t_cutoff_s,
                )
            )
        )
    return "\n".join(lines) + "\n"


def _trial_seed(cfg: ExperimentConfig, label: str, trial: int) -> int:
    return int(stats.substream(cfg.seed, label, trial).integers(0, 2**63))


def _star_channels(cfg: ExperimentConfig) -> tuple[PauliChannel, PauliChannel, PauliChannel]:
    q1, q2, q3 = cfg.q_params[:3]
    return (PauliChannel(q1, q1, q1), PauliChannel(q2, q2, q2), PauliChannel(q3, q3, q3))


def _run_star_cell(
    cfg: ExperimentConfig, spam: SpamModel, m_n: tuple[int, int]
) -> tuple[float, float, float, float]:
    """One (M, N) cell of the star experiment; returns (truth, mse, mse_std, crb)."""
    ch1, ch2, ch3 = _star_channels(cfg)
    m_size, n_size = m_n
    p_merge = protocols.mergecast_prob(ch1, [ch2], [ch3], spam)
    p_uni = protocols.unicast_prob([ch2, ch3], spam)
    label = f"star|{spam.s}|{spam.m}|{m_size}|{n_size}"
    estimates = []
    for trial in range(cfg.trials):
        merge = protocols.sample_protocol(
            p_merge, m_size, stats.substream(cfg.seed, label + "|merge", trial)
        )
        uni = protocols.sample_protocol(
            p_uni, n_size, stats.substream(cfg.seed, label + "|uni", trial)
        )
        estimates.append(protocols.estimate_q_mergecast(merge, uni) / spam.s)
    agg = stats.aggregate_mse(estimates, ch1.q_z)
    crb = stats.crb_mergecast(m_size, n_size, ch1.q_z, ch2.q_z, ch3.q_z, spam.s, spam.m)
    return ch1.q_z, agg.mse, agg.mse_std, crb


def run_star(cfg: ExperimentConfig, spam_grid: Optional[Sequence[SpamModel]] = None) -> list[Row]:
    spams = list(spam_grid) if spam_grid else [cfg.spam]
    rows = []
    for spam in spams:
        for m_size in cfg.m_samples:
            for n_size in cfg.n_samples:
                start = time.perf_counter()
                truth, mse, mse_std, crb = _run_star_cell(cfg, spam, (m_size, n_size))
                rows.append(
                    Row(
                        experiment=cfg.experiment,
                        m_value=m_size,
                        n_value=n_size,
                        s=spam.s,
                        m=spam.m,
                        truth=truth,
                        mse=mse,
                        mse_std=mse_std,
                        crb=crb,
                        runtime_ms=(time.perf_counter() - start) * 1e3,
                        seed=cfg.seed,
                        target="qZ1",
                    )
                )
    return rows


def run_sweep(cfg: ExperimentConfig) -> list[Row]:
    """Star experiment repeated over a grid of SPAM settings."""
    grid = cfg.spam_grid or ((1.0, 1.0), (0.95, 0.95), (0.8, 0.8), (0.5, 0.5))
    return run_star(cfg, [SpamModel(s, m) for s, m in grid])


def run_spam_s(cfg: ExperimentConfig) -> list[Row]:
    q1, q2 = cfg.q_params[:2]
    path = [PauliChannel(q1, q1, q1), PauliChannel(q2, q2, q2)]
    spam = cfg.spam
    p1 = protocols.spam_s_protocol_prob(path, spam)
    p0 = protocols.unicast_prob(path, spam)
    rows = []
    for m_size in cfg.m_samples:
        for n_size in cfg.n_samples:
            start = time.perf_counter()
            label = f"spam-s|{m_size}|{n_size}"
            estimates = []
            for trial in range(cfg.trials):
                root = protocols.sample_protocol(
                    p1, m_size, stats.substream(cfg.seed, label + "|root", trial)
                )
                uni = protocols.sample_protocol(
                    p0, n_size, stats.substream(cfg.seed, label + "|uni", trial)
                )
                estimates.append(protocols.estimate_s(root, uni))
            agg = stats.aggregate_mse(estimates, spam.s)
            crb = stats.crb_spam_s(m_size, n_size, q1, q2, spam.s, spam.m)
            rows.append(
                Row(
                    experiment=cfg.experiment,
                    m_value=m_size,
                    n_value=n_size,
                    s=spam.s,
                    m=spam.m,
                    truth=spam.s,
                    mse=agg.mse,
                    mse_std=agg.mse_std,
                    crb=crb,
                    runtime_ms=(time.perf_counter() - start) * 1e3,
                    seed=cfg.seed,
                    target="s",
                )
            )
    return rows


def run_spam_m(cfg: ExperimentConfig) -> list[Row]:
    q1, q2 = cfg.q_params[:2]
    path = [PauliChannel(q1, q1, q1), PauliChannel(q2, q2, q2)]
    spam = cfg.spam
    p2 = protocols.spam_m_protocol_probs(path, path, spam)[4]
    p0 = protocols.unicast_prob(path, spam)
    rows = []
    for m_size in cfg.m_samples:
        for n_size in cfg.n_samples:
            start = time.perf_counter()
            label = f"spam-m|{m_size}|{n_size}"
            estimates = []
            for trial in range(cfg.trials):
                pair = protocols.sample_protocol(
                    p2, m_size, stats.substream(cfg.seed, label + "|pair", trial)
                )
                uni = protocols.sample_protocol(
                    p0, n_size, stats.substream(cfg.seed, label + "|uni", trial)
                )
                estimates.append(protocols.estimate_m(pair, uni))
            agg = stats.aggregate_mse(estimates, spam.m)
            crb = stats.crb_spam_m(m_size, n_size, q1, q2, spam.s, spam.m)
            rows.append(
                Row(
                    experiment=cfg.experiment,
                    m_value=m_size,
                    n_value=n_size,
                    s=spam.s,
                    m=spam.m,
                    truth=spam.m,
                    mse=agg.mse,
                    mse_std=agg.mse_std,
                    crb=crb,
                    runtime_ms=(time.perf_counter() - start) * 1e3,
                    seed=cfg.seed,
                    target="m",
                )
            )
    return rows


def _load_topology(cfg: ExperimentConfig) -> network.Topology:
    if cfg.topology_path:
        raw = topo_io.load_topology(cfg.topology_path)
    else:
        raw = topo_io.bundled_topology("fig1")
    simplified, _ = network.simplify_degree2(raw)
    return simplified


def run_etch(cfg: ExperimentConfig) -> list[Row]:
    """Progressive etching MSE per edge.

    N is tied to M: the near-diagonal is where the ratio estimator works
    best, so sweeping one size covers the interesting regime."""
    topology = _load_topology(cfg)
    spam = cfg.spam
    rows = []
    for m_size in cfg.m_samples:
        start = time.perf_counter()
        per_edge: dict[str, list[float]] = {e: [] for e in topology.edges}
        steps: dict[str, int] = {}
        for trial in range(cfg.trials):
            run = protocols.run_progressive_etching(
                topology,
                spam,
                samples=(m_size, m_size),
                seed=_trial_seed(cfg, f"etch|{m_size}", trial),
                bases=("Z",),
            )
            steps = run.steps
            for edge_id, est in run.estimates.items():
                per_edge[edge_id].append(est.q_z)
        runtime = (time.perf_counter() - start) * 1e3
        for edge_id in topology.sorted_edge_ids():
            truth = topology.edges[edge_id].channel.q_z
            agg = stats.aggregate_mse(per_edge[edge_id], truth)
            rows.append(
                Row(
                    experiment=cfg.experiment,
                    m_value=m_size,
                    n_value=m_size,
                    s=spam.s,
                    m=spam.m,
                    truth=truth,
                    mse=agg.mse,
                    mse_std=agg.mse_std,
                    crb=None,
                    runtime_ms=runtime,
                    seed=cfg.seed,
                    target=edge_id,
                    step=steps.get(edge_id),
                )
            )
    return rows


def run_loss(cfg: ExperimentConfig) -> list[Row]:
    channels = _star_channels(cfg)
    fiber = lossy.FiberParams(
        length_km=cfg.fiber_length_km,
        speed_km_per_s=cfg.fiber_speed_km_per_s,
        p0=cfg.fiber_p0,
        alpha_per_km=cfg.fiber_alpha_per_km,
    )
    rows = []
    for t_send in cfg.t_send_s:
        schedule = lossy.Schedule(send_interval_s=t_send, horizon_s=cfg.horizon_s)
        for t_cutoff in cfg.t_cutoff_s:
            memory = lossy.MemoryParams(
                t1_s=cfg.memory_t1_s, t2_s=cfg.memory_t2_s, cutoff_s=t_cutoff
            )
            start = time.perf_counter()
            estimates, merged, received = [], [], []
            for trial in range(cfg.trials):
                result = lossy.run_loss_experiment(
                    channels,
                    fiber,
                    memory,
                    schedule,
                    cfg.spam,
                    seed=_trial_seed(cfg, "loss", trial),
                )
                estimates.append(result.estimate)
                merged.append(result.merged_count)
                received.append(result.received_count)
            agg = stats.aggregate_mse(estimates, channels[0].q_z)
            rows.append(
                Row(
                    experiment=cfg.experiment,
                    m_value=sum(merged) / len(merged),
                    n_value=sum(received) / len(received),
                    s=cfg.s,
                    m=cfg.m,
                    truth=channels[0].q_z,
                    mse=agg.mse,
                    mse_std=agg.mse_std,
                    crb=None,
                    runtime_ms=(time.perf_counter() - start) * 1e3,
                    seed=cfg.seed,
                    target="qZ1",
                    t_send_s=t_send,
                    t_cutoff_s=t_cutoff,
                )
            )
    return rows


DRIVERS = {
    "star": run_star,
    "sweep": run_sweep,
    "spam_s": run_spam_s,
    "spam_m": run_spam_m,
    "etch": run_etch,
    "loss": run_loss,
}


def run_experiment(cfg: ExperimentConfig) -> list[Row]:
    """Dispatch to the configured driver; rows come back in grid order."""
    try:
        driver = DRIVERS[cfg.experiment.replace("-", "_")]
    except KeyError:
        raise ValueError(f"unknown experiment {cfg.experiment!r}") from None
    return driver(cfg)


def write_experiment(cfg: ExperimentConfig) -> str:
    """Run and serialize; writes to ``output_path`` when set, else stdout."""
    text = rows_to_csv(cfg, run_experiment(cfg))
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return text
