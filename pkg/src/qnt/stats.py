"""Seeded random substreams, MSE aggregation, and closed-form Cramer-Rao
reference bounds for the estimation experiments.

Random numbers come from counter-based Philox generators keyed by
(master seed, label, index) through ``SeedSequence`` spawn keys, so any
number of trials or grid cells can run in parallel with reproducible,
non-overlapping streams.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def _label_key(label: str) -> int:
    # Stable 32-bit key for a stream label; crc32 is deterministic across runs.
    return zlib.crc32(label.encode("utf-8"))


def substream(master_seed: int, label: str, index: int) -> np.random.Generator:
    """Independent generator for (seed, label, index).

    Distinct triples give statistically independent Philox streams; the same
    triple always reproduces the same draws.
    """
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(_label_key(label), int(index)))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class TrialAggregate:
    """Per-experiment error summary across repeated trials.

    ``mse`` is the mean of squared errors; ``sq_err_std`` their standard
    deviation across trials, and ``mse_std = sq_err_std / sqrt(n_trials)``
    the resulting uncertainty of the MSE itself (both are exposed since
    plotting conventions differ).
    """

    estimates: tuple[float, ...]
    truth: float
    mse: float
    sq_err_std: float
    mse_std: float
    n_trials: int


def aggregate_mse(estimates: Sequence[float], truth: float) -> TrialAggregate:
    """Mean squared error of ``estimates`` against ``truth``."""
    values = tuple(float(v) for v in estimates)
    if not values:
        raise ValueError("estimates must be nonempty")
    sq = np.array([(v - truth) ** 2 for v in values])
    mse = float(sq.mean())
    sq_std = float(sq.std(ddof=0))
    return TrialAggregate(
        estimates=values,
        truth=float(truth),
        mse=mse,
        sq_err_std=sq_std,
        mse_std=sq_std / math.sqrt(len(values)),
        n_trials=len(values),
    )


def crb_mergecast(
    m_samples: int, n_samples: int, q1: float, q2: float, q3: float, s: float = 1.0, m: float = 1.0
) -> float:
    """Reference Cramer-Rao bound for the merge-protocol estimate of q1.

    CRB(M, N) = q1 (1 - ms q1 q2 q3) / (M ms q2 q3)
              + q1^2 (1 - ms q2 q3) / (N ms q2 q3)
    """
    if m_samples < 1 or n_samples < 1:
        raise ValueError("sample sizes must be at least 1")
    denom = m * s * q2 * q3
    if denom == 0.0:
        raise ZeroDivisionError("ms * q2 * q3 must be nonzero")
    term_merge = q1 * (1.0 - m * s * q1 * q2 * q3) / (m_samples * denom)
    term_uni = q1 * q1 * (1.0 - m * s * q2 * q3) / (n_samples * denom)
    return term_merge + term_uni


def crb_spam_s(
    m_samples: int, n_samples: int, q1: float, q2: float, s: float, m: float
) -> float:
    """Reference bound for estimating the preparation parameter s.

    CRB(M, N) = s (1 - ms q1 q2) / (N (1 - m s^2 q1 q2) m q1 q2)
              + (1 - m s^2 q1 q2) / (M (1 - ms q1 q2) m q1 q2)
    """
    if m_samples < 1 or n_samples < 1:
        raise ValueError("sample sizes must be at least 1")
    qq = q1 * q2
    uni = 1.0 - m * s * qq
    merged = 1.0 - m * s * s * qq
    if m * qq == 0.0 or uni == 0.0 or merged == 0.0:
        raise ZeroDivisionError("degenerate parameters for the s bound")
    return s * uni / (n_samples * merged * m * qq) + merged / (m_samples * uni * m * qq)


def crb_spam_m(
    m_samples: int, n_samples: int, q1: float, q2: float, s: float, m: float
) -> float:
    """Reference bound for estimating the measurement parameter m.

    Mirror image of :func:`crb_spam_s` with the roles of s and m swapped:

    CRB(M, N) = m (1 - ms q1 q2) / (N (1 - m^2 s q1 q2) s q1 q2)
              + (1 - m^2 s q1 q2) / (M (1 - ms q1 q2) s q1 q2)
    """
    if m_samples < 1 or n_samples < 1:
        raise ValueError("sample sizes must be at least 1")
    qq = q1 * q2
    uni = 1.0 - m * s * qq
    summed = 1.0 - m * m * s * qq
    if s * qq == 0.0 or uni == 0.0 or summed == 0.0:
        raise ZeroDivisionError("degenerate parameters for the m bound")
    return m * uni / (n_samples * summed * s * qq) + summed / (m_samples * uni * s * qq)
