"""Convergence-trend heuristics for truncated series.

A finite truncation can never decide whether a series converges, so reports
never return a bare boolean.  The classifier splits the summation range into
four geometric quarters (after a short burn-in) and compares the mass of the
last quarter to the first: summands ~ k^{-s} give a ratio g^{3(1-s)} with g
the quarter growth factor, which separates cleanly at the borderline s = 1.
"""

from dataclasses import dataclass

import numpy as np

from .config import TREND_BURN_IN, TREND_CONVERGING, TREND_DIVERGING


@dataclass(frozen=True)
class TrendReport:
    """Outcome of the geometric-quarter mass comparison."""

    trend: str              # "converging" | "diverging" | "inconclusive"
    ratio: float            # last-quarter mass / first-quarter mass
    quarter_masses: tuple
    index_span: tuple       # (k_lo, k_hi) actually used
    total: float


def classify_trend(indices, summands, burn_in=TREND_BURN_IN, noise_floor=1e-13):
    """Classify the tail behaviour of sum_k summands[k].

    Summands below ``noise_floor`` times the largest one are treated as exact
    zeros: singular values computed from dense blocks carry relative roundoff
    around 1e-12, and p-th powers of that noise would otherwise masquerade as
    a non-decaying tail.

    Parameters
    ----------
    indices : array of positive, increasing summation indices
    summands : nonnegative array, same length
    """
    indices = np.asarray(indices, dtype=float)
    summands = np.asarray(summands, dtype=float)
    if indices.shape != summands.shape:
        raise ValueError("indices and summands must align")
    if np.any(summands < 0):
        raise ValueError("summands must be nonnegative")
    total = float(np.sum(summands))
    cap = float(np.max(summands)) if summands.size else 0.0
    if cap > 0.0:
        summands = np.where(summands >= noise_floor * cap, summands, 0.0)
    if total == 0.0 or np.all(summands == 0.0):
        return TrendReport("converging", 0.0, (0.0, 0.0, 0.0, 0.0),
                           (float(indices[0]) if indices.size else 0.0,
                            float(indices[-1]) if indices.size else 0.0), total)

    keep = indices >= burn_in
    if np.count_nonzero(keep) < 8:
        keep = np.ones_like(indices, dtype=bool)
    idx = indices[keep]
    val = summands[keep]
    k_lo, k_hi = float(idx[0]), float(idx[-1])
    if k_hi <= k_lo:
        return TrendReport("inconclusive", float("nan"),
                           (0.0, 0.0, 0.0, 0.0), (k_lo, k_hi), total)

    # Geometric quarter boundaries; bin by log position.
    edges = k_lo * (k_hi / k_lo) ** (np.arange(5) / 4.0)
    which = np.searchsorted(edges[1:-1], idx, side="left")
    masses = tuple(float(np.sum(val[which == q])) for q in range(4))

    first, last = masses[0], masses[3]
    if first == 0.0:
        ratio = 0.0 if last == 0.0 else float("inf")
    else:
        ratio = last / first
    if ratio < TREND_CONVERGING:
        trend = "converging"
    elif ratio > TREND_DIVERGING:
        trend = "diverging"
    else:
        trend = "inconclusive"
    return TrendReport(trend, float(ratio), masses, (k_lo, k_hi), total)


def loglog_slope(indices, values, n_bins=16, burn_in=TREND_BURN_IN):
    """Decay exponent estimate: slope of log10(bin mean |value|) vs log10 k.

    Values are averaged over geometric bins before fitting so sequences that
    oscillate through zero (sin-sqrt weight differences) still expose their
    envelope.  Returns None when fewer than four nonempty bins survive.
    """
    indices = np.asarray(indices, dtype=float)
    values = np.abs(np.asarray(values, dtype=float))
    keep = (indices >= burn_in) & (indices > 0)
    idx = indices[keep]
    val = values[keep]
    if idx.size < 4 or np.all(val == 0.0):
        return None
    k_lo, k_hi = idx[0], idx[-1]
    if k_hi <= k_lo:
        return None
    edges = k_lo * (k_hi / k_lo) ** (np.arange(n_bins + 1) / n_bins)
    which = np.clip(np.searchsorted(edges[1:-1], idx, side="left"), 0, n_bins - 1)
    xs, ys = [], []
    for b in range(n_bins):
        sel = which == b
        if not np.any(sel):
            continue
        mean = float(np.mean(val[sel]))
        if mean <= 0.0:
            continue
        xs.append(np.log10(np.sqrt(edges[b] * edges[b + 1])))
        ys.append(np.log10(mean))
    if len(xs) < 4:
        return None
    slope = np.polyfit(np.array(xs), np.array(ys), 1)[0]
    return float(slope)
