"""Goodness-of-fit statistics used by the experiment gates."""

from __future__ import annotations

from typing import Callable, Union

import numpy as np
from scipy import stats as sps


def ks_statistic(
    samples, reference: Union[Callable[[np.ndarray], np.ndarray], "np.ndarray"]
) -> float:
    """Sup-distance between empirical CDFs, or empirical vs an analytic CDF.

    ``reference`` is either a second sample (two-sample statistic) or a
    callable CDF evaluated vectorized (one-sample statistic).  Returns a value
    in [0, 1].
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise ValueError("empty sample")
    if callable(reference):
        xs = np.sort(samples)
        cdf = np.asarray(reference(xs), dtype=np.float64)
        k = np.arange(1, xs.size + 1, dtype=np.float64)
        return float(
            max(np.max(k / xs.size - cdf), np.max(cdf - (k - 1) / xs.size))
        )
    other = np.asarray(reference, dtype=np.float64)
    if other.size == 0:
        raise ValueError("empty reference sample")
    return float(sps.ks_2samp(samples, other, method="asymp").statistic)


def chi_squared_uniform_pvalue(counts) -> float:
    """p-value of the chi-squared test of uniformity over the observed cells."""
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size < 2:
        raise ValueError("need at least two cells")
    return float(sps.chisquare(counts).pvalue)


def mean_with_se(values) -> tuple[float, float]:
    """Sample mean and its standard error."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty sample")
    se = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
    return float(values.mean()), se


def proportion_with_se(hits: int, trials: int) -> tuple[float, float]:
    """Empirical proportion and its binomial standard error."""
    if trials < 1:
        raise ValueError("need at least one trial")
    p = hits / trials
    return p, float(np.sqrt(p * (1.0 - p) / trials))
