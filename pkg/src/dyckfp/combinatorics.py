"""Exact ballot-style lattice-path counting and Gaussian binomial estimates.

Counts are exact arbitrary-precision integers (Python ``int``), probabilities
derived from them are exact ``fractions.Fraction`` values, and asymptotic
estimates live in a separate floating-point regime so that approximation error
stays measurable.

The central counted object is the set of nonnegative +-1 lattice paths that
start at height ``h0``, contain ``i`` up-steps, end at height ``h0 + m``, and
end *with an up-step*.  By the reflection principle its cardinality is

    binom(2i - m - 1, i - 1) - binom(2i - m - 1, i + h0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath

__all__ = [
    "catalan",
    "SegmentSpec",
    "count_segment",
    "GaussianEstimate",
    "gaussian_binomial_estimate",
    "prob_height_at",
    "prob_fixed_exact",
    "prob_fixed_asymptotic",
]


def catalan(n: int) -> int:
    """Exact n-th Catalan number binom(2n, n) / (n + 1)."""
    if n < 0:
        raise ValueError(f"catalan requires n >= 0, got {n}")
    return math.comb(2 * n, n) // (n + 1)


@dataclass(frozen=True)
class SegmentSpec:
    """Parameters of a nonnegative path segment that ends with an up-step.

    h0: starting height (>= 0)
    i:  number of up-steps (>= 1)
    m:  net height change; the segment has 2i - m steps and ends at h0 + m
    """

    h0: int
    i: int
    m: int

    def __post_init__(self) -> None:
        if self.h0 < 0:
            raise ValueError(f"start height must be >= 0, got {self.h0}")
        if self.i < 1:
            raise ValueError(f"need at least one up-step, got i={self.i}")
        if self.m > self.i:
            raise ValueError(f"net rise m={self.m} exceeds up-step count i={self.i}")
        # h0 + m == 0 is allowed and counts an empty set: no nonnegative path
        # can end with an up-step at height 0.
        if self.h0 + self.m < 0:
            raise ValueError(
                f"segment cannot end below height 0, got h0 + m = {self.h0 + self.m}"
            )

    @property
    def num_steps(self) -> int:
        return 2 * self.i - self.m

    @property
    def end_height(self) -> int:
        return self.h0 + self.m


def _comb0(a: int, b: int) -> int:
    """binom(a, b) with the convention that out-of-range indices give 0."""
    if b < 0 or b > a or a < 0:
        return 0
    return math.comb(a, b)


def _count_raw(h0: int, i: int, m: int) -> int:
    """Tolerant segment count: 0 for impossible parameters instead of an error."""
    if i < 1 or h0 < 0 or m > i or h0 + m < 1:
        return 0
    return _comb0(2 * i - m - 1, i - 1) - _comb0(2 * i - m - 1, i + h0)


def count_segment(spec: SegmentSpec) -> int:
    """Exact number of nonnegative paths realizing ``spec``.

    Counts +-1 paths from height ``spec.h0`` with ``spec.i`` up-steps and
    ``spec.i - spec.m`` down-steps that never go below 0 and whose final step
    is an up-step.
    """
    return _count_raw(spec.h0, spec.i, spec.m)


class GaussianEstimate(NamedTuple):
    estimate: mpmath.mpf
    in_window: bool


def gaussian_binomial_estimate(i: int, m: int) -> GaussianEstimate:
    """Gaussian approximation 4^i e^{-m^2/4i} / (2^m sqrt(pi i)) of binom(2i - m, i).

    ``in_window`` reports whether |m| < i^0.6, the regime in which the estimate
    is sharp; outside it the true binomial is instead exponentially dominated
    by 4^i / 2^m and the estimate should not be trusted.  The value is returned
    as an ``mpmath.mpf`` because it overflows IEEE doubles long before the
    estimate degrades (4^i alone overflows near i = 512).
    """
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    in_window = abs(m) < float(i) ** 0.6
    log_est = (
        i * math.log(4.0)
        - m * m / (4.0 * i)
        - m * math.log(2.0)
        - 0.5 * math.log(math.pi * i)
    )
    return GaussianEstimate(mpmath.exp(mpmath.mpf(log_est)), in_window)


def _validate_interior_index(outer: SegmentSpec, i: int) -> None:
    if not 0 < i < outer.i:
        raise ValueError(f"index i must satisfy 0 < i < {outer.i}, got {i}")


def prob_height_at(outer: SegmentSpec, i: int, h: int) -> Fraction:
    """Exact P(height after the i-th up-step equals h) for a uniform path of ``outer``.

    The segment splits uniquely at the i-th up-step into two smaller segments,
    so the probability is a ratio of segment counts.  Returns 0 for heights
    that are unreachable (parity, range, or nonnegativity).
    """
    _validate_interior_index(outer, i)
    if h < 1:
        raise ValueError(f"height after an up-step is >= 1, got {h}")
    total = count_segment(outer)
    if total == 0:
        raise ValueError(f"outer segment {outer} has no realizations")
    first = _count_raw(outer.h0, i, h - outer.h0)
    second = _count_raw(h, outer.i - i, outer.end_height - h)
    return Fraction(first * second, total)


def prob_fixed_exact(outer: SegmentSpec, i: int) -> Fraction:
    """Exact P(the excursion opened by the i-th up-step has length = 2 * its height).

    For a uniform path of ``outer``, the event that the i-th excursion closes
    after exactly twice its opening height decomposes, for each height h, into
    a prefix segment reaching h at the i-th up-step, a translated Dyck loop of
    length 2(h-1) above h-1, its closing down-step, and a suffix segment; the
    pieces are counted independently and summed over the exact support of h.
    """
    _validate_interior_index(outer, i)
    total = count_segment(outer)
    if total == 0:
        raise ValueError(f"outer segment {outer} has no realizations")
    j = outer.i
    h_j = outer.end_height
    h_lo = max(1, h_j - (j - i))
    h_hi = outer.h0 + i
    numerator = 0
    for h in range(h_lo, h_hi + 1):
        m = h - outer.h0
        prefix = _count_raw(outer.h0, i, m)
        if prefix == 0:
            continue
        # suffix starts at height h - 1 right after the excursion closes and
        # must still provide the j-th up-step, hence j - i - h + 1 up-steps
        suffix = _count_raw(h - 1, j - i - h + 1, h_j - h + 1)
        if suffix == 0:
            continue
        numerator += prefix * catalan(h - 1) * suffix
    return Fraction(numerator, total)


def prob_fixed_asymptotic(h0: int) -> float:
    """Limit value 1 / (2 sqrt(pi) h0^{3/2}) of ``prob_fixed_exact`` deep inside long segments."""
    if h0 < 1:
        raise ValueError(f"need h0 >= 1, got {h0}")
    return 1.0 / (2.0 * math.sqrt(math.pi) * float(h0) ** 1.5)
