"""Fixed-point statistics of permutations and their scaled empirical measures.

For a 231-avoiding image of a Dyck path, sigma(i) = i exactly when the i-th
excursion closes at twice its height (l_i = 2 h_i), which concentrates fixed
points where the path is low.  A 123-avoiding permutation has at most one
fixed point in each half of {1..n}; the lower one exists iff the path
associated with its complement has a strict local minimum at the center, and
then sits exactly at (n - gamma(n)) / 2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .dyck import DyckPath, local_min_at_center
from .permutations import Permutation, _bjs_values, _require_avoids

__all__ = [
    "FixedPointProfile123",
    "EmpiricalMeasure",
    "fixed_points",
    "theta_interval",
    "theta_almost",
    "profile_123",
    "predict_lower_fixed_point",
    "scaled_fp_measure_231",
    "scaled_fp_measure_123",
]


@dataclass(frozen=True)
class FixedPointProfile123:
    """Half-split fixed-point profile of a 123-avoiding permutation.

    lower_count / upper_count count fixed points in [1, n/2] and (n/2, n] (each is 0
    or 1); lower_position / upper_position give their locations, None when absent.
    """

    lower_count: int
    upper_count: int
    lower_position: Optional[int]
    upper_position: Optional[int]

    def __post_init__(self) -> None:
        if self.lower_count not in (0, 1) or self.upper_count not in (0, 1):
            raise ValueError("half counts must be 0 or 1")
        if (self.lower_count == 1) != (self.lower_position is not None):
            raise ValueError("lower_count must match presence of lower_position")
        if (self.upper_count == 1) != (self.upper_position is not None):
            raise ValueError("upper_count must match presence of upper_position")


class EmpiricalMeasure:
    """Finite collection of weighted point masses on the line, sorted by location."""

    __slots__ = ("locations", "weights")

    def __init__(self, locations, weights) -> None:
        locations = np.asarray(locations, dtype=np.float64)
        weights = np.asarray(weights, dtype=np.float64)
        if locations.shape != weights.shape or locations.ndim != 1:
            raise ValueError("locations and weights must be 1-d arrays of equal length")
        if not np.all(np.isfinite(locations)) or not np.all(np.isfinite(weights)):
            raise ValueError("atoms must be finite")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        order = np.argsort(locations, kind="stable")
        locations = np.ascontiguousarray(locations[order])
        weights = np.ascontiguousarray(weights[order])
        locations.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "locations", locations)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("EmpiricalMeasure is immutable")

    def __len__(self) -> int:
        return self.locations.size

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def mass(self, a: float, b: float) -> float:
        """Total weight carried by atoms with location in [a, b]."""
        if a > b:
            raise ValueError(f"empty interval bounds: a={a} > b={b}")
        sel = (self.locations >= a) & (self.locations <= b)
        return float(self.weights[sel].sum())

    def to_csv(self, target: Union[str, io.TextIOBase]) -> None:
        """Write atoms as CSV with header ``location,weight``."""
        own = isinstance(target, (str, bytes))
        fh = open(target, "w", newline="") if own else target
        try:
            writer = csv.writer(fh)
            writer.writerow(["location", "weight"])
            for loc, w in zip(self.locations, self.weights):
                writer.writerow([repr(float(loc)), repr(float(w))])
        finally:
            if own:
                fh.close()

    @classmethod
    def from_csv(cls, source: Union[str, io.TextIOBase]) -> "EmpiricalMeasure":
        own = isinstance(source, (str, bytes))
        fh = open(source, "r", newline="") if own else source
        try:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["location", "weight"]:
                raise ValueError(f"unexpected header {header}")
            locs, ws = [], []
            for row in reader:
                locs.append(float(row[0]))
                ws.append(float(row[1]))
        finally:
            if own:
                fh.close()
        return cls(locs, ws)


def fixed_points(perm: Permutation) -> np.ndarray:
    """Sorted 1-indexed positions i with perm(i) = i."""
    n = perm.values.size
    return np.flatnonzero(perm.values == np.arange(1, n + 1)) + 1


def theta_interval(perm: Permutation, a: float, b: float) -> int:
    """Number of fixed points i with a*n <= i <= b*n."""
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if not (0.0 <= a and b <= 1.0):
        raise ValueError(f"window must lie in [0, 1], got [{a}, {b}]")
    n = perm.values.size
    fp = fixed_points(perm)
    return int(np.count_nonzero((fp >= a * n) & (fp <= b * n)))


def _almost_targets(n: int, K: float, alpha: float) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=np.float64)
    shift = np.floor(np.maximum(0.0, K * (i * (n - i) / n) ** alpha))
    return np.arange(1, n + 1, dtype=np.int64) - shift.astype(np.int64)


def theta_almost(perm: Permutation, K: float, alpha: float, a: float, b: float) -> int:
    """Number of i in [a*n, b*n] with perm(i) = i - floor(K (i(n-i)/n)^alpha).

    The floor argument is clamped at 0, so K = 0 reduces to
    :func:`theta_interval`.
    """
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if not (0.0 <= a and b <= 1.0):
        raise ValueError(f"window must lie in [0, 1], got [{a}, {b}]")
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 0.5), got {alpha}")
    n = perm.values.size
    i = np.arange(1, n + 1)
    hits = perm.values == _almost_targets(n, K, alpha)
    window = (i >= a * n) & (i <= b * n)
    return int(np.count_nonzero(hits & window))


def profile_123(perm: Permutation) -> FixedPointProfile123:
    """Fixed-point profile of a 123-avoiding permutation (input validated).

    The lower half is {i : i <= n/2}; for odd n the middle position (n+1)/2
    exceeds n/2 and therefore counts as upper.  A 123-avoider has at most one
    fixed point in each half.
    """
    _require_avoids(perm, (1, 2, 3))
    n = perm.values.size
    fp = fixed_points(perm)
    lower = fp[fp <= n // 2]
    upper = fp[fp > n // 2]
    if lower.size > 1 or upper.size > 1:
        raise AssertionError("123-avoider with two fixed points in one half")
    return FixedPointProfile123(
        lower_count=int(lower.size),
        upper_count=int(upper.size),
        lower_position=int(lower[0]) if lower.size else None,
        upper_position=int(upper[0]) if upper.size else None,
    )


def predict_lower_fixed_point(path: DyckPath) -> tuple[bool, Optional[int]]:
    """Predict the lower-half fixed point of the 123-avoider carried by ``path``.

    The permutation complement(bjs(path)) has a fixed point at some k <= n/2
    iff gamma has a strict local minimum at n, and then k = (n - gamma(n))/2.
    Returns (has_lower_fixed_point, predicted_location_or_None).
    """
    flag, g_n = local_min_at_center(path)
    if not flag:
        return False, None
    return True, (path.n - g_n) // 2


def scaled_fp_measure_231(perm: Permutation) -> EmpiricalMeasure:
    """Atoms at i/n with weight n^{-1/4} for each fixed point of a 231-avoider."""
    _require_avoids(perm, (2, 3, 1))
    n = perm.values.size
    fp = fixed_points(perm)
    weight = float(n) ** -0.25 if n else 0.0
    return EmpiricalMeasure(fp / n if n else fp, np.full(fp.size, weight))


def scaled_fp_measure_123(perm: Permutation) -> EmpiricalMeasure:
    """Unit atoms at (i - n/2) / sqrt(2n) for each fixed point of a 123-avoider."""
    _require_avoids(perm, (1, 2, 3))
    n = perm.values.size
    fp = fixed_points(perm)
    locs = (fp - n / 2.0) / math.sqrt(2.0 * n) if n else fp.astype(np.float64)
    return EmpiricalMeasure(locs, np.ones(fp.size))


def _fixed_count_231(l: np.ndarray, h: np.ndarray) -> int:
    return int(np.count_nonzero(l == 2 * h))


def _antidiagonal_positions(steps: np.ndarray) -> np.ndarray:
    """1-indexed fixed points of complement(bjs(path)) for the given step array."""
    tau = _bjs_values(steps)
    n = tau.size
    return np.flatnonzero(tau + np.arange(1, n + 1) == n + 1) + 1
