"""Brownian-excursion sampling and the fixed-point limit functionals.

The sampler realizes the excursion as the Euclidean norm of a
three-dimensional Brownian bridge from the origin to the origin, which has
the excursion's exact finite-dimensional laws at the grid points.  Its
one-dimensional marginal at time t has the closed-form density

    sqrt(2) h^2 (pi t^3 (1-t)^3)^{-1/2} exp(-h^2 / (2 t (1-t))),

against which the sampler is validated.  The limit functional for the
n^{1/4}-scaled fixed-point counts of 231-avoiding permutations is

    F[a, b] = (2^{7/4} sqrt(pi))^{-1} \int_a^b e_t^{-3/2} dt,

whose full-interval mean is Gamma(1/4) / (2 sqrt(pi)).
"""

from __future__ import annotations

import csv
import io
import math
from typing import Union

import numpy as np
from scipy.special import erf

from .dyck import DyckPath

__all__ = [
    "ExcursionSample",
    "sample_excursion",
    "marginal_density",
    "marginal_cdf",
    "limit_functional_F",
    "path_functional",
    "DEFAULT_GRID",
]

DEFAULT_GRID = 2 ** 12

_F_CONST = 2.0 ** 1.75 * math.sqrt(math.pi)  # normalizer of the limit functional
_P_CONST = 2.0 * math.sqrt(math.pi)  # normalizer of the discrete path functional


class ExcursionSample:
    """Discretized positive function on [0, 1] vanishing exactly at the endpoints.

    values[k] is the function at t = k / grid; interior values are strictly
    positive.
    """

    __slots__ = ("grid", "values")

    def __init__(self, values) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1 or values.size < 3:
            raise ValueError("need a 1-d array with at least 3 grid values")
        if values[0] != 0.0 or values[-1] != 0.0:
            raise ValueError("endpoint values must be exactly 0")
        interior = values[1:-1]
        if not np.all(np.isfinite(interior)) or np.any(interior <= 0.0):
            raise ValueError("interior values must be finite and strictly positive")
        values = np.ascontiguousarray(values)
        values.setflags(write=False)
        object.__setattr__(self, "grid", values.size - 1)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("ExcursionSample is immutable")

    @property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid + 1)

    def at(self, t: float) -> float:
        """Linear interpolation of the sample at t in [0, 1]."""
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t must lie in [0, 1], got {t}")
        x = t * self.grid
        lo = int(math.floor(x))
        if lo >= self.grid:
            return float(self.values[-1])
        frac = x - lo
        return float(self.values[lo]) * (1.0 - frac) + float(self.values[lo + 1]) * frac

    def to_csv(self, target: Union[str, io.TextIOBase]) -> None:
        """Write grid values as CSV with header ``t,value``."""
        own = isinstance(target, (str, bytes))
        fh = open(target, "w", newline="") if own else target
        try:
            writer = csv.writer(fh)
            writer.writerow(["t", "value"])
            for k, v in enumerate(self.values):
                writer.writerow([repr(k / self.grid), repr(float(v))])
        finally:
            if own:
                fh.close()

    @classmethod
    def from_csv(cls, source: Union[str, io.TextIOBase]) -> "ExcursionSample":
        own = isinstance(source, (str, bytes))
        fh = open(source, "r", newline="") if own else source
        try:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["t", "value"]:
                raise ValueError(f"unexpected header {header}")
            vals = [float(row[1]) for row in reader]
        finally:
            if own:
                fh.close()
        return cls(vals)


def _excursion_batch(grid: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, grid + 1) array of independent excursion samples on the grid."""
    increments = rng.standard_normal((count, 3, grid)) * math.sqrt(1.0 / grid)
    w = np.cumsum(increments, axis=2)
    t = np.arange(1, grid + 1, dtype=np.float64) / grid
    bridges = w - t * w[:, :, -1:]
    radius = np.sqrt(np.einsum("ijk,ijk->ik", bridges, bridges))
    out = np.empty((count, grid + 1))
    out[:, 0] = 0.0
    out[:, 1:] = radius
    out[:, -1] = 0.0  # the bridge is exactly 0 at t = 1 up to roundoff
    return out


def sample_excursion(grid: int, rng: np.random.Generator) -> ExcursionSample:
    """Draw one excursion sample of resolution ``grid``.

    Exact in law at the grid points (norm of a 3-d Gaussian bridge); the
    deterministic linear interpolation between grid points carries the usual
    O(grid^{-1/2}) discretization error.
    """
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    return ExcursionSample(_excursion_batch(grid, 1, rng)[0])


def marginal_density(t: float, h: float) -> float:
    """Density of the excursion height at interior time t, evaluated at h > 0."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie strictly inside (0, 1), got {t}")
    if h <= 0.0:
        raise ValueError(f"h must be positive, got {h}")
    v = t * (1.0 - t)
    return (
        math.sqrt(2.0)
        * h
        * h
        / math.sqrt(math.pi * v ** 3)
        * math.exp(-h * h / (2.0 * v))
    )


def marginal_cdf(t: float, h: float) -> float:
    """P(excursion height at time t <= h); closed form via the error function."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie strictly inside (0, 1), got {t}")
    if h <= 0.0:
        return 0.0
    v = t * (1.0 - t)
    return float(erf(h / math.sqrt(2.0 * v)) - h * math.sqrt(2.0 / (math.pi * v)) * math.exp(-h * h / (2.0 * v)))


def _clipped_midpoint_cells(edges: np.ndarray, lo: float, hi: float):
    """Midpoints and lengths of the cells [edges[k], edges[k+1]] clipped to [lo, hi]."""
    left = np.maximum(edges[:-1], lo)
    right = np.minimum(edges[1:], hi)
    lengths = np.clip(right - left, 0.0, None)
    mids = 0.5 * (left + right)
    return mids, lengths


def limit_functional_F(sample: ExcursionSample, a: float, b: float) -> float:
    """(2^{7/4} sqrt(pi))^{-1} \int_a^b sample(t)^{-3/2} dt on the sample's grid.

    Midpoint rule over the grid cells (cells are clipped to [a, b]); the two
    endpoint cells, where the integrand has its t^{-3/4}-type singularity, are
    instead integrated against the local power law c sqrt(t) fitted to the
    first interior value, keeping the full-interval integral finite just as
    the limit object is.
    """
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"need 0 <= a < b <= 1, got [{a}, {b}]")
    g = sample.grid
    delta = 1.0 / g
    vals = sample.values
    lo_interior = max(a, delta)
    hi_interior = min(b, 1.0 - delta)
    total = 0.0
    if lo_interior < hi_interior:
        edges = np.arange(1, g) * delta
        mids, lengths = _clipped_midpoint_cells(edges, lo_interior, hi_interior)
        live = lengths > 0.0
        if np.any(np.isclose(vals[1:-1], 0.0)) and np.any(live):
            raise ValueError("degenerate sample: zero interior value")
        mids = mids[live]
        lengths = lengths[live]
        idx = np.minimum((mids * g).astype(np.int64), g - 1)
        frac = mids * g - idx
        e_mid = vals[idx] * (1.0 - frac) + vals[idx + 1] * frac
        if np.any(e_mid <= 0.0):
            raise ValueError("degenerate sample: nonpositive interpolated value")
        total += float(np.sum(lengths * e_mid ** -1.5))
    if a < delta:
        c = vals[1] / math.sqrt(delta)
        upper = min(b, delta)
        total += 4.0 * c ** -1.5 * (upper ** 0.25 - a ** 0.25)
    if b > 1.0 - delta:
        c = vals[-2] / math.sqrt(delta)
        lower = max(a, 1.0 - delta)
        total += 4.0 * c ** -1.5 * ((1.0 - lower) ** 0.25 - (1.0 - b) ** 0.25)
    return total / _F_CONST


def _f0_full_batch(values: np.ndarray) -> np.ndarray:
    """Vectorized limit_functional_F over [0, 1] for a batch of sample value rows."""
    count, cols = values.shape
    g = cols - 1
    delta = 1.0 / g
    mids = 0.5 * (values[:, 1:-2] + values[:, 2:-1])
    interior = delta * np.sum(mids ** -1.5, axis=1)
    c_left = values[:, 1] / math.sqrt(delta)
    c_right = values[:, -2] / math.sqrt(delta)
    caps = 4.0 * delta ** 0.25 * (c_left ** -1.5 + c_right ** -1.5)
    return (interior + caps) / _F_CONST


def path_functional(path: DyckPath, a: float, b: float) -> float:
    """(2 sqrt(pi))^{-1} \int_a^b (sqrt(n) / gamma(2nt))^{3/2} dt for a Dyck path.

    gamma is linearly interpolated; the quadrature is the midpoint rule on the
    lattice cells clipped to the window, which matches
    :func:`limit_functional_F` exactly on the rescaled path.  Rejects windows
    in which the path touches 0.
    """
    if not 0.0 < a < b < 1.0:
        raise ValueError(f"need 0 < a < b < 1, got [{a}, {b}]")
    n = path.n
    if n == 0:
        raise ValueError("empty path has no interior window")
    g = path.gamma
    u_lo = 2.0 * n * a
    u_hi = 2.0 * n * b
    x_lo = int(math.floor(u_lo))
    x_hi = int(math.ceil(u_hi))
    touched = np.flatnonzero(g[x_lo : x_hi + 1] == 0)
    if touched.size:
        raise ValueError(
            f"path touches 0 at position {x_lo + int(touched[0])} inside the window"
        )
    edges = np.arange(x_lo, x_hi + 1, dtype=np.float64)
    mids, lengths = _clipped_midpoint_cells(edges, u_lo, u_hi)
    live = lengths > 0.0
    mids = mids[live]
    lengths = lengths[live]
    idx = np.minimum(mids.astype(np.int64), 2 * n - 1)
    frac = mids - idx
    g_mid = g[idx] * (1.0 - frac) + g[idx + 1] * frac
    integrand = (math.sqrt(float(n)) / g_mid) ** 1.5
    return float(np.sum(lengths * integrand)) / (2.0 * n) / _P_CONST
