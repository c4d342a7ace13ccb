"""Dyck paths: exact uniform sampling, enumeration, excursion decomposition.

A Dyck path of half-length n is a +-1 step sequence of length 2n whose prefix
sums gamma stay nonnegative and return to 0.  Everything downstream (the
bijections to pattern-avoiding permutations and their fixed-point statistics)
is computed from the per-up-step excursion data (v_i, h_i, l_i) and the
up-run/down-run sums (A_i, D_i) produced by :func:`decompose`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

__all__ = [
    "DyckPath",
    "ExcursionDecomposition",
    "RegularityReport",
    "sample_uniform",
    "enumerate_paths",
    "decompose",
    "height",
    "local_min_at_center",
    "regularity_check",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 14


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


class DyckPath:
    """Immutable nonnegative +-1 excursion of length 2n.

    ``steps`` is a read-only int8 array of +1/-1 entries; ``gamma`` holds the
    2n + 1 prefix sums with gamma[0] = gamma[2n] = 0.
    """

    __slots__ = ("steps", "gamma")

    def __init__(self, steps) -> None:
        steps = np.asarray(steps, dtype=np.int8)
        if steps.ndim != 1:
            raise ValueError("steps must be one-dimensional")
        if steps.size % 2 != 0:
            raise ValueError(f"a Dyck path has even length, got {steps.size}")
        if steps.size and not np.all(np.abs(steps) == 1):
            raise ValueError("steps must be +1 or -1")
        gamma = np.zeros(steps.size + 1, dtype=np.int64)
        np.cumsum(steps, out=gamma[1:])
        if gamma[-1] != 0:
            raise ValueError("path must return to height 0")
        if steps.size and gamma.min() < 0:
            raise ValueError("path must stay nonnegative")
        object.__setattr__(self, "steps", _as_readonly(steps))
        object.__setattr__(self, "gamma", _as_readonly(gamma))

    def __setattr__(self, name, value):
        raise AttributeError("DyckPath is immutable")

    @property
    def n(self) -> int:
        """Half-length: the number of up-steps."""
        return self.steps.size // 2

    def __len__(self) -> int:
        return self.steps.size

    def __eq__(self, other) -> bool:
        return isinstance(other, DyckPath) and np.array_equal(self.steps, other.steps)

    def __hash__(self) -> int:
        return hash(self.steps.tobytes())

    def __repr__(self) -> str:
        if self.steps.size <= 40:
            return f"DyckPath({self.to_text()!r})"
        return f"DyckPath(n={self.n})"

    def to_text(self) -> str:
        """Encode as a string over {U, D}, one character per step."""
        return "".join("U" if s == 1 else "D" for s in self.steps)

    @classmethod
    def from_text(cls, text: str) -> "DyckPath":
        text = text.strip()
        if not set(text) <= {"U", "D"}:
            raise ValueError(f"path text must use only U and D: {text!r}")
        return cls(np.array([1 if c == "U" else -1 for c in text], dtype=np.int8))

    def to_bytes(self) -> bytes:
        """Compact binary form: 8-byte little-endian length then one bit per step."""
        header = self.steps.size.to_bytes(8, "little")
        return header + np.packbits(self.steps == 1).tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "DyckPath":
        size = int.from_bytes(blob[:8], "little")
        bits = np.unpackbits(np.frombuffer(blob[8:], dtype=np.uint8), count=size)
        return cls(np.where(bits == 1, 1, -1).astype(np.int8))


@dataclass(frozen=True)
class ExcursionDecomposition:
    """Per-up-step excursion data plus run sums of a Dyck path.

    v[i], h[i], l[i] (1-indexed in the math, 0-indexed arrays here) are the
    position after the (i+1)-th up-step, the height there, and the length of
    the excursion opened by that up-step.  a/d are maximal run lengths of
    up-steps/down-steps, A/D their prefix sums, with A[-1] = D[-1] = n.
    """

    v: np.ndarray
    h: np.ndarray
    l: np.ndarray
    a: np.ndarray
    d: np.ndarray
    A: np.ndarray
    D: np.ndarray

    @property
    def m_runs(self) -> int:
        return int(self.a.size)

    @property
    def y(self) -> np.ndarray:
        """Run-sum differences y_i = A_i - D_i."""
        return self.A - self.D


def sample_uniform(n: int, rng: np.random.Generator) -> DyckPath:
    """Draw a Dyck path exactly uniformly among all catalan(n) paths.

    Cycle-lemma construction: shuffle n up-steps with n+1 down-steps, rotate
    to start right after the first prefix-sum minimum, and drop the final
    (forced) down-step.  Every path corresponds to exactly 2n + 1 shuffles, so
    the result is exactly uniform; O(n), no rejection.
    """
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    return DyckPath(_sample_steps(n, rng))


def _sample_steps(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 0:
        return np.empty(0, dtype=np.int8)
    arr = np.concatenate(
        [np.ones(n, dtype=np.int8), -np.ones(n + 1, dtype=np.int8)]
    )
    rng.shuffle(arr)
    prefix = np.cumsum(arr, dtype=np.int64)
    k = int(np.argmin(prefix))  # first position attaining the minimum
    rotated = np.concatenate([arr[k + 1 :], arr[: k + 1]])
    return rotated[:-1]


def enumerate_paths(n: int, cap: int = ENUMERATION_CAP) -> Iterator[DyckPath]:
    """Yield every Dyck path of half-length n once, lexicographically with U < D."""
    if n > cap:
        raise ValueError(
            f"refusing to enumerate catalan({n}) paths; raise cap (currently {cap})"
        )
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    for steps in _enumerate_steps(n):
        yield DyckPath(steps)


def _enumerate_steps(n: int) -> Iterator[np.ndarray]:
    if n == 0:
        yield np.empty(0, dtype=np.int8)
        return
    total = 2 * n
    seq = np.empty(total, dtype=np.int8)

    def rec(pos: int, ups: int, h: int) -> Iterator[np.ndarray]:
        if pos == total:
            yield seq.copy()
            return
        if ups < n:
            seq[pos] = 1
            yield from rec(pos + 1, ups + 1, h + 1)
        if h > 0 and (pos - ups) < n:
            seq[pos] = -1
            yield from rec(pos + 1, ups, h - 1)

    yield from rec(0, 0, 0)


def _match_excursions(steps: np.ndarray, gamma: np.ndarray):
    """Positions v, heights h, lengths l of all excursions, in up-step order.

    Up- and down-crossings of each height level alternate along the path, so
    after a stable sort by (base level, step index) every up-step's matching
    first-return down-step is the entry that follows it.
    """
    two_n = steps.size
    if two_n == 0:
        z = np.empty(0, dtype=np.int64)
        return z, z.copy(), z.copy()
    up = steps == 1
    base = np.where(up, gamma[:-1], gamma[1:])
    s_idx = np.arange(two_n, dtype=np.int64)
    # single-key radix-style sort: base fits far below 2**40, index below 2**23
    key = (base.astype(np.int64) << 24) | s_idx
    order = np.argsort(key, kind="stable")
    up_sorted = up[order]
    ups_at = np.flatnonzero(up_sorted)
    up_steps = order[ups_at]
    down_steps = order[ups_at + 1]
    path_order = np.argsort(up_steps, kind="stable")
    v = up_steps[path_order] + 1  # 1-indexed position after each up-step
    l = down_steps[path_order] - up_steps[path_order] + 1
    return v, gamma[v], l


def _run_sums(steps: np.ndarray):
    """Run lengths a (ups), d (downs) and prefix sums A, D."""
    if steps.size == 0:
        z = np.empty(0, dtype=np.int64)
        return z, z.copy(), z.copy(), z.copy()
    boundaries = np.flatnonzero(steps[1:] != steps[:-1]) + 1
    edges = np.concatenate([[0], boundaries, [steps.size]])
    lengths = np.diff(edges)
    a = lengths[0::2].astype(np.int64)  # path starts with an up-run
    d = lengths[1::2].astype(np.int64)
    return a, d, np.cumsum(a), np.cumsum(d)


def decompose(path: DyckPath) -> ExcursionDecomposition:
    """Excursion triples and run sums of ``path``.

    l[i] is minimal with gamma[v_i - 1 + l_i] = h_i - 1, i.e. the excursion
    opened by each up-step ends at its first return below the entry height.
    """
    v, h, l = _match_excursions(path.steps, path.gamma)
    a, d, A, D = _run_sums(path.steps)
    return ExcursionDecomposition(
        v=_as_readonly(v),
        h=_as_readonly(h),
        l=_as_readonly(l),
        a=_as_readonly(a),
        d=_as_readonly(d),
        A=_as_readonly(A),
        D=_as_readonly(D),
    )


def height(path: DyckPath, t: float) -> float:
    """Linear interpolation of gamma at 2nt for t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if path.n == 0:
        return 0.0
    x = 2.0 * path.n * t
    lo = int(math.floor(x))
    if lo >= 2 * path.n:
        return float(path.gamma[-1])
    frac = x - lo
    return float(path.gamma[lo]) * (1.0 - frac) + float(path.gamma[lo + 1]) * frac


def local_min_at_center(path: DyckPath) -> tuple[bool, int]:
    """Whether gamma has a strict local minimum at position n, and gamma(n).

    True exactly when step n is a down-step and step n+1 is an up-step, i.e.
    gamma(n-1) - gamma(n) = gamma(n+1) - gamma(n) = 1.
    """
    n = path.n
    if n < 1:
        raise ValueError("center test needs a nonempty path")
    g = path.gamma
    flag = g[n - 1] - g[n] == 1 and g[n + 1] - g[n] == 1
    return bool(flag), int(g[n])


@dataclass
class RegularityReport:
    """Outcome of the four path-regularity conditions with their exact constants.

    witnesses maps a failed condition letter to the offending positions or
    index pair together with the violating value and its bound.
    """

    pass_a: bool
    pass_b: bool
    pass_c: bool
    pass_d: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.pass_a and self.pass_b and self.pass_c and self.pass_d


def _max_pair_distance(threshold: float) -> int:
    """Largest integer distance strictly below ``threshold``."""
    d = int(math.floor(threshold))
    if d == threshold:
        d -= 1
    return max(d, 0)


def _window_range_ok(values: np.ndarray, width: int, bound: float):
    """Check max - min < bound over every sliding window of ``width`` entries.

    Returns (ok, witness) where witness is (x, y, diff) for some violating
    pair.  Edge windows are clipped, so only genuine in-range pairs count.
    """
    if width <= 1 or values.size == 0:
        return True, None
    width = min(width, values.size)
    hi = maximum_filter1d(values, size=width, mode="nearest")
    lo = minimum_filter1d(values, size=width, mode="nearest")
    ranges = hi - lo
    if np.all(ranges < bound):
        return True, None
    center = int(np.argmax(ranges))
    half_lo = width // 2
    start = max(0, center - half_lo)
    stop = min(values.size, start + width)
    window = values[start:stop]
    x = start + int(np.argmax(window))
    y = start + int(np.argmin(window))
    return False, (min(x, y), max(x, y), int(abs(int(window.max()) - int(window.min()))))


def _run_sum_condition(sums: np.ndarray, n: int):
    """Check |S_i - S_j - 2(i - j)| < 0.1 |i - j|^0.6 for all gaps >= n^0.3.

    S includes S_0 = 0.  Dyadic gap blocks are first screened with a sliding
    window range bound (sound: the block's smallest gap has the smallest
    bound); only hot blocks are scanned gap by gap, so typical failures are
    found at the smallest gaps in O(m) and full passes cost O(m log m).
    """
    f = np.concatenate([[0], sums]).astype(np.int64) - 2 * np.arange(
        sums.size + 1, dtype=np.int64
    )
    m = f.size - 1
    min_gap_f = float(n) ** 0.3
    g0 = int(math.ceil(min_gap_f))
    if g0 < min_gap_f:  # guard against ceil of an exact float
        g0 += 1
    if g0 > m:
        return True, None
    lo = g0
    while lo <= m:
        hi = min(2 * lo - 1, m)
        block_bound = 0.1 * float(lo) ** 0.6
        ok, _ = _window_range_ok(f, hi + 1, block_bound)
        if not ok:
            for g in range(lo, hi + 1):
                diffs = np.abs(f[g:] - f[:-g])
                bound_g = 0.1 * float(g) ** 0.6
                bad = np.flatnonzero(diffs >= bound_g)
                if bad.size:
                    i = int(bad[0])
                    return False, (i, i + g, int(diffs[i]), bound_g)
        lo = hi + 1
    return True, None


def regularity_check(path: DyckPath) -> RegularityReport:
    """Evaluate the four moderate-deviation regularity conditions on ``path``.

    With n the half-length and gamma the height profile:
      (a) max gamma < 0.4 n^0.6
      (b) |gamma(x) - gamma(y)| < 0.5 n^0.4 whenever |x - y| < 2 n^0.6
      (c) |A_i - A_j - 2(i - j)| < 0.1 |i - j|^0.6 for all |i - j| >= n^0.3
      (d) same as (c) for the down-run sums D.
    Constants and strict inequalities are evaluated exactly as stated, with
    no slack.  Conditions (c)/(d) ignore index pairs closer than n^0.3.
    """
    n = path.n
    if n == 0:
        return RegularityReport(True, True, True, True)
    g = path.gamma
    witnesses: dict = {}

    bound_a = 0.4 * float(n) ** 0.6
    peak = int(g.max())
    pass_a = peak < bound_a
    if not pass_a:
        witnesses["a"] = (int(np.argmax(g)), peak, bound_a)

    dist = _max_pair_distance(2.0 * float(n) ** 0.6)
    bound_b = 0.5 * float(n) ** 0.4
    pass_b, wit_b = _window_range_ok(g, dist + 1, bound_b)
    if not pass_b:
        witnesses["b"] = (*wit_b, bound_b)

    _, _, A, D = _run_sums(path.steps)
    pass_c, wit_c = _run_sum_condition(A, n)
    if not pass_c:
        witnesses["c"] = wit_c
    pass_d, wit_d = _run_sum_condition(D, n)
    if not pass_d:
        witnesses["d"] = wit_d

    return RegularityReport(pass_a, pass_b, pass_c, pass_d, witnesses)
