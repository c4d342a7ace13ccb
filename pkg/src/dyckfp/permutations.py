"""Permutations, classical-pattern containment, and the two Dyck-path bijections.

A path of half-length n maps to a 321-avoiding permutation through its run
sums (tau(D_i) = 1 + A_i on the run boundaries, increasing elsewhere) and to a
231-avoiding permutation through its excursions (sigma(i) = i + l_i/2 - h_i).
Both maps are bijections from the catalan(n) paths onto their image classes.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from typing import Iterator, Optional, Sequence

import numpy as np

from .dyck import DyckPath, _match_excursions, _run_sums

__all__ = [
    "Permutation",
    "PatternViolation",
    "contains",
    "find_pattern",
    "enumerate_avoiders",
    "bjs",
    "to_231",
    "invert_231",
    "complement",
    "reverse_complement",
    "AVOIDER_ENUMERATION_CAP",
]

AVOIDER_ENUMERATION_CAP = 11


class Permutation:
    """Immutable permutation of {1, ..., n} stored as its value sequence."""

    __slots__ = ("values",)

    def __init__(self, values) -> None:
        values = np.asarray(values, dtype=np.int64)
        if values.ndim != 1:
            raise ValueError("permutation values must be one-dimensional")
        n = values.size
        if n:
            counts = np.bincount(values, minlength=n + 1)
            if counts[0] != 0 or not np.all(counts[1:] == 1):
                raise ValueError("values must be a bijection of {1, ..., n}")
        values = np.ascontiguousarray(values)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __call__(self, i: int) -> int:
        """Value at 1-indexed position i."""
        if not 1 <= i <= self.values.size:
            raise IndexError(f"position {i} out of range 1..{self.values.size}")
        return int(self.values[i - 1])

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(
            self.values, other.values
        )

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        if self.values.size <= 20:
            return f"Permutation({self.as_tuple()})"
        return f"Permutation(n={self.values.size})"

    def to_text(self) -> str:
        """One-line, space-separated, 1-indexed values."""
        return " ".join(str(int(v)) for v in self.values)

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        return cls([int(tok) for tok in text.split()])


class PatternViolation(ValueError):
    """Raised when an operation requires avoidance that the input lacks."""

    def __init__(self, pattern: tuple[int, ...], positions: tuple[int, ...], values: tuple[int, ...]):
        self.pattern = pattern
        self.positions = positions
        self.values = values
        super().__init__(
            f"pattern {pattern} occurs at positions {positions} with values {values}"
        )


def _find_ascent_triple(vals: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """First-found indices i < j < k with vals[i] < vals[j] < vals[k], else None."""
    lo_idx = -1
    pair: Optional[tuple[int, int]] = None  # ascent pair with the smallest top value
    for k, x in enumerate(vals):
        if pair is not None and x > vals[pair[1]]:
            return (pair[0], pair[1], k)
        if lo_idx >= 0 and x > vals[lo_idx]:
            if pair is None or x < vals[pair[1]]:
                pair = (lo_idx, k)
        if lo_idx < 0 or x < vals[lo_idx]:
            lo_idx = k
    return None


def _find_132(vals: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """Indices i < j < k with vals[i] < vals[k] < vals[j], else None.

    Right-to-left scan with a decreasing stack; each pop records the best
    available middle value together with the element that popped it.
    """
    stack: list[int] = []
    mid_idx = -1
    popper_idx = -1
    for i in range(len(vals) - 1, -1, -1):
        x = vals[i]
        if mid_idx >= 0 and x < vals[mid_idx]:
            return (i, popper_idx, mid_idx)
        while stack and vals[stack[-1]] < x:
            if mid_idx < 0 or vals[stack[-1]] > vals[mid_idx]:
                mid_idx = stack[-1]
                popper_idx = i
            stack.pop()
        stack.append(i)
    return None


def _order_type(pattern: Sequence[int]) -> tuple[int, ...]:
    ranks = sorted(range(len(pattern)), key=lambda i: pattern[i])
    out = [0] * len(pattern)
    for rank, idx in enumerate(ranks, start=1):
        out[idx] = rank
    return tuple(out)


def _find_generic(vals: Sequence[int], pattern: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    """Backtracking search for an occurrence of an arbitrary pattern."""
    n, k = len(vals), len(pattern)
    chosen: list[int] = []

    def extend(start: int) -> Optional[tuple[int, ...]]:
        depth = len(chosen)
        if depth == k:
            return tuple(chosen)
        for idx in range(start, n - (k - depth) + 1):
            ok = True
            for d, prev in enumerate(chosen):
                if (pattern[d] < pattern[depth]) != (vals[prev] < vals[idx]):
                    ok = False
                    break
            if ok:
                chosen.append(idx)
                hit = extend(idx + 1)
                if hit is not None:
                    return hit
                chosen.pop()
        return None

    return extend(0)


def find_pattern(perm: Permutation, pattern: Permutation) -> Optional[tuple[int, ...]]:
    """1-indexed positions of some occurrence of ``pattern`` in ``perm``, or None.

    Length-3 patterns reduce to two scanning primitives (ascending triple and
    132) through the reverse/complement symmetries; longer patterns fall back
    to backtracking with early exit.
    """
    vals = [int(v) for v in perm.values]
    pat = _order_type(pattern.as_tuple())
    hit = _find_in_sequence(vals, pat)
    return None if hit is None else tuple(i + 1 for i in hit)


def _find_in_sequence(vals: Sequence[int], pat: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    n = len(vals)
    k = len(pat)
    if k == 0:
        return ()
    if k > n:
        return None
    if k == 1:
        return (0,)
    if k == 2:
        if pat == (1, 2):
            lo = 0
            for i in range(1, n):
                if vals[i] > vals[lo]:
                    return (lo, i)
                lo = i if vals[i] < vals[lo] else lo
            return None
        hi = 0
        for i in range(1, n):
            if vals[i] < vals[hi]:
                return (hi, i)
            hi = i if vals[i] > vals[hi] else hi
        return None
    if k == 3:
        rev = list(reversed(vals))
        big = n + 1
        if pat == (1, 2, 3):
            return _find_ascent_triple(vals)
        if pat == (3, 2, 1):
            hit = _find_ascent_triple(rev)
            if hit is None:
                return None
            return tuple(sorted(n - 1 - i for i in hit))
        if pat == (1, 3, 2):
            return _find_132(vals)
        if pat == (2, 3, 1):
            hit = _find_132(rev)
            if hit is None:
                return None
            return tuple(sorted(n - 1 - i for i in hit))
        if pat == (3, 1, 2):
            return _find_132([big - v for v in vals])
        if pat == (2, 1, 3):
            hit = _find_132([big - v for v in rev])
            if hit is None:
                return None
            return tuple(sorted(n - 1 - i for i in hit))
    return _find_generic(vals, pat)


def contains(perm: Permutation, pattern: Permutation) -> bool:
    """True iff some index subsequence of ``perm`` has the order type of ``pattern``.

    The empty pattern is contained by convention.
    """
    return find_pattern(perm, pattern) is not None


def _require_avoids(perm: Permutation, pattern_tuple: tuple[int, ...]) -> None:
    hit = _find_in_sequence([int(v) for v in perm.values], pattern_tuple)
    if hit is not None:
        positions = tuple(i + 1 for i in hit)
        raise PatternViolation(
            pattern_tuple, positions, tuple(int(perm.values[i]) for i in hit)
        )


class _AvoidState:
    """Incremental test: does appending x create a pattern occurrence ending at x?

    Only the new element can complete an occurrence when every proper prefix
    already avoids the pattern, so one O(log n) query per candidate suffices
    for the three patterns on the enumeration hot path.
    """

    def __init__(self, pat: tuple[int, ...]):
        self.pat = pat
        self.sorted_vals: list[int] = []
        self.trace: list[tuple] = []
        if pat == (2, 3, 1):
            self.max_ascent_bottom = 0  # x completes 231 iff x < this
        elif pat == (1, 2, 3):
            self.min_ascent_top = None  # x completes 123 iff x > this
            self.prefix_min = None
        elif pat == (3, 2, 1):
            self.max_descent_bottom = 0  # x completes 321 iff x < this
            self.prefix_max = 0
        else:
            self.generic_prefix: list[int] = []

    def creates(self, x: int) -> bool:
        pat = self.pat
        if pat == (2, 3, 1):
            return x < self.max_ascent_bottom
        if pat == (1, 2, 3):
            return self.min_ascent_top is not None and x > self.min_ascent_top
        if pat == (3, 2, 1):
            return x < self.max_descent_bottom
        return _find_in_sequence(self.generic_prefix + [x], pat) is not None

    def push(self, x: int) -> None:
        pat = self.pat
        if pat == (2, 3, 1):
            self.trace.append((self.max_ascent_bottom,))
            pos = bisect_left(self.sorted_vals, x)
            if pos:  # largest prefix value below x becomes an ascent bottom
                self.max_ascent_bottom = max(self.max_ascent_bottom, self.sorted_vals[pos - 1])
            insort(self.sorted_vals, x)
        elif pat == (1, 2, 3):
            self.trace.append((self.min_ascent_top, self.prefix_min))
            if self.prefix_min is not None and x > self.prefix_min:
                if self.min_ascent_top is None or x < self.min_ascent_top:
                    self.min_ascent_top = x
            if self.prefix_min is None or x < self.prefix_min:
                self.prefix_min = x
        elif pat == (3, 2, 1):
            self.trace.append((self.max_descent_bottom, self.prefix_max))
            if x < self.prefix_max:
                self.max_descent_bottom = max(self.max_descent_bottom, x)
            self.prefix_max = max(self.prefix_max, x)
        else:
            self.generic_prefix.append(x)

    def pop(self, x: int) -> None:
        pat = self.pat
        if pat == (2, 3, 1):
            (self.max_ascent_bottom,) = self.trace.pop()
            self.sorted_vals.remove(x)
        elif pat == (1, 2, 3):
            self.min_ascent_top, self.prefix_min = self.trace.pop()
        elif pat == (3, 2, 1):
            self.max_descent_bottom, self.prefix_max = self.trace.pop()
        else:
            self.generic_prefix.pop()


def enumerate_avoiders(
    n: int, pattern: Permutation, cap: int = AVOIDER_ENUMERATION_CAP
) -> Iterator[Permutation]:
    """Yield the pattern-avoiding permutations of {1..n} in lexicographic order.

    Equivalent to filtering all n! permutations, but realized as a prefix
    tree walk: containment is monotone under extension, so any prefix with an
    occurrence is pruned without descending.
    """
    if n > cap:
        raise ValueError(
            f"refusing to walk S_{n}; raise cap (currently {cap})"
        )
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    pat = _order_type(pattern.as_tuple())
    if len(pat) == 0:
        return  # every nonempty sequence contains the empty pattern... which
        # is contained trivially, hence nothing avoids it except nothing at all
    state = _AvoidState(pat)
    used = [False] * (n + 1)
    prefix: list[int] = []

    def walk() -> Iterator[Permutation]:
        if len(prefix) == n:
            yield Permutation(prefix)
            return
        for x in range(1, n + 1):
            if used[x] or state.creates(x):
                continue
            used[x] = True
            prefix.append(x)
            state.push(x)
            yield from walk()
            state.pop(x)
            prefix.pop()
            used[x] = False

    yield from walk()


def _bjs_values(steps: np.ndarray) -> np.ndarray:
    n = steps.size // 2
    _, _, A, D = _run_sums(steps)
    tau = np.zeros(n, dtype=np.int64)
    taken = np.zeros(n + 2, dtype=bool)
    if A.size > 1:
        d_int = D[:-1]
        a_int = A[:-1]
        tau[d_int - 1] = 1 + a_int
        taken[1 + a_int] = True
    abar = np.flatnonzero(~taken[1 : n + 1]) + 1
    tau[tau == 0] = abar
    return tau


def bjs(path: DyckPath) -> Permutation:
    """Map a Dyck path to its 321-avoiding permutation via run sums.

    With up-run sums A_i and down-run sums D_i, the image sends each interior
    run boundary D_i to 1 + A_i and fills the remaining positions with the
    remaining values in increasing order; tau(j) > j exactly at the interior
    boundaries.
    """
    return Permutation(_bjs_values(path.steps))


def _to231_values(steps: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    n = steps.size // 2
    _, h, l = _match_excursions(steps, gamma)
    return np.arange(1, n + 1, dtype=np.int64) + l // 2 - h


def to_231(path: DyckPath) -> Permutation:
    """Map a Dyck path to its 231-avoiding permutation via excursions.

    sigma(i) = i + l_i/2 - h_i, where the excursion opened by the i-th up-step
    has height h_i and length l_i.  Nested excursions map to descents and
    disjoint ones to ascents, which forces 231-avoidance.
    """
    return Permutation(_to231_values(path.steps, path.gamma))


def invert_231(perm: Permutation) -> DyckPath:
    """Inverse of :func:`to_231`.

    The first value of a block determines the first excursion's extent (each
    left-to-right minimum of the permutation pins a peak of the path), so the
    path rebuilds by first-return decomposition; the result is round-trip
    validated, and non-231-avoiding input is rejected with a violating triple.
    """
    vals = perm.values
    n = vals.size
    steps = _invert_231_steps(vals, n)
    if steps is not None:
        try:
            path = DyckPath(steps)
        except ValueError:
            path = None
        if path is not None and np.array_equal(
            _to231_values(path.steps, path.gamma), vals
        ):
            return path
    _require_avoids(perm, (2, 3, 1))
    raise AssertionError("reconstruction failed on a 231-avoiding input")


_D_MARK = None


def _invert_231_steps(vals: np.ndarray, n: int) -> Optional[np.ndarray]:
    out = np.empty(2 * n, dtype=np.int8)
    pos = 0
    stack: list = [(0, n, 0)]
    while stack:
        item = stack.pop()
        if item is _D_MARK:
            out[pos] = -1
            pos += 1
            continue
        lo, hi, off = item
        if lo == hi:
            continue
        p = int(vals[lo]) - off
        if not 1 <= p <= hi - lo:
            return None
        out[pos] = 1
        pos += 1
        stack.append((lo + p, hi, off + p))
        stack.append(_D_MARK)
        stack.append((lo + 1, lo + p, off))
    return out


def complement(perm: Permutation) -> Permutation:
    """k -> n + 1 - perm(k); exchanges 123-avoidance with 321-avoidance."""
    n = perm.values.size
    return Permutation(n + 1 - perm.values)


def reverse_complement(perm: Permutation) -> Permutation:
    """k -> n + 1 - perm(n + 1 - k); preserves 123-avoidance and reflects fixed points."""
    n = perm.values.size
    return Permutation(n + 1 - perm.values[::-1])
