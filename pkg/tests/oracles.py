"""Independent brute-force oracles used to freeze expected test values.

Everything here is deliberately naive: explicit path listings, transfer-matrix
counting over heights, and direct definition-chasing.  None of it shares code
with the library's closed-form or vectorized implementations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def enumerate_segment_paths(h0: int, i: int, m: int) -> list[tuple[int, ...]]:
    """All nonnegative +-1 paths from height h0, i up-steps, net m, ending with +1."""
    steps = 2 * i - m
    out: list[tuple[int, ...]] = []
    if steps < 1:
        return out
    seq: list[int] = []

    def rec(ups: int, h: int) -> None:
        if len(seq) == steps:
            if ups == i and seq[-1] == 1:
                out.append(tuple(seq))
            return
        if ups < i:
            seq.append(1)
            rec(ups + 1, h + 1)
            seq.pop()
        if h > 0 and (len(seq) - ups) < (i - m):
            seq.append(-1)
            rec(ups, h - 1)
            seq.pop()

    rec(0, h0)
    return out


def count_segment_dp(h0: int, i: int, m: int) -> int:
    """Transfer-matrix count of the same paths, independent of any closed form."""
    steps = 2 * i - m
    if steps < 1 or m > i or h0 + m < 1:
        return 0
    # state: (ups used, height) -> count, advanced one step at a time
    state = {(0, h0): 1}
    for step_idx in range(steps):
        nxt: dict[tuple[int, int], int] = {}
        last = step_idx == steps - 1
        for (ups, h), cnt in state.items():
            if ups < i:
                key = (ups + 1, h + 1)
                nxt[key] = nxt.get(key, 0) + cnt
            if h > 0 and not last:
                key = (ups, h - 1)
                nxt[key] = nxt.get(key, 0) + cnt
        state = nxt
    return state.get((i, h0 + m), 0)


def segment_excursion_stats(path: tuple[int, ...], h0: int) -> list[tuple[int, int | None]]:
    """(height, closing length or None) for each up-step of a lattice path."""
    heights = [h0]
    for st in path:
        heights.append(heights[-1] + st)
    out = []
    for k, st in enumerate(path):
        if st != 1:
            continue
        h = heights[k + 1]
        l = None
        for j in range(k + 2, len(heights)):
            if heights[j] == h - 1:
                l = j - (k + 1) + 1
                break
        out.append((h, l))
    return out


def prob_fixed_by_listing(h0: int, j: int, mj: int, i: int) -> Fraction:
    """P(l_i = 2 h_i) over the uniform segment, by full path listing."""
    paths = enumerate_segment_paths(h0, j, mj)
    hits = 0
    for p in paths:
        h, l = segment_excursion_stats(p, h0)[i - 1]
        if l is not None and l == 2 * h:
            hits += 1
    return Fraction(hits, len(paths))


def catalan_by_segner(n: int) -> int:
    """Catalan numbers from the convolution recurrence."""
    c = [1]
    for k in range(n):
        c.append(sum(c[a] * c[k - a] for a in range(k + 1)))
    return c[n]


def brute_contains(values, pattern) -> bool:
    """Pattern containment by scanning every index subsequence."""
    k = len(pattern)
    for idx in itertools.combinations(range(len(values)), k):
        sub = [values[t] for t in idx]
        if all(
            (pattern[a] < pattern[b]) == (sub[a] < sub[b])
            for a in range(k)
            for b in range(a + 1, k)
        ):
            return True
    return False


def brute_avoiders(n: int, pattern) -> list[tuple[int, ...]]:
    """All pattern-avoiding permutations of {1..n} by filtering n! candidates."""
    return [
        p
        for p in itertools.permutations(range(1, n + 1))
        if not brute_contains(p, pattern)
    ]
