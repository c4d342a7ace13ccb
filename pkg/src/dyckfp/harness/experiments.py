"""Monte Carlo experiments and exhaustive verification suites.

Reproducibility contract: trial r of a run with master seed s draws from
``np.random.SeedSequence(s, spawn_key=(r,))``, a pure function of (s, r), so
replicates never share a stream and results are independent of how trials are
chunked across workers.  Aggregation folds per-trial outputs in trial order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ..combinatorics import catalan
from ..dyck import decompose, enumerate_paths, regularity_check, sample_uniform
from ..excursion import (
    _excursion_batch,
    _f0_full_batch,
    marginal_cdf,
    path_functional,
)
from ..fixedpoints import (
    _antidiagonal_positions,
    fixed_points,
    profile_123,
    predict_lower_fixed_point,
    theta_almost,
    theta_interval,
)
from ..permutations import (
    Permutation,
    bjs,
    complement,
    enumerate_avoiders,
    find_pattern,
    invert_231,
    to_231,
)
from .config import TestResult
from .stats import ks_statistic, mean_with_se, proportion_with_se

__all__ = [
    "trial_rng",
    "run_enumeration_suite",
    "mc_fp_mean_231",
    "mc_fp_profile_123",
    "mc_joint_231",
    "baseline_uniform",
    "compare_123_location",
    "regularity_pass_rate",
    "excursion_study",
    "FP_MEAN_TARGET",
]

# Gamma(1/4) / (2 sqrt(pi)): limit of E[fp] / n^{1/4} for 231-avoiders and of
# the mean of the full-interval excursion functional.
FP_MEAN_TARGET = math.gamma(0.25) / (2.0 * math.sqrt(math.pi))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Generator for one replicate; a pure function of (master seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _run_chunked(
    worker: Callable[[int, int, int, tuple], dict],
    seed: int,
    trials: int,
    params: tuple,
    jobs: int,
) -> list[dict]:
    """Split trials into contiguous chunks; fold results in chunk order."""
    jobs = max(1, jobs)
    if jobs == 1:
        return [worker(seed, 0, trials, params)]
    bounds = np.linspace(0, trials, jobs + 1, dtype=int)
    chunks = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, seed, lo, hi, params) for lo, hi in chunks]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# exhaustive verification


def run_enumeration_suite(n_max: int) -> list[TestResult]:
    """Exact identities over every path and avoider class up to half-length n_max.

    All comparisons are integer or rational; nothing here samples.
    """
    if n_max > 11:
        raise ValueError(f"n_max={n_max} exceeds the enumeration cap of 11")
    results: list[TestResult] = []
    pat231 = Permutation([2, 3, 1])
    pat123 = Permutation([1, 2, 3])
    pat321 = Permutation([3, 2, 1])

    for n in range(1, n_max + 1):
        c_n = catalan(n)
        counts = {
            "231": sum(1 for _ in enumerate_avoiders(n, pat231)),
            "123": sum(1 for _ in enumerate_avoiders(n, pat123)),
            "321": sum(1 for _ in enumerate_avoiders(n, pat321)),
        }
        results.append(
            TestResult(
                name=f"avoider_classes_have_catalan_size_n{n}",
                value=counts,
                threshold=c_n,
                passed=all(v == c_n for v in counts.values()),
                sample_size=3 * c_n,
            )
        )

        images_231: set = set()
        images_321: set = set()
        avoid_ok = True
        round_trip_ok = True
        boundary_rule_ok = True
        center_rule_ok = True
        theta_consistent_ok = True
        lower_fp_paths = 0
        for path in enumerate_paths(n):
            sigma = to_231(path)
            tau = bjs(path)
            images_231.add(sigma.as_tuple())
            images_321.add(tau.as_tuple())
            if find_pattern(sigma, pat231) is not None:
                avoid_ok = False
            if find_pattern(tau, pat321) is not None:
                avoid_ok = False
            if invert_231(sigma) != path:
                round_trip_ok = False
            dec = decompose(path)
            interior_d = set(int(x) for x in dec.D[:-1])
            for j in range(1, n + 1):
                if (tau(j) > j) != (j in interior_d):
                    boundary_rule_ok = False
                    break
            rho = complement(tau)
            prof = profile_123(rho)
            has_lower, predicted = predict_lower_fixed_point(path)
            if has_lower != (prof.lower_count == 1):
                center_rule_ok = False
            if has_lower and predicted != prof.lower_position:
                center_rule_ok = False
            lower_fp_paths += prof.lower_count
            if theta_interval(sigma, 0.0, 1.0) != fixed_points(sigma).size:
                theta_consistent_ok = False

        results.append(
            TestResult(
                name=f"bijections_inject_avoid_and_roundtrip_n{n}",
                value={
                    "distinct_231_images": len(images_231),
                    "distinct_321_images": len(images_321),
                    "images_avoid": avoid_ok,
                    "invert_roundtrip": round_trip_ok,
                    "theta_full_window_matches_fp": theta_consistent_ok,
                },
                threshold=c_n,
                passed=(
                    len(images_231) == c_n
                    and len(images_321) == c_n
                    and avoid_ok
                    and round_trip_ok
                    and theta_consistent_ok
                ),
                sample_size=c_n,
            )
        )
        results.append(
            TestResult(
                name=f"excess_rule_tau_above_diagonal_exactly_on_D_n{n}",
                value=boundary_rule_ok,
                threshold=True,
                passed=boundary_rule_ok,
                sample_size=c_n,
            )
        )
        results.append(
            TestResult(
                name=f"center_minimum_pins_lower_fixed_point_n{n}",
                value=center_rule_ok,
                threshold=True,
                passed=center_rule_ok,
                sample_size=c_n,
            )
        )

        if n % 2 == 0:
            expected = Fraction(catalan(n - 1), c_n)
        else:
            half = (n - 1) // 2
            expected = Fraction(catalan(n - 1) - catalan(half) ** 2, c_n)
        observed = Fraction(lower_fp_paths, c_n)
        results.append(
            TestResult(
                name=f"lower_fixed_point_fraction_n{n}",
                value=observed,
                threshold=expected,
                passed=observed == expected,
                sample_size=c_n,
                details={"count": lower_fp_paths, "total": c_n},
            )
        )
    return results


# ---------------------------------------------------------------------------
# Monte Carlo experiments


@dataclass
class FpMeanResult:
    n: int
    trials: int
    counts: np.ndarray
    scaled_mean: float
    scaled_se: float


def _worker_fp_mean(seed: int, lo: int, hi: int, params: tuple) -> dict:
    (n,) = params
    counts = np.empty(hi - lo, dtype=np.int64)
    for r in range(lo, hi):
        path = sample_uniform(n, trial_rng(seed, r))
        dec = decompose(path)
        counts[r - lo] = int(np.count_nonzero(dec.l == 2 * dec.h))
    return {"counts": counts}


def mc_fp_mean_231(n: int, trials: int, seed: int, jobs: int = 1) -> FpMeanResult:
    """Monte Carlo estimate of E[fp(sigma_n)] / n^{1/4} for uniform 231-avoiders."""
    parts = _run_chunked(_worker_fp_mean, seed, trials, (n,), jobs)
    counts = np.concatenate([p["counts"] for p in parts])
    scale = float(n) ** 0.25
    mean, se = mean_with_se(counts)
    return FpMeanResult(n, trials, counts, mean / scale, se / scale)


@dataclass
class Profile123Result:
    n: int
    trials: int
    lower_flags: np.ndarray
    upper_flags: np.ndarray
    lower_positions: np.ndarray  # raw 1-indexed, -1 when absent
    upper_positions: np.ndarray

    @property
    def cell_counts(self) -> np.ndarray:
        """2x2 table indexed [lower_count, upper_count]."""
        table = np.zeros((2, 2), dtype=np.int64)
        for a in (0, 1):
            for b in (0, 1):
                table[a, b] = int(
                    np.count_nonzero((self.lower_flags == a) & (self.upper_flags == b))
                )
        return table

    def scaled_lower(self) -> np.ndarray:
        """(lower_position - n/2) / sqrt(2n) over trials with a lower fixed point."""
        xs = self.lower_positions[self.lower_positions > 0]
        return (xs - self.n / 2.0) / math.sqrt(2.0 * self.n)

    def scaled_upper(self) -> np.ndarray:
        ys = self.upper_positions[self.upper_positions > 0]
        return (ys - self.n / 2.0) / math.sqrt(2.0 * self.n)


def _worker_profile(seed: int, lo: int, hi: int, params: tuple) -> dict:
    (n,) = params
    size = hi - lo
    lower_flags = np.zeros(size, dtype=np.int8)
    upper_flags = np.zeros(size, dtype=np.int8)
    xs = np.full(size, -1, dtype=np.int64)
    ys = np.full(size, -1, dtype=np.int64)
    half = n // 2
    for r in range(lo, hi):
        path = sample_uniform(n, trial_rng(seed, r))
        fp = _antidiagonal_positions(path.steps)
        lower = fp[fp <= half]
        upper = fp[fp > half]
        k = r - lo
        if lower.size:
            lower_flags[k] = 1
            xs[k] = int(lower[0])
        if upper.size:
            upper_flags[k] = 1
            ys[k] = int(upper[0])
    return {"a": lower_flags, "b": upper_flags, "x": xs, "y": ys}


def mc_fp_profile_123(n: int, trials: int, seed: int, jobs: int = 1) -> Profile123Result:
    """Joint half-split fixed-point frequencies of uniform 123-avoiders.

    Samples are drawn as complement(bjs(path)) over uniform Dyck paths, which
    is a bijection onto the 123-avoiders.
    """
    parts = _run_chunked(_worker_profile, seed, trials, (n,), jobs)
    return Profile123Result(
        n=n,
        trials=trials,
        lower_flags=np.concatenate([p["a"] for p in parts]),
        upper_flags=np.concatenate([p["b"] for p in parts]),
        lower_positions=np.concatenate([p["x"] for p in parts]),
        upper_positions=np.concatenate([p["y"] for p in parts]),
    )


@dataclass
class Joint231Result:
    n: int
    trials: int
    a: float
    b: float
    epsilon: float
    K: Optional[float]
    alpha: Optional[float]
    theta_scaled: np.ndarray
    functional: np.ndarray  # NaN where the window was rejected (path touched 0)
    theta_almost_scaled: Optional[np.ndarray]
    rejected: int

    def exceed_fraction(self, almost: bool = False) -> float:
        """Fraction of trials with |scaled count - functional| > epsilon.

        Rejected windows count as exceedances.
        """
        theta = self.theta_almost_scaled if almost else self.theta_scaled
        if theta is None:
            raise ValueError("no almost-fixed-point column in this run")
        diff = np.abs(theta - self.functional)
        return float(np.mean(~(diff <= self.epsilon)))


def _worker_joint(seed: int, lo: int, hi: int, params: tuple) -> dict:
    n, a, b, K, alpha = params
    size = hi - lo
    theta_scaled = np.empty(size)
    func = np.empty(size)
    almost_scaled = np.empty(size) if K is not None else None
    scale = float(n) ** 0.25
    for r in range(lo, hi):
        path = sample_uniform(n, trial_rng(seed, r))
        sigma = to_231(path)
        k = r - lo
        theta_scaled[k] = theta_interval(sigma, a, b) / scale
        if almost_scaled is not None:
            almost_scaled[k] = theta_almost(sigma, K, alpha, a, b) / scale
        try:
            func[k] = path_functional(path, a, b)
        except ValueError:
            func[k] = np.nan
    return {"theta": theta_scaled, "func": func, "almost": almost_scaled}


def mc_joint_231(
    n: int,
    trials: int,
    a: float,
    b: float,
    seed: int,
    K: Optional[float] = None,
    alpha: Optional[float] = None,
    epsilon: float = 0.3,
    jobs: int = 1,
) -> Joint231Result:
    """Per-trial pairs (n^{-1/4} theta_[an,bn], path functional) on shared paths.

    With K and alpha given, the almost-fixed-point count theta^{K,alpha} is
    recorded for the same paths as a third column.
    """
    if not 0.0 < a < b < 1.0:
        raise ValueError(f"need 0 < a < b < 1, got [{a}, {b}]")
    parts = _run_chunked(_worker_joint, seed, trials, (n, a, b, K, alpha), jobs)
    func = np.concatenate([p["func"] for p in parts])
    almost = (
        np.concatenate([p["almost"] for p in parts]) if K is not None else None
    )
    return Joint231Result(
        n=n,
        trials=trials,
        a=a,
        b=b,
        epsilon=epsilon,
        K=K,
        alpha=alpha,
        theta_scaled=np.concatenate([p["theta"] for p in parts]),
        functional=func,
        theta_almost_scaled=almost,
        rejected=int(np.count_nonzero(np.isnan(func))),
    )


@dataclass
class BaselineResult:
    n: int
    trials: int
    histogram: np.ndarray  # histogram[k] = number of trials with k fixed points
    mean: float
    mean_se: float
    p_zero: float
    p_zero_se: float


def _worker_baseline(seed: int, lo: int, hi: int, params: tuple) -> dict:
    (n,) = params
    counts = np.empty(hi - lo, dtype=np.int64)
    idx = np.arange(1, n + 1, dtype=np.int64)
    for r in range(lo, hi):
        rng = trial_rng(seed, r)
        perm = rng.permutation(n) + 1
        counts[r - lo] = int(np.count_nonzero(perm == idx))
    return {"counts": counts}


def baseline_uniform(n: int, trials: int, seed: int, jobs: int = 1) -> BaselineResult:
    """Fixed-point count histogram of uniform random permutations."""
    parts = _run_chunked(_worker_baseline, seed, trials, (n,), jobs)
    counts = np.concatenate([p["counts"] for p in parts])
    mean, se = mean_with_se(counts)
    p0, p0_se = proportion_with_se(int(np.count_nonzero(counts == 0)), trials)
    return BaselineResult(
        n=n,
        trials=trials,
        histogram=np.bincount(counts),
        mean=mean,
        mean_se=se,
        p_zero=p0,
        p_zero_se=p0_se,
    )


def compare_123_location(
    n: int,
    trials: int,
    seed: int,
    jobs: int = 1,
    min_conditional: int = 100,
    ks_threshold: float = 0.05,
    profile: Optional[Profile123Result] = None,
) -> list[TestResult]:
    """KS gates for the scaled lower fixed-point location of 123-avoiders.

    Compares (lower_position - n/2)/sqrt(2n), conditional on the lower fixed point
    existing, against the analytic law of minus half the excursion midpoint
    height; and the reverse-complement reflection of the upper locations
    against the lower ones.  Returns inconclusive results when fewer than
    ``min_conditional`` conditional samples accumulated.
    """
    if profile is None:
        profile = mc_fp_profile_123(n, trials, seed, jobs=jobs)
    lower = profile.scaled_lower()
    upper_raw = profile.upper_positions[profile.upper_positions > 0]
    reflected_upper = ((n + 1 - upper_raw) - n / 2.0) / math.sqrt(2.0 * n)

    results: list[TestResult] = []
    if lower.size < min_conditional:
        results.append(
            TestResult(
                name="lower_location_vs_analytic_midpoint_law",
                value=None,
                threshold=ks_threshold,
                passed=None,
                sample_size=int(lower.size),
                details={"reason": f"fewer than {min_conditional} conditional samples"},
            )
        )
        return results

    # X = e_{1/2} / 2 and the lower location converges to -X, so
    # P(-X <= x) = 1 - P(e <= -2x).
    def cdf_neg_half_mid(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return np.where(
            x >= 0.0,
            1.0,
            1.0 - np.vectorize(lambda u: marginal_cdf(0.5, u))(-2.0 * x),
        )

    ks_analytic = ks_statistic(lower, cdf_neg_half_mid)
    results.append(
        TestResult(
            name="lower_location_vs_analytic_midpoint_law",
            value=ks_analytic,
            threshold=ks_threshold,
            passed=ks_analytic < ks_threshold,
            sample_size=int(lower.size),
        )
    )
    if reflected_upper.size >= min_conditional:
        ks_sym = ks_statistic(reflected_upper, lower)
        results.append(
            TestResult(
                name="reflected_upper_vs_lower_locations",
                value=ks_sym,
                threshold=ks_threshold,
                passed=ks_sym < ks_threshold,
                sample_size=int(min(reflected_upper.size, lower.size)),
            )
        )
    else:
        results.append(
            TestResult(
                name="reflected_upper_vs_lower_locations",
                value=None,
                threshold=ks_threshold,
                passed=None,
                sample_size=int(reflected_upper.size),
                details={"reason": f"fewer than {min_conditional} conditional samples"},
            )
        )
    return results


def regularity_pass_rate(n: int, samples: int, seed: int, jobs: int = 1) -> dict:
    """Fraction of uniform samples at half-length n satisfying each regularity condition."""
    parts = _run_chunked(_worker_regularity, seed, samples, (n,), jobs)
    flags = np.concatenate([p["flags"] for p in parts], axis=0)
    rates = flags.mean(axis=0)
    return {
        "pass_a": float(rates[0]),
        "pass_b": float(rates[1]),
        "pass_c": float(rates[2]),
        "pass_d": float(rates[3]),
        "pass_all": float(rates[4]),
        "samples": int(flags.shape[0]),
    }


def _worker_regularity(seed: int, lo: int, hi: int, params: tuple) -> dict:
    (n,) = params
    flags = np.zeros((hi - lo, 5), dtype=bool)
    for r in range(lo, hi):
        report = regularity_check(sample_uniform(n, trial_rng(seed, r)))
        flags[r - lo] = (
            report.pass_a,
            report.pass_b,
            report.pass_c,
            report.pass_d,
            report.passed,
        )
    return {"flags": flags}


@dataclass
class ExcursionStudyResult:
    grid: int
    trials: int
    midpoint: np.ndarray
    f_full: np.ndarray


def excursion_study(
    grid: int, trials: int, seed: int, batch: int = 256
) -> ExcursionStudyResult:
    """Sample excursions, recording midpoint heights and full-interval functionals.

    Generation is batched to bound memory; each batch consumes the stream of
    the run's master generator, so the result is a deterministic function of
    (grid, trials, seed, batch).
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    mids = []
    f0s = []
    done = 0
    while done < trials:
        take = min(batch, trials - done)
        values = _excursion_batch(grid, take, rng)
        mids.append(values[:, grid // 2].copy())
        f0s.append(_f0_full_batch(values))
        done += take
    return ExcursionStudyResult(
        grid=grid,
        trials=trials,
        midpoint=np.concatenate(mids),
        f_full=np.concatenate(f0s),
    )
