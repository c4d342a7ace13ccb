"""Experiment configuration and gate results, with deterministic JSON forms."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """Echoed into every output so a run is reproducible from its artifacts."""

    experiment: str
    n: Optional[int] = None
    n_list: Optional[Sequence[int]] = None
    trials: int = 1
    seed: int = 0
    grid: int = 2 ** 12
    a: float = 0.0
    b: float = 1.0
    K: Optional[float] = None
    alpha: Optional[float] = None
    out: Optional[str] = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not (0.0 <= self.a < self.b <= 1.0) and (self.a, self.b) != (0.0, 0.0):
            if self.a > self.b:
                raise ValueError(f"need a <= b, got [{self.a}, {self.b}]")

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


@dataclass
class TestResult:
    """One statistic checked against one threshold.

    ``passed`` is None when the check could not be decided (for example when
    too few conditional samples accumulated).
    """

    __test__ = False  # keep pytest from collecting the dataclass

    name: str
    value: Any
    threshold: Any
    passed: Optional[bool]
    sample_size: int = 0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": _jsonable(self.value),
            "threshold": _jsonable(self.threshold),
            "passed": self.passed,
            "sample_size": int(self.sample_size),
            "details": _jsonable(self.details),
        }

    def __str__(self) -> str:
        status = "PASS" if self.passed else ("INCONCLUSIVE" if self.passed is None else "FAIL")
        return f"[{status}] {self.name}: value={self.value} threshold={self.threshold}"


def results_to_json(
    results: Sequence[TestResult], config: Optional[ExperimentConfig] = None
) -> str:
    from .. import __version__

    payload = {
        "version": __version__,
        "config": config.to_dict() if config is not None else None,
        "results": [r.to_dict() for r in results],
        "all_passed": all(r.passed is not False for r in results),
    }
    return json.dumps(payload, indent=2, sort_keys=True)
