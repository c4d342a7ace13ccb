"""Deterministic CSV and JSON writers for experiment outputs.

CSV files start with ``#``-prefixed metadata lines (library version and the
configuration echo) followed by a header row; floats are rendered with
``repr`` so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .config import ExperimentConfig, TestResult, results_to_json

OUTPUT_DIR_ENV = "DYCKFP_OUTDIR"


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def resolve_output(out: Optional[str], default_name: str) -> Path:
    """Interpret --out: explicit path, or default name inside the output dir."""
    if out is None:
        path = default_output_dir() / default_name
    else:
        path = Path(out)
        if path.is_dir():
            path = path / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(
    path: Union[str, Path],
    header: Sequence[str],
    rows: Iterable[Sequence],
    config: Optional[ExperimentConfig] = None,
) -> Path:
    from .. import __version__

    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(f"# dyckfp {__version__}\n")
        if config is not None:
            fh.write(f"# config {json.dumps(config.to_dict(), sort_keys=True)}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")
    return path


def write_results_json(
    path: Union[str, Path],
    results: Sequence[TestResult],
    config: Optional[ExperimentConfig] = None,
) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        fh.write(results_to_json(results, config))
        fh.write("\n")
    return path
