"""Frozen constants for the inequality suites.

Every claim with an unspecified constant is pinned to a number measured on a
fixed calibration run (seed, grid and probe family recorded alongside). Suites
fail if a ratio leaves its frozen interval or if refinement drifts it by more
than the drift budget. Regenerate with scripts/calibrate.py after intentional
changes.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

SCHEMA = "omspace-calibration/1"
DEFAULT_MARGIN = 0.02
DRIFT_BUDGET = 0.05


def config_key(**parts) -> str:
    return ",".join(f"{k}={v}" for k, v in parts.items())


def load_calibration() -> dict:
    try:
        text = resources.files("omspace").joinpath("data/calibration.json").read_text()
    except FileNotFoundError:
        return {"schema": SCHEMA, "entries": {}}
    data = json.loads(text)
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unexpected calibration schema {data.get('schema')!r}")
    return data


def save_calibration(data: dict, path: str | Path) -> None:
    data = dict(data)
    data.setdefault("schema", SCHEMA)
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def entry(cal: dict, suite: str, key: str) -> dict:
    full = f"{suite}/{key}"
    try:
        return cal["entries"][full]
    except KeyError:
        raise KeyError(
            f"no frozen constants for {full!r}; run scripts/calibrate.py") from None


def interval_from_ratios(ratios, margin: float = DEFAULT_MARGIN) -> dict:
    lo = float(min(ratios))
    hi = float(max(ratios))
    return {"lo": lo * (1.0 - margin), "hi": hi * (1.0 + margin)}


def constant_from_ratios(ratios, margin: float = DEFAULT_MARGIN) -> dict:
    return {"C": float(max(ratios)) * (1.0 + margin)}
