"""Deterministic CSV/JSON emission and the run manifest.

Floats are rendered with 17 significant digits so equal configurations always
produce byte-identical CSV files; JSON is sorted-key with round-trip floats.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__


def fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path, header: list[str], rows: list[tuple]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", newline="\n")


def write_counts_csv(path, tables) -> None:
    """Curve-count tables: columns L, count, population_label, structure_id."""
    rows = []
    for tab in tables:
        for L, c in zip(tab.thresholds, tab.counts):
            rows.append((L, c, tab.label, tab.structure_id))
    write_csv(path, ["L", "count", "population_label", "structure_id"], rows)


def write_census_csv(path, censuses) -> None:
    """Lattice censuses: columns model, R, count_D, count_M."""
    rows = []
    for cen in censuses:
        for R, cd, cm in zip(cen.radii, cen.counts_d, cen.counts_m):
            rows.append((cen.model, R, cd, cm))
    write_csv(path, ["model", "R", "count_D", "count_M"], rows)


def write_comb_csv(path, records) -> None:
    """Composition audit rows: columns s, k, l, count, bound."""
    write_csv(path, ["s", "k", "l", "count", "bound"],
              [(r["s"], r["k"], r["l"], r["count"], r["bound"]) for r in records])


def write_json(path, payload: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


@dataclass
class RunManifest:
    """One entry per acceptance check plus provenance for the whole run."""

    config_hash: str
    tool_version: str = __version__
    wall_times: dict = field(default_factory=dict)
    fitted_constants: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)  # check id -> bool

    def add_check(self, check_id: str, passed: bool, wall_time: float,
                  constants: dict | None = None) -> None:
        if check_id in self.checks:
            raise ValueError(f"duplicate manifest entry {check_id!r}")
        self.checks[check_id] = bool(passed)
        self.wall_times[check_id] = wall_time
        if constants:
            self.fitted_constants[check_id] = constants

    @property
    def all_passed(self) -> bool:
        return all(self.checks.values()) if self.checks else False

    def to_json(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "tool_version": self.tool_version,
            "wall_times": self.wall_times,
            "fitted_constants": self.fitted_constants,
            "checks": self.checks,
            "all_passed": self.all_passed,
        }


class StageTimer:
    """Accumulates wall time per named stage for the manifest."""

    def __init__(self):
        self.times: dict[str, float] = {}

    def stage(self, name: str):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.perf_counter()
                return self

            def __exit__(self, *exc):
                timer.times[name] = timer.times.get(name, 0.0) + (
                    time.perf_counter() - self.t0
                )
                return False

        return _Ctx()


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]
