"""Experiment reports and their JSON / CSV serialisation.

JSON layout::

    {"version": str, "master_seed": int, "threads": int, "wall_clock": float,
     "config": {...ExperimentConfig fields...},
     "rows": [{"N": int, "mean": float, "var": float, "ks_d": float|null,
               "var_ratio": float|null, "alpha_mean": float|null,
               "beta_mean": float|null, "delta_mean": float|null,
               "resamples": int, "extra": {...}}, ...],
     "summary": {...experiment-level results...}}

The CSV holds one line per row with the columns in ``CSV_COLUMNS``.
"""
from __future__ import annotations

import csv
import json
import subprocess
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .. import __version__
from .stats import qq_pairs

CSV_COLUMNS = (
    "N", "mean", "var", "ks_d", "var_ratio",
    "alpha_mean", "beta_mean", "delta_mean", "resamples",
)


@dataclass
class ReportRow:
    N: int
    mean: float | None = None
    var: float | None = None
    ks_d: float | None = None
    var_ratio: float | None = None
    alpha_mean: float | None = None
    beta_mean: float | None = None
    delta_mean: float | None = None
    resamples: int = 0
    extra: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    config: dict
    rows: list[ReportRow]
    summary: dict = field(default_factory=dict)
    master_seed: int = 0
    threads: int = 1
    version: str = ""
    wall_clock: float = 0.0
    # standardized samples per N, kept for QQ output; never serialised
    samples: dict = field(default_factory=dict, compare=False, repr=False)

    def row(self, N: int) -> ReportRow:
        return next(r for r in self.rows if r.N == N)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "master_seed": self.master_seed,
            "threads": self.threads,
            "wall_clock": self.wall_clock,
            "config": self.config,
            "rows": [asdict(r) for r in self.rows],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict()), indent=2, sort_keys=True, allow_nan=False)

    def statistics_json(self) -> str:
        """Only the statistical content: no timing, thread count or output path."""
        cfg = {k: v for k, v in self.config.items() if k not in ("threads", "output_path")}
        body = {"config": cfg, "rows": [asdict(r) for r in self.rows], "summary": self.summary}
        return json.dumps(_clean(body), sort_keys=True, allow_nan=False)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(
            config=d["config"],
            rows=[ReportRow(**r) for r in d["rows"]],
            summary=d.get("summary", {}),
            master_seed=d["master_seed"],
            threads=d["threads"],
            version=d["version"],
            wall_clock=d["wall_clock"],
        )


def _clean(obj):
    """Convert numpy scalars and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@lru_cache(maxsize=1)
def version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def load_report(path) -> ExperimentReport:
    with open(path) as fh:
        return ExperimentReport.from_dict(json.load(fh))


def emit_report(report: ExperimentReport, cfg) -> list[Path]:
    """Write the report in ``cfg.output_format``; with ``cfg.emit_qq`` also ``<stem>_qq.csv``."""
    if cfg.output_path is None:
        return []
    path = Path(cfg.output_path)
    written = []
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if cfg.output_format == "json":
            path.write_text(report.to_json() + "\n")
        else:
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(("# master_seed", report.master_seed, "threads", report.threads,
                            "version", report.version))
                w.writerow(CSV_COLUMNS)
                for r in report.rows:
                    d = _clean(asdict(r))
                    w.writerow(["" if d[c] is None else d[c] for c in CSV_COLUMNS])
        written.append(path)
        if cfg.emit_qq and report.samples:
            qq = path.with_name(path.stem + "_qq.csv")
            with open(qq, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(("# master_seed", report.master_seed, "threads", report.threads,
                            "version", report.version))
                w.writerow(("N", "theoretical", "sample"))
                for N, z in report.samples.items():
                    for t, s in qq_pairs(z):
                        w.writerow((N, repr(float(t)), repr(float(s))))
            written.append(qq)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return written
