"""Experiment reports: per-epsilon rows, fits, checks, deterministic CSV.

The CSV is the source of truth and must be byte-identical across reruns of
the same configuration, so volatile metadata (timestamp, runtimes) lives
only on the in-memory report and is not written to the file.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from . import __version__


def config_hash(params: dict) -> str:
    """Canonical hash of a (nested) parameter mapping."""
    blob = json.dumps(params, sort_keys=True, default=repr)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def fmt(x) -> str:
    """Deterministic float formatting (17 significant digits)."""
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    if x is None:
        return ""
    return str(x)


@dataclass
class ExperimentReport:
    study: str
    columns: tuple
    rows: list = field(default_factory=list)  # dicts keyed by column name
    fits: list = field(default_factory=list)  # {"model", "parameters", "residual"}
    checks: list = field(default_factory=list)  # {"name", "passed", "detail"}
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.metadata.setdefault("code_version", __version__)
        self.metadata.setdefault("timestamp", time.strftime("%Y-%m-%dT%H:%M:%S"))

    def add_row(self, **kw):
        self.rows.append(kw)

    def add_fit(self, model, parameters, residual):
        self.fits.append(
            {"model": model, "parameters": tuple(parameters), "residual": residual}
        )

    def add_check(self, name, passed, detail=""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def summary_lines(self):
        for c in self.checks:
            status = "PASS" if c["passed"] else "FAIL"
            detail = f" ({c['detail']})" if c["detail"] else ""
            yield f"[{status}] {self.study}: {c['name']}{detail}"

    def write_csv(self, path):
        """Deterministic report CSV: header comments, the row table, then
        fit and check lines.  Volatile fields (timestamp, runtimes) are
        deliberately omitted."""
        with open(path, "w") as fh:
            fh.write(f"# study={self.study}\n")
            fh.write(f"# config_hash={self.metadata.get('config_hash', '')}\n")
            fh.write(f"# code_version={self.metadata['code_version']}\n")
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(fmt(row.get(c)) for c in self.columns) + "\n")
            for f in self.fits:
                pars = ";".join(fmt(p) for p in f["parameters"])
                fh.write(
                    f"# fit model={f['model']} parameters={pars} "
                    f"residual={fmt(f['residual'])}\n"
                )
            for c in self.checks:
                fh.write(
                    f"# check name={c['name']} passed={c['passed']}"
                    + (f" detail={c['detail']}" if c["detail"] else "")
                    + "\n"
                )
