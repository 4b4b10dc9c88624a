"""Parameter-grid sweeps with checkpoint/resume.

Each grid cell is an independent (simulate + classify) job whose configuration
is derived purely from (spec, cell index): the per-cell noise seed comes from
a seed sequence over the cell index, and non-Markovian cells re-derive the
drive period from the dissipation schedule.  Results are therefore identical
for any worker count and any completion order.  Completed rows are appended to
a checkpoint file (JSON spec header + CSV rows) as they finish; resuming skips
them and recomputes only what is missing or uparseable.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .analysis import ClassifierThresholds, classify
from .integrator import simulate
from .iofmt import SWEEP_COLUMNS, SWEEP_SCHEMA, parse_sweep_row, sweep_row_line
from .runconfig import merge_config, resolve_config

SWEEPABLE_PARAMETERS = {"epsilon", "m", "kappa0", "kappa_max", "lambda0", "a0"}


class SweepError(RuntimeError):
    pass


class SpecMismatchError(SweepError):
    """Checkpoint was written for a different sweep specification."""


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.name not in SWEEPABLE_PARAMETERS:
            raise ValueError(f"{self.name!r} is not sweepable; choose from {sorted(SWEEPABLE_PARAMETERS)}")
        if self.count < 1:
            raise ValueError("axis count must be at least 1")
        if self.hi < self.lo:
            raise ValueError("axis hi must be >= lo")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    axis1: AxisSpec
    axis2: AxisSpec
    base: dict
    checkpoint_path: str
    workers: int = 1
    base_seed: int = 0
    thresholds: ClassifierThresholds = field(default_factory=ClassifierThresholds)

    def __post_init__(self):
        if self.axis1.name == self.axis2.name:
            raise ValueError("the two sweep axes must target different parameters")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        merge_config(self.base)  # reject unknown base keys early

    @property
    def cell_count(self) -> int:
        return self.axis1.count * self.axis2.count

    def identity(self) -> dict:
        """Everything that determines the results (not workers / path)."""
        return {
            "axis1": asdict(self.axis1),
            "axis2": asdict(self.axis2),
            "base": dict(self.base),
            "base_seed": self.base_seed,
            "thresholds": self.thresholds.to_dict(),
        }

    def to_dict(self) -> dict:
        return {**self.identity(), "workers": self.workers}

    @classmethod
    def from_dict(cls, d: dict, checkpoint_path: str) -> "SweepSpec":
        return cls(
            axis1=AxisSpec(**d["axis1"]),
            axis2=AxisSpec(**d["axis2"]),
            base=dict(d["base"]),
            checkpoint_path=checkpoint_path,
            workers=int(d.get("workers", 1)),
            base_seed=int(d["base_seed"]),
            thresholds=ClassifierThresholds.from_dict(d["thresholds"]),
        )


def spec_hash(spec: SweepSpec) -> str:
    canonical = json.dumps(spec.identity(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def cell_seed(base_seed: int, index: int) -> int:
    """Deterministic per-cell noise seed, independent of scheduling order."""
    return int(np.random.SeedSequence((base_seed, index)).generate_state(1)[0])


def cell_overrides(spec: SweepSpec, index: int) -> dict:
    i, j = divmod(index, spec.axis2.count)
    flat = dict(spec.base)
    flat[spec.axis1.name] = float(spec.axis1.values()[i])
    flat[spec.axis2.name] = float(spec.axis2.values()[j])
    flat["seed"] = cell_seed(spec.base_seed, index)
    flat.setdefault("period_mode", "auto")
    return flat


def run_cell(spec: SweepSpec, index: int) -> dict:
    """One grid cell: simulate, classify, return a sweep CSV row.

    Never raises: every failure becomes an Unresolved row with an error note.
    """
    flat = merge_config(cell_overrides(spec, index))
    row = {col: None for col in SWEEP_COLUMNS}
    for key in ("epsilon", "m", "kappa0", "kappa_max", "lambda0", "a0"):
        row[key] = flat[key]
    row["phase"] = "Unresolved"
    row["error_note"] = ""
    try:
        config = resolve_config(flat)
        row["regime"] = config.schedule.regime.value
        row["T"] = config.drive.period
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            trajectory, strobe = simulate(config)
        label = classify(trajectory, strobe, spec.thresholds)
        diag = label.diagnostics
        row["phase"] = label.kind.value
        row["period"] = diag.detected_period
        row["variance"] = diag.variance
        row["dimension"] = diag.dimension
        row["nn_spread"] = diag.nn_spread
        row["parity_flag"] = diag.parity_ok
        row["error_note"] = diag.note
    except Exception as exc:  # per-cell failures must not abort the sweep
        row["phase"] = "Unresolved"
        row["error_note"] = f"{type(exc).__name__}: {exc}"
    return row


@dataclass
class SweepResult:
    rows: list[dict]       # canonical row-major order
    manifest: dict

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(json.dumps(self.manifest["header"], sort_keys=True) + "\n")
            handle.write(",".join(SWEEP_COLUMNS) + "\n")
            for row in self.rows:
                handle.write(sweep_row_line(row))


def _header_object(spec: SweepSpec) -> dict:
    from . import __version__

    return {
        "schema": SWEEP_SCHEMA,
        "spec": spec.to_dict(),
        "spec_hash": spec_hash(spec),
        "version": __version__,
    }


def _cell_lookup(spec: SweepSpec) -> dict:
    """(axis1 value, axis2 value) -> cell index, by exact float identity."""
    v1, v2 = spec.axis1.values(), spec.axis2.values()
    return {
        (float(v1[i]), float(v2[j])): i * spec.axis2.count + j
        for i in range(spec.axis1.count)
        for j in range(spec.axis2.count)
    }


def _read_checkpoint(path: Path) -> tuple[dict, list[tuple[list[str], dict]]]:
    import csv as _csv

    with open(path, "r", encoding="utf-8", newline="") as handle:
        header_line = handle.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise SweepError(f"{path}: first line is not a JSON sweep header") from exc
        if header.get("schema") != SWEEP_SCHEMA:
            raise SweepError(f"{path}: unexpected schema {header.get('schema')!r}")
        rows = []
        reader = _csv.reader(handle)
        for cells in reader:
            if not cells:
                continue
            if cells == SWEEP_COLUMNS:
                continue
            try:
                rows.append((cells, parse_sweep_row(cells)))
            except Exception:
                continue  # corrupted row: recomputed later
        return header, rows


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Execute (or resume) every cell of the grid and return canonical rows."""
    from . import __version__

    path = Path(spec.checkpoint_path)
    expected_hash = spec_hash(spec)
    lookup = _cell_lookup(spec)
    done: dict[int, dict] = {}
    if path.exists():
        header, parsed = _read_checkpoint(path)
        if header.get("spec_hash") != expected_hash:
            raise SpecMismatchError(
                f"{path}: checkpoint spec hash {header.get('spec_hash')!r} does not match "
                f"this spec ({expected_hash})"
            )
        if header.get("version") != __version__:
            warnings.warn(
                f"checkpoint written by version {header.get('version')}, current {__version__}",
                stacklevel=2,
            )
        for _, row in parsed:
            key = (row[spec.axis1.name], row[spec.axis2.name])
            index = lookup.get(key)
            if index is not None and index not in done:
                done[index] = row
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(json.dumps(_header_object(spec), sort_keys=True) + "\n")
            handle.write(",".join(SWEEP_COLUMNS) + "\n")
    todo = [index for index in range(spec.cell_count) if index not in done]
    if todo:
        with open(path, "a", encoding="utf-8", newline="") as handle:
            if spec.workers == 1 or len(todo) == 1:
                for index in todo:
                    row = run_cell(spec, index)
                    done[index] = row
                    handle.write(sweep_row_line(row))
                    handle.flush()
            else:
                with ProcessPoolExecutor(max_workers=spec.workers) as pool:
                    futures = {pool.submit(run_cell, spec, index): index for index in todo}
                    for future in as_completed(futures):
                        index = futures[future]
                        row = future.result()
                        done[index] = row
                        handle.write(sweep_row_line(row))
                        handle.flush()
    rows = [done[index] for index in range(spec.cell_count)]
    manifest = {
        "header": _header_object(spec),
        "workers": spec.workers,
        "cells": spec.cell_count,
    }
    return SweepResult(rows=rows, manifest=manifest)


def resume_sweep(checkpoint_path, spec: SweepSpec | None = None) -> SweepResult:
    """Complete a checkpointed sweep; the spec is recovered from the header."""
    path = Path(checkpoint_path)
    if not path.exists():
        raise SweepError(f"checkpoint {path} does not exist")
    header, _ = _read_checkpoint(path)
    recovered = SweepSpec.from_dict(header["spec"], checkpoint_path=str(path))
    if spec_hash(recovered) != header.get("spec_hash"):
        raise SpecMismatchError(f"{path}: header hash does not match the stored spec")
    if spec is not None:
        if spec_hash(spec) != header.get("spec_hash"):
            raise SpecMismatchError(f"{path}: checkpoint belongs to a different sweep spec")
        recovered = spec
    return run_sweep(recovered)
