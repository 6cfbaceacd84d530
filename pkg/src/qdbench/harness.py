"""Experiment orchestration: config parsing, execution, and result files."""
from __future__ import annotations

import hashlib
import json
import re
import time
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import yaml

from . import __version__
from .archive import Grid
from .mapelites import RunConfig, run
from .reliability import (
    ReferenceGrid,
    build_reference_analytic,
    build_reference_from_run,
    reference_from_grid,
    reliability_series,
)
from .variation import OPERATOR_KINDS, OperatorConfig

_OPERATOR_ALIASES = {
    "polynomial-bounded": "polynomial-bounded",
    "poly": "polynomial-bounded",
    "gaussian": "gaussian",
    "gauss": "gaussian",
}
_LABEL_RE = re.compile(r"^[A-Za-z0-9._-]+$")

_TOP_KEYS = {
    "output_dir", "repetitions", "bins", "seed", "budget", "dimensions",
    "init_count", "batch_size", "checkpoint_every", "operator", "reference", "runs",
}
_RUN_KEYS = {
    "label", "dimensions", "budget", "init_count", "batch_size", "operator",
    "seed", "checkpoint_every",
}
_OP_KEYS = {"kind", "mutation_prob", "eta", "sigma", "mean"}
_REF_KEYS = {
    "kind", "samples_per_bin", "path", "dimensions", "budget", "operator",
    "seed", "init_count", "batch_size", "checkpoint_every",
}


@dataclass
class ReferenceSpec:
    """How the oracle grid is obtained: analytic, from-run, or load."""

    kind: str
    samples_per_bin: int = 10_000
    run: RunConfig | None = None
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("analytic", "from-run", "load"):
            raise ValueError(
                f"reference.kind: expected analytic, from-run or load, got {self.kind!r}"
            )
        if self.kind == "analytic" and self.samples_per_bin < 2:
            raise ValueError("reference.samples_per_bin: must be >= 2")
        if self.kind == "from-run" and self.run is None:
            raise ValueError("reference: from-run requires a run configuration")
        if self.kind == "load" and not self.path:
            raise ValueError("reference.path: required when kind is load")


@dataclass
class LabelledRun:
    label: str
    config: RunConfig


@dataclass
class ExperimentConfig:
    """One benchmark campaign: labelled runs scored against a shared reference."""

    runs: list[LabelledRun]
    reference: ReferenceSpec
    output_dir: Path
    repetitions: int = 1

    def __post_init__(self):
        if not self.runs:
            raise ValueError("runs: at least one run is required")
        if self.repetitions < 1:
            raise ValueError("repetitions: must be >= 1")
        labels = [r.label for r in self.runs]
        if len(set(labels)) != len(labels):
            raise ValueError("runs: labels must be unique")
        bins = {r.config.bins_per_feature for r in self.runs}
        if len(bins) != 1:
            raise ValueError("runs: all runs must share one bins_per_feature")
        if self.reference.kind == "from-run":
            if self.reference.run.bins_per_feature != bins.pop():
                raise ValueError("reference: bins_per_feature must match the runs")
        self.output_dir = Path(self.output_dir)


def _check_keys(mapping, allowed, path):
    if not isinstance(mapping, dict):
        raise ValueError(f"{path}: expected a mapping")
    unknown = set(mapping) - allowed
    if unknown:
        raise ValueError(f"{path}.{sorted(unknown)[0]}: unknown key")


def _int_field(mapping, key, default, path):
    value = mapping.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


def _float_field(mapping, key, default, path):
    value = mapping.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _parse_operator(data, path, defaults: dict | None = None):
    defaults = defaults or {}
    _check_keys(data, _OP_KEYS, path)
    merged = {**defaults, **data}
    kind = merged.get("kind", "polynomial-bounded")
    if kind not in _OPERATOR_ALIASES:
        raise ValueError(
            f"{path}.kind: unknown operator kind {kind!r}; "
            f"expected one of {OPERATOR_KINDS}"
        )
    try:
        return OperatorConfig(
            kind=_OPERATOR_ALIASES[kind],
            mutation_prob=_float_field(merged, "mutation_prob", 0.5, path),
            eta=_float_field(merged, "eta", 10.0, path),
            sigma=_float_field(merged, "sigma", 1.0, path),
            mean=_float_field(merged, "mean", 0.0, path),
        )
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


def _parse_run(data, top, path, *, force_dimensions=None, require_label=True):
    _check_keys(data, _RUN_KEYS if require_label else _RUN_KEYS - {"label"}, path)
    label = data.get("label")
    if require_label:
        if not label or not isinstance(label, str):
            raise ValueError(f"{path}.label: required")
        if not _LABEL_RE.match(label):
            raise ValueError(f"{path}.label: {label!r} may only use [A-Za-z0-9._-]")
    dimensions = force_dimensions
    if dimensions is None:
        dimensions = _int_field(data, "dimensions", top.get("dimensions"), path)
        if dimensions is None:
            raise ValueError(f"{path}.dimensions: required")
    operator = _parse_operator(
        data.get("operator", {}), f"{path}.operator", top.get("operator"),
    )
    try:
        config = RunConfig(
            dimensions=dimensions,
            budget=_int_field(data, "budget", top.get("budget", 1_000_000), path),
            init_count=_int_field(data, "init_count", top.get("init_count"), path),
            batch_size=_int_field(data, "batch_size", top.get("batch_size", 64), path),
            operator=operator,
            seed=_int_field(data, "seed", top.get("seed", 0), path),
            checkpoint_every=_int_field(
                data, "checkpoint_every", top.get("checkpoint_every"), path
            ),
            bins_per_feature=top.get("bins", 64),
        )
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    return label, config


def _parse_reference(data, top, path="reference"):
    _check_keys(data, _REF_KEYS, path)
    kind = data.get("kind", "analytic")
    if kind == "analytic":
        samples = _int_field(data, "samples_per_bin", 10_000, path)
        try:
            return ReferenceSpec("analytic", samples_per_bin=samples)
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from exc
    if kind == "from-run":
        dims = _int_field(data, "dimensions", 2, path)
        if dims != 2:
            raise ValueError(f"{path}.dimensions: a run-based reference must use 2")
        _, config = _parse_run(
            {k: v for k, v in data.items() if k in _RUN_KEYS},
            top, path, force_dimensions=2, require_label=False,
        )
        return ReferenceSpec("from-run", run=config)
    if kind == "load":
        path_value = data.get("path")
        if not path_value or not isinstance(path_value, str):
            raise ValueError(f"{path}.path: required when kind is load")
        return ReferenceSpec("load", path=path_value)
    raise ValueError(
        f"{path}.kind: expected analytic, from-run or load, got {kind!r}"
    )


def parse_config_data(data: dict) -> ExperimentConfig:
    """Validate a configuration mapping, resolving every default."""
    data = data or {}
    _check_keys(data, _TOP_KEYS, "config")
    top = {
        "dimensions": _int_field(data, "dimensions", None, "config"),
        "budget": _int_field(data, "budget", 1_000_000, "config"),
        "init_count": _int_field(data, "init_count", None, "config"),
        "batch_size": _int_field(data, "batch_size", 64, "config"),
        "checkpoint_every": _int_field(data, "checkpoint_every", None, "config"),
        "seed": _int_field(data, "seed", 0, "config"),
        "bins": _int_field(data, "bins", 64, "config"),
        "operator": None,
    }
    if "operator" in data:
        _check_keys(data["operator"], _OP_KEYS, "config.operator")
        top["operator"] = dict(data["operator"])
        if top["operator"].get("kind", "polynomial-bounded") not in _OPERATOR_ALIASES:
            raise ValueError(
                f"config.operator.kind: unknown operator kind "
                f"{top['operator']['kind']!r}; expected one of {OPERATOR_KINDS}"
            )
    runs_data = data.get("runs")
    if not isinstance(runs_data, list) or not runs_data:
        raise ValueError("config.runs: a non-empty list of runs is required")
    runs = []
    for idx, entry in enumerate(runs_data):
        label, config = _parse_run(entry, top, f"runs[{idx}]")
        runs.append(LabelledRun(label, config))
    reference = _parse_reference(data.get("reference", {}), top)
    repetitions = _int_field(data, "repetitions", 1, "config")
    output_dir = data.get("output_dir", "results")
    if not isinstance(output_dir, (str, Path)):
        raise ValueError(f"config.output_dir: expected a path, got {output_dir!r}")
    return ExperimentConfig(
        runs=runs,
        reference=reference,
        output_dir=Path(output_dir),
        repetitions=repetitions,
    )


def parse_config(source: str) -> ExperimentConfig:
    """Parse YAML configuration text into a validated ExperimentConfig."""
    data = yaml.safe_load(source)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValueError("config: expected a YAML mapping at the top level")
    return parse_config_data(data)


def build_reference(spec: ReferenceSpec, bins_per_feature: int) -> ReferenceGrid:
    if spec.kind == "analytic":
        return build_reference_analytic(bins_per_feature, spec.samples_per_bin)
    if spec.kind == "from-run":
        return build_reference_from_run(spec.run)
    return reference_from_grid(
        Grid.from_csv(spec.path, bins_per_feature), "loaded"
    )


def write_series_csv(rows, path) -> None:
    """Write (evaluations, global_reliability, coverage) rows deterministically."""
    rows = list(rows)
    if not rows:
        raise ValueError("series is empty")
    lines = ["evaluations,global_reliability,coverage"]
    for evaluations, reliability, coverage in rows:
        lines.append(f"{int(evaluations)},{reliability:.17g},{coverage:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _config_echo(cfg: ExperimentConfig) -> dict:
    return {
        "output_dir": str(cfg.output_dir),
        "repetitions": cfg.repetitions,
        "reference": {
            k: v for k, v in asdict(cfg.reference).items() if v is not None
        },
        "runs": [{"label": r.label, **asdict(r.config)} for r in cfg.runs],
    }


@dataclass
class RunManifest:
    """Record of one experiment: inputs, outputs, and their digests."""

    version: str
    created_utc: str
    duration_seconds: float
    config: dict
    reference: dict
    results: list[dict]

    @property
    def failures(self) -> int:
        return sum(1 for r in self.results if r["status"] != "ok")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    """Execute every (run, repetition) pair against one shared reference.

    Per pair this writes a grid dump and a reliability series; a failing
    run is recorded in the manifest without aborting the others. Output
    bytes depend only on the configuration.
    """
    started = time.perf_counter()
    out = cfg.output_dir
    grids_dir = out / "grids"
    series_dir = out / "series"
    grids_dir.mkdir(parents=True, exist_ok=True)
    series_dir.mkdir(parents=True, exist_ok=True)

    bins = cfg.runs[0].config.bins_per_feature
    reference = build_reference(cfg.reference, bins)
    results = []
    for labelled in cfg.runs:
        for rep in range(cfg.repetitions):
            seed = labelled.config.seed + rep
            name = f"{labelled.label}-rep{rep}"
            entry = {"label": labelled.label, "repetition": rep, "seed": seed}
            try:
                run_cfg = replace(labelled.config, seed=seed)
                trace = run(run_cfg)
                series = reliability_series(reference, trace)
                grid_path = grids_dir / f"{name}.csv"
                trace.final_grid.write_csv(grid_path)
                series_path = series_dir / f"{name}.csv"
                write_series_csv(
                    [
                        (evaluations, g, cp.coverage)
                        for (evaluations, g), cp in zip(series, trace.checkpoints)
                    ],
                    series_path,
                )
                entry.update(
                    status="ok",
                    evaluations=run_cfg.budget,
                    coverage=trace.final_grid.coverage(),
                    global_reliability=series[-1][1],
                    files=[
                        {"role": "grid", "path": str(grid_path), "sha256": _sha256(grid_path)},
                        {"role": "series", "path": str(series_path), "sha256": _sha256(series_path)},
                    ],
                )
            except Exception as exc:
                entry.update(status="failed", error=f"{type(exc).__name__}: {exc}")
            results.append(entry)

    manifest = RunManifest(
        version=__version__,
        created_utc=datetime.now(timezone.utc).isoformat(),
        duration_seconds=round(time.perf_counter() - started, 3),
        config=_config_echo(cfg),
        reference={
            "kind": cfg.reference.kind,
            "provenance": reference.provenance,
            "bins_per_feature": reference.grid.bins_per_feature,
            "n_filled": reference.n_filled,
            "m_max": reference.m_max,
        },
        results=results,
    )
    manifest.write(out / "manifest.json")
    return manifest
