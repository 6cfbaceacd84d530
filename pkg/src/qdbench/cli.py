"""Command-line entry point for running benchmark experiments."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from .harness import parse_config_data, run_experiment

_VARIATION_FLAGS = {"poly": "polynomial-bounded", "gauss": "gaussian"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qdbench",
        description=(
            "Illuminate the Rastrigin landscape with MAP-Elites and score the "
            "resulting grids against an oracle reference. Flags override the "
            "matching keys of --config; without a config file the flags define "
            "a single run."
        ),
    )
    p.add_argument("--config", type=Path, help="YAML experiment configuration")
    p.add_argument("--budget", type=int, help="evaluations per run (default 1000000)")
    p.add_argument("--dims", type=int, help="genome dimensionality")
    p.add_argument("--bins", type=int, help="grid bins per feature (default 64)")
    p.add_argument("--seed", type=int, help="base random seed (default 0)")
    p.add_argument(
        "--variation", choices=sorted(_VARIATION_FLAGS),
        help="mutation operator (default poly)",
    )
    p.add_argument("--eta", type=float, help="polynomial distribution index (default 10)")
    p.add_argument("--sigma", type=float, help="gaussian step scale (default 1.0)")
    p.add_argument("--mut-prob", type=float, help="per-gene mutation probability (default 0.5)")
    p.add_argument(
        "--reference",
        help="oracle source: analytic | run | load:<grid.csv> (default analytic)",
    )
    p.add_argument("--out", type=Path, help="output directory (default results)")
    p.add_argument("--repetitions", type=int, help="repetitions per run (default 1)")
    return p


def _merge_flags(data: dict, args: argparse.Namespace) -> dict:
    for key, value in (
        ("budget", args.budget),
        ("dimensions", args.dims),
        ("bins", args.bins),
        ("seed", args.seed),
        ("repetitions", args.repetitions),
    ):
        if value is not None:
            data[key] = value
    if args.out is not None:
        data["output_dir"] = str(args.out)
    operator = dict(data.get("operator", {}))
    if args.variation is not None:
        operator["kind"] = _VARIATION_FLAGS[args.variation]
    if args.eta is not None:
        operator["eta"] = args.eta
    if args.sigma is not None:
        operator["sigma"] = args.sigma
    if args.mut_prob is not None:
        operator["mutation_prob"] = args.mut_prob
    if operator:
        data["operator"] = operator
    if args.reference is not None:
        if args.reference == "analytic":
            data["reference"] = {"kind": "analytic"}
        elif args.reference == "run":
            data["reference"] = {"kind": "from-run"}
        elif args.reference.startswith("load:"):
            data["reference"] = {"kind": "load", "path": args.reference[5:]}
        else:
            raise ValueError(
                f"--reference: expected analytic, run or load:<path>, got {args.reference!r}"
            )
    return data


def _default_label(data: dict) -> str:
    kind = data.get("operator", {}).get("kind", "polynomial-bounded")
    short = "poly" if kind == "polynomial-bounded" else "gauss"
    return f"{short}-n{data['dimensions']}"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            data = yaml.safe_load(args.config.read_text())
            if data is None:
                data = {}
            if not isinstance(data, dict):
                raise ValueError("config: expected a YAML mapping at the top level")
        else:
            data = {}
        data = _merge_flags(data, args)
        if "runs" not in data:
            if "dimensions" not in data:
                raise ValueError("--dims is required when no config file defines runs")
            data["runs"] = [{"label": _default_label(data)}]
        cfg = parse_config_data(data)
        manifest = run_experiment(cfg)
    except (ValueError, OSError) as exc:
        print(f"qdbench: error: {exc}", file=sys.stderr)
        return 2
    for entry in manifest.results:
        name = f"{entry['label']} rep{entry['repetition']}"
        if entry["status"] == "ok":
            print(
                f"{name}: G={entry['global_reliability']:.4f} "
                f"coverage={entry['coverage']:.4f} seed={entry['seed']}"
            )
        else:
            print(f"{name}: FAILED ({entry['error']})", file=sys.stderr)
    print(f"manifest: {cfg.output_dir / 'manifest.json'}")
    return 1 if manifest.failures else 0


if __name__ == "__main__":
    sys.exit(main())
