"""Command line entry point: ``gfq <experiment> [options]``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import experiments


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfq", description="Gaussian Fock-space experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON file with configuration keys")
        p.add_argument("--out", type=Path, help="where to write the JSON report")
        p.add_argument("--seed", type=int)

    p = sub.add_parser("gbs-flatten", help="flatten the A matrix of a Borealis-type circuit")
    common(p)
    p.add_argument("--base", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--bins", type=int)

    p = sub.add_parser("cat-prep", help="heralded cat-state preparation")
    common(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--parity", choices=["even", "odd"])
    p.add_argument("--herald", type=int)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--symplectic-lr", type=float)

    p = sub.add_parser("cubic-prep", help="staged cubic-phase-state preparation")
    common(p)
    p.add_argument("--schedule", type=_int_list, help="comma separated herald photon numbers")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--symplectic-lr", type=float)
    p.add_argument("--euclidean-lr", type=float)

    p = sub.add_parser("verify-cubic", help="simulate the published cubic-state solution")
    p.add_argument("--out", type=Path)
    p.add_argument("--cutoff", type=int, default=100)
    return parser


def _collect_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        cfg.update(json.loads(Path(args.config).read_text()))
    skip = {"command", "config", "out"}
    for key, val in vars(args).items():
        if key not in skip and val is not None:
            cfg[key] = val
    return cfg


def write_report(report, out: Path | None):
    """Write ``out`` plus sibling CSV files; print the JSON if ``out`` is None."""
    text = report.to_json(indent=2)
    if out is None:
        print(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    if report.trajectory:
        with open(out.with_name(out.stem + "_trajectory.csv"), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "cost", "wall_ms"])
            w.writerows(report.trajectory)
    hist = report.extra.get("histogram")
    if hist is not None:
        with open(out.with_name(out.stem + "_histogram.csv"), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bin_lo", "bin_hi", "before", "after"])
            edges = hist["edges"]
            for k in range(len(hist["before"])):
                w.writerow([edges[k], edges[k + 1], int(hist["before"][k]), int(hist["after"][k])])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify-cubic":
        report = experiments.verify_cubic_solution(cutoff=args.cutoff)
    else:
        cfg = _collect_config(args)
        runner = {
            "gbs-flatten": experiments.run_gbs_flatten,
            "cat-prep": experiments.run_cat_prep,
            "cubic-prep": experiments.run_cubic_prep,
        }[args.command]
        report = runner(cfg)
    write_report(report, args.out)
    summary = {k: v for k, v in report.to_dict()["metrics"].items() if not isinstance(v, (dict, list))}
    print(json.dumps({"experiment": report.name, **summary}), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
