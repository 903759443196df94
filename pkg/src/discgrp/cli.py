"""Command-line entry point.

``discgrp run`` loads a graph instance, executes the requested verification
suites with a fixed seed, writes a machine-readable report, and exits 0 on
pass, 1 on any failed check, and 2 when the instance does not satisfy the
hypotheses of a requested suite or the input cannot be parsed.

``discgrp sample`` prints a seeded point of the open intertwiner ball in the
block JSON format, mainly for piping into other tools.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import intertwiners
from .correspondence import (
    CorrespondenceContext,
    GraphSpecError,
    ZeroMultiplicityError,
    graph_from_json,
)
from .linalg import Tolerance
from .suites import SUITES, SuiteHypothesesNotMetError

REPORT_SCHEMA = "discgrp/1"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_HYPOTHESES = 2


class ParseError(ValueError):
    pass


def _load_context(path: str) -> CorrespondenceContext:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    graph, mult = graph_from_json(obj)
    return CorrespondenceContext(graph, mult)


def _parse_ranks(text: str | None) -> dict[str, int] | None:
    if not text:
        return None
    ranks = {}
    for part in text.split(","):
        if "=" not in part:
            raise ParseError(f"bad rank assignment {part!r}, expected vertex=k")
        v, k = part.split("=", 1)
        try:
            ranks[v.strip()] = int(k)
        except ValueError as exc:
            raise ParseError(f"bad rank value in {part!r}") from exc
    return ranks


def _instance_summary(ctx: CorrespondenceContext) -> dict:
    return {
        "vertices": list(ctx.graph.vertices),
        "edges": [
            {"name": e.name, "src": e.src, "rng": e.rng} for e in ctx.graph.edges
        ],
        "multiplicities": dict(ctx.mult),
        "dim_H": ctx.dim_H,
        "dim_EH": ctx.dim_EH,
    }


def run(config: argparse.Namespace) -> int:
    try:
        ctx = _load_context(config.graph)
        ranks = _parse_ranks(config.morita_ranks)
    except (ParseError, GraphSpecError, ZeroMultiplicityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESES

    tol = Tolerance(abs_tol=config.tol, boundary_margin=config.margin)
    names = list(SUITES) if config.suite == "all" else [config.suite]

    results = []
    worst = EXIT_PASS
    for name in names:
        fn = SUITES[name]
        kwargs = {"ranks": ranks} if name == "morita" else {}
        try:
            r = fn(ctx, config.seed, tol, config.trials, **kwargs)
        except SuiteHypothesesNotMetError as exc:
            results.append(
                {
                    "suite": name,
                    "checks": 0,
                    "max_residual": 0.0,
                    "status": "hypotheses_not_met",
                    "seconds": 0.0,
                    "witnesses": {},
                    "failures": [{"check": "hypotheses", "reason": str(exc)}],
                }
            )
            worst = max(worst, EXIT_HYPOTHESES)
            print(f"{name:<10} hypotheses_not_met  {exc}")
            continue
        results.append(r.to_json())
        if r.status == "fail":
            worst = max(worst, EXIT_FAIL) if worst != EXIT_HYPOTHESES else worst
            worst = EXIT_FAIL if worst == EXIT_PASS else worst
        elif r.status == "hypotheses_not_met":
            worst = max(worst, EXIT_HYPOTHESES)
        print(
            f"{r.name:<10} {r.status:<6} checks={r.checks} "
            f"max_residual={r.max_residual:.3e} ({r.seconds:.2f}s)"
        )

    status = "pass"
    if any(r["status"] == "fail" for r in results):
        status = "fail"
        worst = EXIT_FAIL
    elif any(r["status"] == "hypotheses_not_met" for r in results):
        status = "hypotheses_not_met"

    report = {
        "schema": REPORT_SCHEMA,
        "graph": config.graph,
        "instance": _instance_summary(ctx),
        "config": {
            "suites": names,
            "seed": config.seed,
            "trials": config.trials,
            "tol": config.tol,
            "margin": config.margin,
            "morita_ranks": ranks,
        },
        "status": status,
        "results": results,
    }
    text = json.dumps(report, indent=2)
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return worst


def sample_command(config: argparse.Namespace) -> int:
    try:
        ctx = _load_context(config.graph)
    except (ParseError, GraphSpecError, ZeroMultiplicityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESES
    tol = Tolerance(abs_tol=config.tol, boundary_margin=config.margin)
    rng = np.random.default_rng(config.seed)
    eta = intertwiners.sample_disc(ctx, rng, min(config.radius, tol.radius_cap), tol)
    print(json.dumps(intertwiners.to_blocks_json(ctx, eta), indent=2))
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="discgrp",
        description="Verify automorphism-group identities of intertwiner "
        "unit balls over graph correspondences.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--graph", required=True, help="graph instance JSON file")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument(
            "--margin",
            type=float,
            default=0.05,
            help="boundary margin; sampled points satisfy ||eta*|| <= 1 - margin",
        )

    rp = sub.add_parser("run", help="run verification suites")
    common(rp)
    rp.add_argument(
        "--suite", default="all", choices=["all", *SUITES], help="suite to run"
    )
    rp.add_argument("--trials", type=int, default=100)
    rp.add_argument(
        "--morita-ranks",
        default=None,
        help="nontrivial ranks for the morita suite, e.g. v1=2,v2=1",
    )
    rp.add_argument("-o", "--output", default=None, help="report JSON path")
    rp.set_defaults(func=run)

    sp = sub.add_parser("sample", help="print a seeded ball point")
    common(sp)
    sp.add_argument("--radius", type=float, default=0.6)
    sp.set_defaults(func=sample_command)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
