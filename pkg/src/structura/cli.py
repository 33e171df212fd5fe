"""Command-line entry point: ``structura <command> [options]``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .graph import StructuraError

COMMANDS = ("census", "ratios", "identities", "connectivity", "frag", "core", "inner-core", "bp-sample", "verify-all")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="structura", description="Exact enumeration and sampling experiments for graph classes.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--class", dest="cls", default="forests", help="class name or path to a JSON class definition")
        s.add_argument("--params", default="{}", help="JSON object of extra parameters (k, eps, cutoff, H, ...)")
        s.add_argument("--n-max", type=int, default=6)
        s.add_argument("--rho", type=float, default=None)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=10000)
        s.add_argument("--out", default=None, help="output path (.csv or .json)")
        s.add_argument("--cache-dir", default=None)
    return p


def _plan(args):
    from .experiments import ExperimentPlan

    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise StructuraError(f"--params is not valid JSON: {exc}") from None
    if not isinstance(params, dict):
        raise StructuraError("--params must be a JSON object")
    cache = os.environ.get("STRUCTURA_CACHE_DIR") or args.cache_dir
    return ExperimentPlan(
        class_name=args.cls,
        n_max=args.n_max,
        params=params,
        samples=args.samples,
        rho=args.rho,
        seed=args.seed,
        out=args.out,
        cache_dir=cache,
    )


def _print_report(rep) -> None:
    print(f"[{rep.experiment}] {rep.plan['class_name']}")
    for c in rep.checks:
        val = "" if c.value is None else f" value={c.value}"
        print(f"  {c.status.upper():4} {c.name}{val} {c.detail}".rstrip())


def _table_out(table, out: Optional[str]) -> None:
    from .experiments import emit_csv

    text = emit_csv(table)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, newline="")
    else:
        sys.stdout.write(text.replace("\r\n", "\n"))


def cmd_census(plan) -> int:
    from .census import build_census
    from .experiments import Table

    c = plan.graph_class()
    cen = build_census(c, plan.n_max, min(plan.n_max, 8), cache=plan.cache_dir)
    rows = [[n, cen.labeled_counts[n], len(cen.unlabeled.get(n, []))] for n in sorted(cen.labeled_counts)]
    _table_out(Table(["n", "count", "unlabeled"], rows), plan.out)
    return 0 if not cen.inconsistencies() else 1


def cmd_ratios(plan) -> int:
    from .census import build_census, ratio_sequence
    from .experiments import Table

    cen = build_census(plan.graph_class(), plan.n_max, 0, cache=plan.cache_dir)
    rs = ratio_sequence(cen)
    rows = []
    for n in sorted(cen.labeled_counts):
        r = rs.values.get(n)
        rows.append([n, cen.labeled_counts[n], r if r is not None else "", float(r) if r is not None else "", rs.growth_estimates.get(n, "")])
    _table_out(Table(["n", "count", "r_exact", "r", "growth"], rows), plan.out)
    return 0


def cmd_bp_sample(plan) -> int:
    from .boltzmann import build_bp_model, row_multiset, sample_counts, write_sample_log

    c = plan.graph_class()
    if plan.rho is None:
        raise StructuraError("bp-sample needs --rho")
    model = build_bp_model(c, plan.rho, int(plan.params.get("cutoff", 6)))
    rng = np.random.Generator(np.random.PCG64(plan.seed))
    counts = sample_counts(model, plan.samples, rng)
    empty = float((counts.sum(axis=1) == 0).mean())
    print(f"samples={plan.samples} P(empty)={empty:.6f} exp(-C)={model.p_empty:.6f} shapes={len(model.shapes)} tail_last={model.tail.last_size_mu:.3g}")
    if plan.out:
        write_sample_log(plan.out, plan.seed, model, (row_multiset(model, r) for r in counts))
    return 0


def _run_suite(fn, plan, primary: Optional[str] = None) -> int:
    from .experiments import write_outputs

    rep = fn(plan)
    _print_report(rep)
    if plan.out:
        write_outputs(rep, plan.out, primary)
    return 0 if rep.ok else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    from . import experiments as ex

    args = build_parser().parse_args(argv)
    try:
        plan = _plan(args)
        cmd = args.command
        if cmd == "census":
            return cmd_census(plan)
        if cmd == "ratios":
            return cmd_ratios(plan)
        if cmd == "bp-sample":
            return cmd_bp_sample(plan)
        if cmd == "verify-all":
            reps = ex.run_verify_all(plan)
            for r in reps:
                _print_report(r)
            if plan.out:
                Path(plan.out).write_text(json.dumps([r.to_dict() for r in reps], indent=2, sort_keys=True))
            return 0 if all(r.ok for r in reps) else 1
        fn = {
            "identities": ex.run_identity_suite,
            "connectivity": ex.run_connectivity,
            "frag": ex.run_frag_experiment,
            "core": ex.run_core_experiment,
            "inner-core": ex.run_inner_core_suite,
        }[cmd]
        return _run_suite(fn, plan)
    except (StructuraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
