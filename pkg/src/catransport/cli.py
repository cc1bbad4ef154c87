"""Command line runner: ``catransport run|convergence|finite|list-scenarios``.

Exit status: 0 when every row passes, 1 on a numerical failure, 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .catalog import SCENARIO_NAMES, get_scenario
from .errors import CatransportError, CentralityError, DomainError, GridError, UnknownNameError
from .experiments import LADDERS, ExperimentConfig, convergence, parse_grid, run_checks
from .finite import (build_cg2, cg2_bundle, check_categorical_group, check_orbit_composition,
                     check_principal_axioms, check_round_trip)
from .groups import FiniteGroup

OK, FAILED, BAD_INPUT = 0, 1, 2


def _emit(header, rows, out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return f"{x:.6e}"


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        grid = data.pop("grid", None)
        if isinstance(grid, str):
            cfg.N, cfg.M = parse_grid(grid)
        elif isinstance(grid, dict):
            cfg.N, cfg.M = int(grid["N"]), int(grid["M"])
        for key in ("scenario", "seed", "checks", "output"):
            if key in data:
                setattr(cfg, key, data[key])
        if isinstance(cfg.checks, str):
            cfg.checks = cfg.checks.split(",")
    if args.scenario:
        cfg.scenario = args.scenario
    if args.grid:
        cfg.N, cfg.M = parse_grid(args.grid)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.checks:
        cfg.checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    if args.out:
        cfg.output = args.out
    cfg.validate()
    return cfg


def cmd_run(args) -> int:
    cfg = _config(args)
    rows = run_checks(cfg)
    table = [(r.check, cfg.scenario, cfg.N, cfg.M, _fmt(r.residual), _fmt(r.tolerance), str(r.passed).lower())
             for r in rows]
    _emit(("check", "scenario", "N", "M", "residual", "tolerance", "pass"), table, cfg.output)
    failed = [r for r in rows if not r.passed]
    for r in failed:
        print(f"FAIL {r.check}: residual {r.residual:.3e} > {r.tolerance:.1e}", file=sys.stderr)
    return FAILED if failed else OK


def cmd_convergence(args) -> int:
    scenario = args.scenario or "so3_conj"
    get_scenario(scenario)
    checks = [c.strip() for c in args.checks.split(",")] if args.checks else ["all"]
    ladder = [int(v) for v in args.ladder.split(",")] if args.ladder else None
    rows = convergence(scenario, checks, ladder, args.seed or 0)
    _emit(("check", "h", "residual", "order"), [(r.check, _fmt(r.h), _fmt(r.residual), r.order) for r in rows],
          args.out)
    bad = [r for r in rows if not r.ok]
    for r in bad:
        print(f"FLAG {r.check}: residual {r.residual:.3e} at h={r.h:.3e} is not decreasing", file=sys.stderr)
    return FAILED if bad else OK


def cmd_finite(args) -> int:
    try:
        G = FiniteGroup.from_csv(args.cayley)
    except OSError as err:
        raise DomainError(f"cannot read Cayley table: {err}") from None
    center = [int(v) for v in args.center.split(",")] if args.center else [G.identity()]
    rows = []
    try:
        cg = build_cg2(G, center)
        rows.append(("centrality", 0, ""))
    except CentralityError as err:
        rows.append(("centrality", 1, repr(err.witness)))
        cg = None
    if cg is not None:
        bundle = cg2_bundle(G, center)
        for name, rep in (("categorical_group", check_categorical_group(cg)),
                          ("principal_bundle", check_principal_axioms(bundle)),
                          ("orbit_composition", check_orbit_composition(bundle)),
                          ("round_trip", check_round_trip(cg))):
            witness = "" if rep.ok else f"{sorted(rep.failures)[0]}: {rep.failures[sorted(rep.failures)[0]]!r}"
            rows.append((name, sum(rep.counts.values()), witness))
    table = [(name, G.name, G.order, n, str(n == 0).lower(), w) for name, n, w in rows]
    _emit(("check", "group", "order", "failures", "pass", "witness"), table, args.out)
    return OK if all(n == 0 for _, n, _ in rows) else FAILED


def cmd_list(args) -> int:
    for name in SCENARIO_NAMES:
        print(f"{name}\t{get_scenario(name).description}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catransport", description="Residual reports for transport laws.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scenario", help=f"one of: {', '.join(SCENARIO_NAMES)}")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--checks", help="comma separated check names, or 'all'")
        sp.add_argument("--out", help="CSV output path (default: stdout)")

    r = sub.add_parser("run", help="run named checks on one scenario")
    common(r)
    r.add_argument("--grid", help="NxM: N path cells, M surface rows (both >= 8)")
    r.add_argument("--config", help="JSON file with scenario, grid, seed, checks, output")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("convergence", help=f"observed orders for: {', '.join(LADDERS)}")
    common(c)
    c.add_argument("--ladder", help="comma separated grid sizes, at least 3")
    c.set_defaults(func=cmd_convergence)

    f = sub.add_parser("finite", help="exhaustive checks for a central quotient of a finite group")
    f.add_argument("--cayley", required=True, help="CSV Cayley table, row = left factor")
    f.add_argument("--center", help="comma separated elements of the central subgroup")
    f.add_argument("--out")
    f.set_defaults(func=cmd_finite)

    ls = sub.add_parser("list-scenarios", help="print scenario names")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnknownNameError, GridError, DomainError, json.JSONDecodeError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"error: {msg}", file=sys.stderr)
        return BAD_INPUT
    except CatransportError as err:
        print(f"error: {err}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
