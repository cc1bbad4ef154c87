"""Observed convergence orders for every grid-dependent check on every scenario.

    python3 scripts/convergence_study.py [--scenarios so3_conj,double] [--out orders.csv]
"""
import argparse
import csv
import sys

from catransport.catalog import SCENARIO_NAMES
from catransport.experiments import LADDERS, convergence


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scenarios", default=",".join(SCENARIO_NAMES))
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    rows = []
    for scenario in args.scenarios.split(","):
        for r in convergence(scenario, list(LADDERS)):
            rows.append((scenario, r.check, f"{r.h:.4e}", f"{r.residual:.4e}", r.order, r.ok))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("scenario", "check", "h", "residual", "order", "ok"))
    w.writerows(rows)
    if args.out:
        out.close()
    return 0 if all(r[-1] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
