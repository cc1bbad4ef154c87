"""Write Cayley tables for Z4 and Q8 and run the finite checks on their central quotients.

    python3 scripts/finite_bundles.py [outdir]
"""
import sys
from pathlib import Path

import numpy as np

from catransport.cli import main as cli
from catransport.groups import cyclic, quaternion

CASES = [("z4.csv", cyclic(4), "0,2"), ("q8.csv", quaternion(), "0,1"), ("q8.csv", quaternion(), "0,1,2,3")]


def main(outdir="finite_out"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    codes = []
    for fname, G, center in CASES:
        table = out / fname
        np.savetxt(table, G.table, fmt="%d", delimiter=",")
        print(f"# {G.name} with center {{{center}}}")
        codes.append(cli(["finite", "--cayley", str(table), "--center", center]))
    # the last case is not central and is expected to fail
    return 0 if codes == [0, 0, 1] else 1


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
