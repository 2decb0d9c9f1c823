"""Series versus finite-difference eigenvalue over a range of eps.

Writes whitespace-separated columns (eps, series, oracle, relative error) for
each example, one file per example, ready for a plotting tool.

    python3 scripts/validate_curves.py --out curves/ [--nx 256] [--examples disk,bean]
"""
import argparse
from pathlib import Path

import numpy as np

from thinspec import asymptotics as A
from thinspec.geometry import max_data
from thinspec.oracle import OracleParams, compare
from thinspec.registry import EXAMPLES


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="curves")
    ap.add_argument("--nx", type=int, default=256)
    ap.add_argument("--examples", default="disk,lemniscate,bean,convex,nonconvex")
    ap.add_argument("--series", choices=("engine", "closed"), default="engine")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    eps = np.round(np.arange(0.1, 1.01, 0.1), 10)
    for name in args.examples.split(","):
        d = EXAMPLES[name].domain
        md = max_data(d, 10)
        e = A.expand(md, 6) if args.series == "engine" else A.closed_expansion(md, 6)
        rows = compare(d, e, eps, OracleParams(nx=args.nx))
        path = out / f"{name}.dat"
        with open(path, "w") as fh:
            fh.write("# eps series oracle rel_err\n")
            for r in rows:
                fh.write(f"{r.eps:.3f} {r.lam_series:.10g} {r.lam_oracle:.10g} {r.rel_err:.6e}\n")
        worst = max(rows, key=lambda r: r.rel_err)
        print(f"{name}: max rel err {100 * worst.rel_err:.2f}% at eps = {worst.eps:.1f} -> {path}")


if __name__ == "__main__":
    main()
