"""Spectral gap between the two lowest eigenvalues versus its leading term.

For k = 1 the gap behaves like 2 theta / eps; the script prints the measured
eps * (lambda2 - lambda1) / (2 theta) for a few eps values.

    python3 scripts/gap_study.py [--nx 512] [--eps 0.05,0.1,0.2]
"""
import argparse

from thinspec import asymptotics as A
from thinspec.geometry import max_data
from thinspec.oracle import OracleParams, solve_many
from thinspec.registry import EXAMPLES


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--nx", type=int, default=512)
    ap.add_argument("--eps", default="0.05,0.1,0.2")
    ap.add_argument("--examples", default="disk,lemniscate,bean")
    args = ap.parse_args()
    eps = [float(t) for t in args.eps.split(",")]
    for name in args.examples.split(","):
        d = EXAMPLES[name].domain
        lead = A.gap_leading(max_data(d, 8))
        print(f"{name}: leading gap constant {lead:.8f}")
        for r in solve_many(d, eps, OracleParams(nx=args.nx, count=2)):
            gap = float(r.lam[1] - r.lam[0])
            print(f"  eps = {r.eps:.3f}  lambda1 = {r.lam[0]:.6f}  lambda2 = {r.lam[1]:.6f}"
                  f"  eps*gap/lead = {r.eps * gap / lead:.4f}")


if __name__ == "__main__":
    main()
