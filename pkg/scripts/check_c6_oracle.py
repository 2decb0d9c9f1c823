"""Arbitrate the sixth-order coefficient on a domain where h1 != 0.

The lens H = 1 - 3.6 (x - 1/2)^2 is sheared by h- = 2 (x - 1/2) + 1/2, so
h1 = 2 while the widths near both end walls stay small.  The oracle's
(lambda eps^2 - c0 - c2 eps - c4 eps^2) / eps^3 is compared with the
recurrence's c6 + c8 eps + c10 eps^2 and with the closed-form c6.

    python3 scripts/check_c6_oracle.py [--nx 1024]
"""
import argparse

from thinspec import asymptotics as A
from thinspec import recurrence as R
from thinspec.geometry import DomainSpec, max_data
from thinspec.oracle import OracleParams, oracle_eigenvalues

H_PLUS = "1-3.6*(x-0.5)^2-2*(x-0.5)-0.5"
H_MINUS = "2*(x-0.5)+0.5"


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--nx", type=int, default=1024)
    ap.add_argument("--eps", default="0.06,0.08")
    args = ap.parse_args()

    d = DomainSpec.from_strings(H_PLUS, H_MINUS)
    md = max_data(d, order=16)
    c = R.run(md, 10).c
    closed_c6 = A.closed_c4_c6(md)[1]
    print(f"h1 = {md.hd(1):.6g}  engine c6 = {c[6]:.6f}  closed-form c6 = {closed_c6:.6f}")
    print(f"{'eps':>6} {'oracle Q':>12} {'engine Q':>12} {'fine-coarse':>12}")
    for eps in (float(t) for t in args.eps.split(",")):
        r = oracle_eigenvalues(d, eps, OracleParams(nx=args.nx, tol=1e-13))
        lam = float(r.lam[0]) * eps**2
        spread = abs(float(r.fine[0] - r.coarse[0])) * eps**2 / eps**3
        q_oracle = (lam - c[0] - c[2] * eps - c[4] * eps**2) / eps**3
        q_engine = c[6] + c[8] * eps + c[10] * eps**2
        print(f"{eps:6.3f} {q_oracle:12.4f} {q_engine:12.4f} {spread:12.2e}")


if __name__ == "__main__":
    main()
