"""Coefficient table for the named example domains.

Prints, for each example, the reference coefficients next to the closed-form
values and the recurrence values, followed by the recurrence continued to a
higher order.

    python3 scripts/reproduce_examples.py [--order 10]
"""
import argparse

from thinspec import asymptotics as A
from thinspec import recurrence as R
from thinspec.geometry import max_data
from thinspec.registry import EXAMPLES


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--order", type=int, default=10)
    args = ap.parse_args()
    for name, ex in EXAMPLES.items():
        md = max_data(ex.domain, max(args.order + 2, 10))
        ref = ex.reference_values()
        closed = A.closed_expansion(md, 6).as_dict()
        engine = R.expand_maxdata(md, args.order).as_dict()
        print(f"{name}: xbar = {md.xbar:.10f}, H0 = {md.H0:.10f}, h1 = {md.hd(1):.6g}")
        print(f"  {'c':>4} {'reference':>16} {'closed form':>16} {'recurrence':>16}")
        for key in ("0", "2", "4", "6"):
            print(f"  {key:>4} {ref[key]:16.10f} {closed[key]:16.10f} {engine[key]:16.10f}")
        extra = [k for k in engine if int(k) > 6]
        if extra:
            print("  higher: " + ", ".join(f"c{k} = {engine[k] + 0.0:.6g}" for k in extra))
        print()


if __name__ == "__main__":
    main()
