"""Operation counts and timings: recurrence-based taylor vs direct series arithmetic."""

import argparse
import time

from holonomia.expr import series_op_count, series_truncated
from holonomia.series_solver import OpCounter, taylor

CORPUS = ["sin(x)*exp(x)", "airy_ai(x)", "arcsin(x)^2", "bessel_j0(x)", "exp(x)/(1-x)",
          "arctan(x)"]


def _timed(fn):
    t = time.perf_counter()
    fn()
    return time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", default="125,250,500,1000")
    ap.add_argument("--direct-max", type=int, default=250,
                    help="skip direct series arithmetic above this order")
    ap.add_argument("exprs", nargs="*", default=CORPUS)
    args = ap.parse_args()
    orders = [int(o) for o in args.orders.split(",")]
    print(f"{'expression':<16}{'order':>7}{'taylor ops':>12}{'ratio':>7}{'taylor s':>10}"
          f"{'direct ops':>12}{'direct s':>10}")
    for e in args.exprs:
        prev = None
        for n in orders:
            c = OpCounter()
            tt = _timed(lambda: taylor(e, n, counter=c))
            ratio = f"{c.ops / prev:.2f}" if prev else "-"
            prev = c.ops
            if n <= args.direct_max:
                dops = str(series_op_count(e, n))
                dt = f"{_timed(lambda: series_truncated(e, n)):.3f}"
            else:
                dops = dt = "-"
            print(f"{e:<16}{n:>7}{c.ops:>12}{ratio:>7}{tt:>10.3f}{dops:>12}{dt:>10}")


if __name__ == "__main__":
    main()
