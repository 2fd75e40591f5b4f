"""Homology of truncated Hochschild and cyclic bicomplex windows of the operator algebra."""

import argparse
import time

from rrkit.hochschild import CyclicWindow, build_cyclic_window, periodic_shift_check
from rrkit.homological import complex_validate, homology_ranks


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--P", type=int, default=3)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--z-window", type=int, nargs=2, default=[-1, 1])
    p.add_argument("--weights", type=int, nargs="+", default=[-1, 0, 1])
    p.add_argument("--parallel", action="store_true")
    args = p.parse_args()
    zw = tuple(args.z_window)
    for w in args.weights:
        for flavor, cols in (("hochschild", (0, 0)), ("plain", (0, args.P)), ("negative", (-args.P, 0)),
                             ("periodic", (-2, 1))):
            win = CyclicWindow(flavor, args.P, cols, w, zw, args.order)
            t = time.perf_counter()
            c = build_cyclic_window(win)
            rep = homology_ranks(c, parallel=args.parallel)
            stable = {n: rep.betti(n) for n in rep.degrees() if rep.records[n].stable}
            print(f"w={w:>2} {flavor:<10} cols={cols} dims={[c.dim(n) for n in c.degrees()]} "
                  f"valid={bool(complex_validate(c))} stable={stable} ({time.perf_counter() - t:.2f}s)")
        print(f"w={w:>2} periodic shift invariance:",
              periodic_shift_check(CyclicWindow("periodic", args.P, (-2, 1), w, zw, args.order)))


if __name__ == "__main__":
    main()
