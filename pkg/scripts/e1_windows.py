"""Betti numbers of the symbol E1 window for a range of weights and fiber bounds."""

import argparse

from rrkit.hochschild import e1_page_ranks


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--weights", type=int, nargs="+", default=list(range(-3, 4)))
    p.add_argument("--xi-max", type=int, nargs="+", default=[1, 2, 4, 6])
    p.add_argument("--z-window", type=int, nargs=2, default=[-4, 4])
    args = p.parse_args()
    print("weight  xi_max  betti      stable_total  unstable")
    for w in args.weights:
        for s in args.xi_max:
            r = e1_page_ranks(w, s, tuple(args.z_window))
            print(f"{w:>6}  {s:>6}  {str(r.sequence()):<10} {r.stable_total():>12}  {r.unstable_degrees() or '-'}")


if __name__ == "__main__":
    main()
