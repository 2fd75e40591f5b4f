"""Chevalley-Eilenberg Betti numbers and Koszul windows for the built-in Lie algebras."""

import time

from rrkit.homological import homology_ranks
from rrkit.lie import BUILTINS, ce_betti, koszul_build, lie_algebra


def main():
    for name in sorted(BUILTINS):
        g = lie_algebra(name)
        t = time.perf_counter()
        betti = ce_betti(g).sequence()
        line = f"{name:<4} dim={g.dim}  H^*={betti}"
        if g.dim <= 4:
            line += f"  koszul(bound 3)={homology_ranks(koszul_build(g, 3)).sequence()}"
        print(f"{line}  ({time.perf_counter() - t:.2f}s)")


if __name__ == "__main__":
    main()
