"""Seeded random generators for the law checks (shared by the CLI, scripts and tests)."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Dict, Tuple

from .exact import Poly2
from .forms import FiberForm
from .hochschild import TensorChain
from .lie import LieAlgebraData
from .weyl import DiffOp


def rand_q(rng: random.Random, num: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_op(rng: random.Random, order: int = 3, z: Tuple[int, int] = (-4, 4), rank: int = 1,
            terms: int = 3) -> DiffOp:
    t = {}
    for _ in range(rng.randint(1, terms)):
        key = (rng.randint(1, rank), rng.randint(1, rank), rng.randint(*z), rng.randint(0, order))
        t[key] = rand_q(rng)
    return DiffOp(t, rank)


def rand_partner(rng: random.Random, a: DiffOp, order: int = 3, z: Tuple[int, int] = (-4, 4),
                 terms: int = 3) -> DiffOp:
    """A random operator that also carries terms of opposite weight and transposed entry to some of a's.

    Uniform sampling rarely produces pairs on which the residue pairing is
    nonzero; mixing in such dual terms keeps the law checks meaningful.
    """
    b = dict(rand_op(rng, order, z, a.rank, terms).terms)
    for (i, j, alpha, m), _ in a.items():
        if rng.random() < 0.5:
            n = rng.randint(0, order)
            beta = n - (alpha - m)
            if z[0] <= beta <= z[1]:
                b[(j, i, beta, n)] = rand_q(rng)
    return DiffOp(b, a.rank)


def rand_chain(rng: random.Random, degree: int, order: int = 2, z: Tuple[int, int] = (-3, 3),
               rank: int = 1, terms: int = 3) -> TensorChain:
    out = TensorChain.zero(degree, rank)
    for _ in range(rng.randint(1, terms)):
        t = tuple((rng.randint(1, rank), rng.randint(1, rank), rng.randint(*z), rng.randint(0, order))
                  for _ in range(degree + 1))
        out = out + TensorChain({t: rand_q(rng)}, degree, rank)
    return out


def rand_poly2(rng: random.Random, z: Tuple[int, int] = (-3, 3), xi: int = 3, terms: int = 3) -> Poly2:
    return Poly2({(rng.randint(*z), rng.randint(0, xi)): rand_q(rng) for _ in range(rng.randint(0, terms))})


def rand_form(rng: random.Random, **kw) -> FiberForm:
    return FiberForm(*(rand_poly2(rng, **kw) for _ in range(4)))


def rand_cochain(rng: random.Random, g: LieAlgebraData, k: int, mdim: int = 1,
                 density: float = 0.5) -> Dict[Tuple[tuple, int], Fraction]:
    out = {}
    for w in combinations(range(g.dim), k):
        for v in range(mdim):
            if rng.random() < density:
                out[(w, v)] = rand_q(rng)
    return out
