"""Seeded batches of algebraic-identity checks.

Each runner draws samples from a ``random.Random`` and counts exact failures,
keeping the first counterexample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .forms import e1_delta, form_d, hodge_star
from .hochschild import cyclic_N, cyclic_tau, hoch_b
from .lie import ce_differential, gl, koszul_build, kp_psi, sl2
from .sampling import rand_chain, rand_cochain, rand_form, rand_op, rand_partner, rand_q
from .weyl import op_comm, op_mul, op_parse, op_print


@dataclass
class LawResult:
    name: str
    samples: int
    failures: int
    witness: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failures == 0


def _run(name: str, n: int, trial: Callable[[int], Optional[str]]) -> LawResult:
    fails, witness = 0, None
    for i in range(n):
        w = trial(i)
        if w is not None:
            fails += 1
            witness = witness or w
    return LawResult(name, n, fails, witness)


def kp_antisymmetry(rng: random.Random, n: int = 500) -> LawResult:
    def trial(_):
        r = rng.randint(1, 2)
        a = rand_op(rng, rank=r)
        b = rand_partner(rng, a)
        s = kp_psi(a, b) + kp_psi(b, a)
        return None if s == 0 else f"Psi({a}, {b}) + Psi({b}, {a}) = {s}"

    return _run("kp_antisymmetry", n, trial)


def kp_cocycle(rng: random.Random, n: int = 500) -> LawResult:
    def trial(_):
        r = rng.randint(1, 2)
        a, b = rand_op(rng, rank=r), rand_op(rng, rank=r)
        c = rand_partner(rng, op_mul(a, b))
        s = kp_psi(op_comm(a, b), c) + kp_psi(op_comm(b, c), a) + kp_psi(op_comm(c, a), b)
        return None if s == 0 else f"cocycle defect {s} at ({a}; {b}; {c})"

    return _run("kp_cocycle", n, trial)


def hochschild_b_squared(rng: random.Random, n: int = 500) -> LawResult:
    def trial(_):
        c = rand_chain(rng, rng.randint(0, 3))
        return None if not hoch_b(hoch_b(c)) else f"b(b(c)) != 0 for c = {c!r}"

    return _run("hochschild_b_squared", n, trial)


def cyclic_norm(rng: random.Random, n: int = 500) -> LawResult:
    def trial(_):
        c = rand_chain(rng, rng.randint(0, 3))
        one_minus = lambda x: x - cyclic_tau(x)  # noqa: E731
        if one_minus(cyclic_N(c)) or cyclic_N(one_minus(c)):
            return f"(1-tau)N or N(1-tau) nonzero on {c!r}"
        return None

    return _run("cyclic_norm", n, trial)


def ce_squared(rng: random.Random, n: int = 500) -> LawResult:
    algs = [gl(2), gl(3), sl2()]
    mods = {id(g): g.adjoint() for g in algs}

    def trial(_):
        g = rng.choice(algs)
        adj = rng.random() < 0.5
        module = mods[id(g)] if adj else None
        k = rng.randint(0, g.dim - 2)
        l = rand_cochain(rng, g, k, g.dim if adj else 1, density=0.3)
        dd = ce_differential(ce_differential(l, k, g, module, validate=False), k + 1, g, module, validate=False)
        return None if not dd else f"d^2 != 0 on {g.name} {'adjoint' if adj else 'trivial'} degree {k}"

    return _run("ce_squared", n, trial)


def koszul_squared(rng: random.Random, n: int = 500) -> LawResult:
    cx = koszul_build(gl(2), 3)

    def trial(_):
        k = rng.randint(2, cx.hi)
        dim = cx.dim(k)
        v = {j: rand_q(rng) for j in rng.sample(range(dim), min(dim, rng.randint(1, 6)))}
        out = cx.d(k - 1).apply(cx.d(k).apply(v))
        return None if not out else f"Koszul d^2 != 0 in degree {k}"

    return _run("koszul_squared", n, trial)


def forms_laws(rng: random.Random, n: int = 500) -> List[LawResult]:
    fails: Dict[str, int] = {"forms_d_squared": 0, "forms_delta_squared": 0, "forms_star_involution": 0}
    wit: Dict[str, Optional[str]] = dict.fromkeys(fails)
    for _ in range(n):
        f = rand_form(rng)
        for name, bad in (("forms_d_squared", bool(form_d(form_d(f)))),
                          ("forms_delta_squared", bool(e1_delta(e1_delta(f)))),
                          ("forms_star_involution", hodge_star(hodge_star(f)) != f)):
            if bad:
                fails[name] += 1
                wit[name] = wit[name] or str(f)
    return [LawResult(k, n, v, wit[k]) for k, v in fails.items()]


def parser_round_trip(rng: random.Random, n: int = 1000) -> LawResult:
    def trial(_):
        r = rng.randint(1, 3)
        a = rand_op(rng, order=4, z=(-6, 6), rank=r, terms=4)
        text = op_print(a)
        back = op_parse(text, rank=r)
        if back != a or op_print(back) != text:
            return f"round trip changed {text!r}"
        return None

    return _run("parser_round_trip", n, trial)


def all_laws(seed: int = 0, n: int = 500) -> List[LawResult]:
    rng = random.Random(seed)
    out = [kp_antisymmetry(rng, n), kp_cocycle(rng, n), hochschild_b_squared(rng, n), cyclic_norm(rng, n),
           ce_squared(rng, n), koszul_squared(rng, n)]
    out.extend(forms_laws(rng, n))
    out.append(parser_round_trip(rng, 2 * n))
    return out
