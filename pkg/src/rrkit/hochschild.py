"""Hochschild and cyclic chains of the operator algebra.

Chains are finite combinations of elementary tensors of normal-ordered
monomials.  Commutative chains (Laurent polynomials) are the order-zero case.
Also here: windowed cyclic/negative/periodic complexes, the E1 page of the
order filtration, the HKR-style symbol one-form and the functional epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import LaurentPoly, Poly2, SparseMatrixQ, q, solve
from .forms import FiberForm, e1_delta, form_d, hodge_star, zero_section_integral
from .homological import BettiReport, ChainComplexQ, homology_ranks, total_complex
from .weyl import ORDER_CAP, DiffOp, Key, RankMismatch, mono_mul, op_parse, op_print, weight

Tensor = Tuple[Key, ...]

DEFAULT_BASIS_CAP = 4000


class NotACycle(ValueError):
    pass


class MixedOrderError(ValueError):
    pass


class BasisCapExceeded(ValueError):
    pass


@lru_cache(maxsize=1 << 16)
def _mul(x: Key, y: Key) -> Tuple[Tuple[Key, int], ...]:
    return tuple(mono_mul(x, y, ORDER_CAP).items())


def _as_op(f) -> DiffOp:
    if isinstance(f, DiffOp):
        return f
    if isinstance(f, LaurentPoly):
        return DiffOp.from_laurent(f)
    if isinstance(f, str):
        return op_parse(f)
    return DiffOp.scalar(f)


class TensorChain:
    """Rational combination of a_0 (x) ... (x) a_p over the monomial basis."""

    __slots__ = ("degree", "rank", "_t")

    def __init__(self, terms: Optional[Mapping[Tensor, object]] = None, degree: int = 0, rank: int = 1):
        self.degree = degree
        self.rank = rank
        t = {}
        for k, v in (terms or {}).items():
            if len(k) != degree + 1:
                raise ValueError(f"tensor of length {len(k)} in a degree-{degree} chain")
            v = q(v)
            if v != 0:
                t[tuple(k)] = t.get(tuple(k), 0) + v
        self._t = {k: v for k, v in t.items() if v != 0}

    @classmethod
    def tensor(cls, *factors, coeff=1) -> "TensorChain":
        """Multilinear expansion of a single elementary tensor of operators."""
        ops = [_as_op(f) for f in factors]
        rank = ops[0].rank
        for o in ops:
            if o.rank != rank:
                raise RankMismatch("factors of different rank")
        out: Dict[Tensor, Fraction] = {}
        for combo in product(*(o.items() for o in ops)):
            key = tuple(k for k, _ in combo)
            c = q(coeff)
            for _, v in combo:
                c *= v
            out[key] = out.get(key, 0) + c
        return cls(out, len(ops) - 1, rank)

    @classmethod
    def zero(cls, degree: int = 0, rank: int = 1) -> "TensorChain":
        return cls({}, degree, rank)

    @property
    def terms(self) -> Dict[Tensor, Fraction]:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorChain):
            return NotImplemented
        if not self._t and not other._t:
            return True
        return (self.degree, self.rank, self._t) == (other.degree, other.rank, other._t)

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self._t.items())))

    def _check(self, other: "TensorChain") -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")
        if self.degree != other.degree and self._t and other._t:
            raise ValueError(f"degree {self.degree} vs degree {other.degree}")

    def __add__(self, other: "TensorChain") -> "TensorChain":
        self._check(other)
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, 0) + v
        deg = self.degree if self._t else other.degree
        return TensorChain(out, deg, self.rank)

    def __neg__(self) -> "TensorChain":
        return TensorChain({k: -v for k, v in self._t.items()}, self.degree, self.rank)

    def __sub__(self, other: "TensorChain") -> "TensorChain":
        return self + (-other)

    def __mul__(self, c) -> "TensorChain":
        c = q(c)
        return TensorChain({k: v * c for k, v in self._t.items()}, self.degree, self.rank)

    __rmul__ = __mul__

    def weight_split(self) -> Dict[int, "TensorChain"]:
        parts: Dict[int, Dict[Tensor, Fraction]] = {}
        for k, v in self._t.items():
            parts.setdefault(tensor_weight(k), {})[k] = v
        return {w: TensorChain(t, self.degree, self.rank) for w, t in sorted(parts.items())}

    def filtration(self) -> int:
        """Largest total d-order over the elementary tensors (-1 for zero)."""
        return max((sum(k[3] for k in t) for t in self._t), default=-1)

    def lines(self) -> List[str]:
        out = []
        for t, c in self.items():
            facs = [op_print(DiffOp({t[0]: c}, self.rank))]
            facs += [op_print(DiffOp({k: 1}, self.rank)) for k in t[1:]]
            out.append(" ⊗ ".join(facs))
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines()) if self._t else "0"

    def __repr__(self) -> str:
        return f"TensorChain({'; '.join(self.lines())!r}, degree={self.degree})"


def tensor_weight(t: Tensor) -> int:
    return sum(weight(k) for k in t)


def _split_tensor(line: str) -> List[str]:
    for sep in ("⊗", "(x)"):
        if sep in line:
            return [p.strip() for p in line.split(sep)]
    return [line.strip()]


def chain_parse(lines: Iterable[str], rank: Optional[int] = None) -> TensorChain:
    """One elementary tensor "P ⊗ Q ⊗ ..." per line; "(x)" is accepted for the separator."""
    parsed = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        parsed.append([op_parse(f, rank) for f in _split_tensor(line)])
    if not parsed:
        return TensorChain.zero(0, rank or 1)
    r = rank or max(o.rank for facs in parsed for o in facs)
    total = None
    for facs in parsed:
        facs = [o if o.rank == r else DiffOp(o.terms, r) for o in facs]
        c = TensorChain.tensor(*facs)
        total = c if total is None else total + c
    return total


# ---------------------------------------------------------------- operators


def _apply(c: TensorChain, fn, degree: int) -> TensorChain:
    out: Dict[Tensor, Fraction] = {}
    for t, v in c._t.items():
        for k, w in fn(t):
            out[k] = out.get(k, 0) + v * w
    return TensorChain(out, degree, c.rank)


def _faces(t: Tensor, wrap: bool, first: bool = True):
    p = len(t) - 1
    for i in range(0 if first else 1, p):
        sign = -1 if i % 2 else 1
        for k, c in _mul(t[i], t[i + 1]):
            yield t[:i] + (k,) + t[i + 2:], sign * c
    if wrap and p > 0:
        sign = -1 if p % 2 else 1
        for k, c in _mul(t[p], t[0]):
            yield (k,) + t[1:p], sign * c


def hoch_b(c: TensorChain) -> TensorChain:
    """Hochschild boundary; zero on degree 0."""
    if c.degree == 0:
        return TensorChain.zero(0, c.rank)
    return _apply(c, lambda t: _faces(t, True), c.degree - 1)


def bar_b(c: TensorChain) -> TensorChain:
    """b' : the Hochschild boundary without the wrap-around face."""
    if c.degree == 0:
        return TensorChain.zero(0, c.rank)
    return _apply(c, lambda t: _faces(t, False), c.degree - 1)


def bar_b_left(c: TensorChain) -> TensorChain:
    """b without the face a_0 a_1; equals tau^-1 b' tau and pairs with the left rotation."""
    if c.degree == 0:
        return TensorChain.zero(0, c.rank)
    return _apply(c, lambda t: _faces(t, True, first=False), c.degree - 1)


def cyclic_tau(c: TensorChain) -> TensorChain:
    sign = -1 if c.degree % 2 else 1
    return _apply(c, lambda t: [(t[1:] + t[:1], sign)], c.degree)


def cyclic_N(c: TensorChain) -> TensorChain:
    out = c
    cur = c
    for _ in range(c.degree):
        cur = cyclic_tau(cur)
        out = out + cur
    return out


# ---------------------------------------------------------------- windows


def window_monomials(z_window: Tuple[int, int], order: int, rank: int = 1) -> List[Key]:
    lo, hi = z_window
    return [(i, j, a, m) for i in range(1, rank + 1) for j in range(1, rank + 1)
            for a in range(lo, hi + 1) for m in range(order + 1)]


def window_tensors(p: int, w: int, z_window: Tuple[int, int], order: int, rank: int = 1,
                   cap: int = DEFAULT_BASIS_CAP) -> List[Tensor]:
    """All degree-p elementary tensors of window monomials with total weight w."""
    monos = window_monomials(z_window, order, rank)
    wts = sorted({weight(k) for k in monos})
    wmin, wmax = wts[0], wts[-1]
    out: List[Tensor] = []

    def rec(prefix: Tuple[Key, ...], acc: int) -> None:
        left = p + 1 - len(prefix)
        if left == 0:
            if acc == w:
                out.append(prefix)
                if len(out) > cap:
                    raise BasisCapExceeded(f"more than {cap} tensors in degree {p}")
            return
        for k in monos:
            rest = acc + weight(k)
            if rest + (left - 1) * wmin <= w <= rest + (left - 1) * wmax:
                rec(prefix + (k,), rest)

    rec((), 0)
    return out


def tensor_label(t: Tensor) -> str:
    return ";".join(f"{i}.{j}.{a}.{m}" for i, j, a, m in t)


def _closed_bases(top: int, seeds: Mapping[int, List[Tensor]], cap: int) -> Dict[int, List[Tensor]]:
    """Smallest family V_p containing the seeds, closed under b, b' and rotation."""
    bases: Dict[int, List[Tensor]] = {}
    incoming: Dict[int, set] = {p: set() for p in range(top + 1)}
    for p in range(top, -1, -1):
        s = set(seeds.get(p, ())) | incoming[p]
        # rotation orbits
        for t in list(s):
            for r in range(1, p + 1):
                s.add(t[r:] + t[:r])
        if len(s) > cap:
            raise BasisCapExceeded(f"{len(s)} tensors in degree {p} exceed the cap {cap}")
        bases[p] = sorted(s)
        if p > 0:
            for t in bases[p]:
                for k, _ in _faces(t, True):
                    incoming[p - 1].add(k)
    return bases


def _matrix(src: List[Tensor], dst: List[Tensor], fn, rank: int) -> SparseMatrixQ:
    idx = {t: i for i, t in enumerate(dst)}
    ent = []
    for j, t in enumerate(src):
        img = fn(TensorChain({t: 1}, len(t) - 1, rank))
        for k, v in img._t.items():
            ent.append((idx[k], j, v))
    return SparseMatrixQ(len(dst), len(src), ent)


@dataclass(frozen=True)
class CyclicWindow:
    flavor: str = "plain"  # plain | negative | periodic | hochschild
    P: int = 2
    cols: Tuple[int, int] = (0, 2)
    weight: int = 0
    z_window: Tuple[int, int] = (0, 0)
    order: int = 0
    rank: int = 1
    basis_cap: int = DEFAULT_BASIS_CAP

    def __post_init__(self):
        if self.flavor not in ("plain", "negative", "periodic", "hochschild"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        a, b = self.cols
        if self.P < 0 or self.order < 0 or a > b or self.z_window[0] > self.z_window[1]:
            raise ValueError("empty or inverted window bounds")
        if self.flavor == "plain" and a < 0:
            raise ValueError("plain flavor needs columns j >= 0")
        if self.flavor == "negative" and b > 0:
            raise ValueError("negative flavor needs columns j <= 0")

    def as_record(self) -> dict:
        return {"flavor": self.flavor, "P": self.P, "u_range": list(self.cols), "weight": self.weight,
                "z_window": list(self.z_window), "order": self.order}


def _column(bases: Dict[int, List[Tensor]], P: int, vertical, rank: int) -> ChainComplexQ:
    labels = {p: [tensor_label(t) for t in bases[p]] for p in range(P + 1)}
    diffs = {p: _matrix(bases[p], bases[p - 1], vertical, rank) for p in range(1, P + 1)}
    return ChainComplexQ(0, P, labels, diffs)


def window_bases(w: CyclicWindow) -> Dict[int, List[Tensor]]:
    seeds = {w.P: window_tensors(w.P, w.weight, w.z_window, w.order, w.rank, w.basis_cap)}
    return _closed_bases(w.P, seeds, w.basis_cap)


def build_hochschild_window(w: CyclicWindow) -> ChainComplexQ:
    bases = window_bases(w)
    c = _column(bases, w.P, hoch_b, w.rank)
    c.unstable = frozenset(n for n in range(0, w.P + 1) if n + 1 > w.P)
    return c


def build_cyclic_window(w: CyclicWindow) -> ChainComplexQ:
    """Total complex of the (b, -b', 1-tau, N) bicomplex restricted to the window.

    Even columns carry b, odd columns minus the bar differential matched to
    the left rotation (see bar_b_left); the map from column j to j-1 is
    1 - tau when j is odd and N when j is even.
    """
    if w.flavor == "hochschild":
        return build_hochschild_window(w)
    bases = window_bases(w)
    a, b = w.cols
    rows: Dict[int, ChainComplexQ] = {}
    neg_bar = lambda c: -bar_b_left(c)  # noqa: E731
    for j in range(a, b + 1):
        rows[j] = _column(bases, w.P, hoch_b if j % 2 == 0 else neg_bar, w.rank)
    one_minus_tau = lambda c: c - cyclic_tau(c)  # noqa: E731
    horiz = {}
    for j in range(a + 1, b + 1):
        for p in range(w.P + 1):
            fn = one_minus_tau if j % 2 else cyclic_N
            horiz[(j, p)] = _matrix(bases[p], bases[p], fn, w.rank)
    tot = total_complex(rows, horiz)
    if w.flavor == "plain":
        stable_top = min(w.P, b) - 1
        unstable = [n for n in tot.degrees() if n > stable_top]
    else:
        # an unbounded column direction always reaches past the window
        unstable = list(tot.degrees())
    tot.unstable = frozenset(unstable)
    return tot


def cyclic_window_betti(w: CyclicWindow, parallel: bool = False) -> BettiReport:
    return homology_ranks(build_cyclic_window(w), parallel=parallel)


def periodic_shift_check(w: CyclicWindow) -> bool:
    """Betti numbers of a periodic window agree with those of the window shifted by two columns."""
    if w.flavor != "periodic":
        raise ValueError("shift check is for the periodic flavor")
    a, b = w.cols
    shifted = CyclicWindow("periodic", w.P, (a + 2, b + 2), w.weight, w.z_window, w.order, w.rank, w.basis_cap)
    r0 = cyclic_window_betti(w)
    r1 = cyclic_window_betti(shifted)
    return all(r0.betti(n) == r1.betti(n + 2) for n in r0.records) and \
        all(r1.betti(n) == r0.betti(n - 2) for n in r1.records)


def boundary_solve(c: TensorChain, z_window: Tuple[int, int], order: int,
                   cap: int = DEFAULT_BASIS_CAP) -> Optional[TensorChain]:
    """Find x of degree deg(c)+1 in the window with b(x) = c, or None."""
    p = c.degree + 1
    src: List[Tensor] = []
    for w in sorted(c.weight_split()) or [0]:
        src.extend(window_tensors(p, w, z_window, order, c.rank, cap))
    images = [hoch_b(TensorChain({t: 1}, p, c.rank)) for t in src]
    rows_idx: Dict[Tensor, int] = {}
    for img in images:
        for k in img._t:
            rows_idx.setdefault(k, len(rows_idx))
    for k in c._t:
        if k not in rows_idx:
            rows_idx[k] = len(rows_idx)
    ent = [(rows_idx[k], j, v) for j, img in enumerate(images) for k, v in img._t.items()]
    m = SparseMatrixQ(len(rows_idx), len(src), ent)
    x = solve(m, {rows_idx[k]: v for k, v in c._t.items()})
    if x is None:
        return None
    return TensorChain({src[j]: v for j, v in x.items()}, p, c.rank)


# ---------------------------------------------------------------- symbols, epsilon


def _mono_symbol_poly(k: Key) -> Poly2:
    _, _, a, m = k
    return Poly2.monomial(a - m, m)


def symbol_one_form(c: TensorChain) -> FiberForm:
    """Sum of Smbl(P) d Smbl(Q) over the top-filtration part of a Hochschild 1-cycle.

    Matrix symbols are traced.  The top part must be a cycle of the symbol
    algebra; otherwise the class needs lower-order bookkeeping and is rejected.
    """
    if c.degree != 1:
        raise ValueError(f"expected a degree-1 chain, got degree {c.degree}")
    if hoch_b(c):
        raise NotACycle("input is not a Hochschild 1-cycle")
    if not c:
        return FiberForm()
    top = c.filtration()
    part = {t: v for t, v in c._t.items() if t[0][3] + t[1][3] == top}
    # commutator of symbols at the top order must cancel
    comm: Dict[Tuple[int, int, int, int], Fraction] = {}
    for (x, y), v in part.items():
        if x[1] == y[0]:
            k = (x[0], y[1], x[2] - x[3] + y[2] - y[3], x[3] + y[3])
            comm[k] = comm.get(k, 0) + v
        if y[1] == x[0]:
            k = (y[0], x[1], x[2] - x[3] + y[2] - y[3], x[3] + y[3])
            comm[k] = comm.get(k, 0) - v
    if any(v != 0 for v in comm.values()):
        raise MixedOrderError("top-order symbols do not commute; filtration bookkeeping required")
    w = FiberForm()
    for (x, y), v in part.items():
        if x[1] == y[0] and x[0] == y[1]:
            w = w + form_d(FiberForm(f=_mono_symbol_poly(y))) * (_mono_symbol_poly(x) * v)
    return w


def hkr_form(c: TensorChain) -> FiberForm:
    """Commutative a (x) b -> a db; identical to symbol_one_form on order-zero chains."""
    return symbol_one_form(c)


def epsilon_eval(c: TensorChain) -> Fraction:
    if not c:
        if c.degree != 1:
            raise ValueError("expected a degree-1 chain")
        return Fraction(0)
    return zero_section_integral(hodge_star(symbol_one_form(c)))


# ---------------------------------------------------------------- E1 page


def _e1_basis(w: int, S: int) -> Dict[int, List[Tuple[str, int]]]:
    """Basis of the window in the log frame: (component, xi exponent)."""
    return {
        0: [("f", s) for s in range(S + 1)],
        1: [("dzz", s) for s in range(S + 2)] + [("dxi", s) for s in range(S + 2)],
        2: [("vol", s) for s in range(S + 3)],
    }


def _e1_form(w: int, comp: str, s: int) -> FiberForm:
    mono = Poly2.monomial(w, s)
    if comp == "f":
        return FiberForm(f=mono)
    if comp == "dzz":
        return FiberForm.dz_over_z(mono)
    if comp == "dxi":
        return FiberForm(dxi=mono)
    return FiberForm.volume(mono)


def _e1_coords(form: FiberForm, w: int) -> Dict[Tuple[str, int], Fraction]:
    out = {}
    for comp, poly, shift in (("f", form.f, 0), ("dzz", form.dz, 1), ("dxi", form.dxi, 0), ("vol", form.dzdxi, 1)):
        for (a, s), v in poly.shift_z(shift).items():
            if a != w:
                raise ValueError("weight not preserved")
            out[(comp, s)] = v
    return out


def e1_complex(w: int, S: int) -> ChainComplexQ:
    """Forms of weight w, xi-degree at most S + (form degree), modulo higher xi-degree, with *d*."""
    basis = _e1_basis(w, S)
    labels = {k: [f"{comp}:{s}" for comp, s in b] for k, b in basis.items()}
    diffs = {}
    for k in (1, 2):
        idx = {e: i for i, e in enumerate(basis[k - 1])}
        ent = []
        for j, (comp, s) in enumerate(basis[k]):
            for e, v in _e1_coords(e1_delta(_e1_form(w, comp, s)), w).items():
                if e in idx:  # higher xi-degree is quotiented out
                    ent.append((idx[e], j, v))
        diffs[k] = SparseMatrixQ(len(basis[k - 1]), len(basis[k]), ent)
    return ChainComplexQ(0, 2, labels, diffs)


def e1_page_ranks(weight: int, xi_max: int, z_window: Tuple[int, int] = (-4, 4)) -> BettiReport:
    """Betti numbers of the E1 window; a degree is stable when neighbouring xi-bounds agree."""
    lo, hi = z_window
    if xi_max < 0 or lo > hi:
        raise ValueError("empty window")
    if not lo <= weight <= hi:
        raise ValueError(f"weight {weight} outside the z-window [{lo}, {hi}]")
    rep = homology_ranks(e1_complex(weight, xi_max))
    if xi_max == 0:
        for r in rep.records.values():
            r.stable = False
        return rep
    below = homology_ranks(e1_complex(weight, xi_max - 1))
    above = homology_ranks(e1_complex(weight, xi_max + 1))
    for n, r in rep.records.items():
        r.stable = r.betti == below.betti(n) == above.betti(n)
    return rep
