"""Chern character, Todd class and the degree-(d+1) part of their product.

Everything is expressed in elementary symmetric generators c_i (the bundle)
and t_i (the relative tangent bundle); roots are never introduced.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .exact import _join_signed, _signed_term, fmt_rational, parse_rational, q

DEGREE_CAP = 6
RANK_CAP = 6

Gen = Tuple[str, int]  # ("c", 2) is c2
Mono = Tuple[Tuple[Gen, int], ...]  # sorted (generator, exponent) pairs


class CapExceeded(ValueError):
    pass


class MissingMonomial(KeyError):
    def __str__(self) -> str:
        return self.args[0] if self.args else "missing monomial"


def _mono(pairs: Iterable[Tuple[Gen, int]]) -> Mono:
    acc: Dict[Gen, int] = {}
    for g, e in pairs:
        acc[g] = acc.get(g, 0) + e
    return tuple(sorted((g, e) for g, e in acc.items() if e))


def mono_degree(m: Mono) -> int:
    return sum(g[1] * e for g, e in m)


def mono_str(m: Mono) -> str:
    return "*".join(f"{g[0]}{g[1]}" + (f"^{e}" if e > 1 else "") for g, e in m)


_GEN_RE = re.compile(r"^([ct])(\d+)(?:\^(\d+))?$")


def parse_monomial(text: str) -> Mono:
    text = text.strip()
    if text == "1":
        return ()
    pairs = []
    for part in text.split("*"):
        m = _GEN_RE.match(part.strip())
        if not m or int(m.group(2)) < 1:
            raise ValueError(f"bad monomial {text!r}")
        pairs.append(((m.group(1), int(m.group(2))), int(m.group(3) or 1)))
    return _mono(pairs)


def _order_key(m: Mono):
    # exponent vector over c1, c2, ..., t1, t2, ... for lexicographic order
    exps = dict(m)
    top = max(DEGREE_CAP, RANK_CAP)
    vec = [exps.get(("c", i), 0) for i in range(1, top + 1)] + [exps.get(("t", i), 0) for i in range(1, top + 1)]
    return (mono_degree(m), vec)


class CharClassExpr:
    """Rational polynomial in c_i, t_i graded by algebraic degree (c_i, t_i have degree i)."""

    __slots__ = ("_t",)

    def __init__(self, terms: Optional[Mapping[Mono, object]] = None):
        out: Dict[Mono, Fraction] = {}
        for m, v in (terms or {}).items():
            m = _mono(m)
            out[m] = out.get(m, 0) + q(v)
        self._t = {m: v for m, v in out.items() if v != 0}

    @classmethod
    def const(cls, c) -> "CharClassExpr":
        return cls({(): c})

    @classmethod
    def gen(cls, kind: str, i: int) -> "CharClassExpr":
        return cls({(((kind, i), 1),): 1})

    @property
    def terms(self) -> Dict[Mono, Fraction]:
        return dict(self._t)

    def generators(self) -> set:
        return {g for m in self._t for g, _ in m}

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CharClassExpr.const(other)
        if not isinstance(other, CharClassExpr):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    def __add__(self, other) -> "CharClassExpr":
        if not isinstance(other, CharClassExpr):
            other = CharClassExpr.const(other)
        out = dict(self._t)
        for m, v in other._t.items():
            out[m] = out.get(m, 0) + v
        return CharClassExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "CharClassExpr":
        return CharClassExpr({m: -v for m, v in self._t.items()})

    def __sub__(self, other) -> "CharClassExpr":
        return self + (-other)

    def __mul__(self, other) -> "CharClassExpr":
        if not isinstance(other, CharClassExpr):
            c = q(other)
            return CharClassExpr({m: v * c for m, v in self._t.items()})
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: "CharClassExpr", bound: Optional[int] = None) -> "CharClassExpr":
        out: Dict[Mono, Fraction] = {}
        for m, u in self._t.items():
            dm = mono_degree(m)
            for n, v in other._t.items():
                if bound is not None and dm + mono_degree(n) > bound:
                    continue
                k = _mono(m + n)
                out[k] = out.get(k, 0) + u * v
        return CharClassExpr(out)

    def component(self, k: int) -> "CharClassExpr":
        return CharClassExpr({m: v for m, v in self._t.items() if mono_degree(m) == k})

    def truncate(self, bound: int) -> "CharClassExpr":
        return CharClassExpr({m: v for m, v in self._t.items() if mono_degree(m) <= bound})

    def degrees(self) -> List[int]:
        return sorted({mono_degree(m) for m in self._t})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def specialize(self, values: Mapping[Gen, "CharClassExpr"], bound: Optional[int] = None) -> "CharClassExpr":
        """Substitute expressions for generators (others are kept)."""
        out = CharClassExpr()
        for m, v in self._t.items():
            term = CharClassExpr.const(v)
            for g, e in m:
                base = values[g] if g in values else CharClassExpr.gen(*g)
                for _ in range(e):
                    term = term.mul(base, bound)
            out = out + term
        return out

    def coefficient(self, m) -> Fraction:
        if isinstance(m, str):
            m = parse_monomial(m)
        return self._t.get(_mono(m), Fraction(0))

    def __repr__(self) -> str:
        return f"CharClassExpr({str(self)!r})"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        ms = sorted(self._t, key=_order_key, reverse=True)
        return _join_signed([_signed_term(self._t[m], mono_str(m)) for m in ms])


def _check(bound: int, rank: int) -> None:
    if bound < 0 or bound > DEGREE_CAP:
        raise CapExceeded(f"degree bound {bound} outside [0, {DEGREE_CAP}]")
    if rank < 0 or rank > RANK_CAP:
        raise CapExceeded(f"rank {rank} outside [0, {RANK_CAP}]")


def power_sums(kind: str, rank: int, bound: int) -> List[CharClassExpr]:
    """p_0 .. p_bound of the roots, via Newton's identities in the elementary classes."""
    e = [CharClassExpr.const(1)] + [CharClassExpr.gen(kind, i) if i <= rank else CharClassExpr()
                                    for i in range(1, bound + 1)]
    p = [CharClassExpr.const(rank)]
    for k in range(1, bound + 1):
        acc = e[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            acc = acc + (e[i] * p[k - i]) * ((-1) ** (i - 1))
        p.append(acc)
    return p


def chern_character(r: int, bound: int) -> CharClassExpr:
    _check(bound, r)
    p = power_sums("c", r, bound)
    out = CharClassExpr()
    for k in range(bound + 1):
        out = out + p[k] * Fraction(1, factorial(k))
    return out


def _series_inverse(a: List[Fraction], n: int) -> List[Fraction]:
    b = [Fraction(0)] * (n + 1)
    b[0] = 1 / a[0]
    for k in range(1, n + 1):
        b[k] = -sum((a[i] * b[k - i] for i in range(1, k + 1) if i < len(a)), Fraction(0)) / a[0]
    return b


def todd_log_coefficients(n: int) -> List[Fraction]:
    """a_k with log(x / (1 - e^-x)) = sum_k a_k x^k, for k <= n."""
    # (1 - e^-x) / x = sum (-1)^k x^k / (k+1)!
    den = [Fraction((-1) ** k, factorial(k + 1)) for k in range(n + 1)]
    f = _series_inverse(den, n)
    # log f with f(0) = 1: f' / f integrated
    df = [f[k + 1] * (k + 1) for k in range(n)]
    inv = _series_inverse(f, n)
    quot = [sum((df[i] * inv[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n)]
    return [Fraction(0)] + [quot[k - 1] / k for k in range(1, n + 1)]


def _exp(x: CharClassExpr, bound: int) -> CharClassExpr:
    """exp of an expression with no constant term, truncated at the degree bound."""
    out = CharClassExpr.const(1)
    term = CharClassExpr.const(1)
    for k in range(1, bound + 1):
        term = term.mul(x, bound) * Fraction(1, k)
        out = out + term
    return out


def todd_class(d: int, bound: int) -> CharClassExpr:
    _check(bound, d)
    a = todd_log_coefficients(bound)
    p = power_sums("t", d, bound)
    s = CharClassExpr()
    for k in range(1, bound + 1):
        s = s + p[k] * a[k]
    return _exp(s, bound)


def rrr_rhs(d: int, r: int, t_zero: bool = False) -> CharClassExpr:
    """Degree-(d+1) part of ch(E) Td(T) before integration along the fibers."""
    bound = d + 1
    _check(bound, max(r, d))
    td = CharClassExpr.const(1) if t_zero else todd_class(d, bound)
    return chern_character(r, bound).mul(td, bound).component(bound)


# ---------------------------------------------------------------- pushforward


def load_pushforward_table(text: str) -> Dict[Mono, Fraction]:
    table: Dict[Mono, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'monomial p/q'")
        try:
            table[parse_monomial(parts[0])] = parse_rational(parts[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return table


def apply_pushforward(e: CharClassExpr, table: Mapping[Mono, object]) -> Fraction:
    if not e.is_homogeneous():
        raise ValueError(f"expression is not homogeneous (degrees {e.degrees()})")
    tot = Fraction(0)
    for m, v in sorted(e.terms.items()):
        if m not in table:
            raise MissingMonomial(f"pushforward table has no value for {mono_str(m) or '1'}")
        tot += v * q(table[m])
    return tot


def format_table(table: Mapping[Mono, Fraction]) -> str:
    return "".join(f"{mono_str(m) or '1'} {fmt_rational(v)}\n" for m, v in sorted(table.items()))
