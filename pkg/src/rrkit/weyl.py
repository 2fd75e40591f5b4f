"""Matrix differential operators on the circle with Laurent coefficients.

An operator of rank r is a finite sum of terms c * z^a E(i,j) d^m kept in
normal order (powers of z to the left of powers of d = d/dz).  Products are
normal ordered with the Leibniz rule

    d^m z^b = sum_k C(m, k) b(b-1)...(b-k+1) z^(b-k) d^(m-k).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterator, Mapping, Optional, Tuple

from .exact import LaurentPoly, _join_signed, _signed_term, falling, fmt_rational, q

ORDER_CAP = 16
Z_EXP_LIMIT = 10**6

Key = Tuple[int, int, int, int]  # (row, col, z exponent, d order); rows/cols 1-based


class RankMismatch(ValueError):
    pass


class OrderCapExceeded(ArithmeticError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))
        self.message = message
        self.text = text
        self.pos = pos


class DiffOp:
    __slots__ = ("rank", "_t")

    def __init__(self, terms: Optional[Mapping[Key, object]] = None, rank: int = 1):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        t = {}
        for (i, j, a, m), v in (terms or {}).items():
            if not (1 <= i <= rank and 1 <= j <= rank):
                raise ValueError(f"matrix index ({i},{j}) outside rank {rank}")
            if m < 0:
                raise ValueError("negative d-order")
            v = q(v)
            if v != 0:
                t[(i, j, a, m)] = v
        self._t = t

    # construction -------------------------------------------------------

    @classmethod
    def monomial(cls, a: int = 0, m: int = 0, coeff=1, i: int = 1, j: int = 1, rank: int = 1) -> "DiffOp":
        return cls({(i, j, a, m): coeff}, rank)

    @classmethod
    def scalar(cls, c, rank: int = 1) -> "DiffOp":
        return cls({(i, i, 0, 0): c for i in range(1, rank + 1)}, rank)

    @classmethod
    def from_laurent(cls, f: LaurentPoly, m: int = 0, rank: int = 1) -> "DiffOp":
        """f(z) d^m times the identity matrix."""
        return cls({(i, i, a, m): c for i in range(1, rank + 1) for a, c in f}, rank)

    @classmethod
    def zero(cls, rank: int = 1) -> "DiffOp":
        return cls({}, rank)

    # access -------------------------------------------------------------

    @property
    def terms(self) -> Dict[Key, Fraction]:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def __iter__(self) -> Iterator[Tuple[Key, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def order(self) -> int:
        """Highest d-power present; -1 for the zero operator."""
        return max((k[3] for k in self._t), default=-1)

    def coefficient(self, m: int, i: int = 1, j: int = 1) -> LaurentPoly:
        return LaurentPoly({a: v for (ii, jj, a, mm), v in self._t.items() if mm == m and ii == i and jj == j})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.rank == other.rank and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self._t.items())))

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "DiffOp") -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, 0) + v
        return DiffOp(out, self.rank)

    def __neg__(self) -> "DiffOp":
        return DiffOp({k: -v for k, v in self._t.items()}, self.rank)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __mul__(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            return op_mul(self, other)
        c = q(other)
        return DiffOp({k: v * c for k, v in self._t.items()}, self.rank)

    def __rmul__(self, other) -> "DiffOp":
        c = q(other)
        return DiffOp({k: v * c for k, v in self._t.items()}, self.rank)

    def __repr__(self) -> str:
        return f"DiffOp({op_print(self)!r}, rank={self.rank})"

    def __str__(self) -> str:
        return op_print(self)


def mono_mul(x: Key, y: Key, order_cap: int = ORDER_CAP) -> Dict[Key, int]:
    """Normal-ordered product of two monomials z^a E_ij d^m and z^b E_kl d^n."""
    i, j, a, m = x
    k, l, b, n = y
    if j != k:
        return {}
    if m + n > order_cap:
        raise OrderCapExceeded(f"order {m + n} exceeds cap {order_cap}")
    out = {}
    for s in range(m + 1):
        c = comb(m, s) * falling(b, s)
        if c == 0:
            break
        out[(i, l, a + b - s, m + n - s)] = c
    return out


def op_mul(a: DiffOp, b: DiffOp, order_cap: int = ORDER_CAP) -> DiffOp:
    a._check(b)
    out: Dict[Key, Fraction] = {}
    for x, u in a._t.items():
        for y, v in b._t.items():
            for key, c in mono_mul(x, y, order_cap).items():
                out[key] = out.get(key, 0) + u * v * c
    return DiffOp(out, a.rank)


def op_comm(a: DiffOp, b: DiffOp, order_cap: int = ORDER_CAP) -> DiffOp:
    return op_mul(a, b, order_cap) - op_mul(b, a, order_cap)


def weight(key: Key) -> int:
    return key[2] - key[3]


def op_weight_split(a: DiffOp) -> Dict[int, DiffOp]:
    """Components of fixed weight w(z^a d^m) = a - m."""
    parts: Dict[int, Dict[Key, Fraction]] = {}
    for k, v in a._t.items():
        parts.setdefault(weight(k), {})[k] = v
    return {w: DiffOp(t, a.rank) for w, t in sorted(parts.items())}


# ---------------------------------------------------------------- symbols


SKey = Tuple[int, int, int, int]  # (row, col, z exponent, xi exponent)


class SymbolPoly:
    """Matrix-valued function on T*S^1, Laurent in z and polynomial in xi."""

    __slots__ = ("rank", "_t")

    def __init__(self, terms: Optional[Mapping[SKey, object]] = None, rank: int = 1):
        self.rank = rank
        t = {}
        for k, v in (terms or {}).items():
            if k[3] < 0:
                raise ValueError("negative xi exponent")
            v = q(v)
            if v != 0:
                t[k] = v
        self._t = t

    @property
    def terms(self) -> Dict[SKey, Fraction]:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolPoly):
            return NotImplemented
        return self.rank == other.rank and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self._t.items())))

    def __add__(self, other: "SymbolPoly") -> "SymbolPoly":
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, 0) + v
        return SymbolPoly(out, self.rank)

    def __mul__(self, other: "SymbolPoly") -> "SymbolPoly":
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")
        out: Dict[SKey, Fraction] = {}
        for (i, j, a, s), u in self._t.items():
            for (k, l, b, t), v in other._t.items():
                if j == k:
                    key = (i, l, a + b, s + t)
                    out[key] = out.get(key, 0) + u * v
        return SymbolPoly(out, self.rank)

    def xi_degrees(self) -> set:
        return {k[3] for k in self._t}

    def entry(self, i: int = 1, j: int = 1):
        from .exact import Poly2

        return Poly2({(a, s): v for (ii, jj, a, s), v in self._t.items() if (ii, jj) == (i, j)})

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for (i, j, a, s), v in self.items():
            mono = " ".join(p for p in (_zpart(a), _xipart(s), _matpart(i, j, self.rank)) if p)
            parts.append(_signed_term(v, mono))
        return _join_signed(parts)

    def __repr__(self) -> str:
        return f"SymbolPoly({str(self)!r})"


def mono_symbol(key: Key) -> SKey:
    """Top symbol of z^a E_ij d^m under d -> xi/z."""
    i, j, a, m = key
    return (i, j, a - m, m)


def op_symbol(a: DiffOp) -> SymbolPoly:
    if not a:
        raise ValueError("symbol of the zero operator is undefined")
    top = a.order()
    return SymbolPoly({mono_symbol(k): v for k, v in a._t.items() if k[3] == top}, a.rank)


def lift_symbol(key: SKey) -> Key:
    """Monomial operator whose top symbol is z^b xi^s E_ij."""
    i, j, b, s = key
    return (i, j, b + s, s)


# ---------------------------------------------------------------- text


def _zpart(a: int) -> str:
    return "" if a == 0 else ("z" if a == 1 else f"z^{a}")


def _dpart(m: int) -> str:
    return "" if m == 0 else ("d" if m == 1 else f"d^{m}")


def _xipart(s: int) -> str:
    return "" if s == 0 else ("xi" if s == 1 else f"xi^{s}")


def _matpart(i: int, j: int, rank: int) -> str:
    return "" if rank == 1 else f"E({i},{j})"


def op_print(a: DiffOp) -> str:
    if not a:
        return "0"
    parts = []
    for (i, j, e, m), v in a.items():
        mono = " ".join(p for p in (_zpart(e), _dpart(m), _matpart(i, j, a.rank)) if p)
        parts.append(_signed_term(v, mono))
    return _join_signed(parts)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.toks = []  # (kind, value, pos)
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("num", int(text[i:j]), i))
                i = j
            elif text.startswith("E(", i):
                self.toks.append(("E(", None, i))
                i += 2
            elif ch in "+-*/^(),zd":
                self.toks.append((ch, None, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", text, i)
        self.toks.append(("end", None, n))
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind: str):
        tok = self.toks[self.k]
        if tok[0] != kind:
            want = "number" if kind == "num" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[0] if tok[0] != "num" else tok[1])
            raise ParseError(f"expected {want}, got {got}", self.text, tok[2])
        self.k += 1
        return tok


def _parse_int(lx: _Lexer, signed: bool) -> Tuple[int, int]:
    tok = lx.peek()
    neg = False
    if signed and tok[0] in "+-" and len(tok[0]) == 1:
        neg = tok[0] == "-"
        lx.k += 1
    num = lx.take("num")
    return (-num[1] if neg else num[1]), tok[2]


def op_parse(text: str, rank: Optional[int] = None, order_cap: int = ORDER_CAP) -> DiffOp:
    """Parse the operator grammar, e.g. ``"1/2*z^-1 + d^2"`` or ``"z E(1,2)"``."""
    lx = _Lexer(text)
    raw = []  # (coeff, a, m, (i, j) or None, pos)
    sign = 1
    tok = lx.peek()
    if tok[0] in ("+", "-"):
        sign = -1 if tok[0] == "-" else 1
        lx.k += 1
    while True:
        start = lx.peek()[2]
        coeff = Fraction(1)
        saw_coeff = False
        if lx.peek()[0] == "num":
            num = lx.take("num")[1]
            den = 1
            if lx.peek()[0] == "/":
                lx.k += 1
                dtok = lx.take("num")
                den = dtok[1]
                if den == 0:
                    raise ParseError("zero denominator", text, dtok[2])
            coeff = Fraction(num, den)
            saw_coeff = True
            if lx.peek()[0] == "*":
                lx.k += 1
                if lx.peek()[0] not in ("z", "d", "E("):
                    t = lx.peek()
                    raise ParseError("expected z, d or E( after '*'", text, t[2])
            elif lx.peek()[0] in ("z", "d", "E("):
                t = lx.peek()
                raise ParseError("expected '*' between coefficient and monomial", text, t[2])
        a = m = 0
        mat = None
        seen = False
        if lx.peek()[0] == "z":
            lx.k += 1
            a = 1
            seen = True
            if lx.peek()[0] == "^":
                lx.k += 1
                a, p = _parse_int(lx, signed=True)
                if abs(a) > Z_EXP_LIMIT:
                    raise ParseError("exponent overflow", text, p)
        if lx.peek()[0] == "d":
            lx.k += 1
            m = 1
            seen = True
            if lx.peek()[0] == "^":
                lx.k += 1
                m, p = _parse_int(lx, signed=False)
                if m > order_cap:
                    raise ParseError("exponent overflow", text, p)
        if lx.peek()[0] == "E(":
            lx.k += 1
            i = lx.take("num")
            lx.take(",")
            j = lx.take("num")
            lx.take(")")
            if i[1] < 1 or j[1] < 1:
                raise ParseError("matrix indices start at 1", text, i[2])
            mat = (i[1], j[1])
            seen = True
        if not (seen or saw_coeff):
            t = lx.peek()
            raise ParseError("expected a term", text, t[2])
        raw.append((sign * coeff, a, m, mat, start))
        t = lx.peek()
        if t[0] == "end":
            break
        if t[0] not in ("+", "-"):
            raise ParseError(f"unexpected {t[0] if t[0] != 'num' else t[1]!r}", text, t[2])
        sign = -1 if t[0] == "-" else 1
        lx.k += 1

    need = max([max(mat) for *_, mat, _ in raw if mat] or [1])
    if rank is None:
        rank = need
    elif need > rank:
        raise ParseError(f"matrix index exceeds rank {rank}", text, 0)
    out: Dict[Key, Fraction] = {}
    for c, a, m, mat, _ in raw:
        cells = [mat] if mat else [(i, i) for i in range(1, rank + 1)]
        for i, j in cells:
            key = (i, j, a, m)
            out[key] = out.get(key, 0) + c
    return DiffOp(out, rank)
