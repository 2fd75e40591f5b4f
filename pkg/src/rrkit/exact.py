"""Exact scalars, Laurent polynomials and sparse linear algebra over Q.

Rationals are plain :class:`fractions.Fraction` values, which already keep
lowest terms with a positive denominator.  Everything else in the package is
built from the three carriers defined here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Rational = Fraction


def q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, sep, den = text.partition("/")
    try:
        if sep:
            d = int(den)
            if d == 0:
                raise ZeroDivisionError(f"zero denominator in {text!r}")
            return Fraction(int(num), d)
        return Fraction(int(num))
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None


def _prune(coeffs: Mapping) -> dict:
    return {k: v for k, v in coeffs.items() if v != 0}


def falling(a: int, k: int) -> int:
    """a (a-1) ... (a-k+1); the k-th derivative factor of z**a."""
    out = 1
    for i in range(k):
        out *= a - i
    return out


# ---------------------------------------------------------------- Laurent


class LaurentPoly:
    """Finite Laurent polynomial in one variable z with rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None):
        c = {}
        for k, v in (coeffs or {}).items():
            v = q(v)
            if v != 0:
                c[int(k)] = v
        self._c = c

    @classmethod
    def monomial(cls, exp: int, coeff=1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, exp: int) -> Fraction:
        return self._c.get(exp, Fraction(0))

    def __iter__(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(sorted(self._c.items()))

    def __bool__(self) -> bool:
        return bool(self._c)

    def min_exp(self) -> Optional[int]:
        return min(self._c) if self._c else None

    def max_exp(self) -> Optional[int]:
        return max(self._c) if self._c else None

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.constant(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(_prune(out))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            c = q(other)
            return LaurentPoly({k: v * c for k, v in self._c.items()})
        out: Dict[int, Fraction] = {}
        for a, x in self._c.items():
            for b, y in other._c.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly(_prune(out))

    __rmul__ = __mul__

    def derive(self, n: int = 1) -> "LaurentPoly":
        return LaurentPoly({k - n: v * falling(k, n) for k, v in self._c.items()})

    def residue(self) -> Fraction:
        return self[-1]

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            parts.append(_signed_term(self._c[k], _zpow(k, "*"), sep="*"))
        return _join_signed(parts)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Read the printed form back, e.g. ``"1/2*z^2 - 3*z^-1"``."""
        from .weyl import op_parse

        op = op_parse(text)
        if op.order() > 0 or op.rank != 1:
            raise ValueError(f"not a Laurent polynomial: {text!r}")
        return op.coefficient(0)


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def laurent_derive(a: LaurentPoly) -> LaurentPoly:
    return a.derive()


def residue(a: LaurentPoly) -> Fraction:
    return a.residue()


def _zpow(k: int, sep: str = "*", var: str = "z") -> str:
    if k == 0:
        return ""
    if k == 1:
        return var
    return f"{var}^{k}"


def _signed_term(c: Fraction, mono: str, sep: str = "*", always_coeff: bool = False) -> Tuple[str, str]:
    """Split a term into (sign, body) so callers can join with ' + ' / ' - '."""
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not mono:
        return sign, fmt_rational(a)
    if a == 1 and not always_coeff:
        return sign, mono
    return sign, f"{fmt_rational(a)}{sep}{mono}"


def _join_signed(parts: Sequence[Tuple[str, str]]) -> str:
    out = []
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# ------------------------------------------------ two variables (z, xi)


class Poly2:
    """Laurent in z, polynomial in xi.  Keys are (z exponent, xi exponent)."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Mapping[Tuple[int, int], object]] = None):
        c = {}
        for (a, s), v in (coeffs or {}).items():
            if s < 0:
                raise ValueError("negative xi exponent")
            v = q(v)
            if v != 0:
                c[(int(a), int(s))] = v
        self._c = c

    @classmethod
    def monomial(cls, a: int, s: int, coeff=1) -> "Poly2":
        return cls({(a, s): coeff})

    @property
    def coeffs(self) -> Dict[Tuple[int, int], Fraction]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly2({(0, 0): other})
        if not isinstance(other, Poly2):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return Poly2(_prune(out))

    def __neg__(self) -> "Poly2":
        return Poly2({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + (-other)

    def __mul__(self, other) -> "Poly2":
        if not isinstance(other, Poly2):
            c = q(other)
            return Poly2({k: v * c for k, v in self._c.items()})
        out: Dict[Tuple[int, int], Fraction] = {}
        for (a, s), x in self._c.items():
            for (b, t), y in other._c.items():
                key = (a + b, s + t)
                out[key] = out.get(key, 0) + x * y
        return Poly2(_prune(out))

    __rmul__ = __mul__

    def shift_z(self, k: int) -> "Poly2":
        return Poly2({(a + k, s): v for (a, s), v in self._c.items()})

    def d_dz(self) -> "Poly2":
        return Poly2({(a - 1, s): v * a for (a, s), v in self._c.items()})

    def d_dxi(self) -> "Poly2":
        return Poly2({(a, s - 1): v * s for (a, s), v in self._c.items() if s > 0})

    def at_xi_zero(self) -> LaurentPoly:
        return LaurentPoly({a: v for (a, s), v in self._c.items() if s == 0})

    def xi_degree(self) -> Optional[int]:
        return max(s for _, s in self._c) if self._c else None

    def __repr__(self) -> str:
        return f"Poly2({str(self)!r})"

    def mono_str(self, a: int, s: int) -> str:
        return "*".join(p for p in (_zpow(a), _zpow(s, var="xi")) if p)

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = [_signed_term(v, self.mono_str(a, s)) for (a, s), v in sorted(self._c.items(), reverse=True)]
        return _join_signed(parts)


# ---------------------------------------------------------------- sparse


class SparseMatrixQ:
    """Rows x cols matrix stored as {(row, col): Fraction} without zeros."""

    __slots__ = ("nrows", "ncols", "_e")

    def __init__(self, nrows: int, ncols: int, entries: Iterable[Tuple[int, int, object]] = ()):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        e: Dict[Tuple[int, int], Fraction] = {}
        for i, j, v in entries:
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise IndexError(f"entry ({i}, {j}) outside {self.nrows}x{self.ncols}")
            e[(i, j)] = e.get((i, j), 0) + q(v)
        self._e = _prune(e)

    @classmethod
    def from_dict(cls, nrows: int, ncols: int, d: Mapping[Tuple[int, int], object]) -> "SparseMatrixQ":
        return cls(nrows, ncols, ((i, j, v) for (i, j), v in d.items()))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> "SparseMatrixQ":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, ((i, j, v) for i, r in enumerate(rows) for j, v in enumerate(r)))

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "SparseMatrixQ":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrixQ":
        return cls(n, n, ((i, i, 1) for i in range(n)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def entries(self) -> List[Tuple[int, int, Fraction]]:
        return [(i, j, v) for (i, j), v in sorted(self._e.items())]

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        return self._e.get(ij, Fraction(0))

    def nnz(self) -> int:
        return len(self._e)

    def is_zero(self) -> bool:
        return not self._e

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrixQ):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self._e.items():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrixQ":
        return SparseMatrixQ(self.ncols, self.nrows, ((j, i, v) for (i, j), v in self._e.items()))

    def __add__(self, other: "SparseMatrixQ") -> "SparseMatrixQ":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return SparseMatrixQ(self.nrows, self.ncols, [(i, j, v) for (i, j), v in self._e.items()] + other.entries())

    def __neg__(self) -> "SparseMatrixQ":
        return SparseMatrixQ(self.nrows, self.ncols, ((i, j, -v) for (i, j), v in self._e.items()))

    def __sub__(self, other: "SparseMatrixQ") -> "SparseMatrixQ":
        return self + (-other)

    def scale(self, c) -> "SparseMatrixQ":
        c = q(c)
        return SparseMatrixQ(self.nrows, self.ncols, ((i, j, v * c) for (i, j), v in self._e.items()))

    def __matmul__(self, other: "SparseMatrixQ") -> "SparseMatrixQ":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: Dict[int, Dict[int, Fraction]] = {}
        for (k, j), v in other._e.items():
            by_row.setdefault(k, {})[j] = v
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), a in self._e.items():
            for j, b in by_row.get(k, {}).items():
                out[(i, j)] = out.get((i, j), 0) + a * b
        return SparseMatrixQ.from_dict(self.nrows, other.ncols, out)

    def apply(self, vec: Mapping[int, object]) -> Dict[int, Fraction]:
        """Matrix times a sparse column vector given as {index: value}."""
        out: Dict[int, Fraction] = {}
        for (i, j), v in self._e.items():
            x = vec.get(j)
            if x:
                out[i] = out.get(i, 0) + v * x
        return _prune(out)

    def rows(self) -> Dict[int, Dict[int, Fraction]]:
        out: Dict[int, Dict[int, Fraction]] = {}
        for (i, j), v in self._e.items():
            out.setdefault(i, {})[j] = v
        return out

    def columns(self) -> Dict[int, Dict[int, Fraction]]:
        out: Dict[int, Dict[int, Fraction]] = {}
        for (i, j), v in self._e.items():
            out.setdefault(j, {})[i] = v
        return out

    def __repr__(self) -> str:
        return f"SparseMatrixQ({self.nrows}x{self.ncols}, nnz={len(self._e)})"


# Fraction-free elimination.  Rows are scaled to primitive integer vectors and
# combined as p*row - a*pivot followed by content division; when two rows
# compete for a pivot column the shorter row keeps it.


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    lead = row[min(row)]
    if lead < 0:
        row = {k: -v for k, v in row.items()}
    return row


def _int_row(row: Mapping[int, Fraction]) -> Dict[int, int]:
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return _primitive({k: int(v * den) for k, v in row.items() if v != 0})


def _reduce(row: Dict[int, int], piv: Dict[int, int], col: int) -> Dict[int, int]:
    a = row[col]
    p = piv[col]
    g = gcd(a, p)
    ca, cp = p // g, a // g
    out = {k: v * ca for k, v in row.items()}
    for k, v in piv.items():
        nv = out.get(k, 0) - cp * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return _primitive(out) if out else out


def _echelon(rows: Iterable[Mapping[int, Fraction]]) -> Dict[int, Dict[int, int]]:
    """Row echelon form keyed by pivot (leading) column."""
    pivots: Dict[int, Dict[int, int]] = {}
    work = [_int_row(r) for r in rows if any(v != 0 for v in r.values())]
    work.sort(key=len)
    stack = list(reversed(work))
    while stack:
        row = stack.pop()
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = row
                break
            if len(row) < len(piv):
                pivots[lead] = row
                row, piv = piv, row
            row = _reduce(row, piv, lead)
    return pivots


def _full_reduce(pivots: Dict[int, Dict[int, int]]) -> Dict[int, Dict[int, int]]:
    cols = sorted(pivots, reverse=True)
    done: Dict[int, Dict[int, int]] = {}
    for c in cols:
        row = pivots[c]
        for c2 in sorted(done):
            if c2 in row:
                row = _reduce(row, done[c2], c2)
        done[c] = row
    return done


def matrix_rank(m: SparseMatrixQ) -> int:
    # eliminate along the shorter side
    src = m if m.nrows <= m.ncols else m.transpose()
    return len(_echelon(src.rows().values()))


def matrix_rank_kernel(m: SparseMatrixQ) -> Tuple[int, List[List[Fraction]]]:
    """Exact rank and a kernel basis (each vector of length ``m.ncols``)."""
    pivots = _full_reduce(_echelon(m.rows().values()))
    rank = len(pivots)
    free = [j for j in range(m.ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for c, row in pivots.items():
            x = row.get(f)
            if x:
                v[c] = Fraction(-x, row[c])
        basis.append(v)
    return rank, basis


def solve(m: SparseMatrixQ, rhs: Mapping[int, object]) -> Optional[Dict[int, Fraction]]:
    """Some x with m x = rhs, as a sparse dict, or None when inconsistent."""
    n = m.ncols
    cols = m.columns()
    rows: Dict[int, Dict[int, Fraction]] = {}
    for j, col in cols.items():
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    for i, v in rhs.items():
        v = q(v)
        if v != 0:
            rows.setdefault(i, {})[n] = v
    pivots = _full_reduce(_echelon(rows.values()))
    if n in pivots:
        return None
    x: Dict[int, Fraction] = {}
    for c, row in pivots.items():
        t = row.get(n)
        if t:
            x[c] = Fraction(t, row[c])
    return x
