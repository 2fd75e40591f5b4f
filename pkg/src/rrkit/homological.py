"""Finite chain complexes over Q: validation, Betti numbers, totalization.

Differentials lower degree by one.  A cochain complex is stored with its
degrees negated, so cohomological degree k lives at chain degree -k.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import SparseMatrixQ, fmt_rational, matrix_rank, parse_rational


class ShapeMismatch(ValueError):
    pass


class InvalidComplex(ValueError):
    pass


class NonAnticommuting(ValueError):
    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


@dataclass
class ChainComplexQ:
    lo: int
    hi: int
    basis: Dict[int, List[str]]
    diffs: Dict[int, SparseMatrixQ] = field(default_factory=dict)
    unstable: frozenset = frozenset()
    cohomological: bool = False

    def __post_init__(self):
        self.basis = {n: list(self.basis.get(n, [])) for n in range(self.lo, self.hi + 1)}
        for n in range(self.lo + 1, self.hi + 1):
            m = self.diffs.get(n)
            want = (len(self.basis[n - 1]), len(self.basis[n]))
            if m is None:
                self.diffs[n] = SparseMatrixQ.zero(*want)
            elif m.shape != want:
                raise ShapeMismatch(f"d_{n} has shape {m.shape}, expected {want}")
        extra = [n for n in self.diffs if not (self.lo < n <= self.hi)]
        if extra:
            raise ShapeMismatch(f"differentials outside the degree range: {sorted(extra)}")
        self.unstable = frozenset(self.unstable)

    @classmethod
    def from_cochains(cls, basis: Mapping[int, Sequence[str]], coboundary: Mapping[int, SparseMatrixQ],
                      unstable: Iterable[int] = ()) -> "ChainComplexQ":
        """Cochain complex C^k with delta_k: C^k -> C^{k+1}, stored at degree -k."""
        ks = sorted(basis)
        lo, hi = -ks[-1], -ks[0]
        diffs = {-k: coboundary[k] for k in ks if k in coboundary and k + 1 in basis}
        return cls(lo, hi, {-k: list(v) for k, v in basis.items()}, diffs,
                   frozenset(-k for k in unstable), cohomological=True)

    @classmethod
    def empty(cls) -> "ChainComplexQ":
        return cls(0, 0, {0: []})

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def d(self, n: int) -> SparseMatrixQ:
        """d_n: C_n -> C_{n-1} (zero outside the stored range)."""
        if n in self.diffs:
            return self.diffs[n]
        return SparseMatrixQ.zero(self.dim(n - 1), self.dim(n))

    def total_dim(self) -> int:
        return sum(len(b) for b in self.basis.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * self.dim(n) for n in self.degrees())


@dataclass
class ValidationResult:
    ok: bool
    witness: Optional[Tuple[int, str, Dict[str, Fraction]]] = None

    def __bool__(self) -> bool:
        return self.ok


def complex_validate(c: ChainComplexQ) -> ValidationResult:
    for n in range(c.lo + 2, c.hi + 1):
        dd = c.d(n - 1) @ c.d(n)
        if not dd.is_zero():
            for col, image in sorted(dd.columns().items()):
                labels = c.basis[n - 2]
                return ValidationResult(False, (n, c.basis[n][col], {labels[i]: v for i, v in sorted(image.items())}))
    return ValidationResult(True)


@dataclass
class DegreeRecord:
    degree: int
    dim: int
    rank: int  # rank of the outgoing differential d_n
    kernel: int
    betti: int
    stable: bool


@dataclass
class BettiReport:
    records: Dict[int, DegreeRecord]
    cohomological: bool = False

    def degrees(self) -> List[int]:
        ds = sorted(self.records)
        return list(reversed(ds)) if self.cohomological else ds

    def betti(self, n: int) -> int:
        return self.records[n].betti if n in self.records else 0

    def sequence(self) -> List[int]:
        """Betti numbers in reading order (ascending cohomological degree for cochains)."""
        return [self.records[n].betti for n in self.degrees()]

    def unstable_degrees(self) -> List[int]:
        return [n for n in self.degrees() if not self.records[n].stable]

    def stable_total(self) -> int:
        return sum(r.betti for r in self.records.values() if r.stable)

    def total(self) -> int:
        return sum(r.betti for r in self.records.values())

    def as_records(self) -> List[dict]:
        out = []
        for n in self.degrees():
            r = self.records[n]
            out.append({"degree": -n if self.cohomological else n, "dim": r.dim, "rank": r.rank,
                        "kernel": r.kernel, "betti": r.betti, "stable": r.stable})
        return out


def _ranks(c: ChainComplexQ, parallel: bool) -> Dict[int, int]:
    ns = [n for n in range(c.lo + 1, c.hi + 1)]
    mats = [c.d(n) for n in ns]
    if parallel and len(mats) > 1:
        with ProcessPoolExecutor() as ex:
            ranks = list(ex.map(matrix_rank, mats))
    else:
        ranks = [matrix_rank(m) for m in mats]
    return dict(zip(ns, ranks))


def homology_ranks(c: ChainComplexQ, parallel: bool = False, check: bool = True) -> BettiReport:
    if check:
        v = complex_validate(c)
        if not v:
            raise InvalidComplex(f"d∘d != 0, witness {v.witness}")
    ranks = _ranks(c, parallel)
    recs = {}
    for n in c.degrees():
        r_out = ranks.get(n, 0)
        r_in = ranks.get(n + 1, 0)
        ker = c.dim(n) - r_out
        recs[n] = DegreeRecord(n, c.dim(n), r_out, ker, ker - r_in, n not in c.unstable)
    return BettiReport(recs, c.cohomological)


def total_complex(rows: Mapping[int, ChainComplexQ], horizontal: Mapping[Tuple[int, int], SparseMatrixQ],
                  unstable: Iterable[int] = ()) -> ChainComplexQ:
    """Totalize a bicomplex given by columns j and maps h[(j, p)]: col j deg p -> col j-1 deg p.

    Squares must anticommute; the total differential is the plain sum.
    """
    if not rows:
        return ChainComplexQ.empty()
    cols = sorted(rows)

    def h(j: int, p: int) -> Optional[SparseMatrixQ]:
        m = horizontal.get((j, p))
        if m is None or j - 1 not in rows:
            return None
        want = (rows[j - 1].dim(p), rows[j].dim(p))
        if m.shape != want:
            raise ShapeMismatch(f"h[{j},{p}] has shape {m.shape}, expected {want}")
        return m

    for j in cols:
        if j - 1 not in rows:
            continue
        for p in rows[j].degrees():
            hp = h(j, p)
            if hp is None:
                continue
            lhs = rows[j - 1].d(p) @ hp
            hq = h(j, p - 1)
            if hq is not None:
                lhs = lhs + hq @ rows[j].d(p)
            if not lhs.is_zero():
                col, image = next(iter(sorted(lhs.columns().items())))
                raise NonAnticommuting(f"square at column {j}, degree {p} does not anticommute",
                                       (j, p, rows[j].basis[p][col], image))

    lo = min(rows[j].lo + j for j in cols)
    hi = max(rows[j].hi + j for j in cols)
    index: Dict[int, Dict[Tuple[int, int], int]] = {n: {} for n in range(lo, hi + 1)}
    basis: Dict[int, List[str]] = {n: [] for n in range(lo, hi + 1)}
    for n in range(lo, hi + 1):
        for j in cols:
            p = n - j
            if rows[j].lo <= p <= rows[j].hi:
                index[n][(j, p)] = len(basis[n])
                basis[n].extend(f"{j}|{lab}" for lab in rows[j].basis[p])
    diffs = {}
    for n in range(lo + 1, hi + 1):
        ent = []
        for (j, p), off in index[n].items():
            dv = rows[j].d(p)
            if (j, p - 1) in index[n - 1]:
                toff = index[n - 1][(j, p - 1)]
                ent.extend((toff + i, off + k, v) for i, k, v in dv.entries())
            hp = h(j, p)
            if hp is not None and (j - 1, p) in index[n - 1]:
                toff = index[n - 1][(j - 1, p)]
                ent.extend((toff + i, off + k, v) for i, k, v in hp.entries())
        diffs[n] = SparseMatrixQ(len(basis[n - 1]), len(basis[n]), ent)
    return ChainComplexQ(lo, hi, basis, diffs, frozenset(unstable))


# ---------------------------------------------------------------- text format


def dump_complex(c: ChainComplexQ) -> str:
    lines = [f"range {c.lo} {c.hi}"]
    for n in c.degrees():
        lines.append(" ".join(["basis", str(n)] + c.basis[n]))
    if c.unstable:
        lines.append(" ".join(["unstable"] + [str(n) for n in sorted(c.unstable)]))
    for n in range(c.lo + 1, c.hi + 1):
        for i, j, v in c.d(n).entries():
            lines.append(f"{n} {i} {j} {fmt_rational(v)}")
    return "\n".join(lines) + "\n"


def load_complex(text: str) -> ChainComplexQ:
    """Read ``basis <deg> labels...`` lines and ``<deg> <row> <col> <p/q>`` entries of d_deg."""
    basis: Dict[int, List[str]] = {}
    entries: Dict[int, list] = {}
    unstable: List[int] = []
    rng = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "basis":
                basis[int(parts[1])] = parts[2:]
            elif parts[0] == "range":
                rng = (int(parts[1]), int(parts[2]))
            elif parts[0] == "unstable":
                unstable.extend(int(x) for x in parts[1:])
            else:
                n, i, j = (int(x) for x in parts[:3])
                if len(parts) != 4:
                    raise ValueError("expected 'deg row col p/q'")
                entries.setdefault(n, []).append((i, j, parse_rational(parts[3])))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if rng is None:
        if not basis:
            return ChainComplexQ.empty()
        rng = (min(basis), max(basis))
    lo, hi = rng
    diffs = {}
    for n, ent in entries.items():
        if not (lo < n <= hi):
            raise ShapeMismatch(f"entry for d_{n} outside degree range")
        diffs[n] = SparseMatrixQ(len(basis.get(n - 1, [])), len(basis.get(n, [])), ent)
    return ChainComplexQ(lo, hi, basis, diffs, frozenset(unstable))
