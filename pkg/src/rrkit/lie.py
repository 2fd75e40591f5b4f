"""Lie algebra cochains, the Koszul resolution and the Kac-Peterson cocycle."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import SparseMatrixQ, falling, parse_rational, q
from .homological import BettiReport, ChainComplexQ, homology_ranks
from .hochschild import NotACycle, TensorChain, hoch_b
from .weyl import DiffOp, RankMismatch

CE_DIM_CAP = 9
KOSZUL_BOUND_CAP = 6

Matrix = List[List[Fraction]]


class InvalidLieAlgebra(ValueError):
    pass


class NotARepresentation(ValueError):
    pass


class CapExceeded(ValueError):
    pass


def _sort_sign(word: Sequence) -> Tuple[int, tuple]:
    """Sort a word of distinct letters, returning the permutation sign (0 on repeats)."""
    w = list(word)
    if len(set(w)) != len(w):
        return 0, ()
    sign = 1
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            w[j - 1], w[j] = w[j], w[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(w)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m)] for i in range(n)]


def _mat_comm(a: Matrix, b: Matrix) -> Matrix:
    ab, ba = _matmul(a, b), _matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


@dataclass
class LieAlgebraData:
    """Structure constants [e_i, e_j] = sum_k c[(k, i, j)] e_k, zero-based indices."""

    labels: List[str]
    consts: Dict[Tuple[int, int, int], Fraction]
    matrices: Optional[List[Matrix]] = None  # a faithful matrix realization, when known
    name: str = ""
    check_jacobi: bool = True  # off only to build deliberately broken data
    _br: Dict[Tuple[int, int], Dict[int, Fraction]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        full: Dict[Tuple[int, int, int], Fraction] = {}
        for (k, i, j), v in self.consts.items():
            if not all(0 <= x < n for x in (k, i, j)):
                raise InvalidLieAlgebra(f"index out of range in c^{k}_{i}{j}")
            v = q(v)
            if v == 0:
                continue
            if i == j:
                raise InvalidLieAlgebra(f"[e{i}, e{i}] must vanish")
            for key, val in (((k, i, j), v), ((k, j, i), -v)):
                if key in full and full[key] != val:
                    raise InvalidLieAlgebra(f"structure constants not antisymmetric at {key}")
                full[key] = val
        self.consts = full
        self._br = {}
        for (k, i, j), v in full.items():
            self._br.setdefault((i, j), {})[k] = v
        bad = self.jacobi_witness() if self.check_jacobi else None
        if bad is not None:
            raise InvalidLieAlgebra(f"Jacobi identity fails for basis triple {bad}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        return self._br.get((i, j), {})

    def bracket_vec(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for i, u in x.items():
            for j, v in y.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, 0) + u * v * c
        return {k: v for k, v in out.items() if v != 0}

    def jacobi_witness(self) -> Optional[Tuple[int, int, int]]:
        n = self.dim
        for a, b, c in combinations(range(n), 3):
            tot: Dict[int, Fraction] = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for k, v in self.bracket_vec(self.bracket(x, y), {z: Fraction(1)}).items():
                    tot[k] = tot.get(k, 0) + v
            if any(v != 0 for v in tot.values()):
                return (a, b, c)
        return None

    def adjoint(self) -> List[Matrix]:
        n = self.dim
        mats = []
        for a in range(n):
            m = [[Fraction(0)] * n for _ in range(n)]
            for b in range(n):
                for c, v in self.bracket(a, b).items():
                    m[c][b] = v
            mats.append(m)
        return mats


def gl(n: int) -> LieAlgebraData:
    idx = [(a, b) for a in range(n) for b in range(n)]
    pos = {e: i for i, e in enumerate(idx)}
    consts = {}
    for i, (a, b) in enumerate(idx):
        for j, (c, d) in enumerate(idx):
            # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
            if b == c:
                k = pos[(a, d)]
                consts[(k, i, j)] = consts.get((k, i, j), 0) + 1
            if d == a:
                k = pos[(c, b)]
                consts[(k, i, j)] = consts.get((k, i, j), 0) - 1
    consts = {k: v for k, v in consts.items() if v != 0 and k[1] < k[2]}
    mats = []
    for a, b in idx:
        m = [[Fraction(0)] * n for _ in range(n)]
        m[a][b] = Fraction(1)
        mats.append(m)
    return LieAlgebraData([f"E{a + 1}{b + 1}" for a, b in idx], consts, mats, f"gl{n}")


def sl2() -> LieAlgebraData:
    h = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]]
    e = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
    f = [[Fraction(0), Fraction(0)], [Fraction(1), Fraction(0)]]
    # basis h, e, f
    consts = {(1, 0, 1): 2, (2, 0, 2): -2, (0, 1, 2): 1}
    return LieAlgebraData(["h", "e", "f"], consts, [h, e, f], "sl2")


def abelian(n: int) -> LieAlgebraData:
    return LieAlgebraData([f"x{i + 1}" for i in range(n)], {}, None, f"ab{n}")


BUILTINS: Dict[str, Callable[[], LieAlgebraData]] = {
    "gl1": lambda: gl(1),
    "gl2": lambda: gl(2),
    "gl3": lambda: gl(3),
    "sl2": sl2,
    "ab1": lambda: abelian(1),
    "ab2": lambda: abelian(2),
    "ab3": lambda: abelian(3),
}


def lie_algebra(name: str) -> LieAlgebraData:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown Lie algebra {name!r}; built-ins: {', '.join(BUILTINS)}") from None


def load_structure_constants(text: str, labels: Optional[List[str]] = None) -> LieAlgebraData:
    """Lines "k i j p/q" (1-based) meaning c^k_ij; an optional "dim n" line fixes the dimension."""
    consts: Dict[Tuple[int, int, int], Fraction] = {}
    dim = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "dim":
                dim = int(parts[1])
                continue
            if len(parts) != 4:
                raise ValueError("expected 'k i j p/q'")
            k, i, j = (int(x) - 1 for x in parts[:3])
            if min(k, i, j) < 0:
                raise ValueError("indices are 1-based")
            v = parse_rational(parts[3])
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if (k, i, j) in consts and consts[(k, i, j)] != v:
            raise InvalidLieAlgebra(f"line {lineno}: conflicting value for c^{k + 1}_{i + 1}{j + 1}")
        consts[(k, i, j)] = v
        dim = max(dim, k + 1, i + 1, j + 1)
    return LieAlgebraData(labels or [f"x{i + 1}" for i in range(dim)], consts)


# ---------------------------------------------------------------- CE cochains

# A k-cochain with values in a module V is a dict {(sorted index tuple, v index): value},
# read as an alternating multilinear map on basis vectors.


def _validate_module(g: LieAlgebraData, rho: Sequence[Matrix]) -> None:
    if len(rho) != g.dim:
        raise NotARepresentation(f"{len(rho)} action matrices for a {g.dim}-dimensional algebra")
    m = len(rho[0]) if rho else 0
    for i, j in combinations(range(g.dim), 2):
        lhs = _mat_comm(rho[i], rho[j])
        rhs = [[sum((c * rho[k][r][s] for k, c in g.bracket(i, j).items()), Fraction(0)) for s in range(m)]
               for r in range(m)]
        if lhs != rhs:
            raise NotARepresentation(f"action fails the bracket relation for basis pair ({i}, {j})")


def _eval(l: Mapping, word: Sequence[int], v: int) -> Fraction:
    s, w = _sort_sign(word)
    if s == 0:
        return Fraction(0)
    return s * l.get((w, v), Fraction(0))


def ce_differential(l: Mapping[Tuple[tuple, int], object], k: int, g: LieAlgebraData,
                    module: Optional[Sequence[Matrix]] = None, validate: bool = True) -> Dict[Tuple[tuple, int], Fraction]:
    """Cartan differential of a k-cochain; module=None means trivial coefficients."""
    l = {key: q(v) for key, v in l.items()}
    if module is not None and validate:
        _validate_module(g, module)
    mdim = len(module[0]) if module else 1
    out: Dict[Tuple[tuple, int], Fraction] = {}
    for word in combinations(range(g.dim), k + 1):
        for nu in range(mdim):
            tot = Fraction(0)
            if module is not None:
                for i, x in enumerate(word):
                    rest = word[:i] + word[i + 1:]
                    sign = 1 if i % 2 == 0 else -1
                    row = module[x][nu]
                    for mu in range(mdim):
                        if row[mu]:
                            tot += sign * row[mu] * _eval(l, rest, mu)
            for i, j in combinations(range(k + 1), 2):
                sign = 1 if (i + j) % 2 == 0 else -1
                rest = word[:i] + word[i + 1:j] + word[j + 1:]
                for c, v in g.bracket(word[i], word[j]).items():
                    tot += sign * v * _eval(l, (c,) + rest, nu)
            if tot:
                out[(word, nu)] = tot
    return out


def cochain_from_function(g: LieAlgebraData, k: int, fn: Callable[..., object]) -> Dict[Tuple[tuple, int], Fraction]:
    """Trivial-coefficient cochain whose value on sorted basis words is fn(*indices)."""
    out = {}
    for word in combinations(range(g.dim), k):
        v = q(fn(*word))
        if v:
            out[(word, 0)] = v
    return out


def trace_cochain(g: LieAlgebraData) -> Dict[Tuple[tuple, int], Fraction]:
    mats = _need_matrices(g)
    return cochain_from_function(g, 1, lambda i: sum(mats[i][r][r] for r in range(len(mats[i]))))


def cubic_trace_cochain(g: LieAlgebraData) -> Dict[Tuple[tuple, int], Fraction]:
    """(x, y, z) -> tr(x [y, z])."""
    mats = _need_matrices(g)

    def fn(i, j, k):
        m = _matmul(mats[i], _mat_comm(mats[j], mats[k]))
        return sum(m[r][r] for r in range(len(m)))

    return cochain_from_function(g, 3, fn)


def _need_matrices(g: LieAlgebraData) -> List[Matrix]:
    if g.matrices is None:
        raise ValueError(f"{g.name or 'algebra'} has no matrix realization")
    return g.matrices


def ce_complex(g: LieAlgebraData, module: Optional[Sequence[Matrix]] = None) -> ChainComplexQ:
    if g.dim > CE_DIM_CAP:
        raise CapExceeded(f"dimension {g.dim} exceeds the cap {CE_DIM_CAP}")
    if module is not None:
        _validate_module(g, module)
    mdim = len(module[0]) if module else 1
    basis = {k: [(w, v) for w in combinations(range(g.dim), k) for v in range(mdim)] for k in range(g.dim + 1)}
    labels = {k: ["^".join(g.labels[i] for i in w) + (f"@{v}" if module else "") or "1" for w, v in b]
              for k, b in basis.items()}
    cob = {}
    for k in range(g.dim):
        idx = {e: i for i, e in enumerate(basis[k + 1])}
        ent = []
        for j, e in enumerate(basis[k]):
            for key, v in ce_differential({e: 1}, k, g, module, validate=False).items():
                ent.append((idx[key], j, v))
        cob[k] = SparseMatrixQ(len(basis[k + 1]), len(basis[k]), ent)
    return ChainComplexQ.from_cochains(labels, cob)


def ce_betti(g: LieAlgebraData, parallel: bool = False) -> BettiReport:
    return homology_ranks(ce_complex(g), parallel=parallel)


# ---------------------------------------------------------------- Koszul


def _pbw_times(g: LieAlgebraData):
    @lru_cache(maxsize=None)
    def times(u: tuple, x: int) -> Tuple[Tuple[tuple, Fraction], ...]:
        """Normal-ordered u * e_x for a sorted PBW word u."""
        if not u or u[-1] <= x:
            return ((u + (x,), Fraction(1)),)
        head, last = u[:-1], u[-1]
        out: Dict[tuple, Fraction] = {}
        # head last x = (head x) last + head [last, x]
        for w, c in times(head, x):
            for ww, d in times(w, last):
                out[ww] = out.get(ww, 0) + c * d
        for k, c in g.bracket(last, x).items():
            for w, d in times(head, k):
                out[w] = out.get(w, 0) + c * d
        return tuple((w, v) for w, v in out.items() if v != 0)

    return times


def _pbw_words(n: int, length: int) -> List[tuple]:
    from itertools import combinations_with_replacement

    return list(combinations_with_replacement(range(n), length))


def koszul_build(g: LieAlgebraData, bound: int) -> ChainComplexQ:
    """U(g) (x) Lambda^k g with PBW length + k <= bound; homology is Q in degree 0."""
    if bound < 0 or bound > KOSZUL_BOUND_CAP:
        raise CapExceeded(f"PBW bound {bound} outside [0, {KOSZUL_BOUND_CAP}]")
    n = g.dim
    times = _pbw_times(g)
    top = min(bound, n)
    basis: Dict[int, List[Tuple[tuple, tuple]]] = {}
    for k in range(top + 1):
        basis[k] = [(u, w) for L in range(bound - k + 1) for u in _pbw_words(n, L)
                    for w in combinations(range(n), k)]
    diffs = {}
    for k in range(1, top + 1):
        idx = {e: i for i, e in enumerate(basis[k - 1])}
        ent = []
        for col, (u, w) in enumerate(basis[k]):
            img: Dict[Tuple[tuple, tuple], Fraction] = {}
            for i, x in enumerate(w):
                sign = 1 if i % 2 == 0 else -1
                rest = w[:i] + w[i + 1:]
                for uu, c in times(u, x):
                    img[(uu, rest)] = img.get((uu, rest), 0) + sign * c
            for i, j in combinations(range(k), 2):
                sign = 1 if (i + j) % 2 == 0 else -1
                rest = w[:i] + w[i + 1:j] + w[j + 1:]
                for c, v in g.bracket(w[i], w[j]).items():
                    s, ww = _sort_sign((c,) + rest)
                    if s:
                        img[(u, ww)] = img.get((u, ww), 0) + sign * s * v
            ent.extend((idx[key], col, v) for key, v in img.items() if v != 0)
        diffs[k] = SparseMatrixQ(len(basis[k - 1]), len(basis[k]), ent)

    def lab(u, w):
        return ".".join(g.labels[i] for i in u) + "|" + "^".join(g.labels[i] for i in w)

    return ChainComplexQ(0, top, {k: [lab(u, w) for u, w in b] for k, b in basis.items()}, diffs)


# ---------------------------------------------------------------- Kac-Peterson


def _psi_mono(x, y) -> Fraction:
    i, j, alpha, m = x
    k, l, beta, n = y
    if j != k or i != l or alpha - n - 1 + beta - m != -1:
        return Fraction(0)
    c = falling(alpha, n + 1) * falling(beta, m)
    if c == 0:
        return Fraction(0)
    return Fraction(factorial(m) * factorial(n) * c, factorial(m + n + 1))


def kp_psi(a: DiffOp, b: DiffOp) -> Fraction:
    """Psi(f d^m, g d^n) = m! n! / (m+n+1)! Res Tr(f^(n+1) g^(m)), extended bilinearly."""
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs rank {b.rank}")
    tot = Fraction(0)
    for x, u in a.items():
        for y, v in b.items():
            tot += u * v * _psi_mono(x, y)
    return tot


def psi_on_hochschild_cycle(c: TensorChain) -> Fraction:
    if c.degree != 1:
        raise ValueError(f"expected a degree-1 chain, got degree {c.degree}")
    if hoch_b(c):
        raise NotACycle("input is not a Hochschild 1-cycle")
    return sum((v * _psi_mono(x, y) for (x, y), v in c.items()), Fraction(0))


# ---------------------------------------------------------------- Lie chains


class CEChain:
    """Exterior words over hashable, ordered generators; sorted with sign, repeats vanish."""

    __slots__ = ("degree", "_t")

    def __init__(self, terms: Optional[Mapping[tuple, object]] = None, degree: int = 0):
        self.degree = degree
        out: Dict[tuple, Fraction] = {}
        for word, v in (terms or {}).items():
            if len(word) != degree:
                raise ValueError("word length differs from degree")
            s, w = _sort_sign(word)
            if s:
                out[w] = out.get(w, 0) + s * q(v)
        self._t = {w: v for w, v in out.items() if v != 0}

    @classmethod
    def wedge(cls, *ops: DiffOp, coeff=1) -> "CEChain":
        """Multilinear expansion of op_1 ^ ... ^ op_k over monomial keys."""
        terms: Dict[tuple, Fraction] = {}

        def rec(i, word, c):
            if i == len(ops):
                terms[word] = terms.get(word, 0) + c
                return
            for key, v in ops[i].items():
                rec(i + 1, word + (key,), c * v)

        rec(0, (), q(coeff))
        return cls(terms, len(ops))

    def items(self):
        return sorted(self._t.items())

    def __add__(self, other: "CEChain") -> "CEChain":
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, 0) + v
        return CEChain(out, max(self.degree, other.degree) if out else self.degree)

    def __neg__(self) -> "CEChain":
        return CEChain({k: -v for k, v in self._t.items()}, self.degree)

    def __sub__(self, other: "CEChain") -> "CEChain":
        return self + (-other)

    def __mul__(self, c) -> "CEChain":
        return CEChain({k: v * q(c) for k, v in self._t.items()}, self.degree)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, CEChain):
            return NotImplemented
        return self._t == other._t

    def __bool__(self) -> bool:
        return bool(self._t)


def lqt_beta(c: CEChain) -> TensorChain:
    """X ^ Y -> (sum X_ij (x) Y_ji - sum Y_ij (x) X_ji) / 2 for matrix-entry monomials."""
    if c.degree != 2:
        raise ValueError("lqt_beta takes a degree-2 Lie chain")
    out: Dict[tuple, Fraction] = {}
    half = Fraction(1, 2)
    for (x, y), v in c.items():
        xi, xj, a, m = x
        yi, yj, b, n = y
        # entry-wise trace: X_ij (x) Y_ji needs Y in slot (j, i)
        if (yi, yj) == (xj, xi):
            k1 = ((1, 1, a, m), (1, 1, b, n))
            k2 = ((1, 1, b, n), (1, 1, a, m))
            out[k1] = out.get(k1, 0) + half * v
            out[k2] = out.get(k2, 0) - half * v
    return TensorChain(out, 1, 1)
