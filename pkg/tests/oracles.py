"""Independent reference computations used only by the tests.

These deliberately avoid the package's own algorithms: dense Gaussian
elimination instead of the sparse fraction-free one, operators applied to
test functions instead of normal-ordering rules, sympy calculus for
residues and forms, and explicit formal roots for characteristic classes.
"""

from fractions import Fraction
from math import factorial

import sympy as sp

from rrkit.weyl import DiffOp

Z, XI = sp.symbols("z xi")


def dense_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def apply_to_monomial(op: DiffOp, k: int, col: int = 1):
    """Act on the vector-valued function z^k e_col; returns {(row, exponent): coeff}."""
    out = {}
    for (i, j, a, m), v in op.items():
        if j != col:
            continue
        c = 1
        for t in range(m):
            c *= k - t
        if c:
            key = (i, a + k - m)
            out[key] = out.get(key, 0) + v * c
    return {k: v for k, v in out.items() if v != 0}


def apply_op(op: DiffOp, vec):
    out = {}
    for (col, k), v in vec.items():
        for key, w in apply_to_monomial(op, k, col).items():
            out[key] = out.get(key, 0) + v * w
    return {k: v for k, v in out.items() if v != 0}


def op_to_sympy(op: DiffOp, i: int = 1, j: int = 1, m: int = 0):
    """Coefficient function of d^m in entry (i, j)."""
    return sum((sp.Rational(v.numerator, v.denominator) * Z ** a
                for (ii, jj, a, mm), v in op.items() if (ii, jj, mm) == (i, j, m)), sp.Integer(0))


def psi_sympy(a: DiffOp, b: DiffOp) -> Fraction:
    """Residue formula evaluated with sympy calculus, term by term in the d-order."""
    r = a.rank
    tot = sp.Integer(0)
    ma = max((k[3] for k in a.terms), default=0)
    mb = max((k[3] for k in b.terms), default=0)
    for m in range(ma + 1):
        for n in range(mb + 1):
            tr = sp.Integer(0)
            for i in range(1, r + 1):
                for j in range(1, r + 1):
                    f = op_to_sympy(a, i, j, m)
                    g = op_to_sympy(b, j, i, n)
                    tr += sp.diff(f, Z, n + 1) * sp.diff(g, Z, m)
            coef = sp.Rational(factorial(m) * factorial(n), factorial(m + n + 1))
            tot += coef * sp.residue(sp.expand(tr), Z, 0)
    tot = sp.nsimplify(tot)
    return Fraction(int(tot.p), int(tot.q))


def symbol_sympy(key):
    """Top symbol of z^a d^m with d -> xi / z."""
    _, _, a, m = key
    return Z ** a * (XI / Z) ** m


def epsilon_sympy(chain) -> Fraction:
    """omega = sum s(P) d s(Q); star swaps dz/z and dxi; integrate over xi = 0."""
    top = chain.filtration()
    w_dz = sp.Integer(0)
    w_dxi = sp.Integer(0)
    for (x, y), v in chain.items():
        if x[3] + y[3] != top:
            continue
        c = sp.Rational(v.numerator, v.denominator)
        p, q = symbol_sympy(x), symbol_sympy(y)
        w_dz += c * p * sp.diff(q, Z)
        w_dxi += c * p * sp.diff(q, XI)
    # A dz + B dxi = (zA) dz/z + B dxi;  star: (zA) dxi + B dz/z
    star_dz_over_z = w_dxi
    restricted = sp.expand(star_dz_over_z.subs(XI, 0))
    val = sp.residue(restricted / Z, Z, 0)
    return Fraction(int(val.p), int(val.q))


def chern_character_roots(r: int, bound: int):
    """ch via explicit roots, rewritten in elementary symmetric functions by sympy."""
    xs = sp.symbols(f"x1:{r + 1}")
    ch = sum(sum(x ** k / sp.factorial(k) for x in xs) for k in range(bound + 1))
    return _symmetrize(sp.expand(ch), xs, "c")


def todd_roots(d: int, bound: int):
    xs = sp.symbols(f"x1:{d + 1}")
    x = sp.Symbol("x")
    ser = sp.series(x / (1 - sp.exp(-x)), x, 0, bound + 1).removeO()
    prod = sp.Integer(1)
    for xi in xs:
        prod = sp.expand(prod * ser.subs(x, xi))
    # drop terms above the bound
    poly = sp.Poly(prod, *xs)
    kept = sum((c * sp.prod([v ** e for v, e in zip(xs, mon)]) for mon, c in poly.terms() if sum(mon) <= bound),
               sp.Integer(0))
    return _symmetrize(sp.expand(kept), xs, "t")


def _symmetrize(expr, xs, prefix):
    from sympy.polys.polyfuncs import symmetrize

    sym_part, remainder, mapping = symmetrize(expr, *xs, formal=True)
    assert remainder == 0
    subs = {s: sp.Symbol(f"{prefix}{i + 1}") for i, (s, _) in enumerate(mapping)}
    return sp.expand(sym_part.subs(subs))


def charclass_to_sympy(e):
    out = sp.Integer(0)
    for mono, v in e.terms.items():
        term = sp.Rational(v.numerator, v.denominator)
        for (kind, i), exp in mono:
            term *= sp.Symbol(f"{kind}{i}") ** exp
        out += term
    return sp.expand(out)


def e1_betti_sympy(w: int, S: int):
    """E1 window Betti numbers from hand-derived formulas in the log frame.

    With theta = z d/dz: delta(A dz/z + B dxi) = theta(A) - B_xi and
    delta(C vol) = C_xi dz/z + theta(C) dxi.  Coefficients are z^w xi^s,
    truncated at xi-degree S + form degree.
    """
    xi_bound = {0: S, 1: S + 1, 2: S + 2}
    theta = lambda e: sp.expand(Z * sp.diff(e, Z))  # noqa: E731
    mono = lambda s: Z ** w * XI ** s  # noqa: E731
    b1 = [("A", s) for s in range(xi_bound[1] + 1)] + [("B", s) for s in range(xi_bound[1] + 1)]
    b2 = list(range(xi_bound[2] + 1))

    def coeff(expr, s):
        return sp.Poly(sp.expand(expr / Z ** w), XI).coeff_monomial(XI ** s) if expr != 0 else 0

    d1 = [[0] * len(b1) for _ in range(xi_bound[0] + 1)]
    for j, (kind, s) in enumerate(b1):
        image = theta(mono(s)) if kind == "A" else -sp.diff(mono(s), XI)
        for i in range(xi_bound[0] + 1):
            d1[i][j] = Fraction(str(coeff(image, i)))
    d2 = [[0] * len(b2) for _ in range(len(b1))]
    for j, s in enumerate(b2):
        a_part = sp.diff(mono(s), XI)
        b_part = theta(mono(s))
        for i, (kind, t) in enumerate(b1):
            d2[i][j] = Fraction(str(coeff(a_part if kind == "A" else b_part, t)))
    r1, r2 = dense_rank(d1), dense_rank(d2)
    return [xi_bound[0] + 1 - r1, len(b1) - r1 - r2, len(b2) - r2]
