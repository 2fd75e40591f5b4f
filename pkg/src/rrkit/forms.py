"""Differential forms on the cotangent bundle of the circle.

Coordinates are z (Laurent) on the circle and xi (polynomial) on the fiber.
A form is stored as four :class:`Poly2` coefficients against the basis
1, dz, dxi, dz^dxi.  The star operator is natural in the basis dz/z, dxi and
(dz/z)^dxi, so it shifts z-exponents when converting.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .exact import Poly2, _join_signed, _signed_term, q

ZERO = Poly2()


class FormDegreeError(ValueError):
    pass


def _poly(x) -> Poly2:
    if x is None:
        return ZERO
    if isinstance(x, Poly2):
        return x
    return Poly2({(0, 0): q(x)})


class FiberForm:
    """f + A dz + B dxi + C dz^dxi, with coefficients in Q[z, 1/z, xi]."""

    __slots__ = ("f", "dz", "dxi", "dzdxi")

    def __init__(self, f=None, dz=None, dxi=None, dzdxi=None):
        self.f = _poly(f)
        self.dz = _poly(dz)
        self.dxi = _poly(dxi)
        self.dzdxi = _poly(dzdxi)

    # constructors in the log basis
    @classmethod
    def dz_over_z(cls, coeff=1) -> "FiberForm":
        return cls(dz=_poly(coeff).shift_z(-1))

    @classmethod
    def volume(cls, coeff=1) -> "FiberForm":
        """coeff * (dz/z)^dxi, the symplectic volume form."""
        return cls(dzdxi=_poly(coeff).shift_z(-1))

    def components(self) -> Tuple[Poly2, Poly2, Poly2, Poly2]:
        return self.f, self.dz, self.dxi, self.dzdxi

    def degrees(self) -> List[int]:
        return [k for k, c in zip((0, 1, 1, 2), self.components()) if c]

    @property
    def degree(self) -> Optional[int]:
        """Form degree if homogeneous, None for the zero form."""
        ds = set(self.degrees())
        if not ds:
            return None
        if len(ds) > 1:
            raise FormDegreeError(f"mixed-degree form (degrees {sorted(ds)})")
        return ds.pop()

    def part(self, k: int) -> "FiberForm":
        if k == 0:
            return FiberForm(f=self.f)
        if k == 1:
            return FiberForm(dz=self.dz, dxi=self.dxi)
        if k == 2:
            return FiberForm(dzdxi=self.dzdxi)
        return FiberForm()

    def __bool__(self) -> bool:
        return any(self.components())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiberForm):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self) -> int:
        return hash(self.components())

    def __add__(self, other: "FiberForm") -> "FiberForm":
        return FiberForm(*(a + b for a, b in zip(self.components(), other.components())))

    def __neg__(self) -> "FiberForm":
        return FiberForm(*(-a for a in self.components()))

    def __sub__(self, other: "FiberForm") -> "FiberForm":
        return self + (-other)

    def __mul__(self, g) -> "FiberForm":
        """Multiply by a function (Poly2) or a scalar."""
        g = g if isinstance(g, Poly2) else q(g)
        return FiberForm(*(a * g for a in self.components()))

    __rmul__ = __mul__

    def wedge(self, other: "FiberForm") -> "FiberForm":
        f1, a1, b1, c1 = self.components()
        f2, a2, b2, c2 = other.components()
        return FiberForm(
            f=f1 * f2,
            dz=f1 * a2 + a1 * f2,
            dxi=f1 * b2 + b1 * f2,
            # dz^dxi from a1 dz ^ b2 dxi, minus from b1 dxi ^ a2 dz
            dzdxi=f1 * c2 + c1 * f2 + a1 * b2 - b1 * a2,
        )

    def __repr__(self) -> str:
        return f"FiberForm({str(self)!r})"

    def __str__(self) -> str:
        parts = []
        # each component in its log-basis normalization
        for poly, shift, basis in ((self.f, 0, ""), (self.dz, 1, "dz/z"), (self.dxi, 0, "dxi"),
                                   (self.dzdxi, 1, "dz/z*dxi")):
            for (a, s), v in sorted(poly.shift_z(shift).items(), reverse=True):
                mono = "*".join(x for x in (Poly2().mono_str(a, s), basis) if x)
                parts.append(_signed_term(v, mono, always_coeff=True))
        if not parts:
            return "0"
        return _join_signed(parts)


def function(p) -> FiberForm:
    return FiberForm(f=_poly(p))


def form_d(w: FiberForm) -> FiberForm:
    """Exterior derivative."""
    return FiberForm(
        dz=w.f.d_dz(),
        dxi=w.f.d_dxi(),
        dzdxi=w.dxi.d_dz() - w.dz.d_dxi(),
    )


def hodge_star(w: FiberForm) -> FiberForm:
    """*1 = (dz/z)^dxi, *(dz/z) = dxi, *dxi = dz/z, *((dz/z)^dxi) = 1."""
    return FiberForm(
        f=w.dzdxi.shift_z(1),
        dz=w.dxi.shift_z(-1),
        dxi=w.dz.shift_z(1),
        dzdxi=w.f.shift_z(-1),
    )


def e1_delta(w: FiberForm) -> FiberForm:
    """The E1 differential *d*, lowering form degree by one."""
    return hodge_star(form_d(hodge_star(w)))


def zero_section_integral(w: FiberForm) -> Fraction:
    """Integrate a 1-form over the zero section, normalized so that dz/z integrates to 1."""
    if w.f or w.dzdxi:
        raise FormDegreeError(f"expected a 1-form, got degrees {sorted(set(w.degrees()))}")
    # xi = 0 kills the dxi part; A(z, 0) dz integrates to the residue of A
    return w.dz.at_xi_zero().residue()
