"""Binary linear and quadratic forms and their reduction to ``(r, s, t)``.

Given ``L = a1 X + a2 Y`` with ``a1 != 0`` every quadratic form factors as

    Q = t L^2 + s L Y + r Y^2,

so on the line ``L(x, y) = a`` we get ``Q = t a^2 + s a y + r y^2``.  When
``a1 = 0`` the roles of ``X`` and ``Y`` are swapped first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from formlab.ff_core import FieldError, FieldSpec


class Divisibility(str, enum.Enum):
    NOT_DIVIDING = "NOT_DIVIDING"
    L_DIVIDES = "L_DIVIDES"
    L_SQUARED_DIVIDES = "L_SQUARED_DIVIDES"


@dataclass(frozen=True)
class LinearForm:
    a1: int
    a2: int

    def __post_init__(self):
        if self.a1 == 0 and self.a2 == 0:
            raise FieldError("linear form must be nonzero")

    def __call__(self, F: FieldSpec, x: int, y: int) -> int:
        return F.add(F.mul(self.a1, x), F.mul(self.a2, y))

    def vec(self, F: FieldSpec, x, y):
        return F.vadd(F.vmul(self.a1, x), F.vmul(self.a2, y))

    def pretty(self, F: FieldSpec) -> str:
        return _pretty(F, [(self.a1, "X"), (self.a2, "Y")])


@dataclass(frozen=True)
class QuadraticForm:
    b1: int
    b2: int
    b3: int

    def __post_init__(self):
        if self.b1 == 0 and self.b2 == 0 and self.b3 == 0:
            raise FieldError("quadratic form must be nonzero")

    def __call__(self, F: FieldSpec, x: int, y: int) -> int:
        out = F.mul(self.b1, F.mul(x, x))
        out = F.add(out, F.mul(self.b2, F.mul(x, y)))
        return F.add(out, F.mul(self.b3, F.mul(y, y)))

    def vec(self, F: FieldSpec, x, y):
        out = F.vmul(self.b1, F.vmul(x, x))
        out = F.vadd(out, F.vmul(self.b2, F.vmul(x, y)))
        return F.vadd(out, F.vmul(self.b3, F.vmul(y, y)))

    def pretty(self, F: FieldSpec) -> str:
        return _pretty(F, [(self.b1, "X^2"), (self.b2, "XY"), (self.b3, "Y^2")])


def _pretty(F: FieldSpec, terms) -> str:
    parts = []
    for c, mono in terms:
        if c == 0:
            continue
        if c == 1:
            parts.append(mono)
        elif F.n > 1:
            parts.append(f"({F.element_str(c)}){mono}")
        else:
            parts.append(f"{c}{mono}")
    return " + ".join(parts) or "0"


@dataclass(frozen=True)
class ReducedForm:
    """Reduction data; ``a1``/``a2`` are the coefficients in the (possibly swapped) frame."""

    r: int
    s: int
    t: int
    D: int
    swapped: bool
    a1: int
    a2: int

    @property
    def pivot(self) -> str:
        return "Y" if self.swapped else "X"


def disc(F: FieldSpec, Q: QuadraticForm) -> int:
    """``b2^2 - 4 b1 b3``."""
    return F.sub(F.mul(Q.b2, Q.b2), F.mul(F.from_int(4), F.mul(Q.b1, Q.b3)))


def reduce(F: FieldSpec, L: LinearForm, Q: QuadraticForm) -> ReducedForm:
    a1, a2 = L.a1, L.a2
    b1, b2, b3 = Q.b1, Q.b2, Q.b3
    swapped = a1 == 0
    if swapped:
        a1, a2 = a2, a1
        b1, b3 = b3, b1
    a1_inv = F.inv(a1)
    t = F.mul(b1, F.mul(a1_inv, a1_inv))
    s = F.mul(F.sub(b2, F.mul(F.from_int(2), F.mul(t, F.mul(a1, a2)))), a1_inv)
    r = F.sub(F.sub(b3, F.mul(s, a2)), F.mul(t, F.mul(a2, a2)))
    D = F.sub(F.mul(s, s), F.mul(F.from_int(4), F.mul(r, t)))
    return ReducedForm(r=r, s=s, t=t, D=D, swapped=swapped, a1=a1, a2=a2)


def expand_reduced(F: FieldSpec, red: ReducedForm) -> QuadraticForm:
    """Coefficients of ``t L^2 + s L Y' + r Y'^2`` mapped back to the original frame."""
    a1, a2 = red.a1, red.a2
    c_xx = F.mul(red.t, F.mul(a1, a1))
    c_xy = F.add(F.mul(F.from_int(2), F.mul(red.t, F.mul(a1, a2))), F.mul(red.s, a1))
    c_yy = F.add(F.add(F.mul(red.t, F.mul(a2, a2)), F.mul(red.s, a2)), red.r)
    if red.swapped:
        c_xx, c_yy = c_yy, c_xx
    return QuadraticForm(c_xx, c_xy, c_yy)


def divisibility(F: FieldSpec, L: LinearForm, Q: QuadraticForm) -> Divisibility:
    red = reduce(F, L, Q)
    if red.r != 0:
        return Divisibility.NOT_DIVIDING
    if red.s != 0:
        return Divisibility.L_DIVIDES
    return Divisibility.L_SQUARED_DIVIDES


def parse_coeffs(F: FieldSpec, text: str, count: int):
    """Parse ``"i,j,..."`` element indices, validating each against the field."""
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise FieldError(f"coefficients must be comma-separated integers: {text!r}")
    if len(vals) != count:
        raise FieldError(f"expected {count} coefficients, got {len(vals)}")
    return [F.check(v) for v in vals]
