"""Dense univariate polynomials over a finite field.

A polynomial is a plain list of element indices, constant term first, with
trailing zeros trimmed; the zero polynomial is ``[]``.  Every routine takes
the field as its first argument (anything exposing ``add``, ``sub``, ``mul``,
``inv``, ``neg`` and ``p``), so the same code serves Z/p and GF(p^n).
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

Poly = List[int]


def trim(f: Sequence[int]) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence[int]) -> int:
    """Degree of ``f``; the zero polynomial has degree -1."""
    return len(trim(f)) - 1


def add(F, f: Sequence[int], g: Sequence[int]) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return trim(out)


def sub(F, f: Sequence[int], g: Sequence[int]) -> Poly:
    return add(F, f, [F.neg(c) for c in g])


def scale(F, f: Sequence[int], c: int) -> Poly:
    return trim([F.mul(c, x) for x in f])


def mul(F, f: Sequence[int], g: Sequence[int]) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x == 0:
            continue
        for j, y in enumerate(g):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F, f: Sequence[int], g: Sequence[int]) -> Tuple[Poly, Poly]:
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], r
    lead_inv = F.inv(g[-1])
    quo = [0] * (len(r) - dg)
    while len(r) - 1 >= dg:
        shift = len(r) - 1 - dg
        c = F.mul(r[-1], lead_inv)
        quo[shift] = c
        for i, y in enumerate(g):
            r[i + shift] = F.sub(r[i + shift], F.mul(c, y))
        r = trim(r)
    return trim(quo), r


def rem(F, f: Sequence[int], g: Sequence[int]) -> Poly:
    return divmod_(F, f, g)[1]


def quo(F, f: Sequence[int], g: Sequence[int]) -> Poly:
    return divmod_(F, f, g)[0]


def monic(F, f: Sequence[int]) -> Poly:
    f = trim(f)
    if not f:
        return []
    return scale(F, f, F.inv(f[-1]))


def gcd(F, f: Sequence[int], g: Sequence[int]) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    a, b = trim(f), trim(g)
    while b:
        a, b = b, rem(F, a, b)
    return monic(F, a)


def deriv(F, f: Sequence[int]) -> Poly:
    out = []
    for i in range(1, len(f)):
        # i * c as repeated addition in characteristic p
        out.append(F.mul(F.from_int(i), f[i]))
    return trim(out)


def powmod(F, f: Sequence[int], e: int, m: Sequence[int]) -> Poly:
    result: Poly = [1]
    base = rem(F, f, m)
    while e:
        if e & 1:
            result = rem(F, mul(F, result, base), m)
        e >>= 1
        if e:
            base = rem(F, mul(F, base, base), m)
    return rem(F, result, m)


def evaluate(F, f: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def from_roots(F, roots: Sequence[int]) -> Poly:
    """Monic polynomial prod (X - root)."""
    out: Poly = [1]
    for z in roots:
        out = mul(F, out, [F.neg(z), 1])
    return out


def power(F, f: Sequence[int], e: int) -> Poly:
    out: Poly = [1]
    for _ in range(e):
        out = mul(F, out, f)
    return out
