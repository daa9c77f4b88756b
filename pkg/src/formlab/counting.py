"""Solution counts for ``L(x,y) = a, Q(x,y) = b`` and blocking sets.

The closed form (valid when ``L`` does not divide ``Q``) is

    #{(x, y) : L = a, Q = b} = 1 + chi(D a^2 + 4 r b),

and every brute-force routine here enumerates ``(x, y)`` directly from the
original coefficients so it stays independent of that formula.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, List, Set

import numpy as np

from formlab.ff_core import FieldSpec
from formlab.forms import LinearForm, QuadraticForm, ReducedForm, reduce

#: full q^2 scans are refused above this order unless the caller overrides it
BRUTE_MAX_Q = 10_000


class Case(str, enum.Enum):
    GENERIC = "GENERIC"
    DEGENERATE_DISC = "DEGENERATE_DISC"
    L_DIVIDES = "L_DIVIDES"
    L_SQUARED = "L_SQUARED"


class PreconditionError(ValueError):
    pass


class GuardError(RuntimeError):
    """A resource guard refused the computation."""


def _classify(red: ReducedForm) -> Case:
    if red.r != 0:
        return Case.GENERIC if red.D != 0 else Case.DEGENERATE_DISC
    if red.s != 0:
        return Case.L_DIVIDES
    return Case.L_SQUARED


@dataclass(frozen=True)
class CaptureInstance:
    spec: FieldSpec
    L: LinearForm
    Q: QuadraticForm
    red: ReducedForm = field(init=False)
    case: Case = field(init=False)

    def __post_init__(self):
        red = reduce(self.spec, self.L, self.Q)
        object.__setattr__(self, "red", red)
        object.__setattr__(self, "case", _classify(red))

    @classmethod
    def make(cls, F: FieldSpec, L, Q) -> "CaptureInstance":
        return cls(F, LinearForm(*L), QuadraticForm(*Q))

    def describe(self) -> dict:
        F = self.spec
        return {
            "p": F.p,
            "n": F.n,
            "L": [self.L.a1, self.L.a2],
            "Q": [self.Q.b1, self.Q.b2, self.Q.b3],
        }


def classify(inst: CaptureInstance) -> Case:
    return inst.case


def closed_argument(inst: CaptureInstance, a: int, b: int) -> int:
    """``D a^2 + 4 r b``."""
    F, red = inst.spec, inst.red
    return F.add(F.mul(red.D, F.mul(a, a)), F.mul(F.from_int(4), F.mul(red.r, b)))


def count_closed(inst: CaptureInstance, a: int, b: int) -> int:
    if inst.red.r == 0:
        raise PreconditionError("closed-form count needs r != 0 (L must not divide Q)")
    return 1 + inst.spec.chi(closed_argument(inst, a, b))


def _value_chunks(inst: CaptureInstance, max_q: int):
    """Yield flat ``(L(x,y), Q(x,y))`` arrays over all pairs, a block of rows at a time."""
    F = inst.spec
    if F.q > max_q:
        raise GuardError(f"brute force over q^2 pairs refused for q = {F.q} > {max_q}")
    ys = np.arange(F.q, dtype=np.int64)[None, :]
    step = max(1, (1 << 21) // F.q)
    for start in range(0, F.q, step):
        xs = np.arange(start, min(F.q, start + step), dtype=np.int64)[:, None]
        shape = (xs.shape[0], F.q)
        lv = np.broadcast_to(inst.L.vec(F, xs, ys), shape).ravel()
        qv = np.broadcast_to(inst.Q.vec(F, xs, ys), shape).ravel()
        yield lv, qv


def count_brute(inst: CaptureInstance, a: int, b: int, max_q: int = BRUTE_MAX_Q) -> int:
    return sum(int(((lv == a) & (qv == b)).sum()) for lv, qv in _value_chunks(inst, max_q))


def count_brute_all(inst: CaptureInstance, max_q: int = BRUTE_MAX_Q) -> np.ndarray:
    """``q x q`` table whose ``[a, b]`` entry is the brute-force solution count."""
    q = inst.spec.q
    table = np.zeros(q * q, dtype=np.int64)
    for lv, qv in _value_chunks(inst, max_q):
        table += np.bincount(lv * q + qv, minlength=q * q)
    return table.reshape(q, q)


def count_closed_all(inst: CaptureInstance) -> np.ndarray:
    F, red = inst.spec, inst.red
    if red.r == 0:
        raise PreconditionError("closed-form count needs r != 0 (L must not divide Q)")
    a = np.arange(F.q, dtype=np.int64)[:, None]
    b = np.arange(F.q, dtype=np.int64)[None, :]
    arg = F.vadd(F.vmul(red.D, F.vmul(a, a)), F.vmul(F.vmul(F.from_int(4), red.r), b))
    return 1 + F.vchi(arg).astype(np.int64)


def captured_pairs(inst: CaptureInstance, max_q: int = BRUTE_MAX_Q) -> Set[tuple]:
    """Every ``(L(x,y), Q(x,y))`` value pair, by direct enumeration."""
    q = inst.spec.q
    codes = set()
    for lv, qv in _value_chunks(inst, max_q):
        codes.update(np.unique(lv * q + qv).tolist())
    return {divmod(c, q) for c in codes}


def capture_exists_brute(inst: CaptureInstance, A: Iterable[int], max_q: int = BRUTE_MAX_Q) -> bool:
    A = sorted(set(A))
    if not A:
        return False
    mask = np.zeros(inst.spec.q, dtype=bool)
    mask[A] = True
    return any(bool((mask[lv] & mask[qv]).any()) for lv, qv in _value_chunks(inst, max_q))


def capture_exists(inst: CaptureInstance, A: Iterable[int], max_q: int = BRUTE_MAX_Q) -> bool:
    A = sorted(set(A))
    if not A:
        return False
    if inst.red.r == 0:
        return capture_exists_brute(inst, A, max_q)
    F = inst.spec
    for a in A:
        for b in A:
            if F.chi(closed_argument(inst, a, b)) != -1:
                return True
    return False


def blocking_set(inst: CaptureInstance) -> List[int]:
    """A capture-free set of size ``(q-1)/2`` for the two degenerate cases.

    ``L^2 | Q``: ``t`` times the non-squares (or the non-squares if ``t = 0``).
    ``disc(Q) = 0``: the squares if ``chi(r) = -1``, else the non-squares.
    """
    F, red = inst.spec, inst.red
    nonsquares = [x for x in F.elements() if F.chi(x) == -1]
    if inst.case is Case.L_SQUARED:
        if red.t == 0:
            return nonsquares
        return sorted(F.mul(red.t, x) for x in nonsquares)
    if inst.case is Case.DEGENERATE_DISC:
        if F.chi(red.r) == -1:
            return [x for x in F.elements() if F.chi(x) == 1]
        return nonsquares
    raise PreconditionError(f"no density-1/2 blocking set is claimed for case {inst.case.value}")
