"""Density-1/p capture-free sets in Z/NZ for odd composite N.

If ``p | N`` and the reduction of ``(L, Q)`` mod ``p`` has
``chi_p(D t^2 + 4 r t) = -1`` for some residue ``t``, then the pair
``L = a, Q = b`` has no solution mod ``p`` whenever ``a = b = t (mod p)``, so
the progression ``{a : a = t mod p}`` is capture-free in Z/NZ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from formlab.counting import CaptureInstance, GuardError, PreconditionError
from formlab.ff_core import FieldSpec
from formlab.forms import LinearForm, QuadraticForm

VERIFY_MAX_N = 2000


@dataclass(frozen=True)
class RingSpec:
    N: int
    factorization: Tuple[Tuple[int, int], ...]

    @classmethod
    def of(cls, N: int) -> "RingSpec":
        if N < 3 or N % 2 == 0:
            raise PreconditionError("N must be an odd integer >= 3")
        return cls(N, tuple(sorted(factorint(N).items())))

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factorization]


def _local_instance(p: int, L: Sequence[int], Q: Sequence[int]) -> Optional[CaptureInstance]:
    """The reduction of ``(L, Q)`` mod ``p``, or None if it degenerates there."""
    Lp = [c % p for c in L]
    Qp = [c % p for c in Q]
    if not any(Lp) or not any(Qp):
        return None
    inst = CaptureInstance(FieldSpec(p, 1), LinearForm(*Lp), QuadraticForm(*Qp))
    if inst.red.r == 0:
        return None
    return inst


def find_blocking_residue(N: int, L: Sequence[int], Q: Sequence[int]) -> Optional[Tuple[int, int]]:
    """First ``(p, t)`` (primes ascending, then ``t``) with ``chi_p(D t^2 + 4 r t) = -1``.

    Primes where L vanishes or divides Q are skipped.
    """
    ring = RingSpec.of(N)
    if math.gcd(L[0], N) != 1 and math.gcd(L[1], N) != 1:
        raise PreconditionError("L needs a coefficient coprime to N")
    for p in ring.primes:
        inst = _local_instance(p, L, Q)
        if inst is None:
            continue
        F, red = inst.spec, inst.red
        for t in range(p):
            arg = F.add(F.mul(red.D, F.mul(t, t)), F.mul(F.from_int(4), F.mul(red.r, t)))
            if F.chi(arg) == -1:
                return p, t
    return None


def build_blocking_set(N: int, p: int, t: int) -> List[int]:
    if N % p or not 0 <= t < p:
        raise PreconditionError("need p | N and 0 <= t < p")
    return list(range(t, N, p))


def build_multi_blocking_set(N: int, residues: dict) -> List[int]:
    """Residues satisfying every ``a = t_p (mod p)`` at once.

    This goes beyond the single-prime construction: it is the intersection of
    the single-prime progressions, so it is capture-free whenever any one of
    them is, with density ``prod 1/p``.
    """
    for p, t in residues.items():
        if N % p or not 0 <= t < p:
            raise PreconditionError("need p | N and 0 <= t < p")
    return [a for a in range(N) if all(a % p == t for p, t in residues.items())]


def verify_no_solutions(
    N: int, L: Sequence[int], Q: Sequence[int], A, max_n: int = VERIFY_MAX_N
) -> bool:
    """True iff no ``(x, y)`` in ``(Z/NZ)^2`` has both ``L(x,y)`` and ``Q(x,y)`` in ``A``."""
    if N > max_n:
        raise GuardError(f"N^2 scan refused for N = {N} > {max_n}")
    mask = np.zeros(N, dtype=bool)
    mask[list(A)] = True
    ys = np.arange(N, dtype=np.int64)[None, :]
    a1, a2 = L
    b1, b2, b3 = Q
    step = max(1, (1 << 20) // N)
    for start in range(0, N, step):
        xs = np.arange(start, min(N, start + step), dtype=np.int64)[:, None]
        lv = (a1 * xs + a2 * ys) % N
        qv = (b1 * xs * xs + b2 * xs * ys + b3 * ys * ys) % N
        if (mask[lv] & mask[qv]).any():
            return False
    return True


def blocking_report(N: int, L: Sequence[int], Q: Sequence[int], max_n: int = VERIFY_MAX_N) -> dict:
    found = find_blocking_residue(N, L, Q)
    if found is None:
        return {"N": N, "p": None, "t": None, "set": [], "density": None, "verified": None}
    p, t = found
    A = build_blocking_set(N, p, t)
    return {
        "N": N,
        "p": p,
        "t": t,
        "set": A,
        "density": len(A) / N,
        "verified": verify_no_solutions(N, L, Q, A, max_n) if N <= max_n else None,
    }
