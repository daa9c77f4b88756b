"""Exact arithmetic in GF(p^n) for odd p, and the quadratic character.

Elements are plain ``int`` indices in ``[0, q)``.  Index ``x`` is read in base
``p`` as the coefficient vector (constant term first) of a residue polynomial
modulo the field's defining polynomial, so ``0`` is zero, ``1`` is one and the
prime subfield occupies ``0 .. p-1``.  The :class:`FieldSpec` is passed as
context to every operation.

For ``n > 1`` multiplication goes through discrete log/exp tables built once
from the polynomial reference multiplication (``mul_poly``).
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from formlab import polys

MAX_Q = 2**31
#: extension fields up to this order get log/exp tables
TABLE_MAX_Q = 1 << 22


class FieldError(ValueError):
    """Invalid field parameters or an internal consistency failure."""


def is_irreducible(p: int, f: Sequence[int]) -> bool:
    """Rabin-style test for a monic ``f`` over Z/p.

    ``f`` is irreducible iff ``gcd(f, X^(p^i) - X) = 1`` for ``1 <= i <= deg/2``.
    """
    F = FieldSpec(p, 1)
    f = polys.trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        h = polys.powmod(F, h, p, f)
        if polys.degree(polys.gcd(F, f, polys.sub(F, h, x))) > 0:
            return False
    return True


def find_irreducible(p: int, n: int) -> Tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree ``n`` over Z/p.

    Candidates are ordered by their index ``c_0 + c_1 p + ... + c_{n-1} p^(n-1)``
    (the same base-p encoding used for field elements), so the search is
    deterministic.  Returns the coefficient tuple, constant first, monic.
    """
    if n == 1:
        return (0, 1)
    for high_first in itertools.product(range(p), repeat=n):
        coeffs = tuple(reversed(high_first)) + (1,)
        if coeffs[0] == 0:
            continue
        if is_irreducible(p, coeffs):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {n} mod {p}")  # unreachable


class FieldSpec:
    """The finite field GF(p^n), p odd.

    >>> F = FieldSpec(3, 2)
    >>> F.modulus
    (1, 0, 1)
    >>> F.mul(3, 3)
    2
    """

    def __init__(self, p: int, n: int = 1, modulus: Optional[Sequence[int]] = None):
        if not (isinstance(p, int) and p > 2 and isprime(p)):
            raise FieldError("p must be an odd prime")
        if not (isinstance(n, int) and n >= 1):
            raise FieldError("n must be a positive integer")
        q = p**n
        if q >= MAX_Q:
            raise FieldError(f"q = {p}^{n} exceeds the supported bound 2^31")
        self.p = p
        self.n = n
        self.q = q
        if modulus is None:
            modulus = find_irreducible(p, n) if n > 1 else (0, 1)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree n")
        if n == 1 and modulus != (0, 1):
            raise FieldError("for n = 1 the modulus is X")
        if n > 1 and not is_irreducible(p, modulus):
            raise FieldError("modulus is not irreducible over Z/p")
        self.modulus = modulus
        self._place = [p**i for i in range(n)]
        self._exp: Optional[List[int]] = None
        self._log: Optional[List[int]] = None

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, n={self.n}, modulus={self.modulus})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.n, self.modulus) == (
            other.p,
            other.n,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def __reduce__(self):
        return (FieldSpec, (self.p, self.n, self.modulus))

    # -- encoding ---------------------------------------------------------

    def digits(self, x: int) -> List[int]:
        out = []
        for _ in range(self.n):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        return sum((d % self.p) * w for d, w in zip(ds, self._place))

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` in the prime subfield."""
        return k % self.p

    def check(self, x: int) -> int:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < self.q):
            raise FieldError(f"element index {x} is not in [0, {self.q})")
        return int(x)

    def elements(self) -> range:
        return range(self.q)

    def element_str(self, x: int) -> str:
        if self.n == 1:
            return str(x)
        terms = []
        for i, d in reversed(list(enumerate(self.digits(x)))):
            if d == 0:
                continue
            if i == 0:
                terms.append(str(d))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if d == 1 else f"{d}{mono}")
        return "+".join(terms) or "0"

    # -- scalar arithmetic -----------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.n == 1:
            return (x + y) % self.p
        p = self.p
        out = 0
        for w in self._place:
            out += ((x % p + y % p) % p) * w
            x //= p
            y //= p
        return out

    def neg(self, x: int) -> int:
        if self.n == 1:
            return -x % self.p
        return self.from_digits([-d for d in self.digits(x)])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    @cached_property
    def prime_field(self) -> "FieldSpec":
        return self if self.n == 1 else FieldSpec(self.p, 1)

    def mul_poly(self, x: int, y: int) -> int:
        """Reference multiplication: polynomial product reduced mod the modulus."""
        if self.n == 1:
            return x * y % self.p
        P = self.prime_field
        prod = polys.mul(P, polys.trim(self.digits(x)), polys.trim(self.digits(y)))
        return self.from_digits(polys.rem(P, prod, self.modulus))

    def mul(self, x: int, y: int) -> int:
        if self.n == 1:
            return x * y % self.p
        if x == 0 or y == 0:
            return 0
        if self._build_tables():
            return self._exp[(self._log[x] + self._log[y]) % (self.q - 1)]
        return self.mul_poly(x, y)

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            raise FieldError("negative exponent; use inv")
        if self.n == 1:
            return pow(x, e, self.p)
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        if self.n == 1:
            return pow(x, self.p - 2, self.p)
        return self.pow(x, self.q - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def sqrt_p(self, x: int) -> int:
        """The unique p-th root (inverse Frobenius)."""
        return self.pow(x, self.q // self.p)

    # -- quadratic character --------------------------------------------

    @cached_property
    def minus_one(self) -> int:
        return self.p - 1

    def chi(self, x: int) -> int:
        """Quadratic character by Euler's criterion: x^((q-1)/2)."""
        if x == 0:
            return 0
        e = self.pow(x, (self.q - 1) // 2)
        if e == 1:
            return 1
        if e == self.minus_one:
            return -1
        raise FieldError(f"Euler criterion gave {e} for {x}; field construction is broken")

    quadratic_character = chi

    @cached_property
    def chi_table(self) -> np.ndarray:
        return np.array([self.chi(x) for x in range(self.q)], dtype=np.int8)

    # -- vectorised arithmetic (numpy int64 arrays, broadcasting) --------

    def _build_tables(self) -> bool:
        if self._exp is not None:
            return True
        if self.n == 1 or self.q > TABLE_MAX_Q:
            return False
        order = self.q - 1
        for g in range(2, self.q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self.mul_poly(x, g)
            if len(exp) == order:
                log = [0] * self.q
                for i, v in enumerate(exp):
                    log[v] = i
                self._exp, self._log = exp, log
                return True
        raise FieldError("no primitive element found")

    @cached_property
    def _np_tables(self):
        if not self._build_tables():
            raise FieldError(f"GF({self.q}) is too large for vectorised arithmetic")
        digits = np.array([self.digits(x) for x in range(self.q)], dtype=np.int64)
        exp = np.array(self._exp, dtype=np.int64)
        log = np.array(self._log, dtype=np.int64)
        place = np.array(self._place, dtype=np.int64)
        return digits, place, exp, log

    def vadd(self, x, y) -> np.ndarray:
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if self.n == 1:
            return (x + y) % self.p
        digits, place, _, _ = self._np_tables
        return ((digits[x] + digits[y]) % self.p) @ place

    def vneg(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.n == 1:
            return (-x) % self.p
        digits, place, _, _ = self._np_tables
        return ((-digits[x]) % self.p) @ place

    def vmul(self, x, y) -> np.ndarray:
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        if self.n == 1:
            return (x * y) % self.p
        _, _, exp, log = self._np_tables
        out = exp[(log[x] + log[y]) % (self.q - 1)]
        return np.where((x == 0) | (y == 0), 0, out)

    def vchi(self, x) -> np.ndarray:
        return self.chi_table[np.asarray(x, dtype=np.int64)]


def quadratic_character(F: FieldSpec, x: int) -> int:
    return F.chi(x)


def enumerate_field(F: FieldSpec) -> List[int]:
    return list(F.elements())


def odd_prime_powers(qmax: int, qmin: int = 3) -> List[Tuple[int, int, int]]:
    """All ``(q, p, n)`` with ``q = p^n`` odd and ``qmin <= q <= qmax``, sorted by q."""
    out = []
    for p in range(3, qmax + 1, 2):
        if not isprime(p):
            continue
        q, n = p, 1
        while q <= qmax:
            if q >= qmin:
                out.append((q, p, n))
            q *= p
            n += 1
    return sorted(out)
