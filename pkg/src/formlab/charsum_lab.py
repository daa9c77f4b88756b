"""Numerical checks of the character-sum estimates behind the capture bounds.

All sums are exact integers (the quadratic character only takes the values
-1, 0, 1); floating point appears only in the bounds and ratios.  Every
``run_*`` experiment draws its trials from ``random.Random`` seeded with a
string built from the experiment name, the seed and the field, so reports
reproduce exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from formlab import polys
from formlab.capture_graph import x_matrix
from formlab.counting import Case, CaptureInstance, PreconditionError
from formlab.ff_core import FieldSpec

PAIR_DENSITY_CONSTANT = 4.0
GOOD_VERTEX_C = 8.0


@dataclass
class ExperimentReport:
    experiment: str
    seed: int
    trials: int = 0
    violations: int = 0
    max_ratio: float = 0.0
    params: dict = field(default_factory=dict)
    samples: Optional[List[dict]] = None

    def record(self, ratio: float, sample: Optional[dict] = None, violated: Optional[bool] = None):
        self.trials += 1
        self.max_ratio = max(self.max_ratio, ratio)
        if violated if violated is not None else ratio > 1:
            self.violations += 1
        if self.samples is not None and sample is not None:
            self.samples.append(sample)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.samples is None:
            out.pop("samples")
        return out


def trial_rng(experiment: str, seed: int, F: FieldSpec) -> random.Random:
    return random.Random(f"{experiment}:{seed}:{F.p}:{F.n}")


# -- Vinogradov ------------------------------------------------------------


def vinogradov_check(F: FieldSpec, A: Sequence[int], B: Sequence[int], u: int, v: int):
    """``(sum over A x B of chi(u a^2 + v b), 2 sqrt(q |A| |B|))``."""
    if u == 0 or v == 0:
        raise PreconditionError("u and v must be nonzero")
    bound = 2 * math.sqrt(F.q * len(A) * len(B))
    if not len(A) or not len(B):
        return 0, bound
    a = np.asarray(A, dtype=np.int64)[:, None]
    b = np.asarray(B, dtype=np.int64)[None, :]
    arg = F.vadd(F.vmul(u, F.vmul(a, a)), F.vmul(v, b))
    return int(F.vchi(arg).sum(dtype=np.int64)), bound


def run_vinogradov(F: FieldSpec, trials: int, seed: int, keep_samples: bool = False):
    rep = ExperimentReport("vinogradov", seed, params={"p": F.p, "n": F.n, "q": F.q})
    rep.samples = [] if keep_samples else None
    rng = trial_rng("vinogradov", seed, F)
    for _ in range(trials):
        A = rng.sample(range(F.q), rng.randint(1, F.q))
        B = rng.sample(range(F.q), rng.randint(1, F.q))
        u, v = rng.randrange(1, F.q), rng.randrange(1, F.q)
        total, bound = vinogradov_check(F, A, B, u, v)
        rep.record(abs(total) / bound, {"sizeA": len(A), "sizeB": len(B), "u": u, "v": v, "sum": total})
    return rep


# -- Weil ------------------------------------------------------------------


def _pth_root(F: FieldSpec, f: Sequence[int]) -> polys.Poly:
    """``g`` with ``g^p = f``, for ``f`` supported on exponents divisible by p."""
    p = F.p
    return polys.trim([F.sqrt_p(f[i]) for i in range(0, len(f), p)])


def squarefree_decomposition(F: FieldSpec, f: Sequence[int]) -> List[Tuple[polys.Poly, int]]:
    """Pairwise coprime monic ``(factor, multiplicity)`` pairs with ``f = lc * prod factor^mult``.

    Repeated gcd with the derivative; the part whose derivative vanishes is a
    p-th power and is handled by taking the p-th root and recursing.
    """
    f = polys.monic(F, f)
    if not f:
        raise PreconditionError("the zero polynomial has no squarefree decomposition")
    out: List[Tuple[polys.Poly, int]] = []
    c = polys.gcd(F, f, polys.deriv(F, f))
    w = polys.quo(F, f, c)
    i = 1
    while polys.degree(w) > 0:
        y = polys.gcd(F, w, c)
        fac = polys.quo(F, w, y)
        if polys.degree(fac) > 0:
            out.append((polys.monic(F, fac), i))
        w = y
        c = polys.quo(F, c, y)
        i += 1
    if polys.degree(c) > 0:
        for g, m in squarefree_decomposition(F, _pth_root(F, c)):
            out.append((g, m * F.p))
    return out


def squarefree_radical(F: FieldSpec, f: Sequence[int]):
    """``(radical, is_square_in_closure, m)`` where ``m`` counts distinct roots."""
    parts = squarefree_decomposition(F, f)
    radical: polys.Poly = [1]
    for g, _ in parts:
        radical = polys.mul(F, radical, g)
    is_square = all(mult % 2 == 0 for _, mult in parts)
    return radical, is_square, polys.degree(radical)


def char_sum(F: FieldSpec, f: Sequence[int]) -> int:
    """``sum over x in F_q of chi(f(x))``, exactly."""
    x = np.arange(F.q, dtype=np.int64)
    vals = np.zeros(F.q, dtype=np.int64)
    for c in reversed(list(f)):
        vals = F.vadd(F.vmul(vals, x), c)
    return int(F.vchi(vals).sum(dtype=np.int64))


def weil_check(F: FieldSpec, f: Sequence[int]):
    """``(sum chi(f(x)), m sqrt(q))``; only defined when f is not a square in the closure."""
    _, is_square, m = squarefree_radical(F, f)
    if is_square:
        raise PreconditionError("f is a square over the algebraic closure; the bound does not apply")
    return char_sum(F, f), m * math.sqrt(F.q)


def random_poly(rng: random.Random, F: FieldSpec, max_degree: int = 6) -> polys.Poly:
    d = rng.randint(1, max_degree)
    return [rng.randrange(F.q) for _ in range(d)] + [rng.randrange(1, F.q)]


def run_weil(F: FieldSpec, trials: int, seed: int, max_degree: int = 6, keep_samples: bool = False):
    rep = ExperimentReport("weil", seed, params={"p": F.p, "n": F.n, "q": F.q, "max_degree": max_degree})
    rep.samples = [] if keep_samples else None
    rng = trial_rng("weil", seed, F)
    skipped = 0
    while rep.trials < trials:
        f = random_poly(rng, F, max_degree)
        if squarefree_radical(F, f)[1]:
            skipped += 1
            continue
        total, bound = weil_check(F, f)
        rep.record(abs(total) / bound, {"f": f, "sum": total, "bound": bound})
    rep.params["skipped_squares"] = skipped
    return rep


def sextic(inst: CaptureInstance, a1: int, a2: int) -> polys.Poly:
    """``(D a1^2 + 4rb)(D b^2 + 4r a1)(D a2^2 + 4rb)(D b^2 + 4r a2)`` as a polynomial in b."""
    F, red = inst.spec, inst.red
    four_r = F.mul(F.from_int(4), red.r)
    out: polys.Poly = [1]
    for a in (a1, a2):
        out = polys.mul(F, out, [F.mul(red.D, F.mul(a, a)), four_r])
        out = polys.mul(F, out, [F.mul(four_r, a), 0, red.D])
    return out


def run_sextic(inst: CaptureInstance, trials: int, seed: int, keep_samples: bool = False):
    """Weil check on the sextic family with the fixed bound ``6 sqrt(q)``."""
    F = inst.spec
    rep = ExperimentReport("sextic", seed, params={"p": F.p, "n": F.n, "q": F.q, **inst.describe()})
    rep.samples = [] if keep_samples else None
    rng = trial_rng("sextic", seed, F)
    exceptional = 0
    while rep.trials < trials:
        a1, a2 = rng.randrange(F.q), rng.randrange(F.q)
        if a1 == a2 or a1 == F.neg(a2):
            continue
        f = sextic(inst, a1, a2)
        _, is_square, m = squarefree_radical(F, f)
        if is_square:
            exceptional += 1
            continue
        total = char_sum(F, f)
        bound = 6 * math.sqrt(F.q)
        violated = abs(total) > bound or abs(total) > m * math.sqrt(F.q)
        rep.record(abs(total) / bound, {"a1": a1, "a2": a2, "m": m, "sum": total}, violated)
    rep.params["exceptional_pairs"] = exceptional
    return rep


def exceptional_sextic_pairs(inst: CaptureInstance, values: Optional[Iterable[int]] = None) -> int:
    """Number of ``(a1, a2)`` whose sextic is a square over the closure."""
    F = inst.spec
    values = list(F.elements()) if values is None else list(values)
    return sum(
        squarefree_radical(F, sextic(inst, a1, a2))[1] for a1 in values for a2 in values
    )


# -- pair density and good vertices ------------------------------------------


def _require_generic(inst: CaptureInstance):
    if inst.case is not Case.GENERIC:
        raise PreconditionError("needs a GENERIC instance")


def pair_density_check(inst: CaptureInstance, A: Sequence[int], B: Sequence[int]):
    """``(count, |A||B|/4, |count - main| / (|A| |B|^(1/2) q^(1/4)))``."""
    _require_generic(inst)
    q = inst.spec.q
    if len(A) <= math.sqrt(q) or len(B) <= math.sqrt(q):
        raise PreconditionError("pair density needs |A|, |B| > sqrt(q)")
    count = int(x_matrix(inst, A, B).sum())
    main = len(A) * len(B) / 4
    scale = len(A) * math.sqrt(len(B)) * q**0.25
    return count, main, abs(count - main) / scale


def run_pairs(inst: CaptureInstance, trials: int, seed: int, keep_samples: bool = False):
    F = inst.spec
    size = math.ceil(2 * math.sqrt(F.q))
    rep = ExperimentReport(
        "pairs",
        seed,
        params={"p": F.p, "n": F.n, "q": F.q, "size": size, "constant": PAIR_DENSITY_CONSTANT, **inst.describe()},
    )
    rep.samples = [] if keep_samples else None
    rng = trial_rng("pairs", seed, F)
    for _ in range(trials):
        A = rng.sample(range(F.q), size)
        B = rng.sample(range(F.q), size)
        count, main, ratio = pair_density_check(inst, A, B)
        rep.record(ratio / PAIR_DENSITY_CONSTANT, {"count": count, "main": main, "deviation_ratio": ratio})
    return rep


@dataclass(frozen=True)
class GoodVertex:
    witness: int
    neighbor_count: int
    size: int
    threshold_met: bool  # |B| >= c sqrt(q); below it the result is report-only

    @property
    def holds(self) -> bool:
        return 8 * self.neighbor_count >= self.size


def good_vertex_exists(inst: CaptureInstance, B: Sequence[int], c: float = GOOD_VERTEX_C) -> GoodVertex:
    """The ``a`` in ``B`` with the most ``b`` in ``B`` such that ``X_a(b) = 1``."""
    _require_generic(inst)
    B = sorted(set(B))
    if not B:
        raise PreconditionError("B must be nonempty")
    counts = x_matrix(inst, B, B).sum(axis=1)
    k = int(np.argmax(counts))
    meets = len(B) >= c * math.sqrt(inst.spec.q)
    res = GoodVertex(B[k], int(counts[k]), len(B), meets)
    if meets and not res.holds:
        raise AssertionError(f"no element of B reaches |B|/8 neighbours: max {res.neighbor_count}")
    return res


def run_goodvertex(inst: CaptureInstance, trials: int, seed: int, c: float = GOOD_VERTEX_C):
    F = inst.spec
    size = min(F.q, math.ceil(c * math.sqrt(F.q)))
    rep = ExperimentReport("goodvertex", seed, params={"p": F.p, "n": F.n, "q": F.q, "size": size, "c": c})
    rng = trial_rng("goodvertex", seed, F)
    for _ in range(trials):
        B = rng.sample(range(F.q), size)
        try:
            gv = good_vertex_exists(inst, B, c)
        except AssertionError:
            rep.record(math.inf, violated=True)
            continue
        rep.record((gv.size / 8) / max(gv.neighbor_count, 1e-12), violated=not gv.holds)
    return rep


# -- Burgess probe -----------------------------------------------------------


def burgess_probe(p: int, lengths: Sequence[int], shifts: int, seed: int = 0) -> List[Dict]:
    """Max over random ``c`` of ``|sum_{b=1..len} chi(c + b)| / len`` per interval length.

    Purely empirical; nothing is asserted.
    """
    F = FieldSpec(p, 1)
    rng = random.Random(f"burgess:{seed}:{p}")
    table = []
    for length in lengths:
        if not 1 <= length <= p:
            raise PreconditionError(f"interval length {length} outside [1, {p}]")
        b = np.arange(1, length + 1, dtype=np.int64)
        worst = 0.0
        for _ in range(shifts):
            c = rng.randrange(p)
            s = int(F.vchi((c + b) % p).sum())
            worst = max(worst, abs(s) / length)
        table.append({"length": length, "shifts": shifts, "max_ratio": worst})
    return table


def run_burgess(p: int, lengths: Sequence[int], shifts: int, seed: int):
    rep = ExperimentReport("burgess", seed, params={"p": p, "lengths": list(lengths)})
    rep.samples = burgess_probe(p, lengths, shifts, seed)
    rep.trials = len(lengths) * shifts
    rep.max_ratio = max((row["max_ratio"] for row in rep.samples), default=0.0)
    return rep
