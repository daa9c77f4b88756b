"""Deterministic test instances shared by the sweep, the lab and the test-suite."""

from __future__ import annotations

import random
from typing import List, Optional, Sequence

from formlab.counting import Case, CaptureInstance
from formlab.ff_core import FieldSpec
from formlab.forms import LinearForm, QuadraticForm

# (L, Q) pairs that are generic over every odd field
FIXED_GENERIC = (
    ((1, 1), (0, 1, 0)),  # x + y, xy
    ((1, 0), (1, 0, 1)),  # x, x^2 + y^2
)


def random_instance(
    F: FieldSpec, rng: random.Random, cases: Optional[Sequence[Case]] = None
) -> CaptureInstance:
    while True:
        L = (rng.randrange(F.q), rng.randrange(F.q))
        Q = (rng.randrange(F.q), rng.randrange(F.q), rng.randrange(F.q))
        if not any(L) or not any(Q):
            continue
        inst = CaptureInstance(F, LinearForm(*L), QuadraticForm(*Q))
        if cases is None or inst.case in cases:
            return inst


def random_instances(
    F: FieldSpec, count: int, seed: int = 0, cases: Optional[Sequence[Case]] = None
) -> List[CaptureInstance]:
    rng = random.Random(f"corpus:{seed}:{F.p}:{F.n}")
    return [random_instance(F, rng, cases) for _ in range(count)]


def generic_corpus(F: FieldSpec, extra: int = 1, seed: int = 0) -> List[CaptureInstance]:
    """The fixed generic pairs followed by ``extra`` seeded random generic ones."""
    out = [CaptureInstance(F, LinearForm(*L), QuadraticForm(*Q)) for L, Q in FIXED_GENERIC]
    out.extend(random_instances(F, extra, seed, cases=(Case.GENERIC,)))
    return out
