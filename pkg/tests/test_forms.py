import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from formlab.ff_core import FieldError, FieldSpec
from formlab.forms import (
    Divisibility,
    LinearForm,
    QuadraticForm,
    disc,
    divisibility,
    expand_reduced,
    parse_coeffs,
    reduce,
)


def test_reduce_examples(f7):
    red = reduce(f7, LinearForm(1, 0), QuadraticForm(0, 0, 1))
    assert (red.r, red.s, red.t, red.D) == (1, 0, 0, 0)

    # XY = (L - Y) Y = L Y - Y^2
    red = reduce(f7, LinearForm(1, 1), QuadraticForm(0, 1, 0))
    assert (red.r, red.s, red.t, red.D) == (6, 1, 0, 1)

    red = reduce(f7, LinearForm(1, 0), QuadraticForm(0, 1, 0))
    assert (red.r, red.s, red.t) == (0, 1, 0)


def test_reduce_swaps_pivot(f7):
    red = reduce(f7, LinearForm(0, 3), QuadraticForm(1, 2, 5))
    assert red.swapped and red.pivot == "Y" and red.a1 == 3
    assert expand_reduced(f7, red) == QuadraticForm(1, 2, 5)


def test_disc_examples(f7):
    assert disc(f7, QuadraticForm(0, 1, 0)) == 1
    assert disc(f7, QuadraticForm(1, 0, 1)) == 3
    assert disc(f7, QuadraticForm(1, 2, 1)) == 0


def test_divisibility_examples(f7):
    assert divisibility(f7, LinearForm(1, 0), QuadraticForm(0, 0, 1)) is Divisibility.NOT_DIVIDING
    assert divisibility(f7, LinearForm(1, 0), QuadraticForm(0, 1, 0)) is Divisibility.L_DIVIDES
    assert divisibility(f7, LinearForm(1, 0), QuadraticForm(3, 0, 0)) is Divisibility.L_SQUARED_DIVIDES


def test_zero_forms_rejected():
    with pytest.raises(FieldError):
        LinearForm(0, 0)
    with pytest.raises(FieldError):
        QuadraticForm(0, 0, 0)


def _divides_brute(F, L, Q):
    """Trial division: search for M with L*M = Q, and for c with c*L^2 = Q."""
    target = (Q.b1, Q.b2, Q.b3)
    sq = any(
        (F.mul(c, F.mul(L.a1, L.a1)), F.mul(c, F.mul(F.from_int(2), F.mul(L.a1, L.a2))), F.mul(c, F.mul(L.a2, L.a2)))
        == target
        for c in range(F.q)
    )
    if sq:
        return Divisibility.L_SQUARED_DIVIDES
    lin = any(
        (F.mul(L.a1, m1), F.add(F.mul(L.a1, m2), F.mul(L.a2, m1)), F.mul(L.a2, m2)) == target
        for m1, m2 in itertools.product(range(F.q), repeat=2)
    )
    return Divisibility.L_DIVIDES if lin else Divisibility.NOT_DIVIDING


def _all_forms(F):
    for L in itertools.product(range(F.q), repeat=2):
        if not any(L):
            continue
        for Q in itertools.product(range(F.q), repeat=3):
            if any(Q):
                yield LinearForm(*L), QuadraticForm(*Q)


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)])
def test_reduction_identity_exhaustive(p, n):
    F = FieldSpec(p, n)
    for L, Q in _all_forms(F):
        red = reduce(F, L, Q)
        assert expand_reduced(F, red) == Q
        assert F.mul(red.D, F.mul(red.a1, red.a1)) == disc(F, Q)


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (3, 2)])
def test_divisibility_against_trial_division(p, n):
    F = FieldSpec(p, n)
    for L, Q in _all_forms(F):
        assert divisibility(F, L, Q) is _divides_brute(F, L, Q)


@pytest.mark.parametrize("p,n", [(7, 1), (11, 1), (13, 1)])
def test_divisibility_against_trial_division_sampled(p, n):
    F = FieldSpec(p, n)
    rng = random.Random(f"div:{p}")
    forms = list(_all_forms(F))
    sample = rng.sample(forms, 300)
    # make sure both divisible classes are represented
    sample += [(LinearForm(1, 2), QuadraticForm(1, 4, 4)), (LinearForm(0, 1), QuadraticForm(0, 3, 2))]
    for L, Q in sample:
        assert divisibility(F, L, Q) is _divides_brute(F, L, Q)


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from([(5, 2), (3, 3), (7, 2), (101, 1)]),
    st.lists(st.integers(0, 10**6), min_size=5, max_size=5),
)
def test_reduction_identity_random(field, raw):
    F = FieldSpec(*field)
    a1, a2, b1, b2, b3 = (v % F.q for v in raw)
    if not (a1 or a2) or not (b1 or b2 or b3):
        return
    L, Q = LinearForm(a1, a2), QuadraticForm(b1, b2, b3)
    red = reduce(F, L, Q)
    assert expand_reduced(F, red) == Q
    assert F.mul(red.D, F.mul(red.a1, red.a1)) == disc(F, Q)


def test_parse_coeffs(f7):
    assert parse_coeffs(f7, "1,6", 2) == [1, 6]
    with pytest.raises(FieldError):
        parse_coeffs(f7, "1,7", 2)
    with pytest.raises(FieldError):
        parse_coeffs(f7, "1,2,3", 2)
