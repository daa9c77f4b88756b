import math
import random

import networkx as nx
import pytest

from formlab.capture_graph import build, from_edges
from formlab.clique import (
    Method,
    Status,
    greedy_clique,
    is_clique,
    max_clique,
    nq,
    nq_bounds,
    nq_subset_oracle,
    nq_upper_int,
)
from formlab.corpus import generic_corpus
from formlab.counting import CaptureInstance, PreconditionError, capture_exists_brute
from formlab.ff_core import FieldSpec


@pytest.fixture
def xy7(f7):
    return CaptureInstance.make(f7, (1, 1), (0, 1, 0))


def _positions(G, members):
    where = {v: i for i, v in enumerate(G.vertices)}
    return [where[m] for m in members]


def _nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.order))
    H.add_edges_from(G.edges())
    return H


def test_greedy_and_exact_f7(xy7):
    G = build(xy7)
    assert greedy_clique(G).members == (2, 5)
    res = max_clique(G)
    assert res.members == (2, 5) and res.certified_max


def test_trivial_graphs(xy7):
    single = from_edges(xy7, [3], [])
    assert greedy_clique(single).members == (3,)
    edgeless = from_edges(xy7, [1, 2, 3], [])
    assert max_clique(edgeless).size == 1
    empty = from_edges(xy7, [], [])
    assert greedy_clique(empty).size == 0 and max_clique(empty).size == 0


def test_nq_examples(f7, xy7):
    assert nq(xy7).value == 3
    res = nq(CaptureInstance.make(f7, (1, 0), (0, 1, 0)))
    assert (res.value, res.status) == (1, Status.EXACT)
    res = nq(CaptureInstance.make(f7, (1, 0), (3, 0, 0)))
    assert (res.lo, res.status) == (4, Status.LOWER_BOUND_ONLY)
    res = nq(CaptureInstance.make(f7, (1, 0), (1, 2, 1)))
    assert (res.lo, res.status) == (3, Status.LOWER_BOUND_ONLY)


def test_subset_oracle_examples(xy7):
    assert nq_subset_oracle(xy7) == 3
    inst5 = CaptureInstance.make(FieldSpec(5), (1, 1), (0, 1, 0))
    assert nq_subset_oracle(inst5) == max_clique(build(inst5)).size + 1
    with pytest.raises(PreconditionError):
        nq_subset_oracle(CaptureInstance.make(FieldSpec(17), (1, 1), (0, 1, 0)))


def test_oracle_mode_covers_degenerate_cases(f7):
    # the subset oracle sees the true value; the closed statements only bound it
    inst = CaptureInstance.make(f7, (1, 0), (3, 0, 0))
    exact = nq(inst, mode="oracle")
    assert exact.status is Status.EXACT and exact.value >= nq(inst).lo
    inst = CaptureInstance.make(f7, (1, 0), (0, 1, 0))
    assert nq(inst, mode="oracle").value == 1


def test_nq_bounds_examples():
    assert nq_upper_int(7) == 6 and math.isclose(nq_bounds(7), 2 * math.sqrt(7) + 1)
    assert nq_upper_int(9) == 7
    assert nq_upper_int(25) == 11


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)])
def test_nq_matches_subset_oracle(p, n):
    for inst in generic_corpus(FieldSpec(p, n), extra=3):
        assert nq(inst).value == nq_subset_oracle(inst)


@pytest.mark.parametrize("q", [101, 103, 199, 401])
def test_greedy_valid_and_exact_matches_networkx(q):
    inst = CaptureInstance.make(FieldSpec(q), (1, 1), (0, 1, 0))
    G = build(inst)
    g = greedy_clique(G)
    assert is_clique(G, _positions(G, g.members))
    res = max_clique(G)
    assert res.certified_max and res.method is Method.EXACT
    assert is_clique(G, _positions(G, res.members))
    assert res.size >= g.size
    assert res.size == max(len(c) for c in nx.find_cliques(_nx(G)))
    assert not capture_exists_brute(inst, res.members)


def test_exact_on_random_graphs_matches_networkx(xy7):
    rng = random.Random(0)
    for trial in range(30):
        n = rng.randint(1, 40)
        dens = rng.choice([0.2, 0.5, 0.8])
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < dens]
        G = from_edges(xy7, list(range(n)), edges)
        H = nx.Graph()
        H.add_nodes_from(range(n))
        H.add_edges_from(edges)
        omega = max(len(c) for c in nx.find_cliques(H))
        assert max_clique(G).size == omega
        assert greedy_clique(G).size <= omega


def test_budget_exhaustion_degrades_to_interval():
    inst = CaptureInstance.make(FieldSpec(1009), (1, 1), (0, 1, 0))
    res = nq(inst, node_budget=5)
    assert res.status is Status.LOWER_BOUND_ONLY
    assert res.clique.certified_max is False
    assert res.lo <= nq(inst).value <= res.hi


def test_greedy_mode(xy7):
    res = nq(xy7, mode="greedy")
    assert res.status is Status.LOWER_BOUND_ONLY and res.lo == 3 and res.hi == 6
