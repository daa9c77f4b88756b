"""Cliques in the capture graph and the resulting capture numbers.

``greedy_clique`` follows the nested-neighbourhood construction: keep a
candidate pool, repeatedly take the pool member with the most neighbours in
the pool and shrink the pool to its neighbourhood.  ``max_clique`` is an exact
bit-parallel branch and bound (vertices renumbered by non-increasing degree,
greedy colouring classes as the pruning bound).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from formlab.capture_graph import CaptureGraph, build
from formlab.counting import (
    Case,
    CaptureInstance,
    PreconditionError,
    captured_pairs,
)

#: default branch-and-bound node budget
NODE_BUDGET = 10**8
SUBSET_ORACLE_MAX_Q = 13


class Method(str, enum.Enum):
    GREEDY = "GREEDY"
    EXACT = "EXACT"
    SUBSET_ORACLE = "SUBSET_ORACLE"


class Status(str, enum.Enum):
    EXACT = "EXACT"
    LOWER_BOUND_ONLY = "LOWER_BOUND_ONLY"


@dataclass(frozen=True)
class CliqueResult:
    members: Tuple[int, ...]  # field elements, ascending
    method: Method
    certified_max: bool
    upper_bound: Optional[int] = None  # only when the search was cut short
    nodes: int = 0

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class NqResult:
    lo: int
    hi: Optional[int]
    status: Status
    case: Case
    clique: Optional[CliqueResult] = None

    @property
    def value(self) -> Optional[int]:
        return self.lo if self.status is Status.EXACT else None

    def to_dict(self) -> dict:
        out = {
            "case": self.case.value,
            "status": self.status.value,
            "nq": self.value,
            "lo": self.lo,
            "hi": self.hi,
        }
        if self.clique is not None:
            out["clique"] = list(self.clique.members)
            out["clique_method"] = self.clique.method.value
            out["certified_max"] = self.clique.certified_max
        return out


def is_clique(G: CaptureGraph, positions) -> bool:
    positions = list(positions)
    return all(G.adjacent(i, j) for i, j in itertools.combinations(positions, 2))


def _members(G: CaptureGraph, positions) -> Tuple[int, ...]:
    return tuple(sorted(G.vertices[i] for i in positions))


def _greedy_positions(G: CaptureGraph) -> List[int]:
    rows = G.rows
    pool = (1 << G.order) - 1
    chosen = []
    while pool:
        best_v, best_deg = -1, -1
        rest = pool
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            deg = (rows[v] & pool).bit_count()
            if deg > best_deg:
                best_v, best_deg = v, deg
            rest ^= low
        chosen.append(best_v)
        pool &= rows[best_v]
    return chosen


def greedy_clique(G: CaptureGraph) -> CliqueResult:
    """Nested-neighbourhood greedy clique; ties go to the smallest element."""
    return CliqueResult(_members(G, _greedy_positions(G)), Method.GREEDY, certified_max=False)


class _BudgetExceeded(Exception):
    pass


def _color_classes(P: int, adj: List[int], kmin: int = 1):
    """Greedy sequential colouring of ``P``.

    Returns the vertices with colour ``>= kmin`` and their colours, colours
    ascending; lower classes can never beat the incumbent and are dropped.
    """
    order: List[int] = []
    colors: List[int] = []
    k = 0
    while P:
        k += 1
        avail = P
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v]
            avail ^= low
            P ^= low
            if k >= kmin:
                order.append(v)
                colors.append(k)
    return order, colors


def max_clique(G: CaptureGraph, node_budget: int = NODE_BUDGET) -> CliqueResult:
    n = G.order
    if n == 0:
        return CliqueResult((), Method.EXACT, certified_max=True)
    # renumber so that low bits hold high-degree vertices
    degree = [row.bit_count() for row in G.rows]
    perm = sorted(range(n), key=lambda i: (-degree[i], i))
    pos = {v: k for k, v in enumerate(perm)}
    adj = []
    for v in perm:
        row, bits = G.rows[v], 0
        while row:
            low = row & -row
            bits |= 1 << pos[low.bit_length() - 1]
            row ^= low
        adj.append(bits)

    greedy = _greedy_positions(G)
    best = [pos[v] for v in greedy]
    nodes = 0
    current: List[int] = []

    def expand(P: int):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExceeded
        size = len(current)
        order, colors = _color_classes(P, adj, len(best) - size + 1)
        for idx in range(len(order) - 1, -1, -1):
            if size + colors[idx] <= len(best):
                return
            v = order[idx]
            current.append(v)
            sub = P & adj[v]
            if sub:
                expand(sub)
            elif size + 1 > len(best):
                best = list(current)
            current.pop()
            P &= ~(1 << v)

    root = (1 << n) - 1
    try:
        expand(root)
    except _BudgetExceeded:
        _, colors = _color_classes(root, adj)
        return CliqueResult(
            _members(G, [perm[k] for k in best]),
            Method.EXACT,
            certified_max=False,
            upper_bound=max(colors),
            nodes=nodes,
        )
    return CliqueResult(_members(G, [perm[k] for k in best]), Method.EXACT, True, nodes=nodes)


def nq_bounds(q: int) -> float:
    """Generic-case upper bound ``2 sqrt(q) + 1``."""
    return 2 * math.sqrt(q) + 1


def nq_upper_int(q: int) -> int:
    return math.floor(nq_bounds(q))


def nq(
    inst: CaptureInstance, mode: str = "exact", node_budget: int = NODE_BUDGET
) -> NqResult:
    """Capture number of ``inst``.

    Generic instances are exact (``omega + 1``) unless ``mode == "greedy"`` or
    the node budget runs out, in which case an interval is returned.  Mode
    ``"oracle"`` answers any case exactly by subset enumeration (small q only).
    """
    q = inst.spec.q
    case = inst.case
    if mode == "oracle":
        free = max_capture_free_subset(inst)
        v = len(free) + 1
        res = CliqueResult(tuple(free), Method.SUBSET_ORACLE, certified_max=True)
        return NqResult(v, v, Status.EXACT, case, res)
    if case is Case.L_DIVIDES:
        return NqResult(1, 1, Status.EXACT, case)
    if case is Case.L_SQUARED:
        return NqResult((q + 1) // 2, q, Status.LOWER_BOUND_ONLY, case)
    if case is Case.DEGENERATE_DISC:
        return NqResult((q - 1) // 2, q, Status.LOWER_BOUND_ONLY, case)
    G = build(inst)
    if mode == "greedy":
        res = greedy_clique(G)
        return NqResult(res.size + 1, nq_upper_int(q), Status.LOWER_BOUND_ONLY, case, res)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    res = max_clique(G, node_budget)
    if res.certified_max:
        return NqResult(res.size + 1, res.size + 1, Status.EXACT, case, res)
    return NqResult(res.size + 1, res.upper_bound + 1, Status.LOWER_BOUND_ONLY, case, res)


def max_capture_free_subset(inst: CaptureInstance, max_q: int = SUBSET_ORACLE_MAX_Q):
    """Largest capture-free subset found by scanning all ``2^q`` subsets."""
    q = inst.spec.q
    if q > max_q:
        raise PreconditionError(f"subset oracle refuses q = {q} > {max_q}")
    pair_masks = {(1 << a) | (1 << b) for a, b in captured_pairs(inst)}
    best = 0
    for mask in range(1 << q):
        if mask.bit_count() > best.bit_count() and not any(
            mask & pm == pm for pm in pair_masks
        ):
            best = mask
    return [a for a in range(q) if best >> a & 1]


def nq_subset_oracle(inst: CaptureInstance, max_q: int = SUBSET_ORACLE_MAX_Q) -> int:
    """Smallest ``k`` such that every ``k``-subset captures, by exhaustive enumeration."""
    q = inst.spec.q
    if q > max_q:
        raise PreconditionError(f"subset oracle refuses q = {q} > {max_q}")
    pair_masks = [(1 << a) | (1 << b) for a, b in captured_pairs(inst)]

    def captures(mask: int) -> bool:
        return any(mask & pm == pm for pm in pair_masks)

    for k in range(q + 1):
        if all(
            captures(sum(1 << a for a in combo)) for combo in itertools.combinations(range(q), k)
        ):
            return k
    raise AssertionError("the whole field always captures (0, 0)")
