"""The capture graph of a generic instance.

Vertices are the ``a`` with ``chi(D a^2 + 4 r a) = -1``; ``a ~ b`` when both
``chi(D a^2 + 4 r b)`` and ``chi(D b^2 + 4 r a)`` are ``-1``.  A set is
capture-free exactly when it is a clique, so ``N_q = omega + 1``.

Adjacency rows are Python ints used as bitsets: bit ``j`` of ``rows[i]`` is set
when ``vertices[i]`` and ``vertices[j]`` are adjacent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from formlab.counting import Case, CaptureInstance, GuardError, PreconditionError

#: full graph construction is refused above this order
GRAPH_MAX_Q = 200_000


@dataclass(frozen=True)
class CaptureGraph:
    inst: CaptureInstance
    vertices: Tuple[int, ...]
    rows: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def density(self) -> float:
        n = self.order
        return self.edge_count() / (n * (n - 1) / 2) if n > 1 else 0.0

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as vertex-position pairs ``i < j``."""
        out = []
        for i, row in enumerate(self.rows):
            row >>= i + 1
            while row:
                low = row & -row
                out.append((i, i + low.bit_length()))
                row ^= low
        return out

    def summary(self) -> dict:
        return {
            "q": self.inst.spec.q,
            "vertices": self.order,
            "edges": self.edge_count(),
            "density": self.density(),
        }


def _require_generic(inst: CaptureInstance):
    if inst.case is not Case.GENERIC:
        raise PreconditionError(f"capture graph needs a GENERIC instance, got {inst.case.value}")


def x_indicator(inst: CaptureInstance, a: int, b: int) -> int:
    _require_generic(inst)
    F, red = inst.spec, inst.red
    four_r = F.mul(F.from_int(4), red.r)
    u = F.add(F.mul(red.D, F.mul(a, a)), F.mul(four_r, b))
    v = F.add(F.mul(red.D, F.mul(b, b)), F.mul(four_r, a))
    return int(F.chi(u) == -1 and F.chi(v) == -1)


def _neg_matrix(inst: CaptureInstance, A, B) -> np.ndarray:
    """Boolean ``[i, j]``: ``chi(D A_i^2 + 4 r B_j) == -1``."""
    F, red = inst.spec, inst.red
    A = np.asarray(A, dtype=np.int64)[:, None]
    B = np.asarray(B, dtype=np.int64)[None, :]
    four_r = F.mul(F.from_int(4), red.r)
    arg = F.vadd(F.vmul(red.D, F.vmul(A, A)), F.vmul(four_r, B))
    return F.vchi(arg) == -1


def vertex_array(inst: CaptureInstance) -> np.ndarray:
    _require_generic(inst)
    F, red = inst.spec, inst.red
    a = np.arange(F.q, dtype=np.int64)
    four_r = F.mul(F.from_int(4), red.r)
    arg = F.vadd(F.vmul(red.D, F.vmul(a, a)), F.vmul(four_r, a))
    return a[F.vchi(arg) == -1]


def vertex_count(inst: CaptureInstance) -> int:
    return int(vertex_array(inst).size)


def x_matrix(inst: CaptureInstance, A: Sequence[int], B: Sequence[int]) -> np.ndarray:
    """``[i, j] = X_{A_i}(B_j)`` as a 0/1 array."""
    _require_generic(inst)
    m = _neg_matrix(inst, A, B) & _neg_matrix(inst, B, A).T
    return m.astype(np.int64)


def _pack_rows(adj: np.ndarray) -> Tuple[int, ...]:
    packed = np.packbits(adj, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def build(inst: CaptureInstance, max_q: int = GRAPH_MAX_Q) -> CaptureGraph:
    _require_generic(inst)
    if inst.spec.q > max_q:
        raise GuardError(f"graph construction refused for q = {inst.spec.q} > {max_q}")
    V = vertex_array(inst)
    rows: List[int] = []
    step = max(1, (1 << 22) // max(1, V.size))
    for start in range(0, V.size, step):
        block = V[start : start + step]
        # row i of the block against every vertex, both directions of X
        adj = _neg_matrix(inst, block, V) & _neg_matrix(inst, V, block).T
        idx = np.arange(block.size)
        adj[idx, start + idx] = False
        rows.extend(_pack_rows(adj))
    return CaptureGraph(inst, tuple(int(v) for v in V), tuple(rows))


def from_edges(inst: CaptureInstance, vertices: Sequence[int], edges) -> CaptureGraph:
    """Graph on the given vertex list with edges given as position pairs."""
    rows = [0] * len(vertices)
    for i, j in edges:
        if i == j:
            continue
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return CaptureGraph(inst, tuple(vertices), tuple(rows))


def export_dimacs(G: CaptureGraph) -> str:
    inst = G.inst
    F = inst.spec
    edges = G.edges()
    lines = [
        "c capture graph p=%d n=%d L=%d,%d Q=%d,%d,%d"
        % (F.p, F.n, inst.L.a1, inst.L.a2, inst.Q.b1, inst.Q.b2, inst.Q.b3),
        "c vertices in ascending element order: " + " ".join(map(str, G.vertices)),
        f"p edge {G.order} {len(edges)}",
    ]
    lines.extend(f"e {i + 1} {j + 1}" for i, j in edges)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Tuple[int, List[Tuple[int, int]]]:
    """Return ``(vertex count, 0-based edge list)`` from DIMACS edge format."""
    order = None
    edges = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            order = int(parts[2])
        elif parts[0] == "e":
            i, j = int(parts[1]) - 1, int(parts[2]) - 1
            edges.append((min(i, j), max(i, j)))
    if order is None:
        raise ValueError("missing 'p edge' header")
    return order, sorted(edges)
