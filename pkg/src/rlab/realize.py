"""Finite graphs with a prescribed equitable partition, and partition checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .caps import get_caps
from .degmat import DegreeMatrix, class_sizes
from .errors import InputError
from .graphcore import Graph, VertexSet


def _constructible(D: DegreeMatrix, sizes: Sequence[int]) -> bool:
    for i in range(D.t):
        for j in range(D.t):
            d = D[i, j]
            if d == 0:
                continue
            if i != j and d > sizes[j]:
                return False
            if i == j and (d > sizes[i] - 1 or (sizes[i] * d) % 2):
                return False
    return True


def smallest_multiplier(D: DegreeMatrix, at_least: int = 1, cap: int | None = None) -> int:
    """Smallest m >= at_least for which every block of D is a simple circulant-style graph."""
    cap = get_caps().multiplier if cap is None else cap
    base = class_sizes(D).sizes
    m = max(1, at_least)
    while not _constructible(D, [m * x for x in base]):
        m += 1
        if m > cap:
            raise InputError(f"no multiplier <= {cap} realizes this degree matrix")
    return m


def realize(D: DegreeMatrix, multiplier: int = 1) -> tuple[Graph, list[VertexSet]]:
    """Graph whose partition into consecutive blocks U_0, U_1, ... is equitable with matrix D.

    Cross blocks: vertex x of U_i joins residues x*d_ij, ..., x*d_ij + d_ij - 1
    modulo |U_j|, which is (d_ij, d_ji)-biregular because |U_i| d_ij = |U_j| d_ji.
    Diagonal blocks: circulant with offsets 1..floor(d/2), plus |U_i|/2 when d is odd.
    """
    D.require_valid()
    m = smallest_multiplier(D, multiplier)
    sizes = [m * x for x in class_sizes(D).sizes]
    start = [sum(sizes[:i]) for i in range(D.t)]
    edges = set()
    for i in range(D.t):
        a = sizes[i]
        d = D[i, i]
        for x in range(a):
            offsets = list(range(1, d // 2 + 1)) + ([a // 2] if d % 2 else [])
            for o in offsets:
                y = (x + o) % a
                edges.add((start[i] + min(x, y), start[i] + max(x, y)))
        for j in range(i + 1, D.t):
            d = D[i, j]
            b = sizes[j]
            for x in range(a):
                for k in range(d):
                    edges.add((start[i] + x, start[j] + (x * d + k) % b))
    n = sum(sizes)
    labels = [i for i in range(D.t) for _ in range(sizes[i])]
    partition = [tuple(range(start[i], start[i] + sizes[i])) for i in range(D.t)]
    return Graph.from_edges(n, sorted(edges), labels), partition


@dataclass(frozen=True)
class PartitionCheck:
    ok: bool
    witness: tuple = ()  # (vertex, i, j, count, required) of the first violation

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out["witness"] = dict(zip(("vertex", "class", "target_class", "count", "required"),
                                      self.witness))
        return out


def _check_subsets(g: Graph, subsets, D: DegreeMatrix) -> list[frozenset]:
    if len(subsets) != D.t:
        raise InputError(f"expected {D.t} classes, got {len(subsets)}")
    out = []
    for s in subsets:
        s = frozenset(s)
        if any(not (isinstance(v, int) and 0 <= v < g.n) for v in s):
            raise InputError("class contains a vertex outside the graph")
        out.append(s)
    return out


def verify_equitable(g: Graph, partition, D: DegreeMatrix) -> PartitionCheck:
    """Every vertex of U_i has exactly d_ij neighbours in U_j."""
    sets = _check_subsets(g, partition, D)
    if sum(len(s) for s in sets) != g.n or len(frozenset().union(*sets)) != g.n:
        raise InputError("partition must cover the vertex set disjointly")
    cls = [0] * g.n
    for i, s in enumerate(sets):
        for v in s:
            cls[v] = i
    for v in range(g.n):
        counts = [0] * D.t
        for u in g.adj[v]:
            counts[cls[u]] += 1
        i = cls[v]
        for j in range(D.t):
            if counts[j] != D[i, j]:
                return PartitionCheck(False, (v, i, j, counts[j], D[i, j]))
    return PartitionCheck(True)


def verify_subdegree(g: Graph, subsets, D: DegreeMatrix, slack: int = 0,
                     cover: bool = False) -> PartitionCheck:
    """Every vertex of U_i has at least d_ij + slack neighbours in U_j (subsets may overlap)."""
    sets = _check_subsets(g, subsets, D)
    if cover and len(frozenset().union(*sets)) != g.n:
        return PartitionCheck(False, ("uncovered",))
    for i, si in enumerate(sets):
        for v in sorted(si):
            for j, sj in enumerate(sets):
                if D[i, j] == 0:
                    continue
                c = sum(1 for u in g.adj[v] if u in sj)
                if c < D[i, j] + slack:
                    return PartitionCheck(False, (v, i, j, c, D[i, j] + slack))
    return PartitionCheck(True)


def parse_partition(text: str) -> list[VertexSet]:
    """Lines ``i: v1 v2 ...``; class indices must be exactly 0..t-1."""
    found: dict[int, VertexSet] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise InputError(f"partition line without ':': {raw!r}")
        try:
            i = int(head)
            verts = tuple(sorted(int(x) for x in rest.split()))
        except ValueError:
            raise InputError(f"bad partition line: {raw!r}") from None
        if i in found:
            raise InputError(f"class {i} listed twice")
        if len(set(verts)) != len(verts):
            raise InputError(f"class {i} repeats a vertex")
        found[i] = verts
    if sorted(found) != list(range(len(found))):
        raise InputError("class indices must be 0..t-1")
    return [found[i] for i in range(len(found))]


def format_partition(partition: Sequence[Sequence[int]]) -> str:
    return "".join(f"{i}: {' '.join(map(str, sorted(s)))}\n" for i, s in enumerate(partition))


def read_partition(path) -> list[VertexSet]:
    with open(path) as fh:
        return parse_partition(fh.read())
