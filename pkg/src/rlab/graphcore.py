"""Finite simple graphs: metric operations, r-apart sets and girth variants."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .caps import get_caps
from .errors import InputError, InstanceTooLarge, NotFoundWithin

INFINITE = math.inf

VertexSet = tuple  # sorted tuple of distinct vertex indices


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    ``labels`` optionally assigns a class index to every vertex.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise InputError(f"adjacency has {len(self.adj)} rows, expected {self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise InputError("labels length does not match vertex count")
        for v, nbrs in enumerate(self.adj):
            prev = -1
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise InputError(f"neighbor {u} of {v} out of range")
                if u == v:
                    raise InputError(f"self-loop at {v}")
                if u <= prev:
                    raise InputError(f"neighbors of {v} not sorted and distinct")
                prev = u
        for v, nbrs in enumerate(self.adj):
            for u in nbrs:
                if not _contains(self.adj[u], v):
                    raise InputError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if v in nbrs[u]:
                raise InputError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs),
                   None if labels is None else tuple(labels))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    def csr(self) -> sparse.csr_matrix:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum([len(a) for a in self.adj], out=indptr[1:])
        indices = np.fromiter((u for a in self.adj for u in a), dtype=np.int64,
                              count=int(indptr[-1]))
        data = np.ones(len(indices))
        return sparse.csr_matrix((data, indices, indptr), shape=(self.n, self.n))

    def with_labels(self, labels: Sequence[int]) -> "Graph":
        return Graph(self.n, self.adj, tuple(labels))


def _contains(sorted_seq, x) -> bool:
    lo, hi = 0, len(sorted_seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if sorted_seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(sorted_seq) and sorted_seq[lo] == x


def _check_vertex(g: Graph, v: int):
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} out of range for n={g.n}")


def vertex_set(vertices: Iterable[int], g: Graph | None = None) -> VertexSet:
    s = tuple(sorted(set(vertices)))
    if g is not None:
        for v in s:
            _check_vertex(g, v)
    return s


def min_degree(g: Graph) -> int:
    return min((len(a) for a in g.adj), default=0)


def max_degree(g: Graph) -> int:
    return max((len(a) for a in g.adj), default=0)


def bfs_distances(g: Graph, source: int, limit: int | None = None) -> dict[int, int]:
    """Distances from ``source``, optionally only up to ``limit``."""
    _check_vertex(g, source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def distance(g: Graph, u: int, v: int) -> float:
    _check_vertex(g, v)
    return bfs_distances(g, u).get(v, INFINITE)


def induced(g: Graph, vertices: Sequence[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph; vertex ``k`` of the result is ``vertices[k]``."""
    order = list(vertices)
    index = {v: k for k, v in enumerate(order)}
    if len(index) != len(order):
        raise InputError("repeated vertex in induced subgraph request")
    for v in order:
        _check_vertex(g, v)
    adj = tuple(tuple(sorted(index[w] for w in g.adj[v] if w in index)) for v in order)
    labels = None if g.labels is None else tuple(g.labels[v] for v in order)
    return Graph(len(order), adj, labels), order


def ball(g: Graph, v: int, r: int) -> tuple[Graph, list[int]]:
    """The r-ball around v; vertex 0 of the result is v, the list maps back to g."""
    if r < 0:
        raise InputError("radius must be non-negative")
    dist = bfs_distances(g, v, limit=r)
    # BFS discovery order keeps v first and vertices sorted by distance
    return induced(g, list(dist))


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = list(bfs_distances(g, s))
        for v in comp:
            seen[v] = True
        comps.append(sorted(comp))
    return comps


def power_graph(g: Graph, r: int) -> Graph:
    """Graph joining vertices at distance 1..r."""
    adj = []
    for v in range(g.n):
        d = bfs_distances(g, v, limit=r)
        adj.append(tuple(sorted(u for u in d if u != v)))
    return Graph(g.n, tuple(adj))


def r_apart_greedy(g: Graph, r: int) -> VertexSet:
    """Maximal r-apart set, scanning vertices in ascending order."""
    if r < 1:
        raise InputError("r must be at least 1")
    blocked = [False] * g.n
    chosen = []
    for v in range(g.n):
        if blocked[v]:
            continue
        chosen.append(v)
        for u in bfs_distances(g, v, limit=r):
            blocked[u] = True
    return tuple(chosen)


def is_r_apart(g: Graph, vertices: Iterable[int], r: int) -> bool:
    vs = list(vertices)
    for k, v in enumerate(vs):
        near = bfs_distances(g, v, limit=r)
        if any(u in near for u in vs[k + 1:]):
            return False
    return True


def r_apart_exact(g: Graph, r: int, cap: int | None = None) -> int:
    """alpha_r(g): independence number of the r-th power graph, by branch and bound."""
    if r < 1:
        raise InputError("r must be at least 1")
    cap = get_caps().exact_apart if cap is None else cap
    if g.n > cap:
        raise InstanceTooLarge("r_apart_exact", g.n, cap)
    h = power_graph(g, r)
    masks = [sum(1 << u for u in h.adj[v]) for v in range(h.n)]
    best = len(r_apart_greedy(g, r))

    def colour_bound(cand: int) -> int:
        # greedy clique cover of the candidate set bounds its independence number
        bound = 0
        while cand:
            bound += 1
            v = cand.bit_length() - 1
            clique = 1 << v
            rest = cand & masks[v]
            while rest:
                u = rest.bit_length() - 1
                clique |= 1 << u
                rest &= masks[u]
            cand &= ~clique
        return bound

    def search(cand: int, size: int):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + colour_bound(cand) <= best:
            return
        # branch on the candidate of maximum degree within cand
        v = max(_bits(cand), key=lambda x: bin(masks[x] & cand).count("1"))
        search(cand & ~masks[v] & ~(1 << v), size + 1)
        search(cand & ~(1 << v), size)

    search((1 << h.n) - 1, 0)
    return best


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bipartition(g: Graph) -> list[int] | None:
    """A proper 2-colouring, or None if g has an odd cycle."""
    colour = [-1] * g.n
    for s in range(g.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return None
    return colour


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


def validate_two_colouring(g: Graph, colour: Sequence[int]) -> bool:
    return all(colour[u] != colour[v] for u, v in g.edges())


def girth(g: Graph) -> float:
    """Length of a shortest cycle (inf for forests)."""
    best = INFINITE
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def odd_girth(g: Graph) -> float:
    """Length of a shortest odd cycle (inf iff bipartite)."""
    if is_bipartite(g):
        return INFINITE
    best = INFINITE
    for s in range(g.n):
        dist = bfs_distances(g, s)
        for u, v in g.edges():
            if u in dist and dist[u] == dist.get(v):
                best = min(best, 2 * dist[u] + 1)
    return best


def _directed_edges(g: Graph):
    arcs = [(u, v) for u in range(g.n) for v in g.adj[u]]
    index = {a: k for k, a in enumerate(arcs)}
    return arcs, index


def nonbacktracking_matrix(g: Graph) -> tuple[sparse.csr_matrix, list[tuple[int, int]]]:
    """Hashimoto matrix B[(u,v),(v,w)] = 1 for w != u, with its arc list."""
    arcs, index = _directed_edges(g)
    rows, cols = [], []
    for k, (u, v) in enumerate(arcs):
        for w in g.adj[v]:
            if w != u:
                rows.append(k)
                cols.append(index[(v, w)])
    b = sparse.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                          shape=(len(arcs), len(arcs)))
    return b, arcs


def retracting_free_girth(g: Graph, v: int) -> int | None:
    """Shortest retracting-free closed walk through v, or None if none exists.

    Closing the walk must not reverse the first step either, so a walk
    v w ... x v is accepted only when x != w.
    """
    _check_vertex(g, v)
    best = None
    for first in g.adj[v]:
        # BFS over arcs (a, b), starting from the arc v -> first
        seen = {(v, first): 1}
        queue = deque([(v, first)])
        while queue:
            a, b = queue.popleft()
            length = seen[(a, b)]
            if best is not None and length >= best:
                break
            for c in g.adj[b]:
                if c == a:
                    continue
                if c == v and b != first:
                    if best is None or length + 1 < best:
                        best = length + 1
                    continue
                if (b, c) not in seen:
                    seen[(b, c)] = length + 1
                    queue.append((b, c))
    return best


def closed_walk_lengths(g: Graph, v: int, cap: int, b=None, arcs=None) -> np.ndarray:
    """Boolean array L with L[k] True iff v has a retracting-free closed walk of length k."""
    if b is None:
        b, arcs = nonbacktracking_matrix(g)
    bt = b.T.tocsr()
    index = {a: k for k, a in enumerate(arcs)}
    starts = [index[(v, w)] for w in g.adj[v]]
    lengths = np.zeros(cap + 1, dtype=bool)
    if not starts:
        return lengths
    # column c tracks walks whose first arc is v -> adj[v][c]
    frontier = np.zeros((len(arcs), len(starts)), dtype=np.float64)
    frontier[starts, range(len(starts))] = 1.0
    closing = [[index[(x, v)] for x in g.adj[v] if x != w] for w in g.adj[v]]
    for k in range(1, cap + 1):
        # frontier holds arcs that can be the k-th step
        for c, rows in enumerate(closing):
            if rows and frontier[rows, c].any():
                lengths[k] = True
                break
        frontier = (bt @ frontier > 0).astype(np.float64)
        if not frontier.any():
            break
    return lengths


def universal_girth(g: Graph, cap: int) -> int:
    """Smallest k such that every vertex has a retracting-free closed walk of length exactly k."""
    if cap < 3:
        raise InputError("cap must be at least 3")
    if g.n == 0:
        raise NotFoundWithin(cap)
    shortest = []
    for v in range(g.n):
        s = retracting_free_girth(g, v)
        if s is None or s > cap:
            raise NotFoundWithin(cap)
        shortest.append(s)
    # repeating a shortest walk gives every vertex a walk of length lcm(g(v))
    effective = min(cap, math.lcm(*set(shortest)))
    b, arcs = nonbacktracking_matrix(g)
    common = np.ones(effective + 1, dtype=bool)
    common[:max(shortest)] = False
    for v in range(g.n):
        common &= closed_walk_lengths(g, v, effective, b, arcs)
        if not common.any():
            raise NotFoundWithin(cap)
    return int(np.argmax(common))


# --- text formats ---------------------------------------------------------

def _content_lines(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: ``n m`` then m lines ``u v`` with u < v."""
    lines = list(_content_lines(text))
    if not lines:
        raise InputError("empty graph file")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise InputError(f"bad header line {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise InputError("negative vertex or edge count")
    if len(lines) - 1 != m:
        raise InputError(f"header declares {m} edges, found {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"bad edge line {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"bad edge line {line!r}") from None
        if u >= v:
            raise InputError(f"edge line {line!r} must satisfy u < v")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    edges = g.edges()
    return "\n".join([f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())
