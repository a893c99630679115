"""Finite balls of universal covers T_D, root-deficient trees T'_d and cycle-expanded trees X_{d,g}.

The quotient path avoids building balls explicitly. A vertex's subtree in
T_{D,r} depends only on (depth, class, parent class), so the pivots of an
LDL^T elimination of lam*I - A taken leaves-first depend only on that
state. lam > rho(ball) exactly when every pivot is positive, which turns the
radius computation into a bisection over a recursion with r*t^2 states.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .caps import get_caps
from .degmat import DegreeMatrix
from .errors import BallTooLarge, InputError
from .graphcore import Graph


@dataclass(frozen=True)
class TypedTreeBall:
    graph: Graph  # graph.labels holds the class of every vertex
    root: int
    depth: tuple[int, ...]
    radius: int
    source: str

    @property
    def labels(self) -> tuple[int, ...]:
        return self.graph.labels

    @property
    def n(self) -> int:
        return self.graph.n

    def label_lines(self) -> str:
        return "".join(f"{v} {c} {k}\n" for v, (c, k) in enumerate(zip(self.labels, self.depth)))


def child_counts(D: DegreeMatrix, cls: int, parent: int | None) -> list[tuple[int, int]]:
    out = []
    for q in range(D.t):
        c = D[cls, q] - (1 if q == parent else 0)
        if c > 0:
            out.append((q, c))
    return out


def _check_class(D: DegreeMatrix, i: int):
    if not 0 <= i < D.t:
        raise InputError(f"class {i} out of range for t={D.t}")


def tree_ball(D: DegreeMatrix, i: int, r: int, cap: int | None = None) -> TypedTreeBall:
    """Explicit r-ball of T_D around a root of class i (breadth-first expansion)."""
    D.require_valid()
    _check_class(D, i)
    if r < 0:
        raise InputError("radius must be non-negative")
    cap = get_caps().tree_ball if cap is None else cap
    total = quotient(D, i, r).total_vertices
    if total > cap:
        raise BallTooLarge("tree_ball", total, cap)
    labels = [i]
    depth = [0]
    parent_class: list[int | None] = [None]
    edges = []
    frontier = [0]
    for k in range(r):
        nxt = []
        for v in frontier:
            for q, c in child_counts(D, labels[v], parent_class[v]):
                for _ in range(c):
                    u = len(labels)
                    labels.append(q)
                    depth.append(k + 1)
                    parent_class.append(labels[v])
                    edges.append((v, u))
                    nxt.append(u)
        frontier = nxt
    g = Graph.from_edges(len(labels), edges, labels)
    return TypedTreeBall(g, 0, tuple(depth), r, f"T_D@{i}")


def deficient_tree_ball(d: int, r: int, cap: int | None = None) -> TypedTreeBall:
    """r-ball of T'_d: the root has d-1 children and every other inner vertex degree d."""
    if d < 2:
        raise InputError("degree must be at least 2")
    if r < 0:
        raise InputError("radius must be non-negative")
    cap = get_caps().tree_ball if cap is None else cap
    total = sum((d - 1) ** k for k in range(r + 1))
    if total > cap:
        raise BallTooLarge("deficient_tree_ball", total, cap)
    edges = []
    depth = [0]
    frontier = [0]
    for k in range(r):
        nxt = []
        for v in frontier:
            for _ in range(d - 1):
                u = len(depth)
                depth.append(k + 1)
                edges.append((v, u))
                nxt.append(u)
        frontier = nxt
    g = Graph.from_edges(len(depth), edges, [0] * len(depth))
    return TypedTreeBall(g, 0, tuple(depth), r, f"T'_{d}")


def _xdg_step(word: tuple, gen: int, g: int) -> tuple:
    """Right-multiply a normal form of Z_2^{*(d-2)} * Z_g by a generator.

    Syllables: positive k is a^k (1 <= k < g), negative -(i+1) is the involution b_i.
    Generators: 1 and g-1 for a^{+-1}, -(i+1) for b_i.
    """
    if gen > 0:
        if word and word[-1] > 0:
            k = (word[-1] + gen) % g
            return word[:-1] + (k,) if k else word[:-1]
        return word + (gen,)
    if word and word[-1] == gen:
        return word[:-1]
    return word + (gen,)


def xdg_ball(d: int, g: int, r: int, cap: int | None = None, center: tuple = ()) -> TypedTreeBall:
    """r-ball of X_{d,g} (a (d-2)g-regular tree with vertices blown up into g-cycles).

    X_{d,g} is the Cayley graph of the free product of d-2 copies of Z_2 and
    one Z_g; vertices are normal forms, ``center`` picks the root (identity by
    default). Every vertex lies on one g-cycle and has d-2 tree edges.
    """
    if d < 3 or g < 3:
        raise InputError("X_{d,g} needs d >= 3 and g >= 3")
    if r < 0:
        raise InputError("radius must be non-negative")
    cap = get_caps().xdg_ball if cap is None else cap
    gens = [1, g - 1] + [-(i + 1) for i in range(d - 2)]
    index = {center: 0}
    words = [center]
    depth = [0]
    queue = deque([center])
    while queue:
        w = queue.popleft()
        k = depth[index[w]]
        if k == r:
            continue
        for s in gens:
            u = _xdg_step(w, s, g)
            if u not in index:
                if len(words) >= cap:
                    raise BallTooLarge("xdg_ball", len(words) + 1, cap)
                index[u] = len(words)
                words.append(u)
                depth.append(k + 1)
                queue.append(u)
    edges = set()
    for v, w in enumerate(words):
        for s in gens:
            u = index.get(_xdg_step(w, s, g))
            if u is not None and u != v:
                edges.add((min(u, v), max(u, v)))
    graph = Graph.from_edges(len(words), sorted(edges), [0] * len(words))
    return TypedTreeBall(graph, 0, tuple(depth), r, f"X_{d},{g}")


def xdg_ball_size(d: int, g: int, r: int) -> int:
    """Vertex count of an r-ball in X_{d,g}, from the cycle/tree layering."""
    # per distance: vertices reached through a tree edge (fresh cycle entry) or along a cycle
    # each cycle entered at distance k contributes vertices at k+1..k+floor(g/2)
    entries = [0] * (r + 1)  # number of cycles entered at each distance
    count = [0] * (r + 1)
    entries[0] = 1
    for k in range(r + 1):
        if entries[k] == 0:
            continue
        for j in range(g):
            dist = k + min(j, g - j)
            if dist > r:
                continue
            count[dist] += entries[k]
            # the cycle vertex at distance `dist` has d-2 tree edges, one used to enter when j == 0
            if dist + 1 <= r:
                fresh = (d - 2) - (1 if (j == 0 and k > 0) else 0)
                entries[dist + 1] += entries[k] * fresh
    return sum(count)


@dataclass(frozen=True)
class QuotientMatrix:
    """States (depth, class, parent class) of T_{D,r} with child transition counts."""

    D: DegreeMatrix
    root_class: int
    radius: int
    states: tuple[tuple[int, int, int | None], ...]
    children: tuple[tuple[tuple[int, int], ...], ...]  # per state: (child state, count)
    sizes: tuple[int, ...]  # number of ball vertices in each state

    @property
    def order(self) -> int:
        return len(self.states)

    @property
    def total_vertices(self) -> int:
        return sum(self.sizes)

    def parents(self) -> list[list[int]]:
        out = [[] for _ in self.states]
        for s, ch in enumerate(self.children):
            for c, _ in ch:
                out[c].append(s)
        return out

    @property
    def equitable(self) -> bool:
        """True when every state has a unique parent state, making the partition equitable."""
        return all(len(p) <= 1 for p in self.parents())

    def matrix(self) -> np.ndarray:
        """Integer quotient matrix (child counts down, 1 up); only defined when equitable."""
        if not self.equitable:
            raise ValueError("state partition is not equitable for this degree matrix")
        m = np.zeros((self.order, self.order), dtype=np.int64)
        for s, ch in enumerate(self.children):
            for c, cnt in ch:
                m[s, c] = cnt
                m[c, s] = 1
        return m

    def child_matrix(self) -> np.ndarray:
        m = np.zeros((self.order, self.order), dtype=np.int64)
        for s, ch in enumerate(self.children):
            for c, cnt in ch:
                m[s, c] = cnt
        return m

    def pivots_positive(self, lam: float) -> bool:
        """True iff every LDL^T pivot of lam*I - A(ball) is positive, i.e. lam > rho(ball)."""
        f = [0.0] * self.order
        for s in range(self.order - 1, -1, -1):
            val = lam
            for c, cnt in self.children[s]:
                fc = f[c]
                if fc <= 0.0:
                    return False
                val -= cnt / fc
            f[s] = val
        return f[0] > 0.0

    def rho_bracket(self, rel_tol: float = 4e-16) -> tuple[float, float]:
        """(lo, hi) with lo <= rho(ball) < hi, by bisection on pivot positivity."""
        if self.radius == 0:
            return 0.0, 0.0
        lo = 0.0
        hi = float(max(sum(row) for row in self.D.entries)) + 1.0
        while hi - lo > rel_tol * hi:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if self.pivots_positive(mid):
                hi = mid
            else:
                lo = mid
        return lo, hi

    def spectral_radius(self) -> float:
        lo, hi = self.rho_bracket()
        return 0.5 * (lo + hi)


def quotient(D: DegreeMatrix, i: int, r: int) -> QuotientMatrix:
    """Radial state quotient of T_{D,r} rooted at class i.

    States are ordered by depth, so children always have larger indices.
    """
    D.require_valid()
    _check_class(D, i)
    if r < 0:
        raise InputError("radius must be non-negative")
    states = [(0, i, None)]
    sizes = [1]
    children: list[list[tuple[int, int]]] = [[]]
    layer = {(i, None): 0}
    for k in range(r):
        nxt: dict[tuple[int, int], int] = {}
        for (cls, par), s in sorted(layer.items(), key=lambda kv: kv[1]):
            for q, c in child_counts(D, cls, par):
                key = (q, cls)
                if key not in nxt:
                    nxt[key] = len(states)
                    states.append((k + 1, q, cls))
                    sizes.append(0)
                    children.append([])
                children[s].append((nxt[key], c))
                sizes[nxt[key]] += sizes[s] * c
        layer = nxt
        if not layer:
            break
    return QuotientMatrix(D, i, r, tuple(states), tuple(tuple(c) for c in children), tuple(sizes))


def ball_rho(D: DegreeMatrix, i: int, r: int) -> float:
    """rho(T_{D,r}) for a root of class i, via the quotient recursion."""
    return quotient(D, i, r).spectral_radius()


def min_ball_rho(D: DegreeMatrix, r: int) -> float:
    """min over root classes of rho(T_{D,r}(s))."""
    return min(ball_rho(D, i, r) for i in range(D.t))


def tree_ball_sizes(D: DegreeMatrix, i: int, r: int) -> Sequence[int]:
    return quotient(D, i, r).sizes
