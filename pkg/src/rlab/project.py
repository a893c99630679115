"""Locally injective, class-respecting homomorphisms from T_{D,r} balls into a host graph."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .caps import get_caps
from .degmat import DegreeMatrix
from .errors import InputError
from .graphcore import Graph
from .treeball import TypedTreeBall, child_counts, tree_ball


@dataclass(frozen=True)
class Projection:
    status: str  # "success", "failure" or "budget"
    ball: TypedTreeBall
    mapping: tuple[int, ...] = ()  # host vertex of every tree vertex, on success
    witness: dict = field(default_factory=dict)
    nodes: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "success"

    def mapping_lines(self) -> str:
        return "".join(f"{v} {h}\n" for v, h in enumerate(self.mapping))

    def to_json(self) -> dict:
        return {"status": self.status, "mapping": list(self.mapping),
                "witness": self.witness, "nodes": self.nodes}


class _Budget(Exception):
    pass


def _tree_children(ball: TypedTreeBall) -> list[list[int]]:
    depth = ball.depth
    return [[u for u in ball.graph.adj[v] if depth[u] == depth[v] + 1] for v in range(ball.n)]


def _match(slots: Sequence[int], cands: dict[int, list[int]]) -> list[int] | None:
    """Assign distinct hosts to slots (slot classes) by augmenting paths; candidates ascending."""
    owner: dict[int, int] = {}

    def augment(s, seen):
        for x in cands[slots[s]]:
            if x in seen:
                continue
            seen.add(x)
            if x not in owner or augment(owner[x], seen):
                owner[x] = s
                return True
        return False

    for s in range(len(slots)):
        if not augment(s, set()):
            return None
    out = [0] * len(slots)
    for x, s in owner.items():
        out[s] = x
    return out


def subuniversal_project(g: Graph, D: DegreeMatrix, subsets, start: int, start_class: int,
                         r: int, mode: str = "greedy", budget: int | None = None) -> Projection:
    """Map tree_ball(D, start_class, r) into g with root -> start.

    Images respect classes (a class-j tree vertex lands in subsets[j]), edges
    map to edges, and each tree vertex's star maps injectively. ``greedy``
    walks the ball breadth-first and gives each child the smallest unused
    admissible neighbour. ``backtracking`` decides existence exactly, with
    feasibility memoised on (parent image, image, class, parent class, depth)
    and each star resolved by bipartite matching.
    """
    D.require_valid()
    if len(subsets) != D.t:
        raise InputError(f"expected {D.t} subsets, got {len(subsets)}")
    sets = [frozenset(s) for s in subsets]
    if not 0 <= start < g.n:
        raise InputError(f"start vertex {start} out of range")
    if not 0 <= start_class < D.t or start not in sets[start_class]:
        raise InputError(f"start vertex {start} is not in class {start_class}")
    ball = tree_ball(D, start_class, r)
    if mode == "greedy":
        return _greedy(g, sets, start, ball)
    if mode == "backtracking":
        budget = get_caps().backtrack_budget if budget is None else budget
        return _backtrack(g, D, sets, start, ball, budget)
    raise InputError(f"unknown projection mode {mode!r}")


def _greedy(g: Graph, sets, start: int, ball: TypedTreeBall) -> Projection:
    labels = ball.labels
    children = _tree_children(ball)
    phi = [-1] * ball.n
    parent = [-1] * ball.n
    phi[0] = start
    for v in range(ball.n):  # vertex order of a tree ball is breadth-first
        h = phi[v]
        used = {phi[parent[v]]} if parent[v] >= 0 else set()
        for c in children[v]:
            parent[c] = v
            pick = next((x for x in g.adj[h] if x not in used and x in sets[labels[c]]), None)
            if pick is None:
                return Projection("failure", ball, witness={
                    "tree_vertex": v, "host_vertex": h, "child": c, "child_class": labels[c]},
                    nodes=v + 1)
            used.add(pick)
            phi[c] = pick
    return Projection("success", ball, tuple(phi), nodes=ball.n)


def _backtrack(g: Graph, D: DegreeMatrix, sets, start: int, ball: TypedTreeBall,
               budget: int) -> Projection:
    r = ball.radius
    memo: dict[tuple, bool] = {}
    counter = [0]

    def slots_of(c, pc):
        return [q for q, k in child_counts(D, c, pc) for _ in range(k)]

    def candidates(hp, h, c, pc, k):
        out = {}
        for q, _ in child_counts(D, c, pc):
            out[q] = [x for x in g.adj[h] if x != hp and x in sets[q] and feasible(h, x, q, c, k + 1)]
        return out

    def feasible(hp, h, c, pc, k):
        if k == r:
            return True
        key = (hp, h, c, pc, k)
        if key in memo:
            return memo[key]
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget
        slots = slots_of(c, pc)
        ok = _match(slots, candidates(hp, h, c, pc, k)) is not None if slots else True
        memo[key] = ok
        return ok

    root_class = ball.labels[0]
    try:
        if not feasible(None, start, root_class, None, 0):
            return Projection("failure", ball, witness={
                "reason": "exhausted", "start": start, "class": root_class}, nodes=counter[0])
        labels = ball.labels
        children = _tree_children(ball)
        phi = [-1] * ball.n
        pclass: list[int | None] = [None] * ball.n
        pimage: list[int | None] = [None] * ball.n
        phi[0] = start
        for v in range(ball.n):
            kids = children[v]
            if not kids:
                continue
            c, k = labels[v], ball.depth[v]
            assign = _match([labels[u] for u in kids],
                            candidates(pimage[v], phi[v], c, pclass[v], k))
            for u, x in zip(kids, assign):
                phi[u] = x
                pclass[u] = c
                pimage[u] = phi[v]
    except _Budget:
        return Projection("budget", ball, witness={"budget": budget}, nodes=counter[0])
    return Projection("success", ball, tuple(phi), nodes=counter[0])


def verify_projection(g: Graph, sets, proj: Projection) -> bool:
    """Check class respect, edge preservation and injectivity on every star."""
    ball, phi = proj.ball, proj.mapping
    if len(phi) != ball.n:
        return False
    sets = [frozenset(s) for s in sets]
    for v in range(ball.n):
        if phi[v] not in sets[ball.labels[v]]:
            return False
        images = [phi[u] for u in ball.graph.adj[v]]
        if len(set(images)) != len(images):
            return False
        if any(x not in g.adj[phi[v]] for x in images):
            return False
    return True
