"""Named graph families used as fixtures and in experiments."""
from __future__ import annotations

import numpy as np

from .graphcore import Graph


def empty(n: int) -> Graph:
    return Graph.from_edges(n, [])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star(k: int) -> Graph:
    return complete_bipartite(1, k)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def prism(n: int) -> Graph:
    """C_n x K_2: two n-cycles joined by a perfect matching (3-regular)."""
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    return Graph.from_edges(2 * n, edges)


def prism_spectrum(n: int) -> np.ndarray:
    """Closed-form spectrum of C_n x K_2: 2cos(2 pi k/n) +- 1, descending."""
    base = 2 * np.cos(2 * np.pi * np.arange(n) / n)
    return np.sort(np.concatenate([base + 1, base - 1]))[::-1]


def circulant(n: int, offsets) -> Graph:
    edges = set()
    for i in range(n):
        for s in offsets:
            j = (i + s) % n
            if j != i:
                edges.add((min(i, j), max(i, j)))
    return Graph.from_edges(n, sorted(edges))


def random_regular(n: int, d: int, rng: np.random.Generator, tries: int = 1000) -> Graph:
    """Random simple d-regular graph: sequential pairing of admissible stubs, with restarts."""
    if (n * d) % 2 or d >= n:
        raise ValueError("no simple d-regular graph with these parameters")
    for _ in range(tries):
        free = np.full(n, d)
        edges: set[tuple[int, int]] = set()
        while free.any():
            u = int(rng.choice(n, p=free / free.sum()))
            weights = free.astype(float)
            weights[u] = 0
            for v in range(n):
                if (min(u, v), max(u, v)) in edges:
                    weights[v] = 0
            if not weights.any():
                break
            v = int(rng.choice(n, p=weights / weights.sum()))
            edges.add((min(u, v), max(u, v)))
            free[u] -= 1
            free[v] -= 1
        else:
            return Graph.from_edges(n, sorted(edges))
    raise RuntimeError("pairing did not produce a simple graph")


def gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < p
    return Graph.from_edges(n, list(zip(iu[0][keep].tolist(), iu[1][keep].tolist())))
