"""Multipartite degree matrices: validation, class sizes, symmetrisation, spectrum.

Classes are 0-indexed throughout.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError
from .spectral import Spectrum, symmetric_spectrum


@dataclass(frozen=True)
class Validity:
    ok: bool
    condition: str | None = None  # "D1", "D2", "D3" when invalid
    reason: str = ""
    witness: tuple = ()

    def to_json(self) -> dict:
        out = {"valid": self.ok}
        if not self.ok:
            out.update(condition=self.condition, reason=self.reason,
                       witness=[list(w) if isinstance(w, tuple) else w for w in self.witness])
        return out


@dataclass(frozen=True)
class DegreeMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        t = len(rows)
        if t == 0:
            raise InputError("degree matrix must have order >= 1")
        if any(len(row) != t for row in rows):
            raise InputError("degree matrix must be square")
        if any(x < 0 for row in rows for x in row):
            raise InputError("degree matrix entries must be non-negative")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "DegreeMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def t(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def support_neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.t) if j != i and self.entries[i][j] > 0]

    @cached_property
    def validity(self) -> Validity:
        return validate(self)

    def require_valid(self) -> "DegreeMatrix":
        v = self.validity
        if not v.ok:
            raise InputError(f"invalid degree matrix ({v.condition}): {v.reason}")
        return self

    def to_json(self) -> list:
        return [list(r) for r in self.entries]


def _propagate(D: DegreeMatrix):
    """Ratios n_j/n_0 along a BFS spanning tree of the support graph."""
    t = D.t
    ratio: list[Fraction | None] = [None] * t
    parent = [-1] * t
    ratio[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in D.support_neighbors(i):
            if ratio[j] is None:
                # n_i d_ij = n_j d_ji
                ratio[j] = ratio[i] * Fraction(D[i, j], D[j, i])
                parent[j] = i
                queue.append(j)
    return ratio, parent


def _tree_path(parent, a, b):
    """Vertices of the spanning-tree path from a to b."""
    def up(x):
        out = [x]
        while parent[x] >= 0:
            x = parent[x]
            out.append(x)
        return out
    pa, pb = up(a), up(b)
    common = next(x for x in pa if x in set(pb))
    return pa[:pa.index(common) + 1] + list(reversed(pb[:pb.index(common)]))


def validate(D: DegreeMatrix) -> Validity:
    """Check (D1) zero-symmetric support, (D2) connected support, (D3) balanced cycles.

    (D3) is checked through a positive solution of n_i d_ij = n_j d_ji built
    along a spanning tree; such a solution exists iff every cycle is balanced.
    """
    t = D.t
    for i in range(t):
        for j in range(t):
            if D[i, j] == 0 and D[j, i] != 0:
                return Validity(False, "D1", f"d[{i}][{j}] = 0 but d[{j}][{i}] = {D[j, i]}", ((i, j),))
    ratio, parent = _propagate(D)
    unreached = [j for j in range(t) if ratio[j] is None]
    if unreached:
        reached = [j for j in range(t) if ratio[j] is not None]
        return Validity(False, "D2", "support graph is disconnected", (tuple(reached), tuple(unreached)))
    for i in range(t):
        for j in D.support_neighbors(i):
            if i < j and ratio[i] * D[i, j] != ratio[j] * D[j, i]:
                cycle = _tree_path(parent, j, i) + [j]
                return Validity(False, "D3", f"unbalanced cycle through support edge ({i}, {j})",
                                ((i, j), tuple(cycle)))
    return Validity(True)


def degrees(D: DegreeMatrix) -> tuple[int, ...]:
    D.require_valid()
    return tuple(sum(row) for row in D.entries)


@dataclass(frozen=True)
class ClassSizes:
    sizes: tuple[int, ...]
    scaled: bool = False

    def scale(self, m: int) -> "ClassSizes":
        return ClassSizes(tuple(m * x for x in self.sizes), scaled=m != 1)


def class_sizes(D: DegreeMatrix) -> ClassSizes:
    """Minimal positive integers with n_i d_ij = n_j d_ji for all i, j."""
    D.require_valid()
    ratio, _ = _propagate(D)
    denom = math.lcm(*(r.denominator for r in ratio))
    ints = [int(r * denom) for r in ratio]
    g = math.gcd(*ints)
    return ClassSizes(tuple(x // g for x in ints))


def symmetrize(D: DegreeMatrix) -> np.ndarray:
    """R D R^{-1} with R = diag(sqrt(n_i)); entry (i, j) equals sqrt(d_ij d_ji)."""
    D.require_valid()
    a = D.array()
    return np.sqrt(a * a.T)


@lru_cache(maxsize=1024)
def spectrum_of_D(D: DegreeMatrix) -> Spectrum:
    return symmetric_spectrum(symmetrize(D), "jacobi")


def rho_D(D: DegreeMatrix) -> float:
    return spectrum_of_D(D).rho


def parse_degree_matrix(text: str) -> DegreeMatrix:
    """Parse ``t`` followed by t rows of t integers ('#' starts a comment line)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputError("empty degree-matrix file")
    try:
        t = int(lines[0])
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise InputError(f"bad degree-matrix file: {exc}") from None
    if len(rows) != t or any(len(r) != t for r in rows):
        raise InputError(f"expected {t} rows of {t} integers")
    return DegreeMatrix.of(rows)


def format_degree_matrix(D: DegreeMatrix) -> str:
    return "\n".join([str(D.t)] + [" ".join(map(str, r)) for r in D.entries]) + "\n"


def read_degree_matrix(path) -> DegreeMatrix:
    with open(path) as fh:
        return parse_degree_matrix(fh.read())
