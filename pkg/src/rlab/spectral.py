"""Eigenvalue machinery: dense spectra, sparse spectral radius, closed walks, interlacing."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .caps import get_caps
from .errors import InputError, InstanceTooLarge
from .graphcore import Graph, bfs_distances, components, induced

TIE_TOL = 1e-9
INTERLACE_SLACK = 1e-8
POWER_SHIFT = 1.0  # A + I keeps the -rho eigenvalue of bipartite graphs from competing


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...]  # descending, with multiplicity
    residual: float
    method: str

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, i):
        return self.eigenvalues[i]

    @property
    def rho(self) -> float:
        return self.eigenvalues[0] if self.eigenvalues else 0.0

    def array(self) -> np.ndarray:
        return np.array(self.eigenvalues)

    def to_json(self) -> dict:
        return {"method": self.method, "eigenvalues": list(self.eigenvalues),
                "residual": self.residual}


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    ring = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = ring[i], ring[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        ring = [ring[0], ring[-1]] + ring[1:-1]
    return tuple(rounds)


def _offdiag_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigenvalues(matrix, tol: float = 1e-15, max_sweeps: int = 60) -> tuple[np.ndarray, float]:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the n/2 rotations of a round act on disjoint index pairs and can be
    applied together. Returns (descending eigenvalues, off-diagonal Frobenius
    norm at exit); by Weyl's inequality the latter bounds the eigenvalue error.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise InputError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-12):
        raise InputError("matrix must be symmetric")
    a = (a + a.T) / 2
    rounds = _round_robin(n) if n > 1 else ()
    scale = max(float(np.linalg.norm(a)), 1.0)
    off = _offdiag_norm(a)
    for _ in range(max_sweeps):
        if off <= tol * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            app = a[p, p]
            aqq = a[q, q]
            with np.errstate(over="ignore"):
                # huge theta (negligible apq) yields t = 0, i.e. no rotation
                theta = np.where(active, (aqq - app) / np.where(active, 2.0 * apq, 1.0), 0.0)
                t = np.where(active, np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp = a[p]
            rq = a[q]
            a[p] = c[:, None] * rp - s[:, None] * rq
            a[q] = s[:, None] * rp + c[:, None] * rq
            cp = a[:, p]
            cq = a[:, q]
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
        a = (a + a.T) / 2
        new_off = _offdiag_norm(a)
        if new_off >= off and new_off <= 1e-10 * scale:
            off = new_off
            break  # stagnated at rounding level
        off = new_off
    return np.sort(np.diagonal(a))[::-1].copy(), off


def eigen_full(g: Graph, method: str = "auto") -> Spectrum:
    """All adjacency eigenvalues of g, descending.

    ``method`` is "jacobi", "lapack", or "auto" (Jacobi up to the jacobi cap).
    """
    caps = get_caps()
    if g.n > caps.dense:
        raise InstanceTooLarge("eigen_full", g.n, caps.dense)
    return symmetric_spectrum(g.dense(), method)


def symmetric_spectrum(matrix, method: str = "auto") -> Spectrum:
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if method == "auto":
        method = "jacobi" if n <= get_caps().jacobi else "lapack"
    if n == 0:
        return Spectrum((), 0.0, method)
    if method == "jacobi":
        values, off = jacobi_eigenvalues(a)
        return Spectrum(tuple(float(x) for x in values), off, "jacobi")
    if method == "lapack":
        values, vectors = np.linalg.eigh(a)
        residual = float(np.linalg.norm(a @ vectors - vectors * values))
        return Spectrum(tuple(float(x) for x in values[::-1]), residual, "lapack")
    raise InputError(f"unknown eigen method {method!r}")


def power_iteration(matrix, x0=None, tol: float = 1e-12, window: int = 10,
                    max_iter: int = 1_000_000) -> tuple[float, int]:
    """Largest eigenvalue of a non-negative symmetric matrix by shifted power iteration.

    Iterates on M + I and stops once the Rayleigh quotient moved by less than
    ``tol`` (relative) over the last ``window`` iterations.
    """
    n = matrix.shape[0]
    x = np.ones(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    x /= np.linalg.norm(x)
    history = []
    mu = 0.0
    for it in range(1, max_iter + 1):
        y = matrix @ x + POWER_SHIFT * x
        mu = float(x @ y) - POWER_SHIFT
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, it
        x = y / norm
        history.append(mu)
        if len(history) > window:
            old = history[-window - 1]
            if abs(mu - old) <= tol * max(abs(mu), 1.0):
                return mu, it
    return mu, max_iter


def spectral_radius(g: Graph, tol: float = 1e-12) -> float:
    """rho(g) by power iteration, maximised over connected components."""
    if g.n == 0:
        return 0.0
    a = g.csr()
    best = 0.0
    for comp in components(g):
        if len(comp) == 1:
            continue
        if len(comp) == g.n:
            sub = a
        else:
            idx = np.array(comp)
            sub = a[idx][:, idx]
        best = max(best, power_iteration(sub, tol=tol)[0])
    return best


def walk_count(g: Graph, u: int, q: int, cap: int | None = None) -> int:
    """Exact number of closed walks of length q starting at u, i.e. (A^q)[u, u]."""
    cap = get_caps().walk_length if cap is None else cap
    if q < 0:
        raise InputError("walk length must be non-negative")
    if q > cap:
        raise InstanceTooLarge("walk_count length", q, cap)
    if not 0 <= u < g.n:
        raise InputError(f"vertex {u} out of range")
    dist = bfs_distances(g, u, limit=q // 2 + 1)
    counts = {u: 1}
    for step in range(q):
        remaining = q - step - 1
        nxt: dict[int, int] = defaultdict(int)
        for x, c in counts.items():
            for y in g.adj[x]:
                # walks that cannot get back to u in time are dropped
                if dist.get(y, q + 1) <= remaining:
                    nxt[y] += c
        counts = nxt
    return counts.get(u, 0)


def walk_identity_check(d: int, r: int, q: int) -> bool:
    """Check w_2q(T'_{d,r}, root) == (d-1)^q w_2q(P_{r+1}, 0) exactly."""
    from .families import path
    from .treeball import deficient_tree_ball

    tree = deficient_tree_ball(d, r)
    lhs = walk_count(tree.graph, tree.root, 2 * q)
    rhs = (d - 1) ** q * walk_count(path(r + 1), 0, 2 * q)
    return lhs == rhs


def interlace_check(g: Graph, subset: Sequence[int], slack: float = INTERLACE_SLACK) -> bool:
    """lambda_i(G) >= lambda_i(H) >= lambda_{i+n-m}(G) for H induced on subset."""
    h, _ = induced(g, sorted(set(subset)))
    big = eigen_full(g).array()
    small = eigen_full(h).array()
    n, m = len(big), len(small)
    for i in range(m):
        if small[i] > big[i] + slack or small[i] < big[i + n - m] - slack:
            return False
    return True


def count_above(s: Spectrum | Sequence[float], theta: float, tol: float = TIE_TOL) -> int:
    """Number of eigenvalues strictly above theta; values within tol of theta do not count."""
    values = s.eigenvalues if isinstance(s, Spectrum) else s
    return sum(1 for x in values if x > theta + tol)


def count_below(s: Spectrum | Sequence[float], theta: float, tol: float = TIE_TOL) -> int:
    values = s.eigenvalues if isinstance(s, Spectrum) else s
    return sum(1 for x in values if x < theta - tol)


def spectrum_contains(big, small, tol: float = 1e-7) -> bool:
    """True when every value of ``small`` matches a distinct value of ``big`` within tol."""
    big = np.sort(np.asarray(big, dtype=float))
    used = np.zeros(len(big), dtype=bool)
    for x in np.sort(np.asarray(small, dtype=float)):
        k = int(np.searchsorted(big, x - tol))
        while k < len(big) and used[k]:
            k += 1
        if k == len(big) or big[k] > x + tol:
            return False
        used[k] = True
    return True
