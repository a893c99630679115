"""Closed-form and numeric bounds: rho(T_D) brackets, Serre constants, Paschke's formula."""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .degmat import DegreeMatrix, rho_D
from .errors import InputError
from .treeball import child_counts, quotient

GOLDEN = (math.sqrt(5) - 1) / 2


def as_degree_matrix(d_or_D) -> DegreeMatrix:
    if isinstance(d_or_D, DegreeMatrix):
        return d_or_D
    if isinstance(d_or_D, int):
        return DegreeMatrix.of([[d_or_D]])
    return DegreeMatrix.of(d_or_D)


# --- rho(T_D) -------------------------------------------------------------

def closed_form_rho(D) -> float | None:
    """2 sqrt(d-1) for [[d]], sqrt(d1-1) + sqrt(d2-1) for [[0,d1],[d2,0]] (infinite trees only)."""
    D = as_degree_matrix(D).require_valid()
    if D.t == 1 and D[0, 0] >= 2:
        return 2 * math.sqrt(D[0, 0] - 1)
    if D.t == 2 and D[0, 0] == D[1, 1] == 0 and D[0, 1] >= 2 and D[1, 0] >= 2:
        return math.sqrt(D[0, 1] - 1) + math.sqrt(D[1, 0] - 1)
    return None


def deficient_ball_rho(d: int, r: int) -> float:
    """rho(T'_{d,r}) = 2 sqrt(d-1) cos(pi/(r+2))."""
    if d < 2 or r < 0:
        raise InputError("need d >= 2 and r >= 0")
    return 2 * math.sqrt(d - 1) * math.cos(math.pi / (r + 2))


def _cone_types(D: DegreeMatrix, root: int) -> list[tuple[int, int]]:
    """(parent class, child class) pairs occurring in T_D rooted at class ``root``."""
    seen = set()
    stack = [(root, q) for q in range(D.t) if D[root, q] > 0]
    seen.update(stack)
    while stack:
        p, j = stack.pop()
        for q in range(D.t):
            if D[j, q] - (q == p) > 0 and (j, q) not in seen:
                seen.add((j, q))
                stack.append((j, q))
    return sorted(seen)


def cone_upper_bound(D, root: int = 0) -> float:
    return _cone_upper_bound(as_degree_matrix(D), root)


@lru_cache(maxsize=256)
def _cone_upper_bound(D: DegreeMatrix, root: int) -> float:
    """Upper bound on rho(T_D) from a positive test function with A x <= mu x.

    The test function multiplies by w(p, j) when stepping from a class-p parent
    to a class-j child, so A x <= mu x reduces to one posynomial inequality per
    cone type plus one at the root; the weights are optimised in log space.
    Any weights give a valid bound; on the closed-form cases the optimum
    matches rho(T_D) to rounding.
    """
    D = as_degree_matrix(D).require_valid()
    types = _cone_types(D, root)
    if not types:
        return 0.0
    idx = {ty: k for k, ty in enumerate(types)}
    k = len(types)
    rows = []  # each row is (coefficients, exponent matrix) for sum_c coef * exp(E u)
    root_terms = [(D[root, q], idx[(root, q)], 1) for q in range(D.t) if D[root, q] > 0]
    rows.append(root_terms)
    for p, j in types:
        terms = [(1, idx[(p, j)], -1)]
        for q in range(D.t):
            c = D[j, q] - (q == p)
            if c > 0:
                terms.append((c, idx[(j, q)], 1))
        rows.append(terms)
    packed = []
    for terms in rows:
        e = np.zeros((len(terms), k))
        for n, (_, col, sign) in enumerate(terms):
            e[n, col] = sign
        packed.append((np.array([c for c, _, _ in terms], dtype=float), e))

    def row_logs(u):
        return np.array([logsumexp(e @ u, b=coef) for coef, e in packed])

    def cons_fun(x):
        return x[-1] - row_logs(x[:-1])

    def cons_jac(x):
        jac = np.zeros((len(packed), k + 1))
        for n, (coef, e) in enumerate(packed):
            z = e @ x[:-1]
            w = coef * np.exp(z - z.max())
            jac[n, :-1] = -(w / w.sum()) @ e
        jac[:, -1] = 1.0
        return jac

    u0 = np.zeros(k)
    x0 = np.append(u0, row_logs(u0).max())
    objective_grad = np.zeros(k + 1)
    objective_grad[-1] = 1.0
    res = minimize(lambda x: x[-1], x0, jac=lambda x: objective_grad, method="SLSQP",
                   constraints=[{"type": "ineq", "fun": cons_fun, "jac": cons_jac}],
                   options={"ftol": 1e-15, "maxiter": 1000})
    u = res.x[:-1] if np.all(np.isfinite(res.x)) else u0
    # the bound is whatever the weights certify, regardless of solver status
    mu = float(np.exp(min(row_logs(u).max(), row_logs(u0).max())))
    return mu * (1 + 1e-13)


@dataclass(frozen=True)
class RhoBracket:
    lower: float
    upper: float
    radius_reached: int
    converged: bool
    upper_source: str  # "rho(D)", "cone", "closed-form" or "finite-tree"
    history: tuple[tuple[int, float], ...] = ()

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float, slack: float = 1e-9) -> bool:
        return self.lower - slack <= x <= self.upper + slack

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "width": self.width,
                "radius_reached": self.radius_reached, "converged": self.converged,
                "upper_source": self.upper_source,
                "history": [[r, x] for r, x in self.history]}


def _radius_schedule(r_max: int) -> list[int]:
    out, r = [], 1
    while r < r_max:
        out.append(r)
        r *= 2
    out.append(r_max)
    return out


def rho_universal_cover(D, i: int = 0, tol: float = 1e-9, r_max: int = 10_000) -> RhoBracket:
    """Bracket rho(T_D): lower end from radial quotients of growing balls, upper end
    from min(rho(D), cone test-function bound)."""
    D = as_degree_matrix(D).require_valid()
    upper, source = rho_D(D), "rho(D)"
    cone = min(cone_upper_bound(D, root) for root in range(D.t))
    if cone < upper:
        upper, source = cone, "cone"
    history = []
    lower = 0.0
    reached = 0
    converged = False
    for r in _radius_schedule(max(r_max, 1)):
        q = quotient(D, i, r)
        lo, hi = q.rho_bracket()
        history.append((r, lo))
        increment = lo - lower
        lower = max(lower, lo)
        reached = r
        if not any(child_counts(D, c, p) for k, c, p in q.states if k == r):
            # nothing grows past depth r: T_D is this finite tree
            upper, source = hi, "finite-tree"
            converged = True
            break
        if upper - lower <= tol or (len(history) > 1 and 0 <= increment < tol):
            converged = True
            break
    # a finite tree whose rho equals rho(D) can put lower a rounding error above upper
    upper = max(upper, lower)
    return RhoBracket(lower, upper, reached, converged, source, tuple(history))


def rho_D_tree(D, bracket: RhoBracket | None = None) -> tuple[float, float]:
    """Best available (low, high) for rho(T_D): closed form collapses the bracket."""
    cf = closed_form_rho(D)
    if cf is not None:
        return cf, cf
    bracket = bracket or rho_universal_cover(D)
    return bracket.lower, bracket.upper


@lru_cache(maxsize=256)
def rho_tree_upper(D: DegreeMatrix) -> float:
    """Upper end of the rho(T_D) bracket, which needs no deep balls.

    This is the closed form when one exists and the shallow cover bracket otherwise.
    """
    cf = closed_form_rho(D)
    if cf is not None:
        return cf
    return rho_universal_cover(D, tol=0.0, r_max=64).upper


def convergence_exponent(D, i: int = 0, radii: Sequence[int] = (64, 128, 256, 512, 1024)) -> float:
    """Least-squares slope of log(rho_ref - rho(T_{D,r})) against log r.

    A diagnostic for the conjectured r^-2 rate; rho_ref is the closed form
    when known, else the upper end of a deep bracket.
    """
    D = as_degree_matrix(D)
    ref = closed_form_rho(D)
    if ref is None:
        ref = rho_universal_cover(D, i, tol=0.0, r_max=max(radii) * 8).upper
    xs, ys = [], []
    for r in radii:
        gap = ref - quotient(D, i, r).spectral_radius()
        if gap > 0:
            xs.append(math.log(r))
            ys.append(math.log(gap))
    if len(xs) < 2:
        raise ValueError("not enough positive gaps to fit an exponent")
    return float(np.polyfit(xs, ys, 1)[0])


# --- Serre constants ------------------------------------------------------

def serre_r(d_or_D, eps: float, r_max: int = 100_000) -> int:
    """Smallest r with min_s rho(T_{D,r}(s)) >= rho_D - eps.

    rho_D is the closed form when known, else the upper end of its bracket,
    which can only make r larger.
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    D = as_degree_matrix(d_or_D).require_valid()
    target = rho_tree_upper(D) - eps

    def ok(r):
        return min(quotient(D, i, r).spectral_radius() for i in range(D.t)) >= target - 1e-12

    if ok(0):
        return 0
    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > r_max:
            raise InputError(f"no radius <= {r_max} reaches rho_D - eps")
    lo = hi // 2  # ok(lo) is False
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def serre_r_estimate(d: int, eps: float) -> float:
    """Leading-order radius pi * sqrt(2 sqrt(d-1) / eps)."""
    return math.pi * math.sqrt(2 * math.sqrt(d - 1) / eps)


def ball_volume_bound(max_deg: int, radius: int) -> Fraction:
    """Upper bound B on the number of vertices of a radius-R ball with max degree Delta.

    Delta/(Delta-2) (Delta-1)^R for Delta >= 3; exact Moore counts below that.
    """
    if max_deg >= 3:
        return Fraction(max_deg * (max_deg - 1) ** radius, max_deg - 2)
    if max_deg == 2:
        return Fraction(2 * radius + 1)
    return Fraction(1 + min(max_deg, 1) * min(radius, 1))


@dataclass(frozen=True)
class SerreConstants:
    r: int
    B: Fraction
    c: Fraction  # 1/B, the constant the counting argument supports
    c_display: Fraction  # Delta/(Delta-2) (Delta-1)^-(2r+1), differs from 1/B by (Delta/(Delta-2))^2
    r_estimate: float | None

    def required(self, n: int) -> int:
        return math.ceil(self.c * n)

    def to_json(self) -> dict:
        return {"r": self.r, "B": float(self.B), "c": float(self.c),
                "c_display": float(self.c_display), "r_estimate": self.r_estimate}


def serre_constants(d_or_D, max_deg: int, eps: float, r: int | None = None) -> SerreConstants:
    D = as_degree_matrix(d_or_D)
    r = serre_r(D, eps) if r is None else r
    B = ball_volume_bound(max_deg, 2 * r + 1)
    if max_deg >= 3:
        display = Fraction(max_deg, max_deg - 2) / Fraction((max_deg - 1) ** (2 * r + 1))
    else:
        display = 1 / B
    est = serre_r_estimate(D[0, 0], eps) if D.t == 1 and D[0, 0] >= 2 else None
    return SerreConstants(r, B, 1 / B, display, est)


def serre_c(d_or_D, max_deg: int, eps: float) -> float:
    """c = 1/B at r = serre_r(d_or_D, eps)."""
    return float(serre_constants(d_or_D, max_deg, eps).c)


# --- Paschke --------------------------------------------------------------

def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-9,
                   max_iter: int = 500) -> tuple[float, float]:
    """Minimise a unimodal f on [a, b]; returns (x, f(x)) with bracket width <= tol."""
    a, b = min(a, b), max(a, b)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol or not a < c < d < b:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def paschke_objective(s, d: int, g: int):
    """(d-2) phi((1 + cosh sg)/(sinh sg sinh s)) + 2 cosh s, phi(t) = (sqrt(1+t^2) - 1)/t."""
    return 2 * math.sqrt(d - 1) + paschke_excess(s, d, g)


def paschke_excess(s, d: int, g: int):
    """Paschke objective minus 2 sqrt(d-1), evaluated without cancellation.

    With u0 = sinh s the g-free part of the objective is (d-1)e^-s + e^s,
    whose excess over 2 sqrt(d-1) is (e^{s/2} - sqrt(d-1) e^{-s/2})^2. The
    cycle length enters only through 1/t = u = u0/(1 + delta) with
    delta = 2/(e^{sg} - 1) (from (1 + cosh x)/sinh x = coth(x/2)), and
    phi(1/u) = sqrt(1+u^2) - u changes by a product of positive factors.
    delta is formed from e^{-sg}, so large s*g underflows to 0 harmlessly.
    """
    s = np.asarray(s, dtype=float)
    root = math.sqrt(d - 1)
    base = (np.exp(s / 2) - root * np.exp(-s / 2)) ** 2
    e = np.exp(-s * g)
    delta = 2 * e / -np.expm1(-s * g)
    u0 = np.sinh(s)
    u = u0 / (1 + delta)
    a = np.sqrt(1 + u * u)
    b = np.cosh(s)
    bump = u0 * delta / (1 + delta) * (1 / (a + u) + 1 / (b + u0)) / (a + b)
    return base + (d - 2) * bump


@dataclass(frozen=True)
class PaschkeResult:
    d: int
    g: int
    s_star: float
    rho: float
    h: float

    def to_json(self) -> dict:
        h = None if math.isnan(self.h) else self.h
        return {"d": self.d, "g": self.g, "s_star": self.s_star, "rho": self.rho, "h": h}


def paschke_minimize(d: int, g: int, grid_points: int = 2001, s_min: float = 1e-4,
                     s_max: float = 10.0, tol: float = 1e-13) -> tuple[float, float]:
    """(s*, min excess over 2 sqrt(d-1)): log grid scan, then golden-section refinement.

    The grid guards against local minima; ties go to the smaller s. The
    excess is accurate to a few ulps relative, so bracketing s far below
    1e-9 still pays off: the excess is quadratic in the error in s and the
    g-dependent part shrinks like (d-1)^(-g/2).
    """
    if d < 3 or g < 3:
        raise InputError("Paschke's formula needs d >= 3 and g >= 3")
    grid = np.geomspace(s_min, s_max, grid_points)
    values = paschke_excess(grid, d, g)
    k = int(np.argmin(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid_points - 1)]
    s, val = golden_section(lambda x: float(paschke_excess(x, d, g)), lo, hi, tol)
    if values[k] < val:
        return float(grid[k]), float(values[k])
    return float(s), float(val)


def paschke_rho(d: int, g: int) -> float:
    """Spectral radius of X_{d,g} by Paschke's minimisation formula."""
    return 2 * math.sqrt(d - 1) + paschke_minimize(d, g)[1]


def paschke_h(d: int, g: int) -> float:
    """Empirical h(d,g) in rho(X_{d,g}) = 2 sqrt(d-1) + 2(d-2)/(d-1)^((g+1)/2) h(d,g)."""
    return paschke(d, g).h


# below this the excess is swamped by rounding in locating the minimiser
EXCESS_RESOLUTION = 1e-26


def paschke(d: int, g: int) -> PaschkeResult:
    """s*, rho and h for X_{d,g}; h is nan once the excess is too small to resolve."""
    s, excess = paschke_minimize(d, g)
    if excess > EXCESS_RESOLUTION:
        h = excess * (d - 1) ** ((g + 1) / 2) / (2 * (d - 2))
    else:
        h = math.nan
    return PaschkeResult(d, g, s, 2 * math.sqrt(d - 1) + excess, h)
