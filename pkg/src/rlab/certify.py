"""Ramanujan-type certification and instance checks of the eigenvalue-count theorems.

Every report is a frozen dataclass with a JSON form. Comparisons against
rho(T_D) go through a (lower, upper) bracket: a claim is certified only when
it holds against the unfavourable end, refuted only when it fails against
the favourable end, and indeterminate otherwise.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .bounds import (ball_volume_bound, closed_form_rho, rho_universal_cover,
                     serre_constants, serre_r)
from .caps import get_caps
from .degmat import DegreeMatrix, format_degree_matrix, spectrum_of_D
from .errors import HypothesisViolation, InputError, NotRegular
from .graphcore import (Graph, ball, format_graph, is_bipartite, max_degree, min_degree,
                        odd_girth, r_apart_greedy, universal_girth)
from .realize import verify_equitable, verify_subdegree
from .spectral import TIE_TOL, Spectrum, count_above, count_below, eigen_full, spectral_radius
from .treeball import xdg_ball, xdg_ball_size

YES, NO, UNKNOWN = "certified-yes", "certified-no", "indeterminate"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def input_hashes(g: Graph | None = None, D: DegreeMatrix | None = None, subsets=None) -> dict:
    out = {}
    if g is not None:
        out["graph_sha256"] = digest(format_graph(g))
    if D is not None:
        out["degmat_sha256"] = digest(format_degree_matrix(D))
    if subsets is not None:
        out["subsets_sha256"] = digest(repr([sorted(s) for s in subsets]))
    return out


def compare_at_most(value: float, lo: float, hi: float, tol: float = TIE_TOL) -> str:
    """Tri-state verdict for value <= rho where only lo <= rho <= hi is known."""
    if value <= lo - tol:
        return YES
    if value > hi + tol:
        return NO
    return UNKNOWN


@dataclass(frozen=True)
class RamanujanReport:
    verdict: str
    threshold: tuple[float, float]  # bracket for the comparison value
    k: int | None  # index with lambda_{k+1}(G) compared; 1 in the classic case
    k_range: tuple[int, int]  # equal ends unless an eigenvalue of D falls inside the bracket
    compared: float | None  # lambda_{k+1}(G), None when k+1 > n
    spectrum: tuple[float, ...]
    tol: float = TIE_TOL
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "threshold": list(self.threshold), "k": self.k,
                "k_range": list(self.k_range), "compared": self.compared,
                "spectrum": list(self.spectrum), "tol": self.tol, **self.details}


def regular_degree(g: Graph) -> int:
    degs = set(g.degrees())
    if len(degs) != 1:
        raise NotRegular(f"graph is not regular (degrees {sorted(degs)[:2]}...)")
    return degs.pop()


def ramanujan_classic(g: Graph, tol: float = TIE_TOL) -> RamanujanReport:
    """lambda_2(g) <= 2 sqrt(d-1) for a d-regular g."""
    d = regular_degree(g)
    if d < 1:
        raise HypothesisViolation("degree must be at least 1")
    theta = 2 * math.sqrt(d - 1)
    sp = eigen_full(g)
    lam2 = sp[1] if len(sp) > 1 else None
    verdict = YES if lam2 is None else compare_at_most(lam2, theta, theta, tol)
    return RamanujanReport(verdict, (theta, theta), 1, (1, 1), lam2, sp.eigenvalues, tol,
                           {"d": d, "inputs": input_hashes(g)})


def rho_tree_bracket(D: DegreeMatrix, r_max: int = 4096) -> tuple[float, float, str]:
    cf = closed_form_rho(D)
    if cf is not None:
        return cf, cf, "closed-form"
    br = rho_universal_cover(D, tol=1e-10, r_max=r_max)
    return br.lower, br.upper, br.upper_source


def ramanujan_D(g: Graph, subsets, D: DegreeMatrix, mode: str = "equitable",
                tol: float = TIE_TOL, bracket: tuple[float, float] | None = None) -> RamanujanReport:
    """lambda_{k+1}(g) <= rho(T_D), with k the largest index such that lambda_k(D) >= rho(T_D)."""
    D.require_valid()
    if mode == "equitable":
        check = verify_equitable(g, subsets, D)
    elif mode == "subdegree":
        check = verify_subdegree(g, subsets, D, 0)
    else:
        raise InputError(f"unknown mode {mode!r}")
    if not check:
        raise HypothesisViolation(f"partition fails the {mode} condition: {check.to_json()}")
    if bracket is None:
        lo, hi, source = rho_tree_bracket(D)
    else:
        (lo, hi), source = bracket, "given"
    mu = spectrum_of_D(D).eigenvalues
    # lambda_1(D) = rho(D) >= rho(T_D) always, so k >= 1
    k_lo = max([1] + [i + 1 for i, x in enumerate(mu) if x >= hi + tol])
    k_hi = max([1] + [i + 1 for i, x in enumerate(mu) if x >= lo - tol])
    sp = eigen_full(g)
    details = {"mode": mode, "bracket_source": source, "spectrum_D": list(mu),
               "inputs": input_hashes(g, D, subsets)}
    if k_lo != k_hi:
        details["ambiguous_indices"] = list(range(k_lo + 1, k_hi + 1))
        return RamanujanReport(UNKNOWN, (lo, hi), None, (k_lo, k_hi), None, sp.eigenvalues,
                               tol, details)
    k = k_lo
    if k + 1 > len(sp):
        return RamanujanReport(YES, (lo, hi), k, (k, k), None, sp.eigenvalues, tol, details)
    lam = sp[k]
    return RamanujanReport(compare_at_most(lam, lo, hi, tol), (lo, hi), k, (k, k), lam,
                           sp.eigenvalues, tol, details)


@dataclass(frozen=True)
class CountReport:
    """An eigenvalue count checked against ceil(c n)."""

    status: str  # "pass", "fail", "inconclusive" or "inapplicable"
    count: int | None
    required: int | None
    threshold: float | None
    constants: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"status": self.status, "count": self.count, "required": self.required,
                "threshold": self.threshold, "constants": self.constants, **self.details}


def _check_max_degree(g: Graph, max_deg: int):
    if max_degree(g) > max_deg:
        raise HypothesisViolation(f"max degree {max_degree(g)} exceeds {max_deg}")


def _degree_hypothesis(g: Graph, d_or_D, subsets) -> tuple[DegreeMatrix, list]:
    if isinstance(d_or_D, int):
        if min_degree(g) < d_or_D:
            raise HypothesisViolation(f"min degree {min_degree(g)} is below {d_or_D}")
        return DegreeMatrix.of([[d_or_D]]), [tuple(range(g.n))]
    D = d_or_D if isinstance(d_or_D, DegreeMatrix) else DegreeMatrix.of(d_or_D)
    D.require_valid()
    if subsets is None:
        if D.t != 1:
            raise InputError("subsets are required for a degree matrix with t > 1")
        subsets = [tuple(range(g.n))]
    check = verify_subdegree(g, subsets, D, 0)
    if not check:
        raise HypothesisViolation(f"subdegree condition fails: {check.to_json()}")
    return D, list(subsets)


def serre_verify(g: Graph, d_or_D, max_deg: int, eps: float, subsets=None,
                 spectrum: Spectrum | None = None) -> CountReport:
    """At least ceil(c n) eigenvalues above rho_D - eps, with c = 1/B at r = serre_r."""
    _check_max_degree(g, max_deg)
    D, subsets = _degree_hypothesis(g, d_or_D, subsets)
    const = serre_constants(D, max_deg, eps)
    lo, hi, source = rho_tree_bracket(D)
    theta = hi - eps  # the upper end gives the smaller, safe count
    sp = spectrum or eigen_full(g)
    count = count_above(sp, theta)
    required = const.required(g.n)
    return CountReport("pass" if count >= required else "fail", count, required, theta,
                       const.to_json(), {"rho_D": [lo, hi], "rho_source": source, "n": g.n,
                                         "inputs": input_hashes(g, D, subsets)})


def apart_chain_check(g: Graph, r: int, spectrum: Spectrum | None = None,
                      slack: float = 1e-8) -> dict:
    """lambda_k(g) >= min_i rho(G_r(v_i)) for k vertices pairwise more than 2r+1 apart.

    Such vertices have disjoint r-balls with no edges between them, so the
    union of the balls is an induced subgraph and interlacing applies.
    """
    centers = r_apart_greedy(g, 2 * r + 1)
    sp = spectrum or eigen_full(g)
    radii = [spectral_radius(ball(g, v, r)[0]) for v in centers]
    k = len(centers)
    lam_k = sp[k - 1]
    return {"k": k, "centers": list(centers), "lambda_k": lam_k, "min_ball_rho": min(radii),
            "ok": lam_k >= min(radii) - slack}


def girth_boost_verify(g: Graph, d: int, max_deg: int, girth_cap: int,
                       radius: int | None = None) -> CountReport:
    """Count eigenvalues above 2 sqrt(d-1) + delta for a graph of universal girth m.

    delta is half the gap rho(X_{d,m} ball at r*) - 2 sqrt(d-1), r* the largest
    radius whose ball fits the size cap (or ``radius``). c = 1/B is taken at the
    smallest radius whose X_{d,m} ball already reaches 2 sqrt(d-1) + delta.
    """
    if d < 3:
        raise HypothesisViolation("girth boost needs d >= 3")
    if min_degree(g) < d:
        raise HypothesisViolation(f"min degree {min_degree(g)} is below {d}")
    _check_max_degree(g, max_deg)
    m = universal_girth(g, girth_cap)
    base = 2 * math.sqrt(d - 1)
    if radius is None:
        cap = get_caps().xdg_ball
        radius = 1
        while xdg_ball_size(d, m, radius + 1) <= cap:
            radius += 1
    rho_at = {}

    def rho_x(r):
        if r not in rho_at:
            rho_at[r] = spectral_radius(xdg_ball(d, m, r).graph)
        return rho_at[r]

    delta = (rho_x(radius) - base) / 2
    consts = {"m": m, "r_star": radius, "rho_ball": rho_x(radius), "delta": delta}
    if delta <= 0:
        return CountReport("inconclusive", None, None, None, consts,
                           {"inputs": input_hashes(g)})
    lo, hi = 0, radius  # rho_x(hi) >= base + delta; ball radii grow with r
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rho_x(mid) >= base + delta:
            hi = mid
        else:
            lo = mid
    B = ball_volume_bound(max_deg, 2 * hi + 1)
    c = 1 / B
    theta = base + delta
    count = count_above(eigen_full(g), theta)
    required = math.ceil(c * g.n)
    consts.update(r=hi, B=float(B), c=float(c))
    return CountReport("pass" if count >= required else "fail", count, required, theta, consts,
                       {"n": g.n, "inputs": input_hashes(g)})


def spectral_symmetry(sp: Spectrum) -> float:
    """max_i |lambda_i + lambda_{n+1-i}|; zero for bipartite graphs."""
    x = sp.eigenvalues
    return max((abs(a + b) for a, b in zip(x, reversed(x))), default=0.0)


def balls_bipartite(g: Graph, r: int) -> bool:
    return all(is_bipartite(ball(g, v, r)[0]) for v in range(g.n))


def negative_side_verify(g: Graph, d: int, max_deg: int) -> CountReport:
    """Eigenvalues below the nominal -2 sqrt(d-1) (1 - (2 pi / g_odd)^2).

    Uses r = floor(g_odd/2) - 1, for which every r-ball is bipartite.
    """
    if min_degree(g) < d:
        raise HypothesisViolation(f"min degree {min_degree(g)} is below {d}")
    _check_max_degree(g, max_deg)
    go = odd_girth(g)
    sp = eigen_full(g)
    if go == math.inf:
        return CountReport("inapplicable", None, None, None, {"odd_girth": None},
                           {"reason": "bipartite", "symmetry_defect": spectral_symmetry(sp),
                            "inputs": input_hashes(g)})
    go = int(go)
    r = go // 2 - 1
    if r < 1:
        return CountReport("inapplicable", None, None, None, {"odd_girth": go, "r": r},
                           {"reason": "odd girth too small", "inputs": input_hashes(g)})
    theta = -2 * math.sqrt(d - 1) * (1 - (2 * math.pi / go) ** 2)
    B = ball_volume_bound(max_deg, 2 * r + 1)
    required = math.ceil(g.n / B)
    bip = balls_bipartite(g, r)
    count = count_below(sp, theta)
    ok = bip and count >= required
    return CountReport("pass" if ok else "fail", count, required, theta,
                       {"odd_girth": go, "r": r, "B": float(B), "c": float(1 / B)},
                       {"threshold_kind": "nominal", "balls_bipartite": bip, "n": g.n,
                        "inputs": input_hashes(g)})


def negative_side_verify_D(g: Graph, subsets, D: DegreeMatrix, max_deg: int,
                           eps: float) -> CountReport:
    """Eigenvalues below -rho_D + eps, needing odd girth >= 2 r(D, eps) + 3."""
    _check_max_degree(g, max_deg)
    D, subsets = _degree_hypothesis(g, D, subsets)
    r = serre_r(D, eps)
    need = 2 * r + 3
    go = odd_girth(g)
    sp = eigen_full(g)
    consts = {"r": r, "required_odd_girth": need,
              "odd_girth": None if go == math.inf else int(go)}
    if go < need:
        return CountReport("inapplicable", None, None, None, consts,
                           {"reason": "odd girth too small", "inputs": input_hashes(g, D, subsets)})
    lo, hi, source = rho_tree_bracket(D)
    theta = -hi + eps
    B = ball_volume_bound(max_deg, 2 * r + 1)
    required = math.ceil(g.n / B)
    count = count_below(sp, theta)
    consts.update(B=float(B), c=float(1 / B))
    return CountReport("pass" if count >= required else "fail", count, required, theta, consts,
                       {"rho_D": [lo, hi], "rho_source": source, "n": g.n,
                        "inputs": input_hashes(g, D, subsets)})


def verdict_exit_code(verdict: str) -> int:
    return 3 if verdict in (UNKNOWN, "inconclusive") else 0

