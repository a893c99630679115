"""End-to-end acceptance checks; each prints one ``criterion NN: PASS/FAIL`` line."""
import itertools
import math
import time

import numpy as np
import pytest

from oracles import dense_grid_min, universal_girth_brute
from rlab.bounds import (closed_form_rho, paschke_h, paschke_objective, paschke_rho,
                         rho_universal_cover, serre_constants)
from rlab.certify import (YES, NO, apart_chain_check, negative_side_verify, ramanujan_classic,
                          ramanujan_D, serre_verify, spectral_symmetry)
from rlab.degmat import DegreeMatrix, rho_D, spectrum_of_D
from rlab.families import (complete, complete_bipartite, cycle, gnp, path, petersen, prism,
                           prism_spectrum, random_regular)
from rlab.graphcore import girth, universal_girth
from rlab.realize import realize, verify_equitable
from rlab.spectral import (count_above, count_below, eigen_full, interlace_check,
                           spectrum_contains, walk_identity_check)

KESTEN = 2 * math.sqrt(2)


def test_criterion_01_kesten_value(report):
    start = time.perf_counter()
    br = rho_universal_cover([[3]], r_max=10_000)
    elapsed = time.perf_counter() - start
    rate_ok = all(lo > KESTEN * math.cos(math.pi / (r + 2)) for r, lo in br.history)
    ok = (br.radius_reached == 10_000 and br.lower >= KESTEN - 1e-3 and rate_ok
          and elapsed < 5.0)
    report(1, ok, f"lower={br.lower:.9f} r={br.radius_reached} rate_ok={rate_ok} "
                  f"{elapsed:.2f}s")
    assert ok


def test_criterion_02_bipartite_closed_form(report):
    D = [[0, 3], [2, 0]]
    target = 1 + math.sqrt(2)
    br = rho_universal_cover(D, r_max=10_000)
    cf = closed_form_rho(D)
    ok = br.contains(target, 0.0) and br.width <= 1e-3 and abs(cf - target) <= 1e-3
    report(2, ok, f"bracket=[{br.lower:.9f}, {br.upper:.9f}] width={br.width:.2e} "
                  f"closed_form={cf:.9f}")
    assert ok


def test_criterion_03_walk_identity(report):
    start = time.perf_counter()
    bad = [(d, r, q) for d in (2, 3, 4, 5) for r in range(1, 6) for q in range(1, 9)
           if not walk_identity_check(d, r, q)]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10.0
    report(3, ok, f"160 cases, failures={bad[:3]} {elapsed:.2f}s")
    assert ok


def degree_matrix_grid(t: int, top: int = 4):
    """Every valid t x t degree matrix with entries in 0..top.

    Validity depends on the off-diagonal pattern only, so patterns are
    screened first and every diagonal is then attached.
    """
    offs = [(i, j) for i in range(t) for j in range(t) if i != j]
    for values in itertools.product(range(top + 1), repeat=len(offs)):
        base = np.zeros((t, t), dtype=int)
        for (i, j), v in zip(offs, values):
            base[i, j] = v
        if not DegreeMatrix.of(base.tolist()).validity.ok:
            continue
        for diag in itertools.product(range(top + 1), repeat=t):
            m = base.copy()
            np.fill_diagonal(m, diag)
            yield DegreeMatrix.of(m.tolist())


def test_criterion_04_realize_round_trip(report):
    failures, count, jacobi_checked = [], 0, 0
    for t in (1, 2, 3):
        for D in degree_matrix_grid(t):
            count += 1
            if not D.validity.ok:
                failures.append((D.entries, "invalid"))
                continue
            g, part = realize(D)
            ev = eigen_full(g, "lapack").array()
            if count % 499 == 0:  # the default small-n method on a spread subsample
                jac = eigen_full(g, "jacobi").array()
                jacobi_checked += 1
                if np.max(np.abs(jac - ev)) > 1e-9:
                    failures.append((D.entries, "jacobi"))
            if not verify_equitable(g, part, D):
                failures.append((D.entries, "equitable"))
            elif not spectrum_contains(ev, spectrum_of_D(D).eigenvalues, 1e-7):
                failures.append((D.entries, "spectrum"))
            elif abs(ev[0] - rho_D(D)) > 1e-8:
                failures.append((D.entries, "rho"))
    ok = not failures and count > 0
    report(4, ok, f"{count} matrices (jacobi cross-check on {jacobi_checked}), "
                  f"failures={failures[:3]}")
    assert ok


def test_criterion_05_certification_fixtures(report):
    cases = [
        ("petersen", lambda: ramanujan_classic(petersen()), YES),
        ("K_4", lambda: ramanujan_classic(complete(4)), YES),
        ("prism C_24 x K_2", lambda: ramanujan_classic(prism(24)), NO),
        ("C_6 alternating", lambda: ramanujan_D(cycle(6), [(0, 2, 4), (1, 3, 5)],
                                                DegreeMatrix.of([[0, 2], [2, 0]])), YES),
    ]
    results = []
    for name, run, want in cases:
        start = time.perf_counter()
        rep = run()
        elapsed = time.perf_counter() - start
        results.append((name, rep, rep.verdict == want and elapsed < 1.0, elapsed))
    prism_rep = results[2][1]
    gap_ok = prism_rep.compared - KESTEN > 0.1 and abs(prism_rep.compared - 2.932) < 1e-3
    ok = all(r[2] for r in results) and gap_ok
    report(5, ok, " ".join(f"{n}={rep.verdict}({t:.2f}s)" for n, rep, _, t in results)
           + f" prism_lambda2={prism_rep.compared:.6f}")
    assert ok


def test_criterion_06_serre_prism(report):
    const = serre_constants(3, 3, 0.5)
    theta = KESTEN - 0.5
    lines, ok = [], True
    for n in (50, 100, 200):
        g = prism(n)
        sp = eigen_full(g)
        closed = prism_spectrum(n)
        agree = float(np.max(np.abs(sp.array() - closed)))
        count = count_above(closed, theta)
        literal = math.ceil(n * 2 / 96)
        rep = serre_verify(g, 3, 3, 0.5, spectrum=sp)
        this = (agree <= 1e-7 and count >= literal and count >= const.required(2 * n)
                and rep.passed and rep.count == count)
        ok &= this
        lines.append(f"n={n}:count={count}>=max({literal},{const.required(2 * n)}) "
                     f"agree={agree:.1e}")
    report(6, ok, f"r={const.r} B={const.B} " + " ".join(lines))
    assert ok


@pytest.mark.xfail(strict=True, reason="h(3, g) tends to (d-2)/d = 1/3, so h(3, 20) is 0.3245 "
                                       "and cannot lie in (0.5, 1.5)")
def test_criterion_07_paschke_suite(report):
    above = all(paschke_rho(d, g) > 2 * math.sqrt(d - 1) for d in range(3, 9)
                for g in range(3, 21))
    # golden minus grid: never positive beyond rounding, and at most 1e-8 below
    gaps = [paschke_rho(d, g) - dense_grid_min(lambda s: paschke_objective(s, d, g))
            for d in range(3, 9) for g in range(3, 21)]
    worst = max(abs(x) for x in gaps) if max(gaps) <= 1e-15 else math.inf
    h20 = paschke_h(3, 20)
    dev = [abs(paschke_h(3, g) - 1) for g in (10, 15, 20)]
    decreasing = dev[0] > dev[1] > dev[2]
    in_window = 0.5 < h20 < 1.5
    ok = above and worst <= 1e-8 and decreasing and in_window
    report(7, ok, f"above_kesten={above} grid_gap={worst:.1e} |h-1| decreasing={decreasing} "
                  f"h(3,20)={h20:.6f} in (0.5,1.5)={in_window}")
    assert ok


def test_criterion_08_girth_machinery(report):
    cases = [("petersen", petersen(), 5), ("K_4", complete(4), 3), ("C_6", cycle(6), 6),
             ("K_3,3", complete_bipartite(3, 3), 4)]
    found = []
    for name, g, want in cases:
        ug = universal_girth(g, 12)
        brute = universal_girth_brute(g, 12)
        found.append((name, ug, girth(g), brute, want))
    ok = all(ug == gi == br == want for _, ug, gi, br, want in found)
    report(8, ok, " ".join(f"{n}={ug}" for n, ug, *_ in found))
    assert ok


def test_criterion_09_negative_side(report):
    rep = negative_side_verify(cycle(101), 2, 2)
    theta = -2 * (1 - (2 * math.pi / 101) ** 2)
    count = count_below(eigen_full(cycle(101)), theta)
    fixtures = [cycle(8), cycle(30), prism(10), complete_bipartite(3, 5), path(9),
                realize(DegreeMatrix.of([[0, 3], [2, 0]]))[0]]
    worst = max(spectral_symmetry(eigen_full(g)) for g in fixtures)
    ok = (rep.passed and rep.constants["r"] == 49 and rep.details["balls_bipartite"]
          and count >= 1 and worst <= 1e-7)
    report(9, ok, f"r={rep.constants['r']} bipartite_balls={rep.details['balls_bipartite']} "
                  f"count_below={count} symmetry_defect={worst:.1e}")
    assert ok


def test_criterion_10_interlacing(report):
    rng = np.random.default_rng(20261016)
    bad = 0
    for _ in range(200):
        n = int(rng.integers(2, 61))
        g = gnp(n, float(rng.uniform(0.05, 0.5)), rng)
        k = int(rng.integers(1, n + 1))
        subset = rng.choice(n, size=k, replace=False).tolist()
        bad += not interlace_check(g, subset, 1e-8)
    chain = []
    for n in (12, 20, 33, 50, 64):
        for r in (1, 2, 3):
            out = apart_chain_check(prism(n), r, slack=1e-8)
            chain.append(out["ok"])
    ok = bad == 0 and all(chain)
    report(10, ok, f"interlacing failures={bad}/200 apart-chain ok={sum(chain)}/{len(chain)}")
    assert ok
