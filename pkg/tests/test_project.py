import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlab.degmat import DegreeMatrix
from rlab.errors import InputError
from rlab.families import complete, cycle, petersen, prism, random_regular, star
from rlab.graphcore import Graph, ball
from rlab.project import subuniversal_project, verify_projection
from rlab.realize import realize, verify_subdegree
from rlab.spectral import spectral_radius, walk_count
from rlab.treeball import ball_rho
from test_degmat import valid_matrices

ALT = [(0, 2, 4), (1, 3, 5)]
C2 = DegreeMatrix.of([[0, 2], [2, 0]])


@pytest.mark.parametrize("mode", ["greedy", "backtracking"])
def test_cycle_wraps(mode):
    p = subuniversal_project(cycle(6), C2, ALT, 0, 0, 3, mode)
    assert p.ok and verify_projection(cycle(6), ALT, p)
    assert p.mapping[0] == 0
    assert set(p.mapping) == set(range(6))


@pytest.mark.parametrize("mode", ["greedy", "backtracking"])
def test_star_fails(mode):
    p = subuniversal_project(star(3), DegreeMatrix.of([[2]]), [range(4)], 0, 0, 2, mode)
    assert p.status == "failure"
    assert p.witness


def test_greedy_witness_names_first_bad_star():
    p = subuniversal_project(star(3), DegreeMatrix.of([[2]]), [range(4)], 0, 0, 2)
    assert p.witness["tree_vertex"] == 1 and p.witness["host_vertex"] == 1


@settings(max_examples=30)
@given(valid_matrices(), st.integers(0, 4), st.sampled_from(["greedy", "backtracking"]))
def test_realizations_admit_projections(D, r, mode):
    g, part = realize(D)
    for i in range(D.t):
        p = subuniversal_project(g, D, part, part[i][0], i, r, mode)
        assert p.ok and verify_projection(g, part, p)


def _walk_and_radius_checks(g, D, subsets, start, cls, r, proj):
    host_ball, _ = ball(g, start, r)
    tree = proj.ball
    for q in range(1, 7):
        assert walk_count(host_ball, 0, 2 * q) >= walk_count(tree.graph, 0, 2 * q)
    assert spectral_radius(host_ball) >= ball_rho(D, cls, r) - 1e-8


@pytest.mark.parametrize("g,D,subsets,start,cls", [
    (cycle(6), C2, ALT, 0, 0),
    (petersen(), DegreeMatrix.of([[3]]), [range(10)], 0, 0),
    (prism(7), DegreeMatrix.of([[2, 1], [1, 2]]), [range(7), range(7, 14)], 3, 0),
    (complete(5), DegreeMatrix.of([[1, 2], [1, 1]]), [range(5), range(5)], 0, 1),
])
def test_projection_dominates_walks_and_radius(g, D, subsets, start, cls):
    for r in (1, 2, 3):
        p = subuniversal_project(g, D, subsets, start, cls, r, "backtracking")
        assert p.ok
        _walk_and_radius_checks(g, D, subsets, start, cls, r, p)


@settings(max_examples=25)
@given(st.integers(0, 2 ** 31), st.integers(1, 3))
def test_slack_one_disjoint_partition_greedy_succeeds(seed, r):
    # disjoint classes with d_ij + 1 neighbours in every class
    rng = np.random.default_rng(seed)
    g = random_regular(16, 5, rng)
    order = rng.permutation(16)
    parts = [tuple(sorted(order[:8].tolist())), tuple(sorted(order[8:].tolist()))]
    counts = np.zeros((2, 2), dtype=int)
    counts[:] = 99
    for i, s in enumerate(parts):
        for v in s:
            for j, t in enumerate(parts):
                counts[i, j] = min(counts[i, j], sum(1 for u in g.adj[v] if u in t))
    D = DegreeMatrix.of(np.maximum(counts - 1, 0).tolist())
    if not D.validity.ok:
        return
    assert verify_subdegree(g, parts, D, 1)
    for i in range(2):
        p = subuniversal_project(g, D, parts, parts[i][0], i, r)
        assert p.ok and verify_projection(g, parts, p)


def test_slack_one_overlapping_subsets_can_fail():
    # with U_0 = U_1 = V a cubic host has 3 = 2 + 1 neighbours in each class, but a
    # class-0 star needs 4 distinct images, so no projection exists at all
    D = DegreeMatrix.of([[2, 2], [2, 2]])
    everything = [range(10), range(10)]
    assert verify_subdegree(petersen(), everything, D, 1)
    for mode in ("greedy", "backtracking"):
        assert not subuniversal_project(petersen(), D, everything, 0, 0, 1, mode).ok


def test_backtracking_finds_what_greedy_misses():
    # class 0 needs one class-1 and one class-2 neighbour; vertex 1 is in both classes
    g = Graph.from_edges(3, [(0, 1), (0, 2)])
    D = DegreeMatrix.of([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    subsets = [(0,), (1, 2), (1,)]
    greedy = subuniversal_project(g, D, subsets, 0, 0, 1)
    assert greedy.status == "failure"
    exact = subuniversal_project(g, D, subsets, 0, 0, 1, "backtracking")
    assert exact.ok and exact.mapping == (0, 2, 1)


def test_backtracking_budget():
    g, part = realize(DegreeMatrix.of([[3]]))
    p = subuniversal_project(g, DegreeMatrix.of([[3]]), part, 0, 0, 6, "backtracking", budget=3)
    assert p.status == "budget"


def test_mapping_lines():
    p = subuniversal_project(cycle(6), C2, ALT, 0, 0, 1)
    assert p.mapping_lines().splitlines()[0] == "0 0"


def test_project_rejects_bad_start():
    with pytest.raises(InputError):
        subuniversal_project(cycle(6), C2, ALT, 1, 0, 2)
    with pytest.raises(InputError):
        subuniversal_project(cycle(6), C2, ALT, 0, 0, 2, "random")
    with pytest.raises(InputError):
        subuniversal_project(cycle(6), C2, ALT[:1], 0, 0, 2)
