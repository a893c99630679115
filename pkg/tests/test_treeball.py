import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import to_nx
from rlab.degmat import DegreeMatrix
from rlab.errors import BallTooLarge, InputError
from rlab.graphcore import girth, max_degree
from rlab.spectral import eigen_full, spectral_radius
from rlab.treeball import (ball_rho, deficient_tree_ball, min_ball_rho, quotient, tree_ball,
                           tree_ball_sizes, xdg_ball, xdg_ball_size)
from test_degmat import valid_matrices


def test_tree_ball_regular():
    b = tree_ball(DegreeMatrix.of([[3]]), 0, 3)
    assert b.n == 1 + 3 + 6 + 12
    assert nx.is_tree(to_nx(b.graph))
    assert b.depth[0] == 0 and max(b.depth) == 3


def test_tree_ball_classes_follow_D():
    D = DegreeMatrix.of([[1, 2], [1, 1]])
    b = tree_ball(D, 0, 4)
    for v in range(b.n):
        if b.depth[v] < 4:
            counts = [0, 0]
            for u in b.graph.adj[v]:
                counts[b.labels[u]] += 1
            assert counts == list(D.entries[b.labels[v]])


@given(valid_matrices(), st.integers(0, 4), st.data())
def test_quotient_counts_match_explicit_ball(D, r, data):
    i = data.draw(st.integers(0, D.t - 1))
    q = quotient(D, i, r)
    if q.total_vertices > 3000:
        return
    b = tree_ball(D, i, r)
    assert b.n == q.total_vertices
    per_depth = np.bincount(b.depth, minlength=r + 1)
    for k in range(r + 1):
        assert per_depth[k] == sum(s for st_, s in zip(q.states, q.sizes) if st_[0] == k)


@given(valid_matrices(), st.integers(0, 4), st.data())
def test_quotient_radius_matches_dense_eigenvalues(D, r, data):
    i = data.draw(st.integers(0, D.t - 1))
    q = quotient(D, i, r)
    if q.total_vertices > 1500:
        return
    ref = eigen_full(tree_ball(D, i, r).graph, "lapack").rho
    lo, hi = q.rho_bracket()
    assert lo - 1e-12 <= ref <= hi + 1e-12
    assert ball_rho(D, i, r) == pytest.approx(ref, abs=1e-12)


def test_quotient_is_not_equitable_in_general():
    # state (3, 1, 1) has parents in both (2, 1, 0) and (2, 1, 2)
    q = quotient(DegreeMatrix.of([[1, 1, 1], [1, 1, 1], [1, 1, 1]]), 0, 4)
    assert not q.equitable
    with pytest.raises(ValueError):
        q.matrix()


@pytest.mark.parametrize("rows", [[[3]], [[0, 3], [2, 0]]])
def test_quotient_matrix_when_equitable(rows):
    q = quotient(DegreeMatrix.of(rows), 0, 6)
    assert q.equitable
    m = q.matrix()
    # the quotient matrix of an equitable partition shares the top eigenvalue
    a = np.sqrt(m * m.T)
    assert max(np.linalg.eigvalsh(a)) == pytest.approx(q.spectral_radius(), abs=1e-12)


def test_ball_radius_is_increasing():
    D = DegreeMatrix.of([[1, 1, 0], [1, 0, 2], [0, 1, 1]])
    vals = [min_ball_rho(D, r) for r in range(1, 12)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_tree_ball_cap():
    with pytest.raises(BallTooLarge):
        tree_ball(DegreeMatrix.of([[4]]), 0, 10, cap=1000)


def test_tree_ball_rejects_bad_input():
    with pytest.raises(InputError):
        tree_ball(DegreeMatrix.of([[3]]), 1, 2)
    with pytest.raises(InputError):
        tree_ball(DegreeMatrix.of([[3]]), 0, -1)
    with pytest.raises(InputError):
        tree_ball(DegreeMatrix.of([[0, 1], [0, 0]]), 0, 1)


def test_sizes():
    assert list(tree_ball_sizes(DegreeMatrix.of([[3]]), 0, 3)) == [1, 3, 6, 12]


@pytest.mark.parametrize("d,r", [(2, 4), (3, 3), (4, 2), (5, 3)])
def test_deficient_tree_ball(d, r):
    b = deficient_tree_ball(d, r)
    assert b.n == sum((d - 1) ** k for k in range(r + 1))
    assert len(b.graph.adj[0]) == d - 1
    expected = 2 * math.sqrt(d - 1) * math.cos(math.pi / (r + 2))
    assert spectral_radius(b.graph) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("d,g", [(3, 3), (3, 5), (4, 4), (5, 3), (4, 6)])
def test_xdg_ball_structure(d, g):
    r = 5
    b = xdg_ball(d, g, r)
    assert b.n == xdg_ball_size(d, g, r)
    assert girth(b.graph) == g
    assert max_degree(b.graph) == d
    inner = [v for v in range(b.n) if b.depth[v] < r]
    assert all(len(b.graph.adj[v]) == d for v in inner)
    h = to_nx(b.graph)
    assert nx.is_connected(h)
    # every block is a g-cycle or a bridge
    blocks = [len(c) for c in nx.biconnected_components(h)]
    assert set(blocks) <= {2, g}


def test_xdg_small_counts():
    assert [xdg_ball_size(4, 4, r) for r in range(4)] == [1, 5, 16, 46]
    assert [xdg_ball_size(3, 3, r) for r in range(4)] == [1, 4, 8, 14]


def test_xdg_cap_and_input():
    with pytest.raises(BallTooLarge):
        xdg_ball(5, 3, 8, cap=1000)
    with pytest.raises(InputError):
        xdg_ball(2, 3, 1)
