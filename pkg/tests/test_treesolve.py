from __future__ import annotations

import numpy as np
import pytest

from snnkit.core import brute_force_opt, cost, make_instance
from snnkit.generators import random_instance
from snnkit.graphs import grid_graph
from snnkit.metric import EuclideanSpace, LatticeBox
from snnkit.treemetric import TreeMetric
from snnkit.treesolve import euclidean_refine, tree_labeling_solve


def euclidean_only(rng, **kw):
    while True:
        inst = random_instance(rng, **kw)
        if inst.space.kind == "euclidean":
            return inst


def test_solution_is_valid_and_consistent():
    rng = np.random.default_rng(21)
    for _ in range(40):
        inst = euclidean_only(rng)
        a = tree_labeling_solve(inst)
        assert len(a.idx) == inst.k
        assert np.all(a.idx >= 0) and np.all(a.idx < inst.n_labels)
        assert cost(inst, a.idx).total == pytest.approx(a.total, abs=1e-9)


def test_solution_never_beats_optimum():
    rng = np.random.default_rng(22)
    for _ in range(40):
        inst = euclidean_only(rng)
        opt = brute_force_opt(inst)
        a = tree_labeling_solve(inst)
        assert a.total >= opt.total - 1e-9


def test_well_separated_clusters_are_solved_exactly():
    # queries hug their own label and the graph only links within a
    # cluster, so the optimum is the per-query nearest label
    sp = EuclideanSpace(2)
    labels = np.array([[0.0, 0.0], [100.0, 0.0], [0.0, 100.0]])
    queries = np.array([[0.5, 0.2], [0.1, 0.4],
                        [100.2, 0.3], [99.8, 0.1]])
    inst = make_instance(sp, labels, queries, edges=[(0, 1), (2, 3)])
    a = tree_labeling_solve(inst)
    opt = brute_force_opt(inst)
    assert a.idx.tolist() == [0, 0, 1, 1]
    assert a.total == pytest.approx(opt.total, abs=1e-9)


def test_smoothing_pull_wins_on_tight_chain():
    # a chain of queries between two far labels: collapsing to one label
    # beats the mixed assignment, and the heuristic should find a
    # single-label answer
    sp = EuclideanSpace(1)
    labels = np.array([[0.0], [10.0]])
    queries = np.array([[4.0], [5.0], [6.0]])
    inst = make_instance(sp, labels, queries,
                         edges=[(0, 1), (1, 2)])
    a = tree_labeling_solve(inst)
    assert len(set(a.idx.tolist())) == 1
    assert a.total == pytest.approx(brute_force_opt(inst).total)


def test_same_seed_is_deterministic():
    inst = euclidean_only(np.random.default_rng(30))
    a = tree_labeling_solve(inst, rng_seed=5)
    b = tree_labeling_solve(inst, rng_seed=5)
    assert a.idx.tolist() == b.idx.tolist()
    assert a.total == b.total


def test_refine_never_increases_cost():
    rng = np.random.default_rng(31)
    for _ in range(40):
        inst = euclidean_only(rng)
        start = rng.integers(0, inst.n_labels, inst.k)
        before = cost(inst, start).total
        ref = euclidean_refine(inst, start)
        assert ref.total <= before + 1e-9
        assert cost(inst, ref.idx).total == pytest.approx(ref.total, abs=1e-9)


def test_refine_fixes_an_obvious_mistake():
    sp = EuclideanSpace(1)
    inst = make_instance(sp, np.array([[0.0], [9.0]]), np.array([[0.1], [0.2]]))
    ref = euclidean_refine(inst, np.array([1, 1]))
    assert ref.idx.tolist() == [0, 0]


def test_bipartite_grid_instance_runs():
    # 3x3 grid of queries is two-colorable; exercises the checkerboard
    # descent path
    sp = EuclideanSpace(2)
    rng = np.random.default_rng(8)
    queries = rng.uniform(0, 10, (9, 2))
    labels = rng.uniform(0, 10, (5, 2))
    inst = make_instance(sp, labels, queries, edges=grid_graph(3, 3))
    a = tree_labeling_solve(inst)
    assert a.total >= brute_force_opt(inst).total - 1e-9


def test_odd_cycle_instance_runs():
    sp = EuclideanSpace(2)
    rng = np.random.default_rng(9)
    queries = rng.uniform(0, 10, (5, 2))
    labels = rng.uniform(0, 10, (4, 2))
    edges = [(i, (i + 1) % 5) for i in range(5)]
    inst = make_instance(sp, labels, queries, edges=edges)
    a = tree_labeling_solve(inst)
    assert cost(inst, a.idx).total == pytest.approx(a.total, abs=1e-9)


def test_lattice_solve_returns_points_in_box():
    sp = EuclideanSpace(3)
    box = LatticeBox(0, 255, 3)
    rng = np.random.default_rng(10)
    queries = rng.uniform(0, 255, (16, 3))
    inst = make_instance(sp, box, queries, edges=grid_graph(4, 4))
    a = tree_labeling_solve(inst)
    assert a.idx is None
    assert a.points.shape == (16, 3)
    assert box.contains(a.points)
    assert np.all(a.points == np.floor(a.points))


def test_foreign_tree_metric_rejected():
    rng = np.random.default_rng(12)
    inst = euclidean_only(rng)
    other = TreeMetric.for_points(rng.uniform(50, 60, (4, inst.space.dim)), seed=3)
    with pytest.raises(ValueError):
        tree_labeling_solve(inst, tm=other)


def test_matrix_space_rejected():
    rng = np.random.default_rng(13)
    while True:
        inst = random_instance(rng)
        if inst.space.kind != "euclidean":
            break
    with pytest.raises(ValueError):
        tree_labeling_solve(inst)
