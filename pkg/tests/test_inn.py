from __future__ import annotations

import numpy as np
import pytest

from snnkit.core import brute_force_opt, cost, make_instance
from snnkit.generators import random_instance
from snnkit.inn import Stage2Solver, inn_solve, pruned_label_set
from snnkit.metric import EuclideanSpace, LatticeBox


def test_pruned_label_set_distinct_nearest():
    sp = EuclideanSpace(1)
    inst = make_instance(sp, np.array([[0.0], [5.0], [10.0]]),
                         np.array([[1.0], [0.5], [9.0]]), edges=[(0, 1), (1, 2)])
    pl = pruned_label_set(inst)
    assert pl.nn_idx.tolist() == [0, 0, 2]
    assert pl.label_idx.tolist() == [0, 2]
    assert pl.label_points.tolist() == [[0.0], [10.0]]


def test_inn_exact_equals_restricted_brute_force(sweep):
    for item in sweep.items[:100]:
        pl = pruned_label_set(item.inst)
        want = brute_force_opt(item.inst, allowed=pl.label_idx)
        got = inn_solve(item.inst, Stage2Solver(kind="exact"))
        assert got.total == pytest.approx(want.total, abs=1e-9)


def test_inn_auto_uses_exact_on_small_instances():
    rng = np.random.default_rng(5)
    for _ in range(40):
        inst = random_instance(rng)
        auto = inn_solve(inst)
        exact = inn_solve(inst, Stage2Solver(kind="exact"))
        assert auto.total == pytest.approx(exact.total, abs=1e-9)


def test_inn_heuristic_labels_stay_in_pruned_set():
    rng = np.random.default_rng(9)
    for kind in ("tree", "rplus"):
        for _ in range(15):
            inst = random_instance(rng)
            if kind == "tree" and inst.space.kind != "euclidean":
                continue
            a = inn_solve(inst, Stage2Solver(kind=kind))
            pl = pruned_label_set(inst)
            assert set(int(i) for i in a.idx) <= set(int(i) for i in pl.label_idx)
            assert cost(inst, a.idx).total == pytest.approx(a.total, abs=1e-9)


def test_inn_solution_never_beats_full_opt(sweep):
    for item in sweep.items[:100]:
        a = inn_solve(item.inst, Stage2Solver(kind="exact"))
        assert a.total >= item.opt.total - 1e-9


def test_inn_lattice_instance():
    sp = EuclideanSpace(3)
    box = LatticeBox(0, 255, 3)
    rng = np.random.default_rng(2)
    queries = rng.uniform(0, 255, (4, 3))
    inst = make_instance(sp, box, queries, edges=[(0, 1), (1, 2), (2, 3)])
    a = inn_solve(inst)
    assert a.idx is None
    assert a.points.shape == (4, 3)
    assert box.contains(a.points)


def test_stage2_solver_validation():
    with pytest.raises(ValueError):
        Stage2Solver(kind="simulated-annealing")
