"""Shared fixtures.

The sweep fixture is session scoped because three acceptance criteria
and a handful of unit tests all want the same 500 solved instances;
building it once keeps the suite inside its time budgets.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import pytest

from snnkit.core import Assignment, SnnInstance, brute_force_opt
from snnkit.generators import cartoon_fixture, random_instance
from snnkit.graphs import orient_edges
from snnkit.metric import EuclideanSpace

SWEEP_SIZE = 500
SWEEP_SEED = 42

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@dataclass(eq=False)
class SweepItem:
    inst: SnnInstance
    opt: Assignment
    r: int


@dataclass(eq=False)
class Sweep:
    items: list
    build_seconds: float


@pytest.fixture(scope="session")
def sweep() -> Sweep:
    t0 = time.perf_counter()
    rng = np.random.default_rng(SWEEP_SEED)
    items = []
    for _ in range(SWEEP_SIZE):
        inst = random_instance(rng)
        opt = brute_force_opt(inst)
        items.append(SweepItem(inst, opt, orient_edges(inst.graph).r))
    return Sweep(items, time.perf_counter() - t0)


@pytest.fixture(scope="session")
def cartoon() -> np.ndarray:
    return cartoon_fixture(64, 64)


def space_dist(space):
    """Pure-python point distance for a space, for oracle cross-checks."""
    if isinstance(space, EuclideanSpace):
        from oracles import euclid
        return euclid
    mat = space.matrix
    return lambda a, b: float(mat[int(a), int(b)])
