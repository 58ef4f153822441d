"""Two-stage pipeline: nearest-label pruning, then solve over the survivors.

Stage 1 replaces the label set with the distinct nearest labels of the
queries (for lattice label spaces this is exactly the set of query colors
rounded to the lattice).  Stage 2 solves the joint objective restricted to
the pruned set, by exact enumeration, the tree-descent heuristic, or the
orientation-based aggregate-NN solver.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .core import (Assignment, DEFAULT_GUARD, SnnInstance, brute_force_opt,
                   nn_label_map)
from .graphs import orient_edges
from .sparse import rplus_solve
from .treesolve import tree_labeling_solve

_EXACT_MAX_K = 8


@dataclass
class Stage2Solver:
    """Configuration of the second stage.

    kind "auto" picks exact enumeration for small instances (at most 8
    queries and within the enumeration guard) and the tree heuristic
    otherwise.
    """
    kind: str = "auto"
    rng_seed: int = 42
    guard: int = DEFAULT_GUARD
    descent_passes: int = 20
    refine_passes: int = 10

    def __post_init__(self):
        if self.kind not in ("auto", "exact", "tree", "rplus"):
            raise ValueError(f"unknown stage-2 solver {self.kind!r}")


@dataclass(eq=False)
class PrunedLabels:
    """Outcome of stage 1."""
    nn_points: np.ndarray           # nearest label point per query
    label_points: np.ndarray        # distinct survivors, id-sorted
    nn_idx: Optional[np.ndarray]    # ids into the original labels (explicit only)
    label_idx: Optional[np.ndarray]


def pruned_label_set(inst: SnnInstance) -> PrunedLabels:
    nn = nn_label_map(inst)
    if inst.has_explicit_labels:
        uniq = np.unique(nn)
        return PrunedLabels(nn_points=inst.labels[nn], label_points=inst.labels[uniq],
                            nn_idx=nn, label_idx=uniq)
    pts = np.unique(nn, axis=0)
    return PrunedLabels(nn_points=nn.astype(float), label_points=pts.astype(float),
                        nn_idx=None, label_idx=None)


def inn_solve(inst: SnnInstance, stage2: Stage2Solver | None = None) -> Assignment:
    """Prune to nearest labels, then run the configured stage-2 solver.

    The returned labels are always drawn from the pruned set.  Label ids
    refer to the original instance when it has explicit labels.
    """
    stage2 = stage2 or Stage2Solver()
    pl = pruned_label_set(inst)
    n_pruned = len(pl.label_points)

    kind = stage2.kind
    if kind == "auto":
        feasible = inst.k <= _EXACT_MAX_K and n_pruned ** inst.k <= stage2.guard
        kind = "exact" if feasible else "tree"

    if kind == "exact":
        if inst.has_explicit_labels:
            return brute_force_opt(inst, allowed=pl.label_idx, guard=stage2.guard)
        sub = replace(inst, labels=pl.label_points)
        a = brute_force_opt(sub, guard=stage2.guard)
        return Assignment(points=a.points, nn_cost=a.nn_cost, pw_cost=a.pw_cost,
                          total=a.total, idx=None)

    sub = replace(inst, labels=pl.label_points)
    if kind == "tree":
        a = tree_labeling_solve(sub, rng_seed=stage2.rng_seed,
                                descent_passes=stage2.descent_passes,
                                refine_passes=stage2.refine_passes)
    else:  # rplus
        a = rplus_solve(sub, orient_edges(inst.graph))
    if inst.has_explicit_labels and a.idx is not None:
        idx = pl.label_idx[a.idx]
    else:
        idx = None
    return Assignment(points=a.points, nn_cost=a.nn_cost, pw_cost=a.pw_cost,
                      total=a.total, idx=idx)
