"""Solvers that exploit sparsity of the compatibility graph.

Two routines, both for unweighted objectives (unit kappa/lambda, arbitrary
multiplicities):

* sparse_assign rounds an optimal labeling to one that only uses nearest
  labels of queries, losing at most a factor tied to the orientation quality
  r of the graph: the rounded nn term is at most 3x the optimal nn term and
  the rounded pairwise term at most 4x pairwise plus 4r x nn.

* rplus_solve labels each query by an aggregate nearest-neighbor query
  against anchors induced by an edge orientation, achieving cost at most
  (2r+1) times optimal where r is the orientation's max out-degree.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Assignment, SnnInstance, cost, nn_label_map
from .graphs import Orientation, orient_edges


@dataclass(eq=False)
class DesignatedChoice:
    """Trace of one designated-neighbor decision.

    candidates[0] is the query itself, followed by its distinct graph
    neighbors in ascending id order; chosen_pos indexes into candidates.
    """
    query: int
    candidates: np.ndarray
    scores: np.ndarray
    chosen_pos: int

    @property
    def chosen(self) -> int:
        return int(self.candidates[self.chosen_pos])


def _require_unweighted(inst: SnnInstance, what: str):
    if not inst.unweighted:
        raise ValueError(f"{what} requires unit kappa/lambda weights "
                         "(edge multiplicities are fine)")


def sparse_assign(inst: SnnInstance, optimal: Assignment,
                  nn_idx=None) -> tuple[Assignment, list[DesignatedChoice]]:
    """Round a labeling so every query uses some query's nearest label.

    For each query i, over candidates j in {i} + neighbors(i), score
    d(opt_i, opt_j) + d(opt_j, q_j) and adopt the nearest label of the best
    scoring candidate (ties to the earliest candidate, the query itself
    first).  With an optimal input labeling the result is a (4r+3)
    approximation for any orientation quality r of the graph.
    """
    _require_unweighted(inst, "sparse_assign")
    if not inst.has_explicit_labels:
        raise TypeError("sparse_assign needs an explicit label set")
    if nn_idx is None:
        nn_idx = nn_label_map(inst)
    nn_idx = np.asarray(nn_idx, dtype=np.int64)
    opt_pts = np.asarray(optimal.points)
    if len(opt_pts) != inst.k:
        raise ValueError("optimal labeling must cover all queries")

    nbrs = inst.graph.neighbor_sets()
    chosen_idx = np.empty(inst.k, dtype=np.int64)
    trace = []
    for i in range(inst.k):
        cand = np.concatenate(([i], nbrs[i]))
        d_pp = inst.space.between(np.broadcast_to(opt_pts[i], opt_pts[cand].shape),
                                  opt_pts[cand])
        d_pq = inst.space.between(opt_pts[cand], inst.queries[cand])
        scores = d_pp + d_pq
        pos = int(np.argmin(scores))
        chosen_idx[i] = nn_idx[cand[pos]]
        trace.append(DesignatedChoice(query=i, candidates=cand,
                                      scores=scores, chosen_pos=pos))
    return cost(inst, chosen_idx), trace


def rplus_solve(inst: SnnInstance, orientation: Orientation | None = None,
                allowed=None) -> Assignment:
    """Label queries by orientation-weighted aggregate nearest neighbors.

    Each query minimizes d(q_i, p) plus, for every incident edge instance
    owned by the other endpoint q_j, d(p, q_j) / (r + 1).  Deterministic;
    ties go to the smallest label id.
    """
    _require_unweighted(inst, "rplus_solve")
    if not inst.has_explicit_labels:
        raise TypeError("rplus_solve needs an explicit label set")
    if orientation is None:
        orientation = orient_edges(inst.graph)
    r = orientation.r

    ids = np.arange(len(inst.labels), dtype=np.int64) if allowed is None \
        else np.unique(np.asarray(allowed, dtype=np.int64))
    pts = inst.labels[ids]

    # anchor_count[i, j]: edge instances between i and j owned by j
    k = inst.k
    anchor = np.zeros((k, k))
    if len(orientation.edges):
        e = orientation.edges
        own = orientation.owner
        non_owner = np.where(own == e[:, 0], e[:, 1], e[:, 0])
        np.add.at(anchor, (non_owner, own), 1.0)

    d_q = inst.space.cross(inst.queries, pts)          # (k, L)
    score = d_q + (anchor @ d_q) / (r + 1)
    choice = np.argmin(score, axis=1)
    return cost(inst, ids[choice])
