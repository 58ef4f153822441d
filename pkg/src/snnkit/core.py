"""Joint nearest-neighbor instances, the cost functional, and exact baselines.

An instance couples a label set P and queries Q in a shared metric space with
a compatibility multigraph G over the queries.  The objective of a labeling
p: Q -> P is

    sum_i kappa_i * d(q_i, p_i)  +  sum_{(i,j,mult) in G} lambda_e * mult * d(p_i, p_j)

The unweighted case (all kappa and lambda equal to 1, multiplicities free) is
what the approximation guarantees elsewhere in the package are stated for;
the functional itself supports general nonnegative weights.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .graphs import CompatGraph
from .metric import LatticeBox
from .nn import NnIndex, lattice_nn_map

DEFAULT_GUARD = 10 ** 7
_CHUNK = 1 << 18


class GuardExceededError(RuntimeError):
    """Raised when an exact enumeration would exceed its state budget."""


@dataclass(eq=False)
class SnnInstance:
    space: object
    labels: object        # ndarray of points, or LatticeBox
    queries: np.ndarray
    graph: CompatGraph
    kappa: np.ndarray     # (k,) nonnegative query weights
    lam: np.ndarray       # (m,) nonnegative weights aligned with graph.edges rows

    def __post_init__(self):
        self.queries = np.asarray(self.queries)
        self.kappa = np.asarray(self.kappa, dtype=float).reshape(-1)
        self.lam = np.asarray(self.lam, dtype=float).reshape(-1)
        if not isinstance(self.labels, LatticeBox):
            self.labels = np.asarray(self.labels)
            if len(self.labels) == 0:
                raise ValueError("label set must be nonempty")
        k = len(self.queries)
        if k == 0:
            raise ValueError("need at least one query")
        if self.graph.n != k:
            raise ValueError(f"graph has {self.graph.n} vertices but there are {k} queries")
        if len(self.kappa) != k:
            raise ValueError("kappa must have one entry per query")
        if len(self.lam) != self.graph.num_entries:
            raise ValueError("lambda must have one entry per edge row")
        if np.any(self.kappa < 0) or np.any(self.lam < 0):
            raise ValueError("weights must be nonnegative")
        dim = getattr(self.space, "dim", None)
        if dim is not None:
            if isinstance(self.labels, LatticeBox):
                if self.labels.dim != dim:
                    raise ValueError("lattice dimension does not match the space")
            elif self.labels.ndim != 2 or self.labels.shape[1] != dim:
                raise ValueError("label coordinates do not match the space dimension")
            if self.queries.ndim != 2 or self.queries.shape[1] != dim:
                raise ValueError("query coordinates do not match the space dimension")

    @property
    def k(self) -> int:
        return len(self.queries)

    @property
    def has_explicit_labels(self) -> bool:
        return not isinstance(self.labels, LatticeBox)

    @property
    def n_labels(self) -> int:
        return self.labels.size if isinstance(self.labels, LatticeBox) else len(self.labels)

    @property
    def unweighted(self) -> bool:
        return bool(np.all(self.kappa == 1.0) and np.all(self.lam == 1.0))


def make_instance(space, labels, queries, edges=None, kappa=None, lam=None) -> SnnInstance:
    """Convenience constructor; edges may be a CompatGraph or pair/triple list."""
    queries = np.asarray(queries)
    k = len(queries)
    if isinstance(edges, CompatGraph):
        graph = edges
    else:
        graph = CompatGraph.from_pairs(k, edges or [])
    kappa = np.ones(k) if kappa is None else np.asarray(kappa, dtype=float)
    lam = np.ones(graph.num_entries) if lam is None else np.asarray(lam, dtype=float)
    return SnnInstance(space=space, labels=labels, queries=queries,
                       graph=graph, kappa=kappa, lam=lam)


@dataclass(frozen=True, eq=False)
class Assignment:
    """A labeling of every query, with its cost split.

    idx holds label ids into the instance's explicit label array when that
    makes sense (None for lattice label sets); points always holds the
    chosen label points themselves.
    """
    points: np.ndarray
    nn_cost: float
    pw_cost: float
    total: float
    idx: Optional[np.ndarray] = None


def evaluate(space, queries, graph: CompatGraph, kappa, lam, label_points) -> tuple[float, float]:
    """Cost split (nn, pairwise) of labeling query i with label_points[i]."""
    pts = np.asarray(label_points)
    if len(pts) != len(queries):
        raise ValueError("need exactly one label point per query")
    nn = float(np.dot(np.asarray(kappa, dtype=float),
                      space.between(queries, pts)))
    pw = 0.0
    if graph.num_entries:
        i, j, mult = graph.edges[:, 0], graph.edges[:, 1], graph.edges[:, 2]
        d = space.between(pts[i], pts[j])
        pw = float(np.sum(np.asarray(lam, dtype=float) * mult * d))
    return nn, pw


def cost(inst: SnnInstance, label_idx) -> Assignment:
    """Cost of assigning query i the explicit label with id label_idx[i]."""
    if not inst.has_explicit_labels:
        raise TypeError("cost by label id needs an explicit label set; use cost_points")
    idx = np.asarray(label_idx, dtype=np.int64).reshape(-1)
    if len(idx) != inst.k:
        raise ValueError(f"assignment must cover all {inst.k} queries")
    if idx.min() < 0 or idx.max() >= len(inst.labels):
        raise ValueError("label id out of range")
    pts = inst.labels[idx]
    nn, pw = evaluate(inst.space, inst.queries, inst.graph, inst.kappa, inst.lam, pts)
    return Assignment(points=pts, nn_cost=nn, pw_cost=pw, total=nn + pw, idx=idx)


def cost_points(inst: SnnInstance, points) -> Assignment:
    """Cost of a labeling given directly by label points."""
    pts = np.asarray(points)
    if isinstance(inst.labels, LatticeBox) and not inst.labels.contains(pts):
        raise ValueError("labeling leaves the lattice label box")
    nn, pw = evaluate(inst.space, inst.queries, inst.graph, inst.kappa, inst.lam, pts)
    return Assignment(points=pts, nn_cost=nn, pw_cost=pw, total=nn + pw, idx=None)


def _explicit_allowed(inst: SnnInstance, allowed, guard: int) -> np.ndarray:
    """Resolve the allowed label ids, materializing tiny lattice boxes."""
    if isinstance(inst.labels, LatticeBox):
        box = inst.labels
        if box.size ** inst.k > guard:
            raise GuardExceededError(
                f"enumeration over {box.size}^{inst.k} assignments exceeds guard {guard}")
        # tiny box: fall back to an explicit copy so enumeration code applies
        raise _NeedsMaterialize(box)
    n = len(inst.labels)
    if allowed is None:
        return np.arange(n, dtype=np.int64)
    a = np.unique(np.asarray(allowed, dtype=np.int64))
    if len(a) == 0:
        raise ValueError("allowed label set must be nonempty")
    if a.min() < 0 or a.max() >= n:
        raise ValueError("allowed label id out of range")
    return a


class _NeedsMaterialize(Exception):
    def __init__(self, box):
        self.box = box


def brute_force_opt(inst: SnnInstance, allowed=None, guard: int = DEFAULT_GUARD) -> Assignment:
    """Exact optimum by enumeration over allowed^k labelings.

    Refuses to enumerate more than `guard` states.  Ties are broken toward
    the lexicographically smallest tuple of label ids (queries in order,
    allowed ids ascending).
    """
    try:
        ids = _explicit_allowed(inst, allowed, guard)
    except _NeedsMaterialize as nm:
        sub = replace(inst, labels=nm.box.all_points().astype(float))
        a = brute_force_opt(sub, allowed=allowed, guard=guard)
        return Assignment(points=a.points, nn_cost=a.nn_cost, pw_cost=a.pw_cost,
                          total=a.total, idx=None)
    k = inst.k
    L = len(ids)
    states = L ** k
    if states > guard:
        raise GuardExceededError(
            f"enumeration over {L}^{k} = {states} assignments exceeds guard {guard}")

    pts = inst.labels[ids]
    d_nn = inst.kappa[:, None] * inst.space.cross(inst.queries, pts)  # (k, L)
    m = inst.graph.num_entries
    if m:
        cross_lab = inst.space.cross(pts, pts)  # (L, L)
        e_i = inst.graph.edges[:, 0]
        e_j = inst.graph.edges[:, 1]
        e_w = inst.lam * inst.graph.edges[:, 2]

    base = L ** np.arange(k - 1, -1, -1, dtype=np.int64)  # first query most significant
    best_cost = np.inf
    best_state = -1
    for start in range(0, states, _CHUNK):
        offs = np.arange(start, min(states, start + _CHUNK), dtype=np.int64)
        digits = (offs[None, :] // base[:, None]) % L  # (k, c)
        c = d_nn[np.arange(k)[:, None], digits].sum(axis=0)
        if m:
            for t in range(m):
                c += e_w[t] * cross_lab[digits[e_i[t]], digits[e_j[t]]]
        pos = int(np.argmin(c))
        if c[pos] < best_cost:
            best_cost = float(c[pos])
            best_state = start + pos
    digits = (best_state // base) % L
    return cost(inst, ids[digits])


@dataclass(eq=False)
class PruningReport:
    """Exact optima before and after nearest-neighbor pruning of the labels."""
    opt_full: float
    opt_pruned: float
    alpha: float
    pruned_labels: np.ndarray
    full: Assignment
    pruned: Assignment


def nn_label_map(inst: SnnInstance) -> np.ndarray:
    """Per-query nearest label: ids for explicit sets, points for lattices."""
    if inst.has_explicit_labels:
        return NnIndex(inst.space, inst.labels).nn_map(inst.queries)
    return lattice_nn_map(inst.labels, inst.queries)


def pruning_gap(inst: SnnInstance, guard: int = DEFAULT_GUARD) -> PruningReport:
    """Ratio of the exact optimum over nearest-label survivors to the true one.

    Both optima come from brute_force_opt, so this is exact and subject to
    the same enumeration guard.  When both optima are zero the ratio is
    defined as 1.
    """
    if not inst.has_explicit_labels:
        raise TypeError("pruning_gap needs an explicit label set")
    nn_idx = nn_label_map(inst)
    pruned = np.unique(nn_idx)
    full_opt = brute_force_opt(inst, guard=guard)
    pruned_opt = brute_force_opt(inst, allowed=pruned, guard=guard)
    if full_opt.total > 0:
        alpha = pruned_opt.total / full_opt.total
    else:
        alpha = 1.0 if pruned_opt.total <= 1e-12 else np.inf
    return PruningReport(opt_full=full_opt.total, opt_pruned=pruned_opt.total,
                         alpha=float(alpha), pruned_labels=pruned,
                         full=full_opt, pruned=pruned_opt)
