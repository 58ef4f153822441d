"""Random instance sampling and deterministic image fixtures."""
from __future__ import annotations

import numpy as np

from .core import SnnInstance, make_instance
from .graphs import CompatGraph
from .metric import EuclideanSpace, build_graph_metric


def random_instance(rng: np.random.Generator, *, max_queries: int = 6,
                    max_labels: int = 8, weighted: bool = False) -> SnnInstance:
    """Small random instance over a Euclidean or graph-metric space.

    Graphs are random multigraphs (possibly empty, multiplicities up to 3);
    weights stay at 1 unless weighted is set.
    """
    k = int(rng.integers(1, max_queries + 1))
    n = int(rng.integers(1, max_labels + 1))
    if rng.random() < 0.5:
        dim = int(rng.integers(1, 4))
        space = EuclideanSpace(dim)
        labels = np.round(rng.uniform(0, 10, size=(n, dim)), 3)
        queries = np.round(rng.uniform(0, 10, size=(k, dim)), 3)
    else:
        total = n + k
        # random connected weighted graph: a spine plus chords
        edges = [(i, i + 1, float(np.round(rng.uniform(0.1, 3.0), 3)))
                 for i in range(total - 1)]
        extra = int(rng.integers(0, total))
        for _ in range(extra):
            u, v = rng.integers(0, total, size=2)
            if u != v:
                edges.append((int(min(u, v)), int(max(u, v)),
                              float(np.round(rng.uniform(0.1, 3.0), 3))))
        space = build_graph_metric(total, edges)
        ids = rng.permutation(total)
        labels = np.sort(ids[:n]).astype(np.int64)
        queries = np.sort(ids[n:]).astype(np.int64)

    pairs = []
    if k >= 2:
        p_edge = rng.uniform(0.1, 0.7)
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < p_edge:
                    mult = int(rng.integers(1, 4)) if rng.random() < 0.3 else 1
                    pairs.append((i, j, mult))
    graph = CompatGraph.from_pairs(k, pairs)
    kappa = lam = None
    if weighted:
        kappa = np.round(rng.uniform(0.2, 3.0, size=k), 3)
        lam = np.round(rng.uniform(0.2, 3.0, size=graph.num_entries), 3)
    return make_instance(space, labels, queries, graph, kappa=kappa, lam=lam)


def cartoon_fixture(width: int = 64, height: int = 64) -> np.ndarray:
    """Flat-region cartoon test image, (h, w, 3) uint8, fully deterministic.

    A handful of saturated regions with sharp boundaries: background, two
    rectangles, a disk and a thick diagonal stripe.
    """
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:, :] = (225, 225, 232)                      # light background
    h, w = height, width

    img[h // 8: h // 2, w // 12: w // 2] = (170, 30, 35)         # red block
    img[h // 2 + h // 16: h - h // 8, w // 2: w - w // 12] = (40, 90, 180)  # blue block

    yy, xx = np.mgrid[0:h, 0:w]
    disk = (yy - h * 0.3) ** 2 + (xx - w * 0.72) ** 2 <= (min(h, w) * 0.16) ** 2
    img[disk] = (245, 200, 40)                       # yellow disk

    diag = np.abs((yy - h * 0.78) + (xx - w * 0.2)) <= max(2, h // 10)
    img[diag] = (30, 120, 70)                        # green stripe
    return img
