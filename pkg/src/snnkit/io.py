"""JSON file formats for instances, 0-extension problems and results.

Every document carries a "schema" tag.  Graph-derived metrics are stored as
their materialized matrices, so files are self-contained.
"""
from __future__ import annotations

import json

import numpy as np

from .core import Assignment, SnnInstance, make_instance
from .graphs import CompatGraph
from .metric import EuclideanSpace, LatticeBox, MatrixSpace
from .zeroext import ZeroExtInstance

INSTANCE_SCHEMA = "snn-instance/1"
ZEROEXT_SCHEMA = "zero-extension-instance/1"
ASSIGNMENT_SCHEMA = "snn-assignment/1"
GAP_SCHEMA = "pruning-report/1"


def _space_to_dict(space) -> dict:
    if isinstance(space, EuclideanSpace):
        return {"kind": "euclidean", "dim": space.dim}
    if isinstance(space, MatrixSpace):
        return {"kind": space.kind, "matrix": space.matrix.tolist()}
    raise TypeError(f"cannot serialize space {space!r}")


def _space_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "euclidean":
        return EuclideanSpace(int(d["dim"]))
    if kind in ("explicit-matrix", "graph-shortest-path"):
        return MatrixSpace(np.asarray(d["matrix"], dtype=float), kind=kind)
    raise ValueError(f"unknown space kind {kind!r}")


def _points_to_list(space, pts):
    if isinstance(pts, LatticeBox):
        return {"lattice": {"lo": pts.lo, "hi": pts.hi, "dim": pts.dim}}
    a = np.asarray(pts)
    if isinstance(space, EuclideanSpace):
        return np.atleast_2d(a).tolist()
    return a.astype(int).reshape(-1).tolist()


def _points_from_list(space, obj):
    if isinstance(obj, dict) and "lattice" in obj:
        spec = obj["lattice"]
        return LatticeBox(int(spec["lo"]), int(spec["hi"]), int(spec["dim"]))
    if isinstance(space, EuclideanSpace):
        return np.asarray(obj, dtype=float)
    return np.asarray(obj, dtype=np.int64)


def instance_to_dict(inst: SnnInstance) -> dict:
    return {
        "schema": INSTANCE_SCHEMA,
        "space": _space_to_dict(inst.space),
        "labels": _points_to_list(inst.space, inst.labels),
        "queries": _points_to_list(inst.space, inst.queries),
        "edges": inst.graph.edges.tolist(),
        "kappa": inst.kappa.tolist(),
        "lambda": inst.lam.tolist(),
    }


def instance_from_dict(d: dict) -> SnnInstance:
    if d.get("schema") != INSTANCE_SCHEMA:
        raise ValueError(f"expected schema {INSTANCE_SCHEMA}, got {d.get('schema')!r}")
    space = _space_from_dict(d["space"])
    labels = _points_from_list(space, d["labels"])
    queries = _points_from_list(space, d["queries"])
    k = len(queries)
    graph = CompatGraph.from_pairs(k, d.get("edges", []))
    return make_instance(space, labels, queries, graph,
                         kappa=d.get("kappa"), lam=d.get("lambda"))


def zeroext_to_dict(z: ZeroExtInstance) -> dict:
    return {
        "schema": ZEROEXT_SCHEMA,
        "space": _space_to_dict(z.space),
        "terminals": _points_to_list(z.space, z.terminal_points),
        "n_free": z.n_free,
        "edges": z.edges.tolist(),
    }


def zeroext_from_dict(d: dict) -> ZeroExtInstance:
    if d.get("schema") != ZEROEXT_SCHEMA:
        raise ValueError(f"expected schema {ZEROEXT_SCHEMA}, got {d.get('schema')!r}")
    space = _space_from_dict(d["space"])
    terms = _points_from_list(space, d["terminals"])
    return ZeroExtInstance(space=space, terminal_points=terms,
                           n_free=int(d["n_free"]),
                           edges=np.asarray(d.get("edges", []), dtype=float).reshape(-1, 3))


def assignment_to_dict(a: Assignment, meta: dict | None = None) -> dict:
    d = {
        "schema": ASSIGNMENT_SCHEMA,
        "labels": np.asarray(a.points).tolist(),
        "label_ids": None if a.idx is None else np.asarray(a.idx).tolist(),
        "nn_cost": a.nn_cost,
        "pw_cost": a.pw_cost,
        "total": a.total,
    }
    if meta:
        d.update(meta)
    return d


def save_json(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def save_instance(path, inst: SnnInstance) -> None:
    save_json(path, instance_to_dict(inst))


def load_instance(path) -> SnnInstance:
    return instance_from_dict(load_json(path))


def save_zeroext(path, z: ZeroExtInstance) -> None:
    save_json(path, zeroext_to_dict(z))


def load_zeroext(path) -> ZeroExtInstance:
    return zeroext_from_dict(load_json(path))
