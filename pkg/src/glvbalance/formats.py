"""JSON and CSV readers/writers.

Graph file::

    {"dimension": n,
     "vertices": [[y_11, ..., y_1n], ...],
     "edges": [{"src": i, "dst": j, "weight": w}, ...]}

Indices are 0-based; ``dimension`` is optional when at least one vertex is
given. System file::

    {"dimension": n, "terms": [{"exponent": [...], "coeffs": [...]}, ...]}

Realization problem file: a system file plus ``"vertices"`` (candidate
list), and optionally ``"x_star"``, ``"d"`` (vector or ``"search"``) and
``"edges"`` (list of ``[i, j]`` candidate pairs). The system may also be
nested under ``"system"``.

All readers reject ``NaN`` and ``Infinity`` literals. Floats are written
with the shortest decimal that round-trips.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from .dynamics import GlvSystem
from .egraph import EGraph, validate_graph
from .errors import ParseError, ValidationError
from .realization import RealizationProblem


def _reject_constant(name):
    raise ParseError(f"non-finite literal {name!r} is not allowed")


def loads(text: str):
    """Parse JSON text; syntax errors become :class:`ParseError` with line and column."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def load(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads(text)


def _plain(obj):
    if isinstance(obj, Mapping):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: input key order kept, two-space indent, trailing newline.

    Non-finite floats are written as ``null``.
    """
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def _require(raw, key, what):
    if not isinstance(raw, Mapping):
        raise ValidationError(f"{what} must be a JSON object")
    if key not in raw:
        raise ValidationError(f"{what} is missing the {key!r} field")
    return raw[key]


def _finite_array(value, what, ndim) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{what} must be numeric") from None
    if arr.ndim != ndim:
        raise ValidationError(f"{what} must be a {ndim}-dimensional array")
    return arr


# ----- graphs -----


def graph_from_dict(raw) -> EGraph:
    vertices = _require(raw, "vertices", "graph")
    edges = _require(raw, "edges", "graph")
    if not isinstance(edges, list):
        raise ValidationError("graph 'edges' must be a list")
    for e in edges:
        for key in ("src", "dst", "weight"):
            _require(e, key, "edge")
        if not all(isinstance(e[k], int) and not isinstance(e[k], bool) for k in ("src", "dst")):
            raise ValidationError("edge endpoints must be integers")
    dim = raw.get("dimension")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 1):
        raise ValidationError("'dimension' must be a positive integer")
    if len(vertices) == 0:
        V = np.zeros((0, dim or 0))
    else:
        V = _finite_array(vertices, "graph vertices", 2)
    return validate_graph({"dimension": dim, "vertices": V, "edges": edges})


def graph_to_dict(g: EGraph) -> dict:
    return g.to_dict()


def read_graph(path) -> EGraph:
    return graph_from_dict(load(path))


def write_graph(g: EGraph, path) -> None:
    dump(graph_to_dict(g), path)


# ----- systems -----


def system_from_dict(raw) -> GlvSystem:
    terms = _require(raw, "terms", "system")
    if not isinstance(terms, list):
        raise ValidationError("system 'terms' must be a list")
    pairs = []
    for t in terms:
        y = _finite_array(_require(t, "exponent", "term"), "term exponent", 1)
        c = _finite_array(_require(t, "coeffs", "term"), "term coefficients", 1)
        pairs.append((y, c))
    system = GlvSystem.from_terms(pairs)
    dim = raw.get("dimension")
    if dim is not None and dim != system.dimension:
        raise ValidationError(f"'dimension' is {dim} but the terms live in R^{system.dimension}")
    return system


def read_system(path) -> GlvSystem:
    return system_from_dict(load(path))


def write_system(system: GlvSystem, path) -> None:
    dump(system.to_dict(), path)


def read_model(path) -> EGraph | GlvSystem:
    """A graph file or a system file, told apart by ``"edges"`` vs ``"terms"``."""
    raw = load(path)
    if isinstance(raw, Mapping) and "edges" in raw:
        return graph_from_dict(raw)
    if isinstance(raw, Mapping) and "terms" in raw:
        return system_from_dict(raw)
    raise ValidationError("file is neither a graph (no 'edges') nor a system (no 'terms')")


# ----- realization problems -----


def vertices_from_json(raw) -> np.ndarray:
    """A bare list of vertices or an object with a ``"vertices"`` list."""
    if isinstance(raw, Mapping):
        raw = _require(raw, "vertices", "vertex file")
    return _finite_array(raw, "candidate vertices", 2)


def problem_from_dict(raw, vertices=None) -> RealizationProblem:
    system = system_from_dict(raw["system"] if isinstance(raw, Mapping) and "system" in raw else raw)
    if vertices is None:
        vertices = vertices_from_json(_require(raw, "vertices", "realization problem"))
    x_star = raw.get("x_star")
    if x_star is not None:
        x_star = _finite_array(x_star, "x_star", 1)
    d = raw.get("d")
    if d is not None and d != "search":
        d = _finite_array(d, "d", 1)
    edges = raw.get("edges")
    if edges is not None:
        edges = tuple(tuple(e) for e in edges)
    return RealizationProblem(system, vertices, x_star, d, edges)


def read_problem(path, vertices_path=None) -> RealizationProblem:
    vertices = None if vertices_path is None else vertices_from_json(load(vertices_path))
    return problem_from_dict(load(path), vertices)


# ----- certificates and reports -----


def certificate_to_dict(cert) -> dict:
    return cert.to_dict()


def write_trajectory_csv(trajectory, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        trajectory.to_csv(fh)
