"""Metric graphs: combinatorial structure, edge lengths, potentials, vertex conditions.

A :class:`MetricGraph` couples a combinatorial multigraph (self-loops allowed)
with positive edge lengths, a potential on each edge, and a boundary condition
at every degree-1 vertex.  Interior vertices always carry Kirchhoff conditions
(continuity plus vanishing sum of outward derivatives).

Orientation convention: arclength on an edge is measured from its ``u``
("from") endpoint.  All per-edge output in this package (potentials,
eigenfunction samples, circuit currents, slopes) follows that convention.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

DIRICHLET = "dirichlet"
NEUMANN = "neumann"


class GraphFormatError(ValueError):
    """A graph description file violates the schema."""


class InvalidGraphError(ValueError):
    """An operation that requires a valid graph received an invalid one."""


# ---------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class Zero:
    def evaluate(self, x: np.ndarray, length: float) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class PoschlTeller:
    """Attractive sech-squared well ``-2 a^2 / cosh^2(a (x - center))``."""

    a: float
    center: float

    def evaluate(self, x: np.ndarray, length: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return -2.0 * self.a**2 / np.cosh(self.a * (x - self.center)) ** 2


@dataclass(frozen=True)
class SquareWell:
    """Constant ``depth`` on ``[left, right]``, zero elsewhere on the edge."""

    depth: float
    left: float
    right: float

    def evaluate(self, x: np.ndarray, length: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = (x >= self.left) & (x <= self.right)
        return np.where(inside, self.depth, 0.0)


@dataclass(frozen=True)
class Sampled:
    """Values on a uniform arclength grid spanning the whole edge.

    Evaluation between samples is linear interpolation, which matches the
    P1 quadrature used by the assembler, so assembly is exact for sampled
    potentials on their own grid.
    """

    values: tuple[float, ...]

    def evaluate(self, x: np.ndarray, length: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        grid = np.linspace(0.0, length, len(self.values))
        return np.interp(x, grid, np.asarray(self.values, dtype=float))


PotentialSpec = Union[Zero, PoschlTeller, SquareWell, Sampled]

ZERO = Zero()


# ---------------------------------------------------------------------------
# graph


@dataclass(frozen=True)
class Edge:
    """Edge between vertices ``u`` and ``v`` with positive arclength ``length``.

    ``u == v`` is a self-loop; solvers expand it into two coordinate
    half-edges joined at a synthetic midpoint vertex, and it contributes 2 to
    the degree of ``u``.  ``cells`` optionally pins the mesh resolution of
    this edge regardless of the global target.
    """

    u: int
    v: int
    length: float
    potential: PotentialSpec = ZERO
    cells: int | None = None

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class MetricGraph:
    """Immutable metric graph; safe to share across concurrent solver runs.

    ``boundary`` maps degree-1 vertex ids to ``"dirichlet"`` or ``"neumann"``.
    ``alpha`` is the global coupling in front of the second-derivative term.
    """

    num_vertices: int
    edges: tuple[Edge, ...]
    boundary: dict[int, str] = field(default_factory=dict)
    alpha: float = 1.0

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.num_vertices, dtype=int)
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    @property
    def total_length(self) -> float:
        return float(sum(e.length for e in self.edges))

    def leaf_vertices(self) -> list[int]:
        return [v for v, d in enumerate(self.degrees()) if d == 1]

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per vertex, the incident ``(edge_id, other_endpoint)`` pairs.

        A self-loop at ``v`` appears twice in ``adj[v]``.
        """
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for i, e in enumerate(self.edges):
            adj[e.u].append((i, e.v))
            adj[e.v].append((i, e.u))
        return adj

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        adj = self.adjacency()
        seen = [False] * self.num_vertices
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return all(seen)

    def potential_is_zero(self) -> bool:
        return all(isinstance(e.potential, Zero) for e in self.edges)


def scale_graph(graph: MetricGraph, s: float) -> MetricGraph:
    """Scale all lengths by ``s`` with the matched potential scaling.

    Lengths map to ``s*length`` and potentials to ``V(x/s)/s^2``, so every
    eigenvalue maps to ``E/s^2`` and all dimensionless spectral ratios are
    unchanged.
    """
    if s <= 0:
        raise ValueError("scale factor must be positive")
    edges = []
    for e in graph.edges:
        p = e.potential
        if isinstance(p, Zero):
            q: PotentialSpec = p
        elif isinstance(p, PoschlTeller):
            q = PoschlTeller(a=p.a / s, center=p.center * s)
        elif isinstance(p, SquareWell):
            q = SquareWell(depth=p.depth / s**2, left=p.left * s, right=p.right * s)
        elif isinstance(p, Sampled):
            q = Sampled(tuple(v / s**2 for v in p.values))
        else:  # pragma: no cover - union is closed
            raise TypeError(f"unknown potential {p!r}")
        edges.append(Edge(e.u, e.v, e.length * s, q, e.cells))
    return MetricGraph(graph.num_vertices, tuple(edges), dict(graph.boundary), graph.alpha)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    errors: list[str]
    connected: bool
    degrees: dict[int, int]
    total_length: float

    @property
    def valid(self) -> bool:
        return not self.errors


def validate(graph: MetricGraph) -> ValidationReport:
    """Structural validation.  Problems are reported, never raised."""
    errors: list[str] = []
    n = graph.num_vertices
    if n < 1:
        errors.append("graph has no vertices")
    if not graph.edges:
        errors.append("graph has no edges")
    if not (graph.alpha > 0 and math.isfinite(graph.alpha)):
        errors.append(f"nonpositive alpha {graph.alpha}")

    for i, e in enumerate(graph.edges):
        if not (0 <= e.u < n and 0 <= e.v < n):
            errors.append(f"edge {i}: endpoint out of range ({e.u}, {e.v})")
        if not (e.length > 0 and math.isfinite(e.length)):
            errors.append(f"edge {i}: nonpositive length {e.length}")
        if e.cells is not None and e.cells < 1:
            errors.append(f"edge {i}: nonpositive cell count {e.cells}")
        if isinstance(e.potential, PoschlTeller) and not e.potential.a > 0:
            errors.append(f"edge {i}: Poschl-Teller parameter must be positive")
        if isinstance(e.potential, Sampled) and len(e.potential.values) < 2:
            errors.append(f"edge {i}: sampled potential needs at least 2 values")

    degrees = {}
    if not errors or all("endpoint out of range" not in m for m in errors):
        deg = graph.degrees() if n >= 1 else np.zeros(0, dtype=int)
        degrees = {v: int(d) for v, d in enumerate(deg)}
        for v, d in degrees.items():
            bc = graph.boundary.get(v)
            if d == 1 and bc not in (DIRICHLET, NEUMANN):
                errors.append(f"leaf vertex {v} missing boundary condition")
            if d != 1 and bc is not None:
                errors.append(f"boundary condition on non-leaf vertex {v}")
        for v, bc in graph.boundary.items():
            if bc not in (DIRICHLET, NEUMANN):
                errors.append(f"vertex {v}: unknown boundary condition {bc!r}")
            if not (0 <= v < n):
                errors.append(f"boundary condition on unknown vertex {v}")

    connected = graph.is_connected() if n >= 1 else False
    if not connected:
        errors.append("graph is not connected")
    return ValidationReport(errors, connected, degrees, graph.total_length)


def require_valid(graph: MetricGraph) -> None:
    report = validate(graph)
    if not report.valid:
        raise InvalidGraphError("; ".join(report.errors))


# ---------------------------------------------------------------------------
# topology


class TopologyClass(Enum):
    TREE = "tree"
    ONE_LOOP_WITH_LEADS = "one_loop_with_leads"
    CUT_VERTEX_CYCLE = "cut_vertex_cycle"
    GENERAL = "general"


@dataclass
class TopologyReport:
    topology_class: TopologyClass
    betti: int
    cycle_cut_vertices: list[int]


def _has_leaf_free_component(graph: MetricGraph, removed: int, leaves: set[int]) -> bool:
    # Components of the combinatorial graph after deleting `removed` and its
    # incident edges.  A component that contains no leaf vertex is, as a point
    # set of the metric graph, cut off from every leaf by the single point
    # `removed` (and its closure necessarily contains a cycle).
    n = graph.num_vertices
    adj = graph.adjacency()
    seen = [False] * n
    seen[removed] = True
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp_has_leaf = start in leaves
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if w == removed or seen[w]:
                    continue
                seen[w] = True
                if w in leaves:
                    comp_has_leaf = True
                stack.append(w)
        if not comp_has_leaf:
            return True
    return False


def classify_topology(graph: MetricGraph) -> TopologyReport:
    """Classify the graph by its cycle structure relative to its leaves.

    ``cycle_cut_vertices`` lists every vertex whose removal (as a metric
    point) disconnects some cycle-containing subgraph from all leaves; a
    self-loop base vertex always qualifies, and so does every vertex of a
    graph that has no leaves at all.
    """
    require_valid(graph)
    n = graph.num_vertices
    betti = len(graph.edges) - n + 1
    leaves = set(graph.leaf_vertices())

    cut: list[int] = []
    if betti > 0:
        loop_bases = {e.u for e in graph.edges if e.is_loop}
        for v in range(n):
            if v in leaves:
                # removing the last leaf makes "cut off from all leaves" vacuous
                continue
            if v in loop_bases or _has_leaf_free_component(graph, v, leaves):
                cut.append(v)

    if betti == 0:
        cls = TopologyClass.TREE
    elif cut:
        cls = TopologyClass.CUT_VERTEX_CYCLE
    elif betti == 1:
        cls = TopologyClass.ONE_LOOP_WITH_LEADS
    else:
        cls = TopologyClass.GENERAL
    return TopologyReport(cls, betti, cut)


# ---------------------------------------------------------------------------
# graph description files (JSON syntax, strict keys)

_TOP_KEYS = {"alpha", "vertices", "edges"}
_VERTEX_KEYS = {"id", "bc"}
_EDGE_KEYS = {"from", "to", "length", "potential", "cells"}
_POTENTIAL_KEYS = {
    "zero": {"type"},
    "poschl_teller": {"type", "a", "center"},
    "square_well": {"type", "depth", "left", "right"},
    "sampled": {"type", "values"},
}


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise GraphFormatError(f"{where}: unknown key {unknown[0]!r}")


def _potential_from_obj(obj, where: str) -> PotentialSpec:
    if obj is None:
        return ZERO
    if not isinstance(obj, dict):
        raise GraphFormatError(f"{where}: potential must be an object")
    kind = obj.get("type")
    if kind not in _POTENTIAL_KEYS:
        raise GraphFormatError(f"{where}: unknown potential type {kind!r}")
    _reject_unknown(obj, _POTENTIAL_KEYS[kind], where)
    try:
        if kind == "zero":
            return ZERO
        if kind == "poschl_teller":
            return PoschlTeller(a=float(obj["a"]), center=float(obj["center"]))
        if kind == "square_well":
            return SquareWell(
                depth=float(obj["depth"]), left=float(obj["left"]), right=float(obj["right"])
            )
        return Sampled(tuple(float(v) for v in obj["values"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"{where}: bad potential ({exc})") from exc


def potential_to_obj(p: PotentialSpec) -> dict:
    if isinstance(p, Zero):
        return {"type": "zero"}
    if isinstance(p, PoschlTeller):
        return {"type": "poschl_teller", "a": p.a, "center": p.center}
    if isinstance(p, SquareWell):
        return {"type": "square_well", "depth": p.depth, "left": p.left, "right": p.right}
    if isinstance(p, Sampled):
        return {"type": "sampled", "values": list(p.values)}
    raise TypeError(f"unknown potential {p!r}")


def graph_from_dict(data: dict) -> MetricGraph:
    if not isinstance(data, dict):
        raise GraphFormatError("top level: expected an object")
    _reject_unknown(data, _TOP_KEYS, "top level")
    try:
        alpha = float(data.get("alpha", 1.0))
    except (TypeError, ValueError) as exc:
        raise GraphFormatError(f"top level: bad alpha ({exc})") from exc

    vertices = data.get("vertices")
    if not isinstance(vertices, list):
        raise GraphFormatError("top level: missing or bad 'vertices' list")
    boundary: dict[int, str] = {}
    ids = []
    for i, v in enumerate(vertices):
        where = f"vertices[{i}]"
        if not isinstance(v, dict):
            raise GraphFormatError(f"{where}: expected an object")
        _reject_unknown(v, _VERTEX_KEYS, where)
        if "id" not in v:
            raise GraphFormatError(f"{where}: missing 'id'")
        vid = v["id"]
        if not isinstance(vid, int) or isinstance(vid, bool):
            raise GraphFormatError(f"{where}: 'id' must be an integer")
        ids.append(vid)
        bc = v.get("bc")
        if bc is not None:
            if bc not in (DIRICHLET, NEUMANN):
                raise GraphFormatError(f"{where}: unknown bc {bc!r}")
            boundary[vid] = bc
    if sorted(ids) != list(range(len(ids))):
        raise GraphFormatError("vertex ids must be unique and dense from 0")

    raw_edges = data.get("edges")
    if not isinstance(raw_edges, list):
        raise GraphFormatError("top level: missing or bad 'edges' list")
    edges = []
    for i, e in enumerate(raw_edges):
        where = f"edges[{i}]"
        if not isinstance(e, dict):
            raise GraphFormatError(f"{where}: expected an object")
        _reject_unknown(e, _EDGE_KEYS, where)
        try:
            u = int(e["from"])
            v = int(e["to"])
            length = float(e["length"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphFormatError(f"{where}: missing or bad field ({exc})") from exc
        cells = e.get("cells")
        if cells is not None:
            if not isinstance(cells, int) or isinstance(cells, bool) or cells < 1:
                raise GraphFormatError(f"{where}: 'cells' must be a positive integer")
        potential = _potential_from_obj(e.get("potential"), where)
        edges.append(Edge(u, v, length, potential, cells))

    return MetricGraph(len(ids), tuple(edges), boundary, alpha)


def graph_to_dict(graph: MetricGraph) -> dict:
    vertices = []
    for v in range(graph.num_vertices):
        vertices.append({"id": v, "bc": graph.boundary.get(v)})
    edges = []
    for e in graph.edges:
        edges.append(
            {
                "from": e.u,
                "to": e.v,
                "length": e.length,
                "potential": potential_to_obj(e.potential),
                "cells": e.cells,
            }
        )
    return {"alpha": graph.alpha, "vertices": vertices, "edges": edges}


def load_graph(path) -> MetricGraph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"{path}: not valid JSON ({exc})") from exc
    return graph_from_dict(data)


def save_graph(graph: MetricGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_dict(graph), fh, indent=2, sort_keys=True)
        fh.write("\n")
