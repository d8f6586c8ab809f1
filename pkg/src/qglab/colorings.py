"""Admissible edge colorings of trees and the piecewise-affine functions they induce.

A coloring assigns a bit to every edge; it is admissible when every vertex of
degree at least 2 touches an even number of colored edges (free ends carry
boundary data and impose no parity).  On a tree, each admissible coloring
lifts to a continuous piecewise-affine function with slope ``+-1`` exactly on
the colored edges and zero outward-slope sum at every vertex; averaging the
induced sum-rule expressions over all admissible colorings multiplies the
plain quadratic form by the per-edge count, which is the same for every edge.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graphs import MetricGraph, TopologyClass, classify_topology

MAX_EDGES = 22

Coloring = tuple[int, ...]


class ColoringError(ValueError):
    pass


def _tree_structure(graph: MetricGraph):
    """Root the tree and report, per vertex, its parent edge and child edges."""
    adj = graph.adjacency()
    degrees = graph.degrees()
    root = int(np.argmax(degrees))
    parent_edge = {root: None}
    order = [root]
    seen = {root}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for eid, w in adj[v]:
            if w in seen or eid == parent_edge[v]:
                continue
            seen.add(w)
            parent_edge[w] = eid
            order.append(w)
            queue.append(w)
    return root, order, parent_edge, adj, degrees


def enumerate_admissible(graph: MetricGraph) -> list[Coloring]:
    """All admissible colorings of a tree, sorted; the all-zero one is first.

    Exhausts the coloring space with parity forcing: bits of leaf edges are
    free, every other bit is forced bottom-up by the parity constraint of its
    lower vertex, and the root parity prunes the rest.  Capped at
    ``MAX_EDGES`` edges.
    """
    topo = classify_topology(graph)
    if topo.topology_class is not TopologyClass.TREE:
        raise ColoringError("admissible colorings are enumerated on trees only")
    n_edges = len(graph.edges)
    if n_edges > MAX_EDGES:
        raise ColoringError(f"too many edges ({n_edges} > {MAX_EDGES})")

    root, order, parent_edge, adj, degrees = _tree_structure(graph)
    free_edges = [parent_edge[v] for v in order if v != root and degrees[v] == 1]
    forced_vertices = [v for v in reversed(order) if v != root and degrees[v] >= 2]

    out: list[Coloring] = []
    for assignment in itertools.product((0, 1), repeat=len(free_edges)):
        bits = [-1] * n_edges
        for eid, bit in zip(free_edges, assignment):
            bits[eid] = bit
        ok = True
        for v in forced_vertices:
            others = sum(bits[eid] for eid, _ in adj[v] if eid != parent_edge[v])
            bits[parent_edge[v]] = others % 2
        if degrees[root] >= 2:
            ok = sum(bits[eid] for eid, _ in adj[root]) % 2 == 0
        if ok:
            out.append(tuple(bits))
    out.sort()
    return out


@dataclass
class EdgeCountReport:
    counts: tuple[int, ...]
    uniform: bool


def edge_counts(colorings: list[Coloring]) -> EdgeCountReport:
    """Per-edge count of colorings that color it, and whether it is uniform."""
    if not colorings:
        return EdgeCountReport((), True)
    counts = tuple(int(s) for s in np.sum(np.asarray(colorings, dtype=int), axis=0))
    return EdgeCountReport(counts, len(set(counts)) <= 1)


def binomial_identity_check(n_max: int) -> bool:
    """Even and odd subset counts of an (n-1)-set agree (both are 2^(n-2))."""
    if n_max > 60:
        raise ValueError("n_max capped at 60")
    for n in range(2, n_max + 1):
        even = sum(math.comb(n - 1, 2 * k) for k in range(0, (n - 1) // 2 + 1))
        odd = sum(math.comb(n - 1, 2 * k + 1) for k in range(0, n // 2))
        if even != odd or even != 2 ** (n - 2):
            return False
    return True


@dataclass
class GFunction:
    """Continuous piecewise-affine function given by integer edge slopes.

    ``slopes[e]`` is taken along edge ``e`` from its "from" endpoint;
    ``vertex_values`` pins the continuous determination.
    """

    slopes: tuple[int, ...]
    vertex_values: tuple[float, ...]


def realize_g(graph: MetricGraph, coloring: Coloring) -> GFunction:
    """Deterministic affine representative of an admissible tree coloring.

    Walking the tree from the root, the colored edges at each vertex get
    outward slopes that alternate starting with -1 (after accounting for the
    already-fixed parent slope), in ascending edge order; uncolored edges get
    slope 0.  Vertex values propagate from value 0 at the root.
    """
    root, order, parent_edge, adj, degrees = _tree_structure(graph)
    slopes = [0] * len(graph.edges)
    values = [0.0] * graph.num_vertices

    for v in order:
        pe = parent_edge[v]
        colored_children = sorted(
            eid for eid, _ in adj[v] if eid != pe and coloring[eid] == 1
        )
        if degrees[v] == 1:
            # free end, no balance constraint; a colored edge at a leaf root
            # slopes downhill away from it (at most one exists)
            for eid in colored_children:
                e = graph.edges[eid]
                slopes[eid] = -1 if e.u == v else 1
        else:
            parent_out = 0
            if pe is not None and coloring[pe] == 1:
                e = graph.edges[pe]
                parent_out = slopes[pe] if e.u == v else -slopes[pe]
            c = len(colored_children)
            if (c + abs(parent_out)) % 2 != 0:
                raise ColoringError(f"coloring violates parity at vertex {v}")
            n_minus = (c + parent_out) // 2
            n_plus = c - n_minus
            sign = -1
            for eid in colored_children:
                if sign == -1 and n_minus > 0:
                    out = -1
                    n_minus -= 1
                elif sign == +1 and n_plus > 0:
                    out = +1
                    n_plus -= 1
                else:
                    out = -1 if n_minus > 0 else +1
                    n_minus -= 1 if out == -1 else 0
                    n_plus -= 1 if out == +1 else 0
                sign = -sign
                e = graph.edges[eid]
                slopes[eid] = out if e.u == v else -out
        for eid, w in adj[v]:
            if eid != pe and parent_edge.get(w) == eid:
                e = graph.edges[eid]
                values[w] = values[v] + (slopes[eid] * e.length if e.u == v else -slopes[eid] * e.length)

    return GFunction(tuple(slopes), tuple(values))


def validate_g(g: GFunction, graph: MetricGraph, coloring: Coloring | None = None, tol: float = 1e-9) -> list[str]:
    """Invariant check for a piecewise-affine function; empty list means valid."""
    problems = []
    if coloring is not None:
        for eid, bit in enumerate(coloring):
            if abs(g.slopes[eid]) != bit:
                problems.append(f"edge {eid}: |slope| != coloring bit")
    degrees = graph.degrees()
    adj = graph.adjacency()
    for v in range(graph.num_vertices):
        if degrees[v] < 2:
            continue
        total = 0
        for eid, _ in adj[v]:
            e = graph.edges[eid]
            if e.is_loop:
                continue  # loop slopes cancel pairwise by symmetry of the split
            total += g.slopes[eid] if e.u == v else -g.slopes[eid]
        if total != 0:
            problems.append(f"vertex {v}: outward slopes sum to {total}")
    for eid, e in enumerate(graph.edges):
        if e.is_loop:
            continue
        expect = g.vertex_values[e.u] + g.slopes[eid] * e.length
        if abs(expect - g.vertex_values[e.v]) > tol * max(1.0, abs(expect)):
            problems.append(f"edge {eid}: values not continuous")
    return problems


@dataclass
class AveragedYangReport:
    z_grid: np.ndarray
    averaged: np.ndarray
    plain: np.ndarray  # p * S(z)
    count: int
    max_rel_deviation: float
    verdict: str


def averaged_yang(
    energies: np.ndarray,
    edge_mass: np.ndarray,
    edge_dirichlet: np.ndarray,
    alpha: float,
    colorings: list[Coloring],
    z_grid: np.ndarray,
    tol_rel: float = 1e-3,
) -> AveragedYangReport:
    """Sum the per-coloring sum-rule expressions and compare with ``p * S(z)``.

    Each coloring weights edge ``m`` by its bit; summing over all admissible
    colorings must reproduce the plain quadratic form times the uniform
    per-edge count ``p``, giving a construction-level consistency check.
    """
    report = edge_counts(colorings)
    if not report.uniform:
        raise ColoringError("per-edge coloring counts are not uniform")
    p = report.counts[0] if report.counts else 0

    z = np.asarray(z_grid, dtype=float)
    energies = np.asarray(energies, dtype=float)
    pos = np.maximum(z[:, None] - energies[None, :], 0.0)

    averaged = np.zeros(len(z))
    for coloring in colorings:
        w = np.asarray(coloring, dtype=float)
        mass_w = w @ edge_mass
        dir_w = w @ edge_dirichlet
        averaged += pos**2 @ mass_w - 4.0 * alpha * (pos @ dir_w)

    grad = edge_dirichlet.sum(axis=0)
    plain = p * ((pos**2).sum(axis=1) - 4.0 * alpha * (pos @ grad))

    scale = np.maximum(np.abs(plain), p * np.maximum((pos**2).sum(axis=1), 1e-300))
    dev = float(np.max(np.abs(averaged - plain) / scale)) if len(z) else 0.0
    holds = bool(np.all(plain <= p * tol_rel * z * z))
    verdict = "holds" if holds else "violated"
    return AveragedYangReport(z, averaged, plain, p, dev, verdict)
