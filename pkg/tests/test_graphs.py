import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qglab import families
from qglab.graphs import (
    DIRICHLET,
    NEUMANN,
    Edge,
    GraphFormatError,
    MetricGraph,
    PoschlTeller,
    Sampled,
    SquareWell,
    TopologyClass,
    classify_topology,
    graph_from_dict,
    graph_to_dict,
    load_graph,
    save_graph,
    scale_graph,
    validate,
)

from conftest import gf2_cycle_rank


def test_validate_interval():
    g = families.interval(math.pi)
    rep = validate(g)
    assert rep.valid
    assert rep.total_length == pytest.approx(math.pi)
    assert rep.degrees == {0: 1, 1: 1}


def test_validate_balloon():
    g = families.balloon()
    rep = validate(g)
    assert rep.valid
    assert rep.total_length == pytest.approx(3 * math.pi)
    assert sorted(v for v, d in rep.degrees.items() if d == 1) == [1]
    # self-loop contributes 2 to the junction degree
    assert rep.degrees[0] == 3


def test_validate_zero_length_edge():
    g = MetricGraph(2, (Edge(0, 1, 0.0),), {0: DIRICHLET, 1: DIRICHLET})
    rep = validate(g)
    assert not rep.valid
    assert any("nonpositive length" in e for e in rep.errors)


def test_validate_missing_bc_and_misplaced_bc():
    g = MetricGraph(2, (Edge(0, 1, 1.0),), {0: DIRICHLET})
    assert any("missing boundary condition" in e for e in validate(g).errors)
    g2 = MetricGraph(3, (Edge(0, 1, 1.0), Edge(1, 2, 1.0)), {0: DIRICHLET, 1: NEUMANN, 2: DIRICHLET})
    assert any("non-leaf" in e for e in validate(g2).errors)


def test_validate_disconnected():
    g = MetricGraph(4, (Edge(0, 1, 1.0), Edge(2, 3, 1.0)),
                    {0: DIRICHLET, 1: DIRICHLET, 2: DIRICHLET, 3: DIRICHLET})
    assert any("not connected" in e for e in validate(g).errors)


def test_classify_y_graph():
    topo = classify_topology(families.y_graph())
    assert topo.topology_class is TopologyClass.TREE
    assert topo.betti == 0
    assert topo.cycle_cut_vertices == []


def test_classify_balloon():
    topo = classify_topology(families.balloon())
    assert topo.topology_class is TopologyClass.CUT_VERTEX_CYCLE
    assert topo.betti == 1
    assert topo.cycle_cut_vertices == [0]


def test_classify_circle_with_leads():
    topo = classify_topology(families.circle_with_leads())
    assert topo.topology_class is TopologyClass.ONE_LOOP_WITH_LEADS
    assert topo.betti == 1
    assert topo.cycle_cut_vertices == []


def test_classify_two_gon_with_one_lead():
    # parallel edges form the cycle, reachable from one lead only
    g = MetricGraph(3, (Edge(0, 1, 1.0), Edge(0, 1, 2.0), Edge(0, 2, 1.0)), {2: DIRICHLET})
    topo = classify_topology(g)
    assert topo.topology_class is TopologyClass.CUT_VERTEX_CYCLE
    assert 0 in topo.cycle_cut_vertices


def test_classify_general_two_cycles():
    g = MetricGraph(
        3,
        (Edge(0, 1, 1.0), Edge(0, 1, 1.5), Edge(0, 1, 2.0), Edge(0, 2, 1.0), Edge(1, 2, 1.0)),
        {},
    )
    # no leaves at all: vacuously disconnected from "all leaves"
    topo = classify_topology(g)
    assert topo.betti == 3
    assert topo.topology_class is TopologyClass.CUT_VERTEX_CYCLE


@st.composite
def connected_graphs(draw):
    n = draw(st.integers(min_value=2, max_value=7))
    parents = [draw(st.integers(min_value=0, max_value=k)) for k in range(n - 1)]
    edges = [Edge(parents[k], k + 1, 1.0) for k in range(n - 1)]
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4))
    edges += [Edge(u, v, 0.5) for u, v in extra]
    return MetricGraph(n, tuple(edges), {})


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_betti_matches_cycle_space_rank(g):
    boundary = {v: DIRICHLET for v in g.leaf_vertices()}
    g = MetricGraph(g.num_vertices, g.edges, boundary, 1.0)
    topo = classify_topology(g)
    assert topo.betti == gf2_cycle_rank(g)
    assert (topo.topology_class is TopologyClass.TREE) == (topo.betti == 0)


def test_potentials_evaluate():
    x = np.array([0.0, 0.5, 1.0])
    pt = PoschlTeller(a=2.0, center=0.5)
    assert pt.evaluate(x, 1.0)[1] == pytest.approx(-8.0)
    sw = SquareWell(depth=-3.0, left=0.25, right=0.75)
    assert list(sw.evaluate(x, 1.0)) == [0.0, -3.0, 0.0]
    sm = Sampled((0.0, 1.0, 0.0))
    assert sm.evaluate(np.array([0.25]), 1.0)[0] == pytest.approx(0.5)


def test_scale_graph_maps_eigenvalues():
    from qglab import fem

    g = load_graph("fixtures/tree_well.json")
    spec = fem.solve_graph(g, 0.02, 4)
    spec2 = fem.solve_graph(scale_graph(g, 2.0), 0.04, 4)
    assert np.allclose(spec2.energies, spec.energies / 4.0, rtol=1e-10)


# --- description file schema ---------------------------------------------


def test_graph_roundtrip(tmp_path):
    g = families.poschl_teller_balloon(10.0)
    path = tmp_path / "g.json"
    save_graph(g, path)
    g2 = load_graph(path)
    assert g2 == g


@pytest.mark.parametrize(
    "mutate, key",
    [
        (lambda d: d.update(extra=1), "extra"),
        (lambda d: d["vertices"][0].update(color="red"), "color"),
        (lambda d: d["edges"][0].update(weight=2), "weight"),
        (lambda d: d["edges"][0]["potential"].update(shape="deep"), "shape"),
    ],
)
def test_unknown_keys_rejected(mutate, key):
    d = graph_to_dict(families.poschl_teller_balloon(10.0))
    mutate(d)
    with pytest.raises(GraphFormatError, match=key):
        graph_from_dict(d)


def test_bad_vertex_ids_rejected():
    d = graph_to_dict(families.interval())
    d["vertices"][1]["id"] = 5
    with pytest.raises(GraphFormatError, match="dense"):
        graph_from_dict(d)


def test_bad_bc_rejected():
    d = graph_to_dict(families.interval())
    d["vertices"][0]["bc"] = "robin"
    with pytest.raises(GraphFormatError, match="robin"):
        graph_from_dict(d)


def test_unknown_potential_type_rejected():
    d = graph_to_dict(families.interval())
    d["edges"][0]["potential"] = {"type": "coulomb"}
    with pytest.raises(GraphFormatError, match="coulomb"):
        graph_from_dict(d)


def test_not_json_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(GraphFormatError, match="JSON"):
        load_graph(path)
