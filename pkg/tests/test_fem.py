import math

import numpy as np
import pytest

from qglab import families, fem
from qglab.graphs import DIRICHLET, NEUMANN, Edge, MetricGraph, SquareWell

from conftest import make_path


def test_mesh_interval_counts():
    mesh = fem.build_mesh(families.interval(1.0), 0.1)
    assert mesh.cells == [10]
    assert mesh.ndof == 9  # Dirichlet at both ends


def test_mesh_balloon_loop_split():
    mesh = fem.build_mesh(families.balloon(), 0.01)
    # loop expands to two half-edges of length pi each
    halves = [s for s in mesh.segments if s.edge_id == 0]
    assert len(halves) == 2
    assert all(s.length == pytest.approx(math.pi) for s in halves)
    per_half = math.ceil(math.pi / 0.01)
    string = math.ceil(math.pi / 0.01)
    # direct count: interior nodes + junction + synthetic midpoint (string end eliminated)
    expected = (per_half - 1) * 2 + (string - 1) + 2
    assert mesh.ndof == expected


def test_mesh_resolution_hint_wins():
    g = MetricGraph(2, (Edge(0, 1, 1.0, cells=5),), {0: DIRICHLET, 1: DIRICHLET})
    mesh = fem.build_mesh(g, 1e-6)
    assert mesh.cells == [5]


def test_mesh_rejects_bad_target():
    with pytest.raises(ValueError):
        fem.build_mesh(families.interval(), 0.0)


def test_single_element_stiffness():
    h = 0.37
    g = MetricGraph(2, (Edge(0, 1, h, cells=1),), {0: NEUMANN, 1: NEUMANN})
    system = fem.assemble(fem.build_mesh(g, 1.0))
    K = system.base_stiffness.toarray()
    assert np.allclose(K, np.array([[1, -1], [-1, 1]]) / h, rtol=1e-15)
    M = system.mass.toarray()
    assert np.allclose(M, np.array([[2, 1], [1, 2]]) * h / 6, rtol=1e-15)


def test_constant_potential_gives_w_equals_c_m():
    c = -2.75
    g = MetricGraph(
        2,
        (Edge(0, 1, 1.3, SquareWell(depth=c, left=0.0, right=1.3)),),
        {0: NEUMANN, 1: NEUMANN},
    )
    system = fem.assemble(fem.build_mesh(g, 0.1))
    assert np.allclose(system.potential.toarray(), c * system.mass.toarray(), rtol=1e-14)


def test_interval_dirichlet_convergence():
    exact = math.pi**2
    errs = []
    hs = [1 / 50, 1 / 100, 1 / 200]
    for h in hs:
        spec = fem.solve_graph(families.interval(1.0), h, 5)
        errs.append(abs(spec.energies[0] - exact))
    assert errs[1] < 1e-3  # h = 1/100
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert 1.8 <= slope <= 2.2
    # n = 1..5 at h = 1/200, relative error < 4e-3
    spec = fem.solve_graph(families.interval(1.0), 1 / 200, 5)
    expected = np.arange(1, 6) ** 2 * math.pi**2
    assert np.all(np.abs(spec.energies / expected - 1.0) < 4e-3)


def test_interval_eigenvalue_count_monotone_in_alpha():
    g = families.interval(1.0, alpha=1.0)
    mesh = fem.build_mesh(g, 0.02)
    system = fem.assemble(mesh)
    s1 = fem.solve_spectrum(system, 5, alpha=1.0)
    s2 = fem.solve_spectrum(system, 5, alpha=2.5)
    assert np.allclose(s2.energies, 2.5 * s1.energies, rtol=1e-11)


def test_balloon_ratio_matches_oracle():
    from qglab import analytic

    spec = fem.solve_graph(families.balloon(), 0.01, 6)
    oracle = [m.energy for m in analytic.balloon_eigenvalues(math.pi, 6)]
    assert np.all(np.abs(spec.energies / np.array(oracle) - 1.0) < 2e-4)
    ratio = spec.energies[1] / spec.energies[0]
    assert ratio == pytest.approx(16.8453, abs=2e-3)


def test_balloon_odd_mode_vanishes_on_string():
    spec = fem.solve_graph(families.balloon(), 0.01, 6)
    j = int(np.argmin(np.abs(spec.energies - 1.0)))  # k = 1 loop mode
    assert spec.edge_mass[1, j] < 1e-8  # edge 1 is the string


def test_fancy_balloon_exact_values():
    spec = fem.solve_graph(families.fancy_balloon(3), 0.01, 4)
    assert spec.energies[0] == pytest.approx(1 / 36, rel=2e-4)
    assert spec.energies[1] / spec.energies[0] == pytest.approx(25.0, rel=2e-3)


def test_mass_normalization_and_rayleigh_identity():
    spec = fem.solve_graph(families.y_graph(), 0.01, 8)
    assert np.allclose(spec.edge_mass.sum(axis=0), 1.0, atol=1e-12)
    # V = 0, alpha = 1: the derivative form reproduces the eigenvalue exactly
    # at the discrete level
    assert np.allclose(spec.total_dirichlet(), spec.energies, rtol=1e-10)


def test_per_edge_functionals_view():
    spec = fem.solve_graph(families.y_graph(), 0.05, 3)
    tables = fem.per_edge_functionals(spec)
    assert tables.mass.shape == (3, 3)
    assert tables.dirichlet.shape == (3, 3)


def test_kirchhoff_residual_decays():
    g = families.y_graph()
    res = []
    hs = [0.04, 0.02, 0.01]
    for h in hs:
        spec = fem.solve_graph(g, h, 1)
        r = fem.kirchhoff_residuals(spec)
        res.append(abs(r[0, 0]))  # center vertex, ground state
    slope = np.polyfit(np.log(hs), np.log(res), 1)[0]
    assert slope >= 0.8


def test_degree_two_vertex_is_invisible():
    spec_a = fem.solve_graph(families.interval(1.0), 0.01, 4)
    spec_b = fem.solve_graph(make_path([0.4, 0.6]), 0.01, 4)
    # same node set, so the eigenvalues agree to solver precision
    assert np.allclose(spec_a.energies, spec_b.energies, rtol=1e-10)


def test_sparse_path_matches_dense():
    g = families.balloon()
    mesh = fem.build_mesh(g, 0.01)
    system = fem.assemble(mesh)
    dense = fem.solve_spectrum(system, 6)
    sparse = fem.solve_spectrum(system, 6, dense_cap=10)
    assert np.allclose(dense.energies, sparse.energies, rtol=1e-9)
    assert np.allclose(dense.edge_mass, sparse.edge_mass, atol=1e-7)


def test_solves_are_deterministic():
    g = families.balloon()
    mesh = fem.build_mesh(g, 0.01)
    system = fem.assemble(mesh)
    a = fem.solve_spectrum(system, 6, dense_cap=10)
    b = fem.solve_spectrum(system, 6, dense_cap=10)
    assert np.array_equal(a.energies, b.energies)
    assert np.array_equal(a.vectors, b.vectors)


def test_solve_k_bounds():
    g = families.interval(1.0)
    system = fem.assemble(fem.build_mesh(g, 0.5))
    with pytest.raises(ValueError):
        fem.solve_spectrum(system, 0)
    with pytest.raises(ValueError):
        fem.solve_spectrum(system, system.ndof + 1)


def test_eigenfunction_samples_cover_edges():
    spec = fem.solve_graph(families.balloon(), 0.05, 2)
    samples = fem.eigenfunction_samples(spec, 0)
    assert len(samples) == 2
    x_loop, y_loop = samples[0]
    assert x_loop[0] == 0.0
    assert x_loop[-1] == pytest.approx(2 * math.pi)
    assert np.all(np.diff(x_loop) > 0)
    # ground state is positive somewhere on the loop
    assert y_loop.max() > 0


def test_degenerate_clusters_found_at_tolerance():
    spec = fem.solve_graph(families.fancy_balloon(3), 0.02, 4)
    clusters = fem.degenerate_clusters(spec.energies, rtol=1e-8)
    # the antisymmetric pair near E = 1 forms one cluster of size 2
    sizes = sorted(len(c) for c in clusters)
    assert sizes == [1, 1, 2]
    # the cluster's total mass per edge is basis independent: rungs share it
    pair = next(c for c in clusters if len(c) == 2)
    rung_mass = spec.edge_mass[1:, list(pair)].sum()
    assert rung_mass == pytest.approx(2.0, abs=1e-9)
