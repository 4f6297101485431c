"""Lattice construction, snake ordering, and edge-orbit oracles."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from sncqa.lattice import (
    Edge,
    LatticeSpec,
    build_lattice,
    edge_orbits,
    graph_automorphisms,
    lattice_symmetry_group,
    snake_ordering,
)


def test_edge_counts_follow_grid_formulas():
    for rows, cols in [(1, 2), (2, 2), (2, 3), (2, 4), (3, 4), (4, 4)]:
        lat = build_lattice(LatticeSpec(rows, cols))
        assert len(lat.nn_edges) == rows * (cols - 1) + (rows - 1) * cols
        assert len(lat.nnn_edges) == 2 * (rows - 1) * (cols - 1)


def test_edges_are_sorted_and_normalized():
    lat = build_lattice(LatticeSpec(2, 3))
    for edge in lat.nn_edges + lat.nnn_edges:
        assert edge.a < edge.b
    assert list(lat.nn_edges) == sorted(lat.nn_edges)


def test_single_site_lattice_rejected():
    with pytest.raises(ValueError):
        build_lattice(LatticeSpec(1, 1))
    with pytest.raises(ValueError):
        LatticeSpec(0, 3)


def test_periodic_boundary_unsupported():
    with pytest.raises(ValueError):
        LatticeSpec(2, 2, boundary="periodic")


def test_snake_ordering_2x3():
    lat = build_lattice(LatticeSpec(2, 3))
    # row 0 left-to-right, row 1 right-to-left
    assert snake_ordering(lat) == [0, 1, 2, 5, 4, 3]


def test_snake_ordering_3x4_consecutive_positions_are_adjacent():
    lat = build_lattice(LatticeSpec(3, 4))
    order = snake_ordering(lat)
    assert sorted(order) == list(range(12))
    nn = {frozenset(e.sites) for e in lat.nn_edges}
    for a, b in zip(order, order[1:]):
        assert frozenset((a, b)) in nn


def test_symmetry_group_orders():
    # 1x2: identity and the swap
    assert len(lattice_symmetry_group(build_lattice(LatticeSpec(1, 2)))) == 2
    # rectangle: {id, h, v, hv}
    assert len(lattice_symmetry_group(build_lattice(LatticeSpec(2, 3)))) == 4
    # square picks up the rotation: dihedral group of order 8
    assert len(lattice_symmetry_group(build_lattice(LatticeSpec(2, 2)))) == 8


def test_symmetry_group_is_closed_and_contains_identity():
    for rows, cols in [(2, 2), (2, 3), (3, 4), (4, 4)]:
        lat = build_lattice(LatticeSpec(rows, cols))
        group = set(lattice_symmetry_group(lat))
        n = lat.n_sites
        assert tuple(range(n)) in group
        for p in group:
            inverse = [0] * n
            for i, v in enumerate(p):
                inverse[v] = i
            assert tuple(inverse) in group
            for q in group:
                assert tuple(p[q[i]] for i in range(n)) in group


def test_symmetry_group_matches_graph_automorphisms_on_rectangles():
    # for grids with both sides >= 2 the geometric symmetries are exactly
    # the NN-graph automorphisms
    for rows, cols in [(2, 3), (3, 4), (2, 2)]:
        lat = build_lattice(LatticeSpec(rows, cols))
        assert sorted(lattice_symmetry_group(lat)) == sorted(graph_automorphisms(lat))


def test_edge_orbit_sizes_2x3():
    lat = build_lattice(LatticeSpec(2, 3))
    partition = edge_orbits(lat, lattice_symmetry_group(lat), "nn")
    sizes = sorted(len(orbit) for orbit in partition.orbits)
    assert sizes == [1, 2, 4]


def test_edge_orbits_partition_and_invariance():
    for rows, cols in [(2, 2), (2, 3), (3, 4)]:
        lat = build_lattice(LatticeSpec(rows, cols))
        group = lattice_symmetry_group(lat)
        for kind, edges in (("nn", lat.nn_edges), ("nnn", lat.nnn_edges)):
            if not edges:
                continue
            partition = edge_orbits(lat, group, kind)
            seen = [e for orbit in partition.orbits for e in orbit]
            assert sorted(seen) == sorted(edges)
            for orbit in partition.orbits:
                ids = {partition.orbit_of[e] for e in orbit}
                assert len(ids) == 1
            for perm in group:
                for edge in edges:
                    mapped = frozenset((perm[edge.a], perm[edge.b]))
                    target = next(e for e in edges if frozenset(e.sites) == mapped)
                    assert partition.orbit_of[target] == partition.orbit_of[edge]


def test_nnn_orbits_2x3():
    lat = build_lattice(LatticeSpec(2, 3))
    partition = edge_orbits(lat, lattice_symmetry_group(lat), "nnn")
    # four diagonal edges, all equivalent under the rectangle group
    assert [len(o) for o in partition.orbits] == [4]


@given(rows=st.integers(1, 3), cols=st.integers(1, 4))
def test_snake_ordering_is_a_permutation(rows, cols):
    if rows * cols < 2:
        return
    lat = build_lattice(LatticeSpec(rows, cols))
    order = snake_ordering(lat)
    assert sorted(order) == list(range(lat.n_sites))


@given(rows=st.integers(1, 3), cols=st.integers(2, 4))
def test_group_elements_permute_edges(rows, cols):
    lat = build_lattice(LatticeSpec(rows, cols))
    group = lattice_symmetry_group(lat)
    nn = {frozenset(e.sites) for e in lat.nn_edges}
    for perm in group:
        for edge in lat.nn_edges:
            assert frozenset((perm[edge.a], perm[edge.b])) in nn


def test_edge_requires_ordered_endpoints():
    with pytest.raises(ValueError):
        Edge(3, 1, "nn")
