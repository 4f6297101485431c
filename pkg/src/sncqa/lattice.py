"""Rectangular spin lattices: edge sets, snake ordering, and edge symmetry orbits.

Sites are indexed row-major: site = row * cols + col. NN edges join
horizontally or vertically adjacent cells, NNN edges join diagonally
adjacent cells. Only open boundary conditions are supported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

__all__ = [
    "LatticeSpec",
    "Edge",
    "Lattice",
    "OrbitPartition",
    "build_lattice",
    "snake_ordering",
    "lattice_symmetry_group",
    "edge_orbits",
    "graph_automorphisms",
]


@dataclass(frozen=True)
class LatticeSpec:
    """Rectangular lattice geometry. Only open boundaries are supported."""

    rows: int
    cols: int
    boundary: str = "open"

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")
        if self.boundary != "open":
            raise ValueError(f"unsupported boundary {self.boundary!r}")


@dataclass(frozen=True, order=True)
class Edge:
    """Undirected lattice edge with a < b and kind in {'nn', 'nnn'}."""

    a: int
    b: int
    kind: str

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("edge endpoints must satisfy a < b")

    @property
    def sites(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class Lattice:
    rows: int
    cols: int
    nn_edges: tuple[Edge, ...]
    nnn_edges: tuple[Edge, ...]

    @property
    def n_sites(self) -> int:
        return self.rows * self.cols

    def site(self, row: int, col: int) -> int:
        return row * self.cols + col

    def coords(self, site: int) -> tuple[int, int]:
        return divmod(site, self.cols)


@dataclass(frozen=True)
class OrbitPartition:
    """Equivalence classes of edges under a site-permutation group action."""

    orbits: tuple[tuple[Edge, ...], ...]
    group_generators: tuple[tuple[int, ...], ...]
    orbit_of: dict[Edge, int] = field(hash=False, compare=False, default_factory=dict)


def build_lattice(spec: LatticeSpec) -> Lattice:
    """Build the open-boundary rectangular lattice for a spec.

    NN edge count is rows*(cols-1) + (rows-1)*cols and NNN edge count is
    2*(rows-1)*(cols-1); both follow from open-boundary grid counting.
    """
    if spec.rows * spec.cols < 2:
        raise ValueError("lattice needs at least 2 sites to carry an interaction")
    sid = lambda r, c: r * spec.cols + c
    nn: list[Edge] = []
    nnn: list[Edge] = []
    for r in range(spec.rows):
        for c in range(spec.cols):
            if c + 1 < spec.cols:
                nn.append(Edge(sid(r, c), sid(r, c + 1), "nn"))
            if r + 1 < spec.rows:
                nn.append(Edge(sid(r, c), sid(r + 1, c), "nn"))
            if r + 1 < spec.rows and c + 1 < spec.cols:
                nnn.append(Edge(sid(r, c), sid(r + 1, c + 1), "nnn"))
                nnn.append(Edge(min(sid(r, c + 1), sid(r + 1, c)),
                                max(sid(r, c + 1), sid(r + 1, c)), "nnn"))
    return Lattice(spec.rows, spec.cols, tuple(sorted(nn)), tuple(sorted(nnn)))


def snake_ordering(lattice: Lattice) -> list[int]:
    """Boustrophedon chain: row-major with odd rows reversed.

    Returns the bijection chain-position -> site. Consecutive chain positions
    always map to NN-adjacent sites, which keeps nearest-neighbour chain gates
    2-local on the lattice.
    """
    order: list[int] = []
    for r in range(lattice.rows):
        cols = range(lattice.cols) if r % 2 == 0 else range(lattice.cols - 1, -1, -1)
        order.extend(lattice.site(r, c) for c in cols)
    return order


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p o q)(i) = p[q[i]]
    return tuple(p[q[i]] for i in range(len(q)))


def lattice_symmetry_group(lattice: Lattice) -> list[tuple[int, ...]]:
    """Dihedral point group of the rectangle as site permutations.

    Generated by the horizontal flip, the vertical flip, and (for square
    lattices) the 90-degree rotation; closed under composition and containing
    the identity. Order 8 for squares, 4 for proper rectangles, 2 for 1-row
    or 1-column lattices (where one flip degenerates to the identity).
    """
    rows, cols = lattice.rows, lattice.cols
    n = lattice.n_sites
    identity = tuple(range(n))
    hflip = tuple(lattice.site(r, cols - 1 - c)
                  for r in range(rows) for c in range(cols))
    vflip = tuple(lattice.site(rows - 1 - r, c)
                  for r in range(rows) for c in range(cols))
    generators = {identity, hflip, vflip}
    if rows == cols:
        rot90 = tuple(lattice.site(c, rows - 1 - r)
                      for r in range(rows) for c in range(cols))
        generators.add(rot90)
    group = set(generators)
    frontier = list(group)
    while frontier:
        fresh = []
        for g in frontier:
            for h in generators:
                gh = _compose(g, h)
                if gh not in group:
                    group.add(gh)
                    fresh.append(gh)
        frontier = fresh
    return sorted(group)


def _map_edge(perm: tuple[int, ...], edge: Edge) -> Edge:
    a, b = perm[edge.a], perm[edge.b]
    return Edge(min(a, b), max(a, b), edge.kind)


def edge_orbits(lattice: Lattice, group: list[tuple[int, ...]], kind: str) -> OrbitPartition:
    """Partition edges of one kind into orbits of the induced group action."""
    edges = lattice.nn_edges if kind == "nn" else lattice.nnn_edges
    remaining = set(edges)
    orbits: list[tuple[Edge, ...]] = []
    orbit_of: dict[Edge, int] = {}
    for edge in edges:
        if edge not in remaining:
            continue
        orbit = {_map_edge(g, edge) for g in group}
        if not orbit <= set(edges):
            raise ValueError("group does not map the lattice onto itself")
        remaining -= orbit
        for e in orbit:
            orbit_of[e] = len(orbits)
        orbits.append(tuple(sorted(orbit)))
    generators = tuple(g for g in group)
    return OrbitPartition(tuple(orbits), generators, orbit_of)


def graph_automorphisms(lattice: Lattice) -> list[tuple[int, ...]]:
    """Enumerate all site bijections preserving the NN adjacency relation.

    Brute-force oracle used to crosscheck the dihedral construction; intended
    for n <= 12 only.
    """
    n = lattice.n_sites
    if n > 12:
        raise ValueError("brute-force automorphism search is capped at 12 sites")
    adj = [set() for _ in range(n)]
    for e in lattice.nn_edges:
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    degree = [len(a) for a in adj]

    autos: list[tuple[int, ...]] = []
    image = [-1] * n
    used = [False] * n

    def extend(site: int) -> None:
        if site == n:
            autos.append(tuple(image))
            return
        for target in range(n):
            if used[target] or degree[target] != degree[site]:
                continue
            # partial consistency: the map must preserve adjacency to all
            # previously assigned sites
            ok = all((image[other] in adj[target]) == (other in adj[site])
                     for other in range(site))
            if not ok:
                continue
            image[site] = target
            used[target] = True
            extend(site + 1)
            used[target] = False
        image[site] = -1

    extend(0)
    return sorted(autos)
