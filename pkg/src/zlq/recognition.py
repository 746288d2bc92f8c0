"""Recognition of incidence graphs among C4-free bipartite graphs.

At the extremal parameters |X| = C(n,2), |Y| = n, |F| = n(n-1), a C4-free
bipartite graph is forced to have every left degree equal to 2 with the
neighborhood map a bijection onto the 2-subsets of Y; reading the
neighborhoods off therefore yields an explicit isomorphism onto the
standard incidence graph.  Failure reasons are reported in a fixed order
(size, edge count, C4, degree) so messages are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .board import Row, rows


class GraphFormatError(ValueError):
    """Malformed bipartite graph document."""


@dataclass(frozen=True)
class BipartiteGraph:
    left: int
    right: int
    edges: tuple[tuple[int, int], ...]

    @staticmethod
    def from_edges(left: int, right: int, edges) -> "BipartiteGraph":
        if left < 0 or right < 0:
            raise ValueError("vertex counts must be non-negative")
        seen = set()
        out = []
        for x, y in edges:
            if not (0 <= x < left and 0 <= y < right):
                raise ValueError(f"edge ({x}, {y}) out of range")
            if (x, y) in seen:
                raise ValueError(f"duplicate edge ({x}, {y})")
            seen.add((x, y))
            out.append((x, y))
        return BipartiteGraph(left, right, tuple(sorted(out)))

    def left_neighbors(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.left)]
        for x, y in self.edges:
            adj[x].add(y)
        return adj


def parse_graph(text: str) -> BipartiteGraph:
    """First line ``nL nR``, then one ``x y`` pair per line; ``#`` comments."""
    header: tuple[int, int] | None = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers")
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected two integers") from None
        if header is None:
            header = (a, b)
        else:
            edges.append((a, b))
    if header is None:
        raise GraphFormatError("empty graph document")
    try:
        return BipartiteGraph.from_edges(header[0], header[1], edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def incidence_graph(n: int) -> BipartiteGraph:
    """Standard incidence graph of the complete graph on n vertices.

    Left vertices are the 2-subsets of {0..n-1} in lexicographic order,
    right vertices the n vertices themselves.
    """
    if n < 3:
        raise ValueError("need at least 3 vertices")
    pairs = rows(n - 1)
    edges = []
    for x, (i, j) in enumerate(pairs):
        edges.append((x, i))
        edges.append((x, j))
    return BipartiteGraph.from_edges(len(pairs), n, edges)


def find_four_cycle(g: BipartiteGraph) -> tuple[int, int, int, int] | None:
    """Lexicographically first witness (x1, x2, y1, y2) of a 4-cycle, if any."""
    adj = g.left_neighbors()
    for x1 in range(g.left):
        for x2 in range(x1 + 1, g.left):
            common = sorted(adj[x1] & adj[x2])
            if len(common) >= 2:
                return (x1, x2, common[0], common[1])
    return None


def is_c4_free(g: BipartiteGraph) -> bool:
    return find_four_cycle(g) is None


@dataclass(frozen=True)
class Isomorphism:
    """Maps onto the standard incidence graph on ``right`` vertices.

    left_map[x] is the vertex pair assigned to left vertex x; right_map is
    the identity relabeling of the right side.
    """

    left_map: tuple[Row, ...]
    right_map: tuple[int, ...]


@dataclass(frozen=True)
class NotExtremal:
    reason: str  # "size" | "edge-count" | "c4" | "degree"
    detail: str


def recognize_incidence(g: BipartiteGraph) -> Isomorphism | NotExtremal:
    """Explicit isomorphism onto the incidence graph, or why there is none."""
    n = g.right
    if n < 3 or g.left != comb(n, 2):
        return NotExtremal(
            reason="size",
            detail=f"need right size >= 3 and left size C(n,2); got {g.left} x {n}",
        )
    if len(g.edges) != n * (n - 1):
        return NotExtremal(
            reason="edge-count",
            detail=f"edge count {len(g.edges)} != n(n-1) = {n * (n - 1)}",
        )
    cycle = find_four_cycle(g)
    if cycle is not None:
        return NotExtremal(reason="c4", detail=f"4-cycle witness {cycle}")
    adj = g.left_neighbors()
    for x, nbrs in enumerate(adj):
        if len(nbrs) != 2:
            return NotExtremal(
                reason="degree", detail=f"left vertex {x} has degree {len(nbrs)}"
            )
    left_map = tuple(tuple(sorted(nbrs)) for nbrs in adj)
    # C4-freeness plus equal cardinalities force the neighborhood map to be
    # a bijection onto the 2-subsets; a repeat would already be a 4-cycle.
    assert len(set(left_map)) == g.left
    return Isomorphism(left_map=left_map, right_map=tuple(range(n)))


def isomorphism_image(g: BipartiteGraph, iso: Isomorphism) -> set[tuple[Row, int]]:
    """Edge set of g pushed through the maps, as (vertex pair, vertex) pairs."""
    return {(iso.left_map[x], iso.right_map[y]) for x, y in g.edges}


def check_isomorphism(g: BipartiteGraph, iso: Isomorphism) -> bool:
    """Image must equal the 1-edge set of the standard incidence graph."""
    n = g.right
    expected = {((i, j), c) for (i, j) in rows(n - 1) for c in (i, j)}
    return isomorphism_image(g, iso) == expected
