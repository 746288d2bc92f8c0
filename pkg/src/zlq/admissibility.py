"""Exact admissibility checking for 2-edge families.

Three rules govern a family over the fixed 1-edge background:

* simplicity: no cell is claimed twice (by two 2-edges, or by a 2-edge and
  a 1-edge);
* opposite-corner rule: for a nondegenerate 2-edge with halves (r1, c1) and
  (r2, c2), the cells (r1, c2) and (r2, c1) must not both be occupied;
* five-cell rule: no occupied witness cell (x, y) with x outside {r1, r2}
  and y outside {c1, c2} may see (x, c1), (x, c2), (r1, y), (r2, y) all
  occupied as well.

"Occupied" always includes the 1-edge cells, so a rule can fire against the
background alone.  For a nondegenerate 2-edge the five pattern cells are
automatically pairwise distinct once the witness restrictions hold (this is
asserted, never re-filtered); degenerate 2-edges may have coincident
pattern cells and the check treats the pattern as a multiset.

Occupancy is tracked in two redundant bitset views: per-row column masks
and per-column row masks.  The five-cell scan then reduces to three mask
intersections, which keeps full verification cheap even inside search
loops.
"""

from __future__ import annotations

from dataclasses import dataclass

from .board import (
    BoardError,
    Cell,
    NONDEGENERATE,
    Row,
    TwoEdge,
    classify,
    rows,
)
from .families import Family

FREE = -2
ONE_EDGE = -1
# owner values >= 0 are indices into the family's canonical edge order


def _format_cell(cell: Cell) -> str:
    i, j, c = cell
    return f"({i},{j}|{c})"


@dataclass(frozen=True)
class Violation:
    """One broken rule instance; the cells listed reproduce it in isolation."""

    kind: str  # "S" | "C2" | "C3"
    edges: tuple[int, ...]  # canonical indices; -1 marks a proposed edge
    cells: tuple[Cell, ...]
    witness: tuple[Row, int] | None = None  # (x, y) for the five-cell rule

    def format(self) -> str:
        if self.kind == "S":
            edges = ",".join(str(k) for k in self.edges)
            return f"S cell={_format_cell(self.cells[0])} edges=[{edges}]"
        if self.kind == "C2":
            cells = ",".join(_format_cell(c) for c in self.cells)
            return f"C2 edge={self.edges[0]} cells={cells}"
        (x, y) = self.witness  # type: ignore[misc]
        cells = ",".join(_format_cell(c) for c in self.cells)
        return f"C3 edge={self.edges[0]} witness=({x[0]},{x[1]}|{y}) cells={cells}"


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violations: tuple[Violation, ...]

    def report(self) -> str:
        return "\n".join(v.format() for v in self.violations)


class ScratchBoard:
    """Mutable occupancy state for one q-board.

    Single-owner by design: callers running a search must serialize their
    own mutations.  Cells are addressed as (row index, column); edge
    placement and removal are O(1) mask updates.
    """

    __slots__ = ("q", "n", "m", "rows", "rowidx", "col_masks", "row_masks", "free_cells")

    def __init__(self, q: int):
        self.q = q
        self.n = q + 1
        self.rows = rows(q)
        self.m = len(self.rows)
        self.rowidx = {r: k for k, r in enumerate(self.rows)}
        self.col_masks = [0] * self.m  # row index -> bitmask of occupied columns
        self.row_masks = [0] * self.n  # column -> bitmask of occupied row indices
        for k, (i, j) in enumerate(self.rows):
            self.col_masks[k] = (1 << i) | (1 << j)
            self.row_masks[i] |= 1 << k
            self.row_masks[j] |= 1 << k
        self.free_cells = self.m * (q - 1)

    def coords(self, edge: TwoEdge) -> tuple[int, int, int, int]:
        """(row index, column) pairs of the two halves."""
        (i1, j1, c1), (i2, j2, c2) = edge
        return self.rowidx[(i1, j1)], c1, self.rowidx[(i2, j2)], c2

    def occupied(self, ri: int, c: int) -> bool:
        return bool((self.col_masks[ri] >> c) & 1)

    def cells_free(self, r1: int, c1: int, r2: int, c2: int) -> bool:
        return not ((self.col_masks[r1] >> c1) & 1 or (self.col_masks[r2] >> c2) & 1)

    def place(self, r1: int, c1: int, r2: int, c2: int) -> None:
        self.col_masks[r1] |= 1 << c1
        self.row_masks[c1] |= 1 << r1
        self.col_masks[r2] |= 1 << c2
        self.row_masks[c2] |= 1 << r2
        self.free_cells -= 2

    def unplace(self, r1: int, c1: int, r2: int, c2: int) -> None:
        self.col_masks[r1] &= ~(1 << c1)
        self.row_masks[c1] &= ~(1 << r1)
        self.col_masks[r2] &= ~(1 << c2)
        self.row_masks[c2] &= ~(1 << r2)
        self.free_cells += 2

    def c2_hit(self, r1: int, c1: int, r2: int, c2: int) -> bool:
        """Both opposite corners occupied (meaningful for nondegenerate only)."""
        return bool((self.col_masks[r1] >> c2) & 1 and (self.col_masks[r2] >> c1) & 1)

    def c3_hit(self, r1: int, c1: int, r2: int, c2: int) -> bool:
        """Some witness completes the five-cell pattern for this edge.

        base: columns y outside {c1, c2} with (r1, y) and (r2, y) occupied.
        xs:   rows x outside {r1, r2} with (x, c1) and (x, c2) occupied.
        A hit is any x in xs whose occupied columns meet base.
        """
        col_masks = self.col_masks
        colbits = (1 << c1) | (1 << c2)
        base = col_masks[r1] & col_masks[r2] & ~colbits
        if not base:
            return False
        xs = self.row_masks[c1] & self.row_masks[c2] & ~((1 << r1) | (1 << r2))
        while xs:
            x = (xs & -xs).bit_length() - 1
            xs &= xs - 1
            if col_masks[x] & base:
                return True
        return False

    def c3_witnesses(self, r1: int, c1: int, r2: int, c2: int) -> list[tuple[int, int]]:
        """All (row index, column) witnesses, in scan order."""
        col_masks = self.col_masks
        colbits = (1 << c1) | (1 << c2)
        base = col_masks[r1] & col_masks[r2] & ~colbits
        if not base:
            return []
        out = []
        xs = self.row_masks[c1] & self.row_masks[c2] & ~((1 << r1) | (1 << r2))
        while xs:
            x = (xs & -xs).bit_length() - 1
            xs &= xs - 1
            ys = col_masks[x] & base
            while ys:
                y = (ys & -ys).bit_length() - 1
                ys &= ys - 1
                out.append((x, y))
        return out

    def insertion_ok(
        self,
        coords: tuple[int, int, int, int],
        nondeg: bool,
        placed: list[tuple[int, int, int, int, bool]],
    ) -> bool:
        """Would placing this edge keep the board admissible?

        ``placed`` holds the coords and nondegeneracy flags of the edges
        already on the board, all of which are re-examined because the two
        new cells may complete an opposite-corner or five-cell pattern for
        them.  The board is left unchanged.
        """
        r1, c1, r2, c2 = coords
        if not self.cells_free(r1, c1, r2, c2):
            return False
        self.place(r1, c1, r2, c2)
        try:
            if nondeg and self.c2_hit(r1, c1, r2, c2):
                return False
            if self.c3_hit(r1, c1, r2, c2):
                return False
            for g1, gc1, g2, gc2, gnondeg in placed:
                if gnondeg and self.c2_hit(g1, gc1, g2, gc2):
                    return False
                if self.c3_hit(g1, gc1, g2, gc2):
                    return False
            return True
        finally:
            self.unplace(r1, c1, r2, c2)


@dataclass(frozen=True)
class Board:
    """Immutable occupancy snapshot of a family on its q-board."""

    q: int
    family: Family
    col_masks: tuple[int, ...]
    row_masks: tuple[int, ...]
    owners: tuple[int, ...]  # dense cell index -> FREE / ONE_EDGE / edge index
    s_violations: tuple[Violation, ...]

    def owner_of(self, cell: Cell) -> int:
        i, j, c = cell
        ri = rows(self.q).index((i, j))
        return self.owners[ri * (self.q + 1) + c]

    def counts(self) -> dict[str, int]:
        one = sum(1 for o in self.owners if o == ONE_EDGE)
        free = sum(1 for o in self.owners if o == FREE)
        return {"one_edge": one, "free": free, "used": len(self.owners) - one - free}


def build_board(q: int, family: Family) -> Board:
    """Occupancy of the 1-edge background plus every half of every edge.

    Two edges claiming one cell is a simplicity violation, reported on the
    board rather than raised; an edge half sitting on a 1-edge cell cannot
    occur in a validated Family and is rejected as a structural error.
    """
    if family.q != q:
        raise BoardError(f"family is on the {family.q}-board, expected q={q}")
    scratch = ScratchBoard(q)
    n = q + 1
    owners = [FREE] * (scratch.m * n)
    for k, (i, j) in enumerate(scratch.rows):
        owners[k * n + i] = ONE_EDGE
        owners[k * n + j] = ONE_EDGE

    claims: dict[int, list[int]] = {}
    for eidx, edge in enumerate(family.edges):
        r1, c1, r2, c2 = scratch.coords(edge)
        for ri, c in ((r1, c1), (r2, c2)):
            dense = ri * n + c
            if owners[dense] == ONE_EDGE:
                raise BoardError(f"edge {edge} claims the 1-edge cell {scratch.rows[ri] + (c,)}")
            if owners[dense] == FREE:
                owners[dense] = eidx
                scratch.col_masks[ri] |= 1 << c
                scratch.row_masks[c] |= 1 << ri
                scratch.free_cells -= 1
            else:
                claims.setdefault(dense, [owners[dense]]).append(eidx)

    s_violations = []
    for dense in sorted(claims):
        ri, c = divmod(dense, n)
        i, j = scratch.rows[ri]
        s_violations.append(
            Violation(kind="S", edges=tuple(claims[dense]), cells=((i, j, c),))
        )
    return Board(
        q=q,
        family=family,
        col_masks=tuple(scratch.col_masks),
        row_masks=tuple(scratch.row_masks),
        owners=tuple(owners),
        s_violations=tuple(s_violations),
    )


def _scratch_from_board(board: Board) -> ScratchBoard:
    scratch = ScratchBoard(board.q)
    scratch.col_masks = list(board.col_masks)
    scratch.row_masks = list(board.row_masks)
    scratch.free_cells = sum(1 for o in board.owners if o == FREE)
    return scratch


def _edge_index(board: Board, edge: TwoEdge) -> int:
    try:
        return board.family.edges.index(edge)
    except ValueError:
        return -1  # proposed, not part of the board's family


def check_C2(board: Board, edge: TwoEdge) -> Violation | None:
    """Opposite-corner violation for a nondegenerate edge, else None.

    Degenerate edges never trigger this rule.  1-edge occupancy counts, so
    an edge whose two opposite corners are both 1-edge cells is infeasible
    on any board.
    """
    if classify(edge) != NONDEGENERATE:
        return None
    scratch = _scratch_from_board(board)
    r1, c1, r2, c2 = scratch.coords(edge)
    if scratch.c2_hit(r1, c1, r2, c2):
        (i1, j1), (i2, j2) = scratch.rows[r1], scratch.rows[r2]
        return Violation(
            kind="C2",
            edges=(_edge_index(board, edge),),
            cells=((i1, j1, c2), (i2, j2, c1)),
        )
    return None


def check_C3(board: Board, edge: TwoEdge) -> list[Violation]:
    """All five-cell violations for this edge, one per witness, scan order."""
    scratch = _scratch_from_board(board)
    r1, c1, r2, c2 = scratch.coords(edge)
    nondeg = classify(edge) == NONDEGENERATE
    eidx = _edge_index(board, edge)
    out = []
    for x, y in scratch.c3_witnesses(r1, c1, r2, c2):
        xi, xj = scratch.rows[x]
        (i1, j1), (i2, j2) = scratch.rows[r1], scratch.rows[r2]
        cells = ((xi, xj, y), (xi, xj, c1), (xi, xj, c2), (i1, j1, y), (i2, j2, y))
        if nondeg:
            assert len(set(cells)) == 5, "nondegenerate pattern cells must be distinct"
        out.append(Violation(kind="C3", edges=(eidx,), cells=cells, witness=((xi, xj), y)))
    return out


def verify(family: Family) -> VerifyResult:
    """Full check of every rule over every edge; reports are exhaustive."""
    board = build_board(family.q, family)
    violations: list[Violation] = list(board.s_violations)
    for edge in family.edges:
        v2 = check_C2(board, edge)
        if v2 is not None:
            violations.append(v2)
        violations.extend(check_C3(board, edge))
    return VerifyResult(ok=not violations, violations=tuple(violations))


def incremental_check(board: Board, family: Family, edge: TwoEdge) -> bool:
    """True iff family + edge stays admissible; board must match family.

    Equivalent, by tested contract, to running the full verifier on the
    extended family: the edge's own cells must be free, its own rules must
    hold, and every existing edge is re-examined because the two new cells
    may complete a pattern for it.  The board is not mutated.
    """
    if board.s_violations:
        return False
    scratch = _scratch_from_board(board)
    coords = scratch.coords(edge)
    placed = []
    for g in family.edges:
        g1, gc1, g2, gc2 = scratch.coords(g)
        placed.append((g1, gc1, g2, gc2, classify(g) == NONDEGENERATE))
    return scratch.insertion_ok(coords, classify(edge) == NONDEGENERATE, placed)


def is_statically_infeasible(scratch: ScratchBoard, edge: TwoEdge) -> bool:
    """Infeasible against the 1-edge background alone.

    The scratch board must carry only the background.  A singleton family
    {edge} already violating a rule can never appear in an admissible
    family (admissibility is hereditary), so solvers drop such candidates
    up front.
    """
    r1, c1, r2, c2 = scratch.coords(edge)
    if not scratch.cells_free(r1, c1, r2, c2):
        raise BoardError("static feasibility requires a background-only board")
    scratch.place(r1, c1, r2, c2)
    try:
        if classify(edge) == NONDEGENERATE and scratch.c2_hit(r1, c1, r2, c2):
            return True
        return scratch.c3_hit(r1, c1, r2, c2)
    finally:
        scratch.unplace(r1, c1, r2, c2)


def static_prune_flags(q: int, candidates: list[TwoEdge]) -> list[bool]:
    """Per-candidate flag: True when the candidate is infeasible on its own."""
    scratch = ScratchBoard(q)
    return [is_statically_infeasible(scratch, e) for e in candidates]
