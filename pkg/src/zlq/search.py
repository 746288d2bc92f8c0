"""Randomized greedy construction of large admissible families.

One restart shuffles the candidate order, inserts every candidate that
keeps the family admissible, then runs delete-and-repair improvement:
remove one edge (exhaustively) or a sampled pair of edges and refill
greedily with a fresh shuffled order, keeping the result only when it is
strictly larger.  Restarts are independent given (master seed, restart
index), so runs are bit-stable and thread-count independent; the winning
family is re-checked by the full verifier before it is returned.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .board import Mode, NONDEGENERATE, TwoEdge, check_mode, check_q, candidate_family, classify
from .families import Family
from .admissibility import ScratchBoard, static_prune_flags, verify
from .rng import SplitMix64, derive_stream

Progress = Callable[[str], None]


@dataclass(frozen=True)
class SearchConfig:
    """Everything that determines a search run; equal configs give equal results.

    ``time_limit`` is the one exception: it is checked when a restart
    starts, so a run that hits it may complete fewer restarts than an
    identical run on a faster machine.  Runs that finish all restarts are
    bit-stable.
    """

    q: int
    mode: Mode = "full"
    seed: int = 0
    restarts: int = 8
    time_limit: float | None = None
    improve_passes: int = 2
    delete_width: int = 1
    width2_samples: int = 64
    warm_start: Family | None = None
    priority_vertex: int | None = None

    def validate(self) -> None:
        check_q(self.q)
        check_mode(self.mode)
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")
        if self.delete_width not in (1, 2):
            raise ValueError("delete width must be 1 or 2")
        if self.improve_passes < 0:
            raise ValueError("improvement passes must be non-negative")
        if self.warm_start is not None:
            if self.warm_start.q != self.q:
                raise ValueError("warm start family lives on a different board")
            if not verify(self.warm_start).ok:
                raise ValueError("warm start family fails verification")
            if self.mode == "nondeg" and any(
                classify(e) != NONDEGENERATE for e in self.warm_start.edges
            ):
                raise ValueError("nondeg mode cannot warm-start from a degenerate family")


@dataclass(frozen=True)
class SearchResult:
    config: SearchConfig
    best: Family
    best_size: int
    bound: int  # q(q+1) + best_size
    restart_sizes: tuple[int, ...]
    best_restart: int  # -1 when no restart ran
    verified: bool

    def summary_json(self) -> str:
        payload = {
            "q": self.config.q,
            "mode": self.config.mode,
            "seed": self.config.seed,
            "restarts": self.config.restarts,
            "best_size": self.best_size,
            "bound": self.bound,
            "verified": self.verified,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class _State:
    """One restart's mutable family + occupancy."""

    __slots__ = ("q", "scratch", "edges", "placed")

    def __init__(self, q: int, base: Family | None):
        self.q = q
        self.scratch = ScratchBoard(q)
        self.edges: list[TwoEdge] = []
        self.placed: list[tuple[int, int, int, int, bool]] = []
        if base is not None:
            for e in base.edges:
                coords = self.scratch.coords(e)
                self.scratch.place(*coords)
                self.edges.append(e)
                self.placed.append((*coords, classify(e) == NONDEGENERATE))

    def try_add(self, e: TwoEdge, coords: tuple[int, int, int, int], nondeg: bool) -> bool:
        if self.scratch.insertion_ok(coords, nondeg, self.placed):
            self.scratch.place(*coords)
            self.edges.append(e)
            self.placed.append((*coords, nondeg))
            return True
        return False

    def remove(self, e: TwoEdge) -> None:
        idx = self.edges.index(e)
        r1, c1, r2, c2, _ = self.placed[idx]
        self.scratch.unplace(r1, c1, r2, c2)
        del self.edges[idx]
        del self.placed[idx]

    def family(self) -> Family:
        return Family.from_edges(self.q, self.edges)


class _Candidates:
    """Shared immutable candidate table for one search run."""

    __slots__ = ("edges", "coords", "nondeg", "priority_split")

    def __init__(self, q: int, mode: Mode, priority_vertex: int | None):
        scratch = ScratchBoard(q)
        pool = candidate_family(q, mode)
        flags = static_prune_flags(q, pool)
        kept = [e for e, bad in zip(pool, flags) if not bad]
        if priority_vertex is not None:
            def touches(e: TwoEdge) -> bool:
                (i1, j1, c1), (i2, j2, c2) = e
                v = priority_vertex
                return v in (i1, j1, c1, i2, j2, c2)

            first = [e for e in kept if touches(e)]
            rest = [e for e in kept if not touches(e)]
            self.priority_split = len(first)
            kept = first + rest
        else:
            self.priority_split = None
        self.edges = kept
        self.coords = [scratch.coords(e) for e in kept]
        self.nondeg = [classify(e) == NONDEGENERATE for e in kept]

    def shuffled_order(self, stream: SplitMix64) -> list[int]:
        """Candidate indices, shuffled; the priority block stays in front."""
        if self.priority_split is None:
            order = list(range(len(self.edges)))
            stream.shuffle(order)
            return order
        first = list(range(self.priority_split))
        rest = list(range(self.priority_split, len(self.edges)))
        stream.shuffle(first)
        stream.shuffle(rest)
        return first + rest


def _fill(state: _State, cands: _Candidates, order: Sequence[int]) -> list[TwoEdge]:
    added = []
    for k in order:
        if state.try_add(cands.edges[k], cands.coords[k], cands.nondeg[k]):
            added.append(cands.edges[k])
    return added


def greedy_fill(start: Family, order: Sequence[TwoEdge]) -> Family:
    """Insert, in the given order, every candidate that keeps admissibility.

    The start family must verify; the result is admissible and maximal
    with respect to the scanned order.
    """
    if not verify(start).ok:
        raise ValueError("start family fails verification")
    state = _State(start.q, start)
    for e in order:
        coords = state.scratch.coords(e)
        state.try_add(e, coords, classify(e) == NONDEGENERATE)
    return state.family()


def _improve(
    state: _State,
    cands: _Candidates,
    stream: SplitMix64,
    passes: int,
    delete_width: int,
    width2_samples: int,
) -> None:
    """Delete-and-repair until a pass yields no strictly larger family."""

    def attempt(removals: list[TwoEdge]) -> bool:
        before = len(state.edges)
        for e in removals:
            state.remove(e)
        added = _fill(state, cands, cands.shuffled_order(stream))
        if len(state.edges) > before:
            return True
        for e in added:
            state.remove(e)
        for e in removals:
            coords = state.scratch.coords(e)
            state.scratch.place(*coords)
            state.edges.append(e)
            state.placed.append((*coords, classify(e) == NONDEGENERATE))
        return False

    # repair pass with nothing deleted: maximality is order-relative, so a
    # fresh order can still add edges (and makes improving an empty family
    # coincide with a greedy fill)
    _fill(state, cands, cands.shuffled_order(stream))
    for _ in range(passes):
        improved = False
        for e in list(state.edges):
            if e in state.edges and attempt([e]):
                improved = True
        if delete_width == 2 and len(state.edges) >= 2:
            snapshot = list(state.edges)
            pairs = [
                (snapshot[a], snapshot[b])
                for a in range(len(snapshot))
                for b in range(a + 1, len(snapshot))
            ]
            stream.shuffle(pairs)
            for e1, e2 in pairs[:width2_samples]:
                if e1 in state.edges and e2 in state.edges and attempt([e1, e2]):
                    improved = True
        if not improved:
            break


def local_improve(family: Family, config: SearchConfig, stream: SplitMix64 | None = None) -> Family:
    """Delete-and-repair local improvement; never returns a smaller family.

    Uses a reserved sub-stream of the config seed unless one is supplied.
    """
    config.validate()
    if not verify(family).ok:
        raise ValueError("input family fails verification")
    if stream is None:
        stream = derive_stream(config.seed, 1 << 32)  # reserved improvement lane
    cands = _Candidates(config.q, config.mode, config.priority_vertex)
    state = _State(config.q, family)
    _improve(state, cands, stream, config.improve_passes, config.delete_width, config.width2_samples)
    return state.family()


def _one_restart(
    config: SearchConfig,
    cands: _Candidates,
    index: int,
    deadline: float | None,
) -> tuple[int, tuple[TwoEdge, ...]] | None:
    if deadline is not None and time.monotonic() >= deadline:
        return None
    stream = derive_stream(config.seed, index)
    state = _State(config.q, config.warm_start)
    _fill(state, cands, cands.shuffled_order(stream))
    _improve(
        state,
        cands,
        stream,
        config.improve_passes,
        config.delete_width,
        config.width2_samples,
    )
    return len(state.edges), tuple(state.edges)


def run_search(
    config: SearchConfig,
    threads: int = 1,
    progress: Progress | None = None,
) -> SearchResult:
    """Multi-restart greedy search with mandatory final verification.

    Ties between restarts break toward the earliest restart index, and the
    reduction is performed after all restarts finish, so the result does
    not depend on the thread count.
    """
    config.validate()
    if threads < 1:
        raise ValueError("threads must be at least 1")

    def empty_result() -> SearchResult:
        best = config.warm_start or Family.from_edges(config.q, [])
        return SearchResult(
            config=config,
            best=best,
            best_size=len(best),
            bound=config.q * (config.q + 1) + len(best),
            restart_sizes=(),
            best_restart=-1,
            verified=verify(best).ok,
        )

    if config.time_limit == 0 and config.warm_start is None:
        return SearchResult(
            config=config,
            best=Family.from_edges(config.q, []),
            best_size=0,
            bound=config.q * (config.q + 1),
            restart_sizes=(),
            best_restart=-1,
            verified=True,
        )

    deadline = None
    if config.time_limit is not None:
        deadline = time.monotonic() + config.time_limit

    cands = _Candidates(config.q, config.mode, config.priority_vertex)
    indices = range(config.restarts)
    if threads == 1 or config.restarts <= 1:
        outcomes = [_one_restart(config, cands, r, deadline) for r in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_one_restart, config, cands, r, deadline) for r in indices
            ]
            outcomes = [f.result() for f in futures]

    completed = [(r, out) for r, out in enumerate(outcomes) if out is not None]
    restart_sizes = tuple(out[0] for _, out in completed)
    if progress is not None:
        for r, (size, _) in completed:
            progress(f"restart {r}: size {size}")

    # rank candidates best-first, verify the winner, discard anything broken
    ranked = sorted(completed, key=lambda item: (-item[1][0], item[0]))
    for r, (size, edges) in ranked:
        family = Family.from_edges(config.q, edges)
        if verify(family).ok:
            return SearchResult(
                config=config,
                best=family,
                best_size=size,
                bound=config.q * (config.q + 1) + size,
                restart_sizes=restart_sizes,
                best_restart=r,
                verified=True,
            )
        if progress is not None:  # pragma: no cover - internal invariant
            progress(f"restart {r}: discarded unverifiable result")
    return empty_result()
