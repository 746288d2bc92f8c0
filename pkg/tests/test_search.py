import random
from itertools import permutations

import pytest

from zlq import (
    Family,
    SearchConfig,
    classify,
    greedy_fill,
    local_improve,
    run_search,
    solve_exact,
    verify,
)
from zlq.board import NONDEGENERATE, candidate_family
from zlq.fixtures import reference_family
from zlq.rng import SplitMix64, derive_stream, mix64


def test_derive_stream_reproducible():
    a = derive_stream(1234, 0)
    b = derive_stream(1234, 0)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]


def test_derive_stream_indices_differ():
    a = derive_stream(1234, 0)
    b = derive_stream(1234, 1)
    assert [a.next_u64() for _ in range(100)] != [b.next_u64() for _ in range(100)]
    # shuffles of a candidate-scale array differ between the two streams
    xs = list(range(1770))
    ys = list(xs)
    derive_stream(99, 0).shuffle(xs)
    derive_stream(99, 1).shuffle(ys)
    assert xs != ys


def test_mix64_is_stable():
    # fixed outputs pin the generator constants
    assert mix64(0) == 0
    assert mix64(1) == 6238072747940578789
    assert SplitMix64(0).next_u64() == mix64(0x9E3779B97F4A7C15)


def test_shuffle_is_uniform_chi_square():
    stream = derive_stream(42, 0)
    counts = {p: 0 for p in permutations(range(4))}
    draws = 100_000
    for _ in range(draws):
        xs = [0, 1, 2, 3]
        stream.shuffle(xs)
        counts[tuple(xs)] += 1
    expected = draws / 24
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # deterministic value ~31.5 for this seed; df=23, far below any alarm line
    assert chi2 < 60.0


def test_bounded_draws_reject_bad_input():
    with pytest.raises(ValueError):
        SplitMix64(0).below(0)


def test_greedy_fill_from_empty_always_inserts():
    empty = Family.from_edges(3, [])
    for seed in range(5):
        order = candidate_family(3, "full")
        derive_stream(seed, 0).shuffle(order)
        filled = greedy_fill(empty, order)
        assert len(filled) >= 1
        assert verify(filled).ok


def test_greedy_fill_cannot_extend_an_optimal_family():
    optimum = solve_exact(3).certificate
    filled = greedy_fill(optimum, candidate_family(3, "full"))
    assert len(filled) == len(optimum) == 2


def test_greedy_fill_rejects_bad_start():
    with pytest.raises(ValueError):
        greedy_fill(Family.from_edges(3, [((0, 1, 2), (2, 3, 0))]), [])


def test_greedy_fill_any_order_is_admissible():
    empty = Family.from_edges(3, [])
    order = candidate_family(3, "full")
    derive_stream(0, 0).shuffle(order)
    forward = greedy_fill(empty, order)
    backward = greedy_fill(empty, list(reversed(order)))
    assert verify(forward).ok and verify(backward).ok
    assert len(forward) >= 1 and len(backward) >= 1


def test_local_improve_recovers_the_q4_optimum_from_size_five():
    # drop one edge from an optimal q=4 family; refilling must find a sixth
    fam = reference_family(4)
    start = Family.from_edges(4, fam.edges[:-1])
    assert len(start) == 5
    hits = 0
    for seed in range(32):
        improved = local_improve(start, SearchConfig(q=4, seed=seed, improve_passes=2))
        if len(improved) >= 6:
            hits += 1
    assert hits >= 1


def test_local_improve_never_degrades():
    for q in (3, 4):
        fam = reference_family(q)
        improved = local_improve(fam, SearchConfig(q=q, improve_passes=2))
        assert len(improved) >= len(fam)
        assert verify(improved).ok


def test_local_improve_on_empty_equals_greedy_fill():
    config = SearchConfig(q=3, improve_passes=0)
    stream = derive_stream(config.seed, 7)
    improved = local_improve(Family.from_edges(3, []), config, stream=stream)
    # same stream, same candidate table: the repair pass is exactly a fill
    from zlq.search import _Candidates

    cands = _Candidates(3, "full", None)
    order_stream = derive_stream(config.seed, 7)
    order = [cands.edges[k] for k in cands.shuffled_order(order_stream)]
    assert improved == greedy_fill(Family.from_edges(3, []), order)


def test_run_search_q3_reaches_the_optimum():
    result = run_search(SearchConfig(q=3, restarts=8))
    assert result.best_size == 2
    assert result.bound == 14
    assert result.verified
    assert len(result.restart_sizes) == 8
    assert result.best_restart == result.restart_sizes.index(2)  # earliest tie wins


def test_run_search_is_bit_stable_and_thread_independent():
    config = SearchConfig(q=4, seed=99, restarts=6)
    first = run_search(config)
    second = run_search(config)
    threaded = run_search(config, threads=4)
    assert first == second == threaded
    assert first.summary_json() == threaded.summary_json()


def test_run_search_warm_start_never_degrades():
    fam = reference_family(5)
    result = run_search(SearchConfig(q=5, seed=3, restarts=2, warm_start=fam))
    assert result.best_size >= 13
    assert result.bound >= 43
    assert verify(result.best).ok


def test_run_search_nondeg_mode_output_is_nondegenerate():
    result = run_search(SearchConfig(q=4, mode="nondeg", seed=5, restarts=3))
    assert result.best_size >= 1
    assert all(classify(e) == NONDEGENERATE for e in result.best.edges)


def test_run_search_zero_time_limit_returns_empty():
    result = run_search(SearchConfig(q=3, restarts=8, time_limit=0))
    assert result.best_size == 0
    assert result.verified
    assert result.restart_sizes == ()


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(q=3, delete_width=3).validate()
    with pytest.raises(ValueError):
        SearchConfig(q=3, restarts=-1).validate()
    with pytest.raises(ValueError):
        SearchConfig(q=4, warm_start=reference_family(3)).validate()
    with pytest.raises(ValueError):
        SearchConfig(
            q=3, warm_start=Family.from_edges(3, [((0, 1, 2), (2, 3, 0))])
        ).validate()
    degenerate = Family.from_edges(4, [((0, 1, 2), (0, 1, 3))])
    assert verify(degenerate).ok
    with pytest.raises(ValueError):
        SearchConfig(q=4, mode="nondeg", warm_start=degenerate).validate()


def test_width_two_improvement_runs():
    result = run_search(
        SearchConfig(q=4, seed=11, restarts=2, delete_width=2, width2_samples=16)
    )
    assert verify(result.best).ok
    assert result.best_size >= 4
