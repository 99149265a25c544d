from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, strategies as st

from votemanip.rankings import (
    AdjacentTransposition,
    Ranking,
    all_adjacent_transpositions,
    apply_adjacent_transposition,
    decode_profile,
    decode_ranking,
    encode_profile,
    encode_ranking,
    top_restricted,
    window_destinations,
    window_permutations,
)


def rankings_st(k_min=2, k_max=6):
    return st.integers(k_min, k_max).flatmap(
        lambda k: st.permutations(list(range(k))).map(lambda o: Ranking(tuple(o)))
    )


def test_adjacent_swap_forced():
    r = Ranking((0, 1, 2))
    assert apply_adjacent_transposition(r, AdjacentTransposition(0, 1)).order == (1, 0, 2)


def test_non_adjacent_is_identity():
    r = Ranking((0, 2, 1))
    assert apply_adjacent_transposition(r, AdjacentTransposition(0, 1)) is r


@given(rankings_st())
def test_transposition_involution_and_support(r):
    for t in all_adjacent_transpositions(r.k):
        once = apply_adjacent_transposition(r, t)
        assert apply_adjacent_transposition(once, t).order == r.order
        moved = {p for p in range(r.k) if once.order[p] != r.order[p]}
        assert moved in (set(), {r.inv[t.a], r.inv[t.b]})


def test_transposition_count():
    assert len(all_adjacent_transpositions(5)) == 5 * 4 // 2


def test_top_restricted_examples():
    r = Ranking((1, 2, 0))  # 1-based order (2, 3, 1)
    assert top_restricted(r, {0, 2}) == 2
    assert top_restricted(r, {1}) == 1
    assert top_restricted(r, range(3)) == r.order[0]
    with pytest.raises(ValueError):
        top_restricted(r, set())


def test_window_singleton_and_full():
    r = Ranking((2, 0, 3, 1))
    assert window_permutations(r, 1, 1) == [r]
    full = window_permutations(r, 0, 4)
    assert len(full) == 24
    assert len({w.order for w in full}) == 24
    assert full[0] == r
    # width is clamped beyond k
    assert len(window_permutations(r, 0, 99)) == 24


def test_window_interior():
    r = Ranking((4, 1, 0, 3, 2))
    out = window_permutations(r, 1, 3)
    assert len(out) == 6
    for w in out:
        assert w.order[0] == 4 and w.order[4] == 2
        assert set(w.order[1:4]) == {1, 0, 3}


def test_window_closure():
    r = Ranking((0, 1, 2, 3))
    first = set(w.order for w in window_permutations(r, 1, 2))
    again = {
        v.order
        for w in window_permutations(r, 1, 2)
        for v in window_permutations(w, 1, 2)
    }
    assert again == first


def test_window_start_out_of_range():
    with pytest.raises(ValueError):
        window_permutations(Ranking((0, 1, 2)), 2, 2)


def test_identity_is_index_zero():
    for k in range(1, 6):
        assert encode_ranking(Ranking.identity(k)) == 0
        assert decode_ranking(k, 0).order == tuple(range(k))


def test_round_trip_exhaustive():
    for k in range(1, 7):
        seen = set()
        for index in range(factorial(k)):
            r = decode_ranking(k, index)
            assert encode_ranking(r) == index
            seen.add(r.order)
        assert len(seen) == factorial(k)


def test_bijection_k3():
    indices = {encode_ranking(Ranking(p)) for p in permutations(range(3))}
    assert indices == set(range(6))


def test_profile_index_mixed_radix():
    r1, r2 = decode_ranking(3, 4), decode_ranking(3, 1)
    assert encode_profile((r1, r2)) == 6 * 4 + 1
    assert decode_profile(2, 3, 25) == (decode_ranking(3, 4), decode_ranking(3, 1))
    with pytest.raises(ValueError):
        decode_profile(2, 3, 36)
    with pytest.raises(ValueError):
        decode_ranking(3, 6)
    with pytest.raises(ValueError):
        decode_ranking(3, -1)


@given(st.integers(0, factorial(4) ** 2 - 1))
def test_profile_round_trip(index):
    assert encode_profile(decode_profile(2, 4, index)) == index


def test_window_destinations_cover_window_permutations():
    k = 4
    for rank in range(factorial(k)):
        r = decode_ranking(k, rank)
        expected = {
            encode_ranking(w)
            for s in range(k - 2)
            for w in window_permutations(r, s, 3)
        } - {rank}
        assert set(window_destinations(k, 3)[rank]) == expected


def test_ranking_validation():
    with pytest.raises(ValueError):
        Ranking((0, 0, 2))
