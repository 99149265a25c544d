"""Permutation primitives: rankings, adjacent transpositions, windows, dense indexing.

Alternatives are integers in [0, k) internally and are shown 1-based in all
human-facing output. A ranking lists alternatives from top (position 0) to
bottom. Rankings and profiles are indexed by their Lehmer (factorial-base)
rank, which coincides with lexicographic order of the order tuple, so index 0
is the identity ranking. Profile indices pack coordinate ranks mixed-radix
with voter 0 most significant.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial

Profile = tuple["Ranking", ...]

# Largest k for which full k! lookup tables may be materialized.
MAX_TABLE_K = 10


@dataclass(frozen=True)
class Ranking:
    """A total order of k alternatives; ``order[0]`` is the top choice."""

    order: tuple[int, ...]

    def __post_init__(self):
        k = len(self.order)
        if sorted(self.order) != list(range(k)):
            raise ValueError(f"order must be a permutation of 0..{k - 1}: {self.order!r}")

    @property
    def k(self) -> int:
        return len(self.order)

    @property
    def inv(self) -> tuple[int, ...]:
        """Positions indexed by alternative: ``inv[order[p]] == p``."""
        return _inverse(self.order)

    def position(self, alternative: int) -> int:
        return self.inv[alternative]

    def prefers(self, a: int, b: int) -> bool:
        """True iff a is ranked above b."""
        return self.inv[a] < self.inv[b]

    def top(self) -> int:
        return self.order[0]

    def one_based(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self.order)

    @staticmethod
    def identity(k: int) -> "Ranking":
        return Ranking(tuple(range(k)))


@lru_cache(maxsize=None)
def _inverse(order: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(order)
    for pos, alt in enumerate(order):
        inv[alt] = pos
    return tuple(inv)


@dataclass(frozen=True)
class AdjacentTransposition:
    """A swap of two alternatives, acting only when they sit next to each other."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("transposition needs two distinct alternatives")


def all_adjacent_transpositions(k: int) -> list[AdjacentTransposition]:
    """The k(k-1)/2 adjacent transpositions, ordered by (a, b) with a < b."""
    return [AdjacentTransposition(a, b) for a in range(k) for b in range(a + 1, k)]


def apply_adjacent_transposition(r: Ranking, t: AdjacentTransposition) -> Ranking:
    """Swap t.a and t.b if they occupy consecutive positions in r, else return r."""
    pa, pb = r.inv[t.a], r.inv[t.b]
    if abs(pa - pb) != 1:
        return r
    order = list(r.order)
    order[pa], order[pb] = order[pb], order[pa]
    return Ranking(tuple(order))


def top_restricted(r: Ranking, H) -> int:
    """The member of H ranked highest in r."""
    members = list(H)
    if not members:
        raise ValueError("H must be nonempty")
    inv = r.inv
    return min(members, key=inv.__getitem__)


def window_permutations(r: Ranking, start: int, width: int) -> list[Ranking]:
    """All rankings obtained by permuting ``width`` consecutive positions of r.

    ``width`` is clamped to k (widths beyond k behave as a full shuffle). The
    input ranking is included; the list is deterministic, input first.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    w = min(width, r.k)
    if start < 0 or start + w > r.k:
        raise ValueError(f"window [{start}, {start + w}) out of range for k={r.k}")
    head, window, tail = r.order[:start], r.order[start:start + w], r.order[start + w:]
    return [Ranking(head + perm + tail) for perm in permutations(window)]


# ---------------------------------------------------------------------------
# Dense indexing.


def encode_ranking(r: Ranking) -> int:
    """Lehmer rank of r among all k! rankings (lexicographic order)."""
    order = r.order
    k = len(order)
    index = 0
    for j in range(k):
        smaller_later = sum(1 for l in range(j + 1, k) if order[l] < order[j])
        index += smaller_later * factorial(k - 1 - j)
    return index


def decode_ranking(k: int, index: int) -> Ranking:
    """Inverse of :func:`encode_ranking`."""
    if not 0 <= index < factorial(k):
        raise ValueError(f"ranking index {index} out of range for k={k}")
    remaining = list(range(k))
    order = []
    for j in range(k, 0, -1):
        block = factorial(j - 1)
        digit, index = divmod(index, block)
        order.append(remaining.pop(digit))
    return Ranking(tuple(order))


def profile_space_size(n: int, k: int) -> int:
    return factorial(k) ** n


def encode_profile(profile: Profile) -> int:
    """Mixed-radix pack of per-coordinate ranks, voter 0 most significant."""
    fact = factorial(profile[0].k)
    index = 0
    for r in profile:
        index = index * fact + encode_ranking(r)
    return index


def decode_profile(n: int, k: int, index: int) -> Profile:
    """Inverse of :func:`encode_profile`."""
    if not 0 <= index < profile_space_size(n, k):
        raise ValueError(f"profile index {index} out of range for n={n}, k={k}")
    fact = factorial(k)
    digits = []
    for _ in range(n):
        index, d = divmod(index, fact)
        digits.append(d)
    return tuple(decode_ranking(k, d) for d in reversed(digits))


# ---------------------------------------------------------------------------
# Cached flat tables used by the enumeration engines. All are index-aligned
# with the Lehmer order above.


def _check_table_k(k: int) -> None:
    if k > MAX_TABLE_K:
        raise ValueError(f"k={k} too large for materialized ranking tables")


@lru_cache(maxsize=None)
def ranking_orders(k: int) -> tuple[tuple[int, ...], ...]:
    """All k! order tuples, position ``i`` holding the ranking with rank i."""
    _check_table_k(k)
    return tuple(permutations(range(k)))


@lru_cache(maxsize=None)
def ranking_positions(k: int) -> tuple[tuple[int, ...], ...]:
    """Per-rank inverse tables (alternative -> position)."""
    return tuple(_inverse(order) for order in ranking_orders(k))


@lru_cache(maxsize=None)
def ranking_rank_of(k: int) -> dict[tuple[int, ...], int]:
    return {order: i for i, order in enumerate(ranking_orders(k))}


@lru_cache(maxsize=None)
def all_rankings(k: int) -> tuple[Ranking, ...]:
    return tuple(Ranking(order) for order in ranking_orders(k))


@lru_cache(maxsize=None)
def window_destinations(k: int, width: int) -> tuple[tuple[int, ...], ...]:
    """Per-rank targets reachable by permuting one width-``width`` window.

    Entry ``r`` lists destination ranks (the rank itself excluded), ordered by
    (window start, permutation index), first occurrence kept on duplicates.
    """
    w = min(width, k)
    rank_of = ranking_rank_of(k)
    out = []
    for order in ranking_orders(k):
        seen = {rank_of[order]}
        dests = []
        for start in range(k - w + 1):
            head, window, tail = order[:start], order[start:start + w], order[start + w:]
            for perm in permutations(window):
                dest = rank_of[head + perm + tail]
                if dest not in seen:
                    seen.add(dest)
                    dests.append(dest)
        out.append(tuple(dests))
    return tuple(out)


@lru_cache(maxsize=None)
def window_destinations_new(k: int, width: int) -> tuple[tuple[int, ...], ...]:
    """Like :func:`window_destinations` but minus targets of width - 1 windows."""
    if min(width, k) <= 2:
        return window_destinations(k, width)
    prev = window_destinations(k, width - 1)
    cur = window_destinations(k, width)
    return tuple(
        tuple(d for d in cur_r if d not in set(prev_r))
        for cur_r, prev_r in zip(cur, prev)
    )


@lru_cache(maxsize=None)
def adjacent_swap_neighbors(k: int) -> tuple[tuple[tuple[int, int, int], ...], ...]:
    """Per-rank refined-graph moves as (destination rank, a, b) with a < b.

    One entry per adjacent position pair, so each ranking has k - 1 moves.
    """
    rank_of = ranking_rank_of(k)
    out = []
    for order in ranking_orders(k):
        moves = []
        for p in range(k - 1):
            swapped = list(order)
            swapped[p], swapped[p + 1] = swapped[p + 1], swapped[p]
            x, y = order[p], order[p + 1]
            a, b = (x, y) if x < y else (y, x)
            moves.append((rank_of[tuple(swapped)], a, b))
        out.append(tuple(moves))
    return tuple(out)


def profile_strides(n: int, k: int) -> tuple[int, ...]:
    """Index increment per unit change of each coordinate's rank."""
    fact = factorial(k)
    return tuple(fact ** (n - 1 - i) for i in range(n))
