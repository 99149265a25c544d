"""Preference vectors, fibers over them, local dictators, and dictator fibers.

A fiber collects the profiles sharing one a-vs-b preference vector. Plain
fibers fix the vector in every coordinate; refined fibers fix it outside one
coordinate i and additionally require a to sit directly above b in coordinate
i. Fibers are never materialized as profile lists; operations fold over
members generated from the key.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Iterator, Optional, Sequence

from .rankings import (
    Profile,
    Ranking,
    all_rankings,
    decode_profile,
    ranking_orders,
    ranking_positions,
    ranking_rank_of,
)
from .scf import DEFAULT_TABLE_CAP, SCF


def preference_vector(profile: Profile, a: int, b: int) -> tuple[int, ...]:
    """Per-voter comparison: +1 where a is ranked above b, else -1."""
    if a == b:
        raise ValueError("need two distinct alternatives")
    return tuple(1 if r.inv[a] < r.inv[b] else -1 for r in profile)


def deleted_preference_vector(profile: Profile, i: int, a: int, b: int) -> tuple[int, ...]:
    """The preference vector with coordinate i removed."""
    full = preference_vector(profile, a, b)
    return full[:i] + full[i + 1:]


def key_string(key: Sequence[int]) -> str:
    return "".join("+" if bit > 0 else "-" for bit in key)


@lru_cache(maxsize=None)
def ranks_preferring(k: int, a: int, b: int) -> tuple[int, ...]:
    """Ranking ranks placing a above b, ascending. Exactly k!/2 of them."""
    pos = ranking_positions(k)
    return tuple(r for r in range(factorial(k)) if pos[r][a] < pos[r][b])


@lru_cache(maxsize=None)
def ranks_adjacent_above(k: int, a: int, b: int) -> tuple[tuple[int, int], ...]:
    """(rank, swapped rank) for rankings with a directly above b."""
    pos = ranking_positions(k)
    orders = ranking_orders(k)
    rank_of = ranking_rank_of(k)
    out = []
    for r in range(factorial(k)):
        pa = pos[r][a]
        if pa + 1 < k and orders[r][pa + 1] == b:
            swapped = list(orders[r])
            swapped[pa], swapped[pa + 1] = swapped[pa + 1], swapped[pa]
            out.append((r, rank_of[tuple(swapped)]))
    return tuple(out)


class FiberVariant(Enum):
    PLAIN = "plain"
    REFINED = "refined"


@dataclass(frozen=True)
class FiberRecord:
    """Exact member/boundary counts of one fiber plus its size classification."""

    pair: tuple[int, int]
    key: tuple[int, ...]
    variant: FiberVariant
    coordinate: int
    member_count: int
    boundary_count: int
    gamma: Fraction
    large: bool

    @property
    def boundary_ratio(self) -> Fraction:
        return Fraction(self.boundary_count, self.member_count)

    def describe(self) -> dict:
        return {
            "pair": [self.pair[0] + 1, self.pair[1] + 1],
            "key": key_string(self.key),
            "variant": self.variant.value,
            "coordinate": self.coordinate + 1,
            "member_count": self.member_count,
            "boundary_count": self.boundary_count,
            "gamma": f"{self.gamma.numerator}/{self.gamma.denominator}",
            "classification": "large" if self.large else "small",
        }


def _coordinate_choices(n: int, k: int, pair: tuple[int, int], key: Sequence[int],
                        variant: FiberVariant, i: int):
    """Per-coordinate rank lists whose product enumerates the fiber."""
    a, b = pair
    plus = ranks_preferring(k, a, b)
    minus = ranks_preferring(k, b, a)
    if variant is FiberVariant.PLAIN:
        if len(key) != n:
            raise ValueError(f"plain fiber key needs {n} bits, got {len(key)}")
        return [plus if bit > 0 else minus for bit in key]
    if len(key) != n - 1:
        raise ValueError(f"refined fiber key needs {n - 1} bits, got {len(key)}")
    adjacent = tuple(r for r, _s in ranks_adjacent_above(k, a, b))
    choices = []
    kit = iter(key)
    for c in range(n):
        if c == i:
            choices.append(adjacent)
        else:
            bit = next(kit)
            choices.append(plus if bit > 0 else minus)
    return choices


def iter_fiber_members(f_n: int, f_k: int, pair: tuple[int, int], key: Sequence[int],
                       variant: FiberVariant, i: int) -> Iterator[Profile]:
    """Fiber members as profiles, generated on the fly in index order."""
    choices = _coordinate_choices(f_n, f_k, pair, key, variant, i)
    rankings = all_rankings(f_k)
    for digits in product(*choices):
        yield tuple(rankings[d] for d in digits)


def fiber_member_count(n: int, k: int, variant: FiberVariant) -> int:
    half = factorial(k) // 2
    if variant is FiberVariant.PLAIN:
        return half ** n
    return factorial(k - 1) * half ** (n - 1)


def boundary_fiber(f: SCF, i: int, pair: tuple[int, int], key: Sequence[int],
                   variant: FiberVariant, gamma: Fraction,
                   cap: int = DEFAULT_TABLE_CAP) -> FiberRecord:
    """Count fiber members sitting on the a-to-b boundary in coordinate i.

    Plain variant: a member is on the boundary when its outcome is a and some
    replacement of coordinate i yields b. Refined variant: the outcome is a
    and swapping the adjacent a-b block in coordinate i yields b.
    """
    if not 0 <= i < f.n:
        raise ValueError("coordinate out of range")
    a, b = pair
    table = f.table(cap)
    n, k = f.n, f.k
    fact = factorial(k)
    stride = fact ** (n - 1 - i)
    choices = _coordinate_choices(n, k, pair, tuple(key), variant, i)
    strides = tuple(fact ** (n - 1 - c) for c in range(n))

    members = 0
    on_boundary = 0
    if variant is FiberVariant.REFINED:
        swap_of = dict(ranks_adjacent_above(k, a, b))
        for digits in product(*choices):
            members += 1
            p = sum(d * s for d, s in zip(digits, strides))
            if table[p] != a:
                continue
            q = p + (swap_of[digits[i]] - digits[i]) * stride
            if table[q] == b:
                on_boundary += 1
    else:
        for digits in product(*choices):
            members += 1
            p = sum(d * s for d, s in zip(digits, strides))
            if table[p] != a:
                continue
            rho = digits[i]
            base = p - rho * stride
            for rho2 in range(fact):
                if rho2 != rho and table[base + rho2 * stride] == b:
                    on_boundary += 1
                    break

    expected = fiber_member_count(n, k, variant)
    assert members == expected, (members, expected)
    large = Fraction(on_boundary, members) >= 1 - gamma
    return FiberRecord(
        pair=(a, b), key=tuple(key), variant=variant, coordinate=i,
        member_count=members, boundary_count=on_boundary, gamma=gamma, large=large,
    )


def fiber_sweep(f: SCF, i: int, pair: tuple[int, int], variant: FiberVariant,
                gamma: Fraction, cap: int = DEFAULT_TABLE_CAP) -> list[FiberRecord]:
    """Classify every fiber key for one coordinate and pair."""
    bits = f.n if variant is FiberVariant.PLAIN else f.n - 1
    records = []
    for mask in range(1 << bits):
        key = tuple(1 if mask >> j & 1 else -1 for j in range(bits))
        records.append(boundary_fiber(f, i, pair, key, variant, gamma, cap))
    return records


def refined_topset_membership(f: SCF, i: int, a: int, b: int, profile: Profile,
                              gamma: Fraction, cap: int = DEFAULT_TABLE_CAP) -> bool:
    """Whether the profile's deleted-coordinate fiber mostly elects the a-b top.

    Over the fiber fixing all a-vs-b preferences except coordinate i (which
    runs over all k! rankings), the outcome must equal the higher-ranked of
    {a, b} in coordinate i with probability at least 1 - 2k*gamma.
    """
    if a == b:
        raise ValueError("need two distinct alternatives")
    key = deleted_preference_vector(profile, i, a, b)
    return refined_topset_membership_key(f, i, a, b, key, gamma, cap)


def refined_topset_membership_key(f: SCF, i: int, a: int, b: int,
                                  key: Sequence[int], gamma: Fraction,
                                  cap: int = DEFAULT_TABLE_CAP) -> bool:
    table = f.table(cap)
    n, k = f.n, f.k
    fact = factorial(k)
    plus = ranks_preferring(k, a, b)
    minus = ranks_preferring(k, b, a)
    if len(key) != n - 1:
        raise ValueError(f"deleted-coordinate key needs {n - 1} bits")
    choices = []
    kit = iter(key)
    for c in range(n):
        if c == i:
            choices.append(tuple(range(fact)))
        else:
            bit = next(kit)
            choices.append(plus if bit > 0 else minus)
    strides = tuple(fact ** (n - 1 - c) for c in range(n))
    pos = ranking_positions(k)
    members = 0
    agree = 0
    for digits in product(*choices):
        members += 1
        p = sum(d * s for d, s in zip(digits, strides))
        top = a if pos[digits[i]][a] < pos[digits[i]][b] else b
        if table[p] == top:
            agree += 1
    return Fraction(agree, members) >= 1 - 2 * k * gamma


# ---------------------------------------------------------------------------
# Local dictators.


def is_local_dictator(f: SCF, profile: Profile, i: int, H) -> bool:
    """H forms an adjacent block in coordinate i and every within-block
    rearrangement elects the block's top H-member."""
    subset = sorted(set(H))
    if not subset:
        raise ValueError("H must be nonempty")
    r = profile[i]
    positions = sorted(r.inv[x] for x in subset)
    lo, hi = positions[0], positions[-1]
    if hi - lo + 1 != len(subset):
        return False
    order = r.order
    head, tail = order[:lo], order[hi + 1:]
    for block in permutations(subset):
        candidate = Ranking(head + block + tail)
        outcome = f.evaluate(profile[:i] + (candidate,) + profile[i + 1:])
        if outcome != block[0]:
            return False
    return True


def local_dictator_sets(f: SCF, i: int, pair: tuple[int, int],
                        cap: int = DEFAULT_TABLE_CAP) -> set[Profile]:
    """Profiles that are local dictators on {a, b, c} in coordinate i for some
    third alternative c."""
    a, b = pair
    if a == b:
        raise ValueError("need two distinct alternatives")
    table = f.table(cap)
    n, k = f.n, f.k
    fact = factorial(k)
    stride = fact ** (n - 1 - i)
    rank_of = ranking_rank_of(k)
    orders = ranking_orders(k)
    pos = ranking_positions(k)

    # For each ranking rank and third alternative: the block check plus the
    # list of (replacement rank, required winner) to probe, precomputed once.
    probes: dict[tuple[int, int], Optional[list[tuple[int, int]]]] = {}
    for r in range(fact):
        for c in range(k):
            if c in (a, b):
                continue
            subset = sorted((a, b, c))
            ps = sorted(pos[r][x] for x in subset)
            if ps[-1] - ps[0] != 2:
                probes[(r, c)] = None
                continue
            lo = ps[0]
            head, tail = orders[r][:lo], orders[r][lo + 3:]
            probes[(r, c)] = [
                (rank_of[head + block + tail], block[0])
                for block in permutations(subset)
            ]

    found: set[Profile] = set()
    size = len(table)
    for p in range(size):
        rho = (p // stride) % fact
        base = p - rho * stride
        for c in range(k):
            if c in (a, b):
                continue
            plan = probes[(rho, c)]
            if plan is None:
                continue
            if all(table[base + dest * stride] == winner for dest, winner in plan):
                found.add(decode_profile(n, k, p))
                break
    return found


# ---------------------------------------------------------------------------
# Dictator fibers (rest-profiles whose induced one-voter SCF is a top_H rule).


def _induced_outcomes(table, n: int, k: int, i: int, rest_digits: tuple[int, ...]) -> tuple[int, ...]:
    fact = factorial(k)
    digits = rest_digits[:i] + (0,) + rest_digits[i:]
    strides = tuple(fact ** (n - 1 - c) for c in range(n))
    base = sum(d * s for d, s in zip(digits, strides))
    stride = strides[i]
    return tuple(table[base + r * stride] for r in range(fact))


@lru_cache(maxsize=None)
def _top_h_vector(k: int, H: frozenset) -> tuple[int, ...]:
    out = []
    for order in ranking_orders(k):
        out.append(next(x for x in order if x in H))
    return tuple(out)


def dictator_fiber_set(f: SCF, i: int, H, cap: int = DEFAULT_TABLE_CAP) -> set[tuple[Ranking, ...]]:
    """Rest-profiles for which freezing them makes coordinate i a top_H rule."""
    subset = frozenset(H)
    if not subset:
        raise ValueError("H must be nonempty")
    table = f.table(cap)
    n, k = f.n, f.k
    target = _top_h_vector(k, subset)
    rankings = all_rankings(k)
    fact = factorial(k)
    out = set()
    for rest_digits in product(range(fact), repeat=n - 1):
        if _induced_outcomes(table, n, k, i, rest_digits) == target:
            out.add(tuple(rankings[d] for d in rest_digits))
    return out


def dictator_pair_set(f: SCF, i: int, pair: tuple[int, int],
                      cap: int = DEFAULT_TABLE_CAP) -> set[tuple[Ranking, ...]]:
    """Union of dictator fibers over all H containing the pair with |H| >= 3.

    A rest-profile's induced outcomes determine the only possible H (its own
    image), so a single scan per rest-profile suffices.
    """
    a, b = pair
    table = f.table(cap)
    n, k = f.n, f.k
    rankings = all_rankings(k)
    fact = factorial(k)
    out = set()
    for rest_digits in product(range(fact), repeat=n - 1):
        outcomes = _induced_outcomes(table, n, k, i, rest_digits)
        image = frozenset(outcomes)
        if len(image) < 3 or a not in image or b not in image:
            continue
        if outcomes == _top_h_vector(k, image):
            out.add(tuple(rankings[d] for d in rest_digits))
    return out


def pairwise_preference_correlation(k: int, a: int, b: int, c: int) -> Fraction:
    """Exact E[x^{a,b} x^{a,c}] over a uniform ranking; 1/3 for distinct a,b,c."""
    if len({a, b, c}) != 3:
        raise ValueError("need three distinct alternatives")
    pos = ranking_positions(k)
    total = 0
    for r in range(factorial(k)):
        x1 = 1 if pos[r][a] < pos[r][b] else -1
        x2 = 1 if pos[r][a] < pos[r][c] else -1
        total += x1 * x2
    return Fraction(total, factorial(k))
