"""Manipulation points: detection, exact census, random sampling, classification.

A profile is an r-manipulation point when some voter can strictly improve the
outcome (by their own true ranking) by permuting at most r adjacent
alternatives in their vote. Window width min(r, k) subsumes all smaller
windows, so the census scans, per profile, the incremental candidate sets of
growing widths and records the minimal manipulating width.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Optional

from . import engine
from .rankings import (
    Profile,
    Ranking,
    decode_profile,
    profile_space_size,
    ranking_orders,
    ranking_positions,
    ranking_rank_of,
    window_destinations_new,
    window_permutations,
)
from .scf import (
    DEFAULT_TABLE_CAP,
    SCF,
    MonotoneTwoValued,
    TopHDictator,
    is_monotone_pair_table,
)


@dataclass(frozen=True)
class ManipulationPair:
    """A profile, a misreport differing in one coordinate, and that coordinate."""

    profile: Profile
    altered: Profile
    coordinate: int

    def describe(self) -> dict:
        return {
            "coordinate": self.coordinate + 1,
            "profile": [r.one_based() for r in self.profile],
            "altered": [r.one_based() for r in self.altered],
        }


def is_manipulation_pair(f: SCF, pair: ManipulationPair) -> bool:
    """Validate: single differing coordinate, strict gain under the true ranking."""
    sigma, tau, i = pair.profile, pair.altered, pair.coordinate
    if len(sigma) != len(tau) or not 0 <= i < len(sigma):
        return False
    for c, (r, s) in enumerate(zip(sigma, tau)):
        if c != i and r.order != s.order:
            return False
    if sigma[i].order == tau[i].order:
        return False
    truth = sigma[i].inv
    return truth[f.evaluate(tau)] < truth[f.evaluate(sigma)]


def is_r_manipulation_point(f: SCF, profile: Profile, r: int) -> Optional[ManipulationPair]:
    """First manipulation witness using one width-min(r, k) window, or None.

    Search order is deterministic: coordinate, then window start, then
    permutation index within the window.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    k = f.k
    width = min(r, k)
    outcome = f.evaluate(profile)
    for i in range(f.n):
        truth = profile[i].inv
        current = truth[outcome]
        for start in range(k - width + 1):
            for candidate in window_permutations(profile[i], start, width):
                if candidate.order == profile[i].order:
                    continue
                altered = profile[:i] + (candidate,) + profile[i + 1:]
                if truth[f.evaluate(altered)] < current:
                    return ManipulationPair(profile, altered, i)
    return None


@dataclass(frozen=True)
class ManipulationCensus:
    """Exact r-manipulation counts over the whole profile space."""

    n: int
    k: int
    total_profiles: int
    counts: dict[int, int]

    def count(self, r: int) -> int:
        return self.counts[r]

    def fraction(self, r: int) -> Fraction:
        return Fraction(self.counts[r], self.total_profiles)

    def manipulable_count(self) -> int:
        """|M|: any window width up to k."""
        return self.counts[max(self.counts)]

    def manipulable_fraction(self) -> Fraction:
        return Fraction(self.manipulable_count(), self.total_profiles)

    def describe(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "total_profiles": self.total_profiles,
            "counts": {str(r): c for r, c in sorted(self.counts.items())},
            "fractions": {
                str(r): f"{c}/{self.total_profiles}" for r, c in sorted(self.counts.items())
            },
        }


def _census_chunk(table, n, k, widths, start, stop):
    """Count, per requested width, profiles in [start, stop) manipulable within it."""
    fact = factorial(k)
    strides = [fact ** (n - 1 - i) for i in range(n)]
    positions = ranking_positions(k)
    max_w = max(widths)
    fresh = {w: window_destinations_new(k, w) for w in range(2, max_w + 1)}
    counts = [0] * len(widths)

    digits = []
    rem = start
    for i in range(n):
        d, rem = divmod(rem, strides[i])
        digits.append(d)

    for p in range(start, stop):
        a = table[p]
        wmin = 0
        for w in range(2, max_w + 1):
            news = fresh[w]
            for i in range(n):
                rho = digits[i]
                pos = positions[rho]
                pa = pos[a]
                st = strides[i]
                base = p - rho * st
                for dest in news[rho]:
                    if pos[table[base + dest * st]] < pa:
                        wmin = w
                        break
                if wmin:
                    break
            if wmin:
                break
        if wmin:
            for j, w in enumerate(widths):
                if wmin <= w:
                    counts[j] += 1
        i = n - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] == fact:
                digits[i] = 0
                i -= 1
            else:
                break
    return counts


def census(f: SCF, r_values=None, cap: int = DEFAULT_TABLE_CAP,
           tasks: int = 1) -> ManipulationCensus:
    """Exact |M_r| for each requested r; r = k (or above) gives |M| itself."""
    if r_values is None:
        r_values = (2, 3, 4, f.k)
    rs = sorted(set(r_values))
    if rs and rs[0] < 2:
        raise ValueError("r values must be >= 2")
    widths = [min(r, f.k) for r in rs]
    table = f.table(cap)
    size = len(table)
    chunks = [
        (table, f.n, f.k, tuple(widths), lo, hi)
        for lo, hi in engine.split_ranges(size, tasks)
    ]
    partials = engine.map_chunks(_census_chunk, chunks, tasks)
    totals = [sum(part[j] for part in partials) for j in range(len(widths))]
    return ManipulationCensus(
        n=f.n, k=f.k, total_profiles=size,
        counts={r: totals[j] for j, r in enumerate(rs)},
    )


# ---------------------------------------------------------------------------
# Random manipulation sampling.


@dataclass(frozen=True)
class ManipulationSample:
    """One draw of the random-window manipulation experiment."""

    profile: Profile
    altered: Profile
    coordinate: int
    success: bool


def _draw(rng: random.Random, f: SCF, width: int, size: int, orders, positions):
    k = f.k
    fact = factorial(k)
    index = rng.randrange(size)
    digits = []
    rem = index
    for _ in range(f.n):
        rem, d = divmod(rem, fact)
        digits.append(d)
    digits.reverse()
    i = rng.randrange(f.n)
    start = rng.randrange(k - width + 1)
    order = orders[digits[i]]
    window = list(order[start:start + width])
    rng.shuffle(window)
    new_order = order[:start] + tuple(window) + order[start + width:]
    profile_orders = tuple(orders[d] for d in digits)
    altered_orders = profile_orders[:i] + (new_order,) + profile_orders[i + 1:]
    a = f.evaluate_orders(profile_orders)
    b = f.evaluate_orders(altered_orders)
    pos = positions[digits[i]]
    return profile_orders, altered_orders, i, pos[b] < pos[a]


def sample_manipulation(f: SCF, seed: int, width: int = 4) -> ManipulationSample:
    """One seeded draw: uniform profile, voter, window start, window shuffle."""
    if width < 2:
        raise ValueError("window width must be >= 2")
    if f.k < width:
        raise ValueError(f"need k >= {width} for a width-{width} window")
    rng = random.Random(seed)
    size = profile_space_size(f.n, f.k)
    orders = ranking_orders(f.k)
    positions = ranking_positions(f.k)
    p_orders, a_orders, i, success = _draw(rng, f, width, size, orders, positions)
    return ManipulationSample(
        profile=tuple(Ranking(o) for o in p_orders),
        altered=tuple(Ranking(o) for o in a_orders),
        coordinate=i,
        success=success,
    )


def _sample_chunk(f, width, seed, block_lo, block_hi, samples):
    orders = ranking_orders(f.k)
    positions = ranking_positions(f.k)
    size = profile_space_size(f.n, f.k)
    successes = 0
    for block in range(block_lo, block_hi):
        rng = random.Random(engine.derive_stream_seed(seed, block))
        lo = block * engine.SAMPLE_BLOCK
        hi = min(lo + engine.SAMPLE_BLOCK, samples)
        for _ in range(hi - lo):
            successes += _draw(rng, f, width, size, orders, positions)[3]
    return successes


@dataclass(frozen=True)
class SampleReport:
    samples: int
    successes: int
    seed: int
    width: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.successes, self.samples)

    def describe(self) -> dict:
        est = self.successes / self.samples
        stderr = (est * (1.0 - est) / self.samples) ** 0.5
        return {
            "samples": self.samples,
            "successes": self.successes,
            "seed": self.seed,
            "width": self.width,
            "estimate": est,
            "stderr": stderr,
            "ci3": [max(0.0, est - 3 * stderr), min(1.0, est + 3 * stderr)],
        }


def sample_success(f: SCF, samples: int, seed: int, width: int = 4,
                   tasks: int = 1) -> SampleReport:
    """Monte Carlo success counting over fixed RNG blocks.

    Draws are split into fixed blocks of :data:`engine.SAMPLE_BLOCK`, each with
    an independent stream seeded from (seed, block), so the result does not
    depend on the task count.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if f.k < width:
        raise ValueError(f"need k >= {width} for a width-{width} window")
    blocks = (samples + engine.SAMPLE_BLOCK - 1) // engine.SAMPLE_BLOCK
    chunk_ranges = engine.split_ranges(blocks, tasks)
    chunks = [(f, width, seed, lo, hi, samples) for lo, hi in chunk_ranges]
    successes = sum(engine.map_chunks(_sample_chunk, chunks, tasks))
    return SampleReport(samples=samples, successes=successes, seed=seed, width=width)


def _pair_probability_chunk(table, n, k, width, start, stop):
    fact = factorial(k)
    strides = [fact ** (n - 1 - i) for i in range(n)]
    positions = ranking_positions(k)
    orders = ranking_orders(k)
    rank_of = ranking_rank_of(k)
    starts = k - width + 1
    dests = []  # per rank: tuple over window starts of tuples of destination ranks
    for order in orders:
        per_start = []
        for s in range(starts):
            head, window, tail = order[:s], order[s:s + width], order[s + width:]
            per_start.append(tuple(rank_of[head + perm + tail] for perm in permutations(window)))
        dests.append(tuple(per_start))

    successes = 0
    digits = []
    rem = start
    for i in range(n):
        d, rem = divmod(rem, strides[i])
        digits.append(d)
    for p in range(start, stop):
        a = table[p]
        for i in range(n):
            rho = digits[i]
            pos = positions[rho]
            pa = pos[a]
            st = strides[i]
            base = p - rho * st
            for per_start in dests[rho]:
                for dest in per_start:
                    if pos[table[base + dest * st]] < pa:
                        successes += 1
        i = n - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] == fact:
                digits[i] = 0
                i -= 1
            else:
                break
    return successes


def exact_pair_probability(f: SCF, width: int = 4, cap: int = DEFAULT_TABLE_CAP,
                           tasks: int = 1) -> Fraction:
    """Exact success probability of the random-window manipulation draw.

    Full enumeration over (profile, coordinate, window start, window
    permutation); the denominator is (k!)^n * n * (k-width+1) * width!.
    """
    if f.k < width:
        raise ValueError(f"need k >= {width} for a width-{width} window")
    table = f.table(cap)
    size = len(table)
    chunks = [
        (table, f.n, f.k, width, lo, hi)
        for lo, hi in engine.split_ranges(size, tasks)
    ]
    successes = sum(engine.map_chunks(_pair_probability_chunk, chunks, tasks))
    denom = size * f.n * (f.k - width + 1) * factorial(width)
    return Fraction(successes, denom)


# ---------------------------------------------------------------------------
# Gibbard-Satterthwaite classification.


def nonmanip_membership(f: SCF, cap: int = DEFAULT_TABLE_CAP) -> Optional[SCF]:
    """An equal nonmanipulable witness (top_H dictator or monotone two-valued),
    or None when f lies outside the family."""
    table = f.table(cap)
    n, k = f.n, f.k
    fact = factorial(k)
    size = len(table)

    # Dictator branch: f must depend on one coordinate alone and agree with
    # the top_H rule for H = its own image.
    orders = ranking_orders(k)
    for i in range(n):
        stride = fact ** (n - 1 - i)
        by_rank = [None] * fact
        ok = True
        for p in range(size):
            rho = (p // stride) % fact
            if by_rank[rho] is None:
                by_rank[rho] = table[p]
            elif by_rank[rho] != table[p]:
                ok = False
                break
        if not ok:
            continue
        image = frozenset(by_rank)
        target = [next(x for x in order if x in image) for order in orders]
        if by_rank == target:
            return TopHDictator(n, k, i, image)

    # Monotone two-valued branch: constant on every preference fiber of its
    # two-element range, with a monotone fiber table.
    image = sorted(set(table))
    if len(image) == 2:
        a, b = image
        positions = ranking_positions(k)
        strides = [fact ** (n - 1 - c) for c in range(n)]
        fiber = [None] * (1 << n)
        for p in range(size):
            mask = 0
            rem = p
            for c in range(n):
                d, rem = divmod(rem, strides[c])
                if positions[d][a] < positions[d][b]:
                    mask |= 1 << c
            if fiber[mask] is None:
                fiber[mask] = table[p]
            elif fiber[mask] != table[p]:
                return None
        if is_monotone_pair_table(n, (a, b), fiber):
            return MonotoneTwoValued(n, k, (a, b), fiber)
    return None


@dataclass(frozen=True)
class GSClassification:
    manipulable: bool
    witness_pair: Optional[ManipulationPair]
    witness_member: Optional[SCF]

    def describe(self) -> dict:
        if self.manipulable:
            return {"verdict": "manipulable", "witness": self.witness_pair.describe()}
        return {"verdict": "nonmanipulable", "witness": self.witness_member.describe()}


def gs_classify(f: SCF, cap: int = DEFAULT_TABLE_CAP) -> GSClassification:
    """Either the first manipulation pair, or an exact nonmanipulable twin."""
    table = f.table(cap)
    n, k = f.n, f.k
    fact = factorial(k)
    positions = ranking_positions(k)
    scan = {w: window_destinations_new(k, w) for w in range(2, k + 1)}
    strides = [fact ** (n - 1 - i) for i in range(n)]
    for p in range(len(table)):
        a = table[p]
        hit = False
        for w in range(2, k + 1):
            news = scan[w]
            for i in range(n):
                rho = (p // strides[i]) % fact
                pos = positions[rho]
                pa = pos[a]
                st = strides[i]
                base = p - rho * st
                if any(pos[table[base + dest * st]] < pa for dest in news[rho]):
                    hit = True
                    break
            if hit:
                break
        if hit:
            profile = decode_profile(n, k, p)
            witness = is_r_manipulation_point(f, profile, k)
            assert witness is not None
            return GSClassification(True, witness, None)
    member = nonmanip_membership(f, cap)
    if member is None:
        raise AssertionError(
            "no manipulation point found yet no nonmanipulable twin exists; "
            "this contradicts the Gibbard-Satterthwaite dichotomy"
        )
    return GSClassification(False, None, member)
