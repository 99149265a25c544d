"""Rankings graphs, outcome boundaries, and product-graph isoperimetry.

Two graphs live on the profile space: the coarse graph joins profiles that
differ in exactly one coordinate, the refined graph additionally requires the
differing coordinate to move by a single adjacent transposition. Boundary
sets between outcomes are enumerated exactly, streaming in profile-index
order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterator, Optional

from . import engine
from .errors import CapExceededError
from .rankings import (
    AdjacentTransposition,
    Profile,
    adjacent_swap_neighbors,
    all_rankings,
    decode_profile,
    encode_profile,
    profile_space_size,
    ranking_rank_of,
)
from .scf import DEFAULT_TABLE_CAP, SCF


class GraphKind(Enum):
    COARSE = "coarse"
    REFINED = "refined"


def neighbors(profile: Profile, kind: GraphKind) -> list[Profile]:
    """All graph neighbors of a profile, coordinate-major order.

    Coarse degree is n(k!-1); refined degree is n(k-1) since transpositions of
    non-adjacent alternatives act as the identity and are not emitted.
    """
    n = len(profile)
    k = profile[0].k
    out = []
    if kind is GraphKind.COARSE:
        for i in range(n):
            for r in all_rankings(k):
                if r.order != profile[i].order:
                    out.append(profile[:i] + (r,) + profile[i + 1:])
    else:
        rankings = all_rankings(k)
        rank_of = ranking_rank_of(k)
        swaps = adjacent_swap_neighbors(k)
        for i in range(n):
            rho = rank_of[profile[i].order]
            for dest, _a, _b in swaps[rho]:
                out.append(profile[:i] + (rankings[dest],) + profile[i + 1:])
    return out


@dataclass(frozen=True)
class BoundarySpec:
    """Selects a boundary: outcome ``a`` flipping to ``b`` in coordinate ``i``.

    ``b=None`` selects any outcome change away from ``a``. ``z`` restricts the
    refined boundary to a single adjacent transposition and requires the
    refined kind.
    """

    i: int
    a: int
    b: Optional[int] = None
    z: Optional[AdjacentTransposition] = None
    kind: GraphKind = GraphKind.COARSE

    def __post_init__(self):
        if self.b is not None and self.a == self.b:
            raise ValueError("boundary needs two distinct outcomes")
        if self.z is not None and self.kind is not GraphKind.REFINED:
            raise ValueError("transposition-restricted boundaries are refined-graph only")

    def describe(self) -> dict:
        d = {
            "coordinate": self.i + 1,
            "from": self.a + 1,
            "to": None if self.b is None else self.b + 1,
            "kind": self.kind.value,
        }
        if self.z is not None:
            d["transposition"] = [self.z.a + 1, self.z.b + 1]
        return d


def _boundary_chunk_count(table, n, k, spec_i, spec_a, spec_b, z_pair, refined, start, stop):
    fact = factorial(k)
    stride = fact ** (n - 1 - spec_i)
    count = 0
    if refined:
        swaps = adjacent_swap_neighbors(k)
        for p in range(start, stop):
            if table[p] != spec_a:
                continue
            rho = (p // stride) % fact
            base = p - rho * stride
            for dest, a, b in swaps[rho]:
                if z_pair is not None and (a, b) != z_pair:
                    continue
                out = table[base + dest * stride]
                if (spec_b is None and out != spec_a) or out == spec_b:
                    count += 1
    else:
        for p in range(start, stop):
            if table[p] != spec_a:
                continue
            rho = (p // stride) % fact
            base = p - rho * stride
            for rho2 in range(fact):
                if rho2 == rho:
                    continue
                out = table[base + rho2 * stride]
                if (spec_b is None and out != spec_a) or out == spec_b:
                    count += 1
    return count


def iter_boundary_index_pairs(f: SCF, spec: BoundarySpec,
                              cap: int = DEFAULT_TABLE_CAP) -> Iterator[tuple[int, int]]:
    """Ordered boundary pairs as profile indices, streamed in index order."""
    if not 0 <= spec.i < f.n:
        raise ValueError("coordinate out of range")
    table = f.table(cap)
    n, k = f.n, f.k
    fact = factorial(k)
    stride = fact ** (n - 1 - spec.i)
    z_pair = None
    if spec.z is not None:
        z_pair = (min(spec.z.a, spec.z.b), max(spec.z.a, spec.z.b))
    refined = spec.kind is GraphKind.REFINED
    swaps = adjacent_swap_neighbors(k) if refined else None
    for p in range(len(table)):
        if table[p] != spec.a:
            continue
        rho = (p // stride) % fact
        base = p - rho * stride
        if refined:
            for dest, a, b in swaps[rho]:
                if z_pair is not None and (a, b) != z_pair:
                    continue
                q = base + dest * stride
                out = table[q]
                if (spec.b is None and out != spec.a) or out == spec.b:
                    yield (p, q)
        else:
            for rho2 in range(fact):
                if rho2 == rho:
                    continue
                q = base + rho2 * stride
                out = table[q]
                if (spec.b is None and out != spec.a) or out == spec.b:
                    yield (p, q)


def boundary(f: SCF, spec: BoundarySpec, cap: int = DEFAULT_TABLE_CAP) -> list[tuple[Profile, Profile]]:
    """Materialized boundary pair set (use the iterator for large instances)."""
    n, k = f.n, f.k
    return [
        (decode_profile(n, k, p), decode_profile(n, k, q))
        for p, q in iter_boundary_index_pairs(f, spec, cap)
    ]


def boundary_count(f: SCF, spec: BoundarySpec, cap: int = DEFAULT_TABLE_CAP,
                   tasks: int = 1) -> int:
    if not 0 <= spec.i < f.n:
        raise ValueError("coordinate out of range")
    table = f.table(cap)
    z_pair = None
    if spec.z is not None:
        z_pair = (min(spec.z.a, spec.z.b), max(spec.z.a, spec.z.b))
    refined = spec.kind is GraphKind.REFINED
    chunks = [
        (table, f.n, f.k, spec.i, spec.a, spec.b, z_pair, refined, start, stop)
        for start, stop in engine.split_ranges(len(table), tasks)
    ]
    return sum(engine.map_chunks(_boundary_chunk_count, chunks, tasks))


def boundary_fraction(f: SCF, spec: BoundarySpec, cap: int = DEFAULT_TABLE_CAP,
                      tasks: int = 1) -> Fraction:
    """Boundary mass normalized as the matching influence value."""
    count = boundary_count(f, spec, cap, tasks)
    size = profile_space_size(f.n, f.k)
    if spec.kind is GraphKind.REFINED:
        return Fraction(count, 2 * size)
    return Fraction(count, size * factorial(f.k))


def boundary_report(f: SCF, spec: BoundarySpec, cap: int = DEFAULT_TABLE_CAP,
                    tasks: int = 1, sample_limit: int = 10) -> dict:
    """JSON-ready boundary summary: spec, exact count, fraction, sample pairs."""
    count = boundary_count(f, spec, cap, tasks)
    fraction = boundary_fraction(f, spec, cap)
    samples = []
    for p, q in iter_boundary_index_pairs(f, spec, cap):
        samples.append([
            [list(r.one_based()) for r in decode_profile(f.n, f.k, p)],
            [list(r.one_based()) for r in decode_profile(f.n, f.k, q)],
        ])
        if len(samples) >= sample_limit:
            break
    return {
        "spec": spec.describe(),
        "count": count,
        "fraction": f"{fraction.numerator}/{fraction.denominator}",
        "sample_pairs": samples,
    }


def is_on_boundary(f: SCF, profile: Profile, spec: BoundarySpec,
                   cap: int = DEFAULT_TABLE_CAP) -> bool:
    """Whether the profile has at least one boundary partner under the spec."""
    p = encode_profile(profile)
    table = f.table(cap)
    if table[p] != spec.a:
        return False
    n, k = f.n, f.k
    fact = factorial(k)
    stride = fact ** (n - 1 - spec.i)
    rho = (p // stride) % fact
    base = p - rho * stride
    if spec.kind is GraphKind.REFINED:
        z_pair = None
        if spec.z is not None:
            z_pair = (min(spec.z.a, spec.z.b), max(spec.z.a, spec.z.b))
        for dest, a, b in adjacent_swap_neighbors(k)[rho]:
            if z_pair is not None and (a, b) != z_pair:
                continue
            out = table[base + dest * stride]
            if (spec.b is None and out != spec.a) or out == spec.b:
                return True
        return False
    for rho2 in range(fact):
        if rho2 == rho:
            continue
        out = table[base + rho2 * stride]
        if (spec.b is None and out != spec.a) or out == spec.b:
            return True
    return False


# ---------------------------------------------------------------------------
# Generic edge/vertex boundaries on products of complete graphs.


def product_vertices(sizes: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    return product(*(range(s) for s in sizes))


def product_neighbors(v: tuple[int, ...], sizes: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for c, size in enumerate(sizes):
        for value in range(size):
            if value != v[c]:
                yield v[:c] + (value,) + v[c + 1:]


def edge_boundary(A, sizes: tuple[int, ...]) -> int:
    """Number of edges with exactly one endpoint in A."""
    A = set(A)
    count = 0
    for u in A:
        for v in product_neighbors(u, sizes):
            if v not in A:
                count += 1
    return count


def vertex_boundary(A, sizes: tuple[int, ...]) -> set:
    """Members of A with at least one neighbor outside A."""
    A = set(A)
    return {
        u for u in A
        if any(v not in A for v in product_neighbors(u, sizes))
    }


@dataclass
class LindseyReport:
    """Outcome of an edge-isoperimetry sweep on K_k^n."""

    k: int
    n: int
    mode: str
    size_limit: int
    sets_checked: int
    violations: int
    min_slack: Optional[int]
    min_slack_set: Optional[tuple] = None
    holds: bool = field(init=False)

    def __post_init__(self):
        self.holds = self.violations == 0

    def describe(self) -> dict:
        return {
            "graph": f"K_{self.k}^{self.n}",
            "mode": self.mode,
            "size_limit": self.size_limit,
            "sets_checked": self.sets_checked,
            "violations": self.violations,
            "holds": self.holds,
            "min_slack": self.min_slack,
            "min_slack_set": (
                None if self.min_slack_set is None
                else [list(v) for v in self.min_slack_set]
            ),
        }


def verify_lindsey(k_complete: int, n_copies: int, exhaustive: bool = True,
                   max_exhaustive_vertices: int = 16) -> LindseyReport:
    """Check |edge boundary of A| >= |A| for small subsets of K_k^n.

    The inequality is required for |A| <= (1 - 1/k) k^n. Exhaustive mode runs
    every subset (feasible only for tiny graphs); otherwise only lexicographic
    initial segments, which are extremal for this problem, are checked.
    """
    sizes = (k_complete,) * n_copies
    m = k_complete ** n_copies
    limit = m - k_complete ** (n_copies - 1)
    vertices = list(product_vertices(sizes))
    neighbor_masks = []
    index_of = {v: i for i, v in enumerate(vertices)}
    for v in vertices:
        mask = 0
        for w in product_neighbors(v, sizes):
            mask |= 1 << index_of[w]
        neighbor_masks.append(mask)

    checked = 0
    violations = 0
    min_slack = None
    min_set = None

    def consider(mask: int) -> None:
        nonlocal checked, violations, min_slack, min_set
        size = bin(mask).count("1")
        if size == 0 or size > limit:
            return
        checked += 1
        outside = ~mask
        edges = 0
        rest = mask
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            edges += bin(neighbor_masks[v] & outside).count("1")
            rest ^= low
        slack = edges - size
        if slack < 0:
            violations += 1
        if min_slack is None or slack < min_slack:
            min_slack = slack
            min_set = tuple(vertices[i] for i in range(m) if mask >> i & 1)

    if exhaustive:
        if m > max_exhaustive_vertices:
            raise CapExceededError(
                f"{m} vertices too many for exhaustive subsets; use exhaustive=False"
            )
        for mask in range(1 << m):
            consider(mask)
        mode = "exhaustive"
    else:
        mask = 0
        for i in range(limit):
            mask |= 1 << i
            consider(mask)
        mode = "lexicographic"

    return LindseyReport(
        k=k_complete, n=n_copies, mode=mode, size_limit=limit,
        sets_checked=checked, violations=violations,
        min_slack=min_slack, min_slack_set=min_set,
    )
