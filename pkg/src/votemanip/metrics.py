"""Exact distances, influences, and monotone Boolean repair.

Every quantity here is an exact rational over arbitrary-precision integers.
The bounds this library verifies reach scales like 10^-39, far below float
resolution, so no floating point is allowed anywhere in this module.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from .errors import CapExceededError
from .graphs import BoundarySpec, GraphKind, boundary_count
from .rankings import AdjacentTransposition, ranking_orders, ranking_positions
from .scf import (
    DEFAULT_TABLE_CAP,
    SCF,
    MonotoneTwoValued,
    OneCoordinate,
    TableSCF,
    TopHDictator,
)

MAX_HYPERCUBE_BITS = 20


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


def distance(f: SCF, g: SCF, cap: int = DEFAULT_TABLE_CAP) -> Fraction:
    """Fraction of profiles on which the two SCFs disagree."""
    if (f.n, f.k) != (g.n, g.k):
        raise ValueError(f"mismatched shapes ({f.n},{f.k}) vs ({g.n},{g.k})")
    ft, gt = f.table(cap), g.table(cap)
    disagreements = sum(1 for x, y in zip(ft, gt) if x != y)
    return Fraction(disagreements, len(ft))


# ---------------------------------------------------------------------------
# Influences.


def _rest_histograms(table, n: int, k: int, i: int) -> list[list[int]]:
    """Outcome histograms grouped by all coordinates except i."""
    fact = factorial(k)
    stride = fact ** (n - 1 - i)
    hist = [[0] * k for _ in range(len(table) // fact)]
    block = stride * fact
    for p, a in enumerate(table):
        hi, rem = divmod(p, block)
        hist[hi * stride + rem % stride][a] += 1
    return hist


def influence_total(f: SCF, i: int, cap: int = DEFAULT_TABLE_CAP) -> Fraction:
    """Probability that rerandomizing coordinate i changes the outcome."""
    fact = factorial(f.k)
    hist = _rest_histograms(f.table(cap), f.n, f.k, i)
    num = sum(fact * fact - sum(h * h for h in row) for row in hist)
    return Fraction(num, len(f.table(cap)) * fact)


def influence_target(f: SCF, i: int, a: int, cap: int = DEFAULT_TABLE_CAP) -> Fraction:
    """Probability the outcome is a and leaves a when coordinate i rerandomizes."""
    fact = factorial(f.k)
    hist = _rest_histograms(f.table(cap), f.n, f.k, i)
    num = sum(row[a] * (fact - row[a]) for row in hist)
    return Fraction(num, len(f.table(cap)) * fact)


def influence_pair(f: SCF, i: int, a: int, b: int, cap: int = DEFAULT_TABLE_CAP) -> Fraction:
    """Probability the outcome moves from a to b under rerandomizing coordinate i."""
    if a == b:
        raise ValueError("need two distinct alternatives")
    fact = factorial(f.k)
    hist = _rest_histograms(f.table(cap), f.n, f.k, i)
    num = sum(row[a] * row[b] for row in hist)
    return Fraction(num, len(f.table(cap)) * fact)


def influence_refined(f: SCF, i: int, a: int, b: int, z: AdjacentTransposition,
                      cap: int = DEFAULT_TABLE_CAP) -> Fraction:
    """Half the mass of profiles where applying z in coordinate i moves a to b."""
    spec = BoundarySpec(i=i, a=a, b=b, z=z, kind=GraphKind.REFINED)
    return Fraction(boundary_count(f, spec, cap), 2 * len(f.table(cap)))


def influence_refined_total(f: SCF, i: int, a: int, b: int,
                            cap: int = DEFAULT_TABLE_CAP) -> Fraction:
    """Sum of the refined influence over all adjacent transpositions."""
    spec = BoundarySpec(i=i, a=a, b=b, kind=GraphKind.REFINED)
    return Fraction(boundary_count(f, spec, cap), 2 * len(f.table(cap)))


def influence(f: SCF, i: int, selector: str = "total", a: Optional[int] = None,
              b: Optional[int] = None, z: Optional[AdjacentTransposition] = None,
              cap: int = DEFAULT_TABLE_CAP) -> Fraction:
    """Dispatch over the influence flavours by selector name."""
    if selector == "total":
        return influence_total(f, i, cap)
    if selector == "target":
        return influence_target(f, i, a, cap)
    if selector == "pair":
        return influence_pair(f, i, a, b, cap)
    if selector == "pair-transposition":
        return influence_refined(f, i, a, b, z, cap)
    if selector == "pair-all-transpositions":
        return influence_refined_total(f, i, a, b, cap)
    raise ValueError(f"unknown influence selector {selector!r}")


# ---------------------------------------------------------------------------
# Distances to the nonmanipulable families.


@dataclass(frozen=True)
class DistanceReport:
    """Distance to a family plus the family member attaining it."""

    family: str
    value: Fraction
    witness: SCF

    def describe(self) -> dict:
        return {
            "family": self.family,
            "value": frac_str(self.value),
            "witness": self.witness.describe(),
        }


def _coordinate_histograms(table, n: int, k: int, i: int) -> list[list[int]]:
    """Outcome histograms grouped by the rank of coordinate i."""
    fact = factorial(k)
    stride = fact ** (n - 1 - i)
    hist = [[0] * k for _ in range(fact)]
    for p, a in enumerate(table):
        hist[(p // stride) % fact][a] += 1
    return hist


def distance_to_nonmanip_bar(f: SCF, cap: int = DEFAULT_TABLE_CAP) -> DistanceReport:
    """Distance to functions of one coordinate or of at most two values.

    One-coordinate branch: per coordinate, the modal completion (ties to the
    lowest id). Two-valued branch: keep the two heaviest outcomes, map the
    rest onto the lower of the pair. The minimum over all candidates is exact.
    """
    table = f.table(cap)
    n, k = f.n, f.k
    size = len(table)
    best_value: Optional[Fraction] = None
    best_witness: Optional[SCF] = None

    for i in range(n):
        hist = _coordinate_histograms(table, n, k, i)
        completion = []
        agree = 0
        for row in hist:
            winner = max(range(k), key=lambda x: (row[x], -x))
            completion.append(winner)
            agree += row[winner]
        value = Fraction(size - agree, size)
        if best_value is None or value < best_value:
            best_value = value
            best_witness = OneCoordinate(n, k, i, completion)

    mass = [0] * k
    for a in table:
        mass[a] += 1
    ranked = sorted(range(k), key=lambda x: (-mass[x], x))
    keep = ranked[:2] if k >= 2 else ranked[:1]
    fallback = min(keep)
    value = Fraction(size - sum(mass[a] for a in keep), size)
    if value < best_value:
        best_value = value
        best_witness = TableSCF(n, k, [a if a in keep else fallback for a in table])

    return DistanceReport("nonmanip-bar", best_value, best_witness)


def _top_h_by_rank(k: int, members: tuple[int, ...]) -> list[int]:
    subset = set(members)
    return [next(x for x in order if x in subset) for order in ranking_orders(k)]


def distance_to_nonmanip(f: SCF, cap: int = DEFAULT_TABLE_CAP) -> DistanceReport:
    """Distance to the nonmanipulable family.

    Minimizes over every top_H dictator (direct counting) and, per alternative
    pair, the cost-optimal monotone two-valued function found by an exact
    minimum cut over the preference hypercube.
    """
    table = f.table(cap)
    n, k = f.n, f.k
    size = len(table)
    fact = factorial(k)
    best_value: Optional[Fraction] = None
    best_witness: Optional[SCF] = None

    for i in range(n):
        hist = _coordinate_histograms(table, n, k, i)
        for mask in range(1, 1 << k):
            members = tuple(x for x in range(k) if mask >> x & 1)
            tops = _top_h_by_rank(k, members)
            agree = sum(hist[rho][tops[rho]] for rho in range(fact))
            value = Fraction(size - agree, size)
            if best_value is None or value < best_value:
                best_value = value
                best_witness = TopHDictator(n, k, i, members)

    positions = ranking_positions(k)
    strides = [fact ** (n - 1 - c) for c in range(n)]
    for a in range(k):
        for b in range(a + 1, k):
            cost_a = [0] * (1 << n)
            cost_b = [0] * (1 << n)
            for p, out in enumerate(table):
                mask = 0
                rem = p
                for c in range(n):
                    d, rem = divmod(rem, strides[c])
                    if positions[d][a] < positions[d][b]:
                        mask |= 1 << c
                if out != a:
                    cost_a[mask] += 1
                if out != b:
                    cost_b[mask] += 1
            labels, cost = nearest_monotone_boolean(cost_a, cost_b)
            value = Fraction(cost, size)
            if value < best_value:
                best_value = value
                best_witness = MonotoneTwoValued(
                    n, k, (a, b), [a if lab else b for lab in labels]
                )

    return DistanceReport("nonmanip", best_value, best_witness)


# ---------------------------------------------------------------------------
# Monotone Boolean machinery.


def monotone_violation_fraction(table: Sequence[int]) -> Fraction:
    """Fraction of one-coordinate cube edges decreasing in the up direction."""
    m = len(table)
    n = m.bit_length() - 1
    if m != 1 << n or n < 1:
        raise ValueError("table length must be 2^n with n >= 1")
    violations = 0
    for mask in range(m):
        for i in range(n):
            bit = 1 << i
            if not mask & bit and table[mask] > table[mask | bit]:
                violations += 1
    return Fraction(violations, n * (1 << (n - 1)))


class _Dinic:
    """Deterministic max-flow on small graphs; capacities are Python ints."""

    def __init__(self, nodes: int):
        self.adj: list[list[list[int]]] = [[] for _ in range(nodes)]

    def add_edge(self, u: int, v: int, cap: int) -> None:
        self.adj[u].append([v, cap, len(self.adj[v])])
        self.adj[v].append([u, 0, len(self.adj[u]) - 1])

    def _levels(self, s: int, t: int) -> Optional[list[int]]:
        level = [-1] * len(self.adj)
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, cap, _rev in self.adj[u]:
                if cap > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _push(self, u: int, t: int, limit: int, level, it) -> int:
        if u == t:
            return limit
        while it[u] < len(self.adj[u]):
            edge = self.adj[u][it[u]]
            v, cap, rev = edge
            if cap > 0 and level[v] == level[u] + 1:
                pushed = self._push(v, t, min(limit, cap), level, it)
                if pushed:
                    edge[1] -= pushed
                    self.adj[v][rev][1] += pushed
                    return pushed
            it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            it = [0] * len(self.adj)
            while True:
                pushed = self._push(s, t, 1 << 300, level, it)
                if not pushed:
                    break
                flow += pushed

    def residual_reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, cap, _rev in self.adj[u]:
                if cap > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen


def nearest_monotone_boolean(cost_a: Sequence[int], cost_b: Sequence[int]):
    """Cheapest monotone labeling of the hypercube given per-vertex costs.

    ``cost_a[z]`` (resp. ``cost_b[z]``) is the price of labeling vertex z with
    the upper (resp. lower) value; the returned labeling is monotone upward
    (label a is closed under setting bits). Solved exactly as a minimum cut:
    source->z carries cost_b, z->sink carries cost_a, and each covering edge
    z->z|bit is uncuttable. Returns (labels, total cost) with ``labels[z]``
    true for the upper value.
    """
    m = len(cost_a)
    n = m.bit_length() - 1
    if m != 1 << n or len(cost_b) != m:
        raise ValueError("cost tables must both have length 2^n")
    if n > MAX_HYPERCUBE_BITS:
        raise CapExceededError(f"hypercube with 2^{n} vertices exceeds the cap")
    if any(c < 0 for c in cost_a) or any(c < 0 for c in cost_b):
        raise ValueError("costs must be nonnegative")
    source, sink = m, m + 1
    infinite = sum(cost_a) + sum(cost_b) + 1
    net = _Dinic(m + 2)
    for z in range(m):
        net.add_edge(source, z, cost_b[z])
        net.add_edge(z, sink, cost_a[z])
        for i in range(n):
            bit = 1 << i
            if not z & bit:
                net.add_edge(z, z | bit, infinite)
    flow = net.max_flow(source, sink)
    reach = net.residual_reachable(source)
    labels = tuple(z in reach for z in range(m))
    total = sum(cost_a[z] if labels[z] else cost_b[z] for z in range(m))
    assert total == flow, "min cut does not match its labeling cost"
    return labels, total
