"""Social choice functions: table-backed and rule-backed, and their basic predicates.

Every SCF maps a profile of ``n`` rankings over ``k`` alternatives to a single
winning alternative, deterministically. Rule backends break score ties toward
the lowest alternative id, which keeps plurality and Borda anonymous but
deliberately non-neutral, mirroring how common voting rules behave.
"""
from __future__ import annotations

import json
import random
from itertools import product
from math import factorial

from .errors import CapExceededError
from .rankings import (
    Profile,
    Ranking,
    profile_space_size,
    ranking_orders,
    ranking_positions,
    ranking_rank_of,
)

DEFAULT_TABLE_CAP = 10 ** 7

SCF_TABLE_ENCODING = "lehmer-mixed-radix"


class SCF:
    """Base class: a pure total map from profiles to alternatives."""

    n: int
    k: int

    def __init__(self, n: int, k: int):
        if n < 1:
            raise ValueError("need at least one voter")
        if k < 1:
            raise ValueError("need at least one alternative")
        self.n = n
        self.k = k
        self._table_cache: list[int] | None = None

    def evaluate_orders(self, orders: tuple[tuple[int, ...], ...]) -> int:
        raise NotImplementedError

    def evaluate(self, profile: Profile) -> int:
        if len(profile) != self.n:
            raise ValueError(f"profile has {len(profile)} coordinates, expected {self.n}")
        for r in profile:
            if r.k != self.k:
                raise ValueError(f"ranking over {r.k} alternatives, expected {self.k}")
        return self.evaluate_orders(tuple(r.order for r in profile))

    def table(self, cap: int = DEFAULT_TABLE_CAP) -> list[int]:
        """Flat outcome list indexed by profile index. Computed once, cached."""
        if self._table_cache is None:
            size = profile_space_size(self.n, self.k)
            if size > cap:
                raise CapExceededError(
                    f"(k!)^n = {size} exceeds table cap {cap} for n={self.n}, k={self.k}"
                )
            evaluate = self.evaluate_orders
            self._table_cache = [
                evaluate(orders)
                for orders in product(ranking_orders(self.k), repeat=self.n)
            ]
        return self._table_cache

    def range(self, cap: int = DEFAULT_TABLE_CAP) -> frozenset[int]:
        """Exact image over all profiles."""
        return frozenset(self.table(cap))

    def describe(self) -> dict:
        """JSON-friendly description (alternatives and voters 1-based)."""
        return {"rule": type(self).__name__.lower(), "n": self.n, "k": self.k}


class TableSCF(SCF):
    """SCF given by an explicit outcome per profile index."""

    def __init__(self, n: int, k: int, outcomes):
        super().__init__(n, k)
        outcomes = list(outcomes)
        size = profile_space_size(n, k)
        if len(outcomes) != size:
            raise ValueError(f"table has {len(outcomes)} entries, expected {size}")
        bad = [x for x in outcomes if not 0 <= x < k]
        if bad:
            raise ValueError(f"table outcome {bad[0]} outside [0, {k})")
        self._table_cache = outcomes

    def evaluate_orders(self, orders):
        rank_of = ranking_rank_of(self.k)
        index = 0
        fact = factorial(self.k)
        for o in orders:
            index = index * fact + rank_of[o]
        return self._table_cache[index]

    @staticmethod
    def from_scf(f: SCF, cap: int = DEFAULT_TABLE_CAP) -> "TableSCF":
        return TableSCF(f.n, f.k, f.table(cap))

    def describe(self) -> dict:
        return {"rule": "table", "n": self.n, "k": self.k}


class Constant(SCF):
    """Elects the same alternative regardless of the profile."""

    def __init__(self, n: int, k: int, winner: int):
        super().__init__(n, k)
        if not 0 <= winner < k:
            raise ValueError("winner out of range")
        self.winner = winner

    def evaluate_orders(self, orders):
        return self.winner

    def range(self, cap: int = DEFAULT_TABLE_CAP) -> frozenset[int]:
        return frozenset((self.winner,))

    def describe(self) -> dict:
        return {"rule": "constant", "n": self.n, "k": self.k, "winner": self.winner + 1}


class Plurality(SCF):
    """Most first places wins; ties go to the lowest alternative id."""

    def evaluate_orders(self, orders):
        counts = [0] * self.k
        for o in orders:
            counts[o[0]] += 1
        return max(range(self.k), key=lambda a: (counts[a], -a))


class Borda(SCF):
    """Position p scores k-1-p points; ties go to the lowest alternative id."""

    def evaluate_orders(self, orders):
        k = self.k
        scores = [0] * k
        for o in orders:
            for points, alt in enumerate(reversed(o)):
                scores[alt] += points
        return max(range(k), key=lambda a: (scores[a], -a))


class TopHDictator(SCF):
    """Elects voter ``i``'s favourite among the subset H."""

    def __init__(self, n: int, k: int, i: int, H):
        super().__init__(n, k)
        if not 0 <= i < n:
            raise ValueError("dictator coordinate out of range")
        subset = frozenset(H)
        if not subset:
            raise ValueError("H must be nonempty")
        if not all(0 <= a < k for a in subset):
            raise ValueError("H members out of range")
        self.i = i
        self.H = subset

    def evaluate_orders(self, orders):
        H = self.H
        for alt in orders[self.i]:
            if alt in H:
                return alt
        raise AssertionError("unreachable: H nonempty")

    def range(self, cap: int = DEFAULT_TABLE_CAP) -> frozenset[int]:
        return self.H

    def describe(self) -> dict:
        return {
            "rule": "top-h-dictator",
            "n": self.n,
            "k": self.k,
            "voter": self.i + 1,
            "subset": sorted(a + 1 for a in self.H),
        }


class OneCoordinate(SCF):
    """An arbitrary function of a single voter's ranking."""

    def __init__(self, n: int, k: int, i: int, outcomes):
        super().__init__(n, k)
        if not 0 <= i < n:
            raise ValueError("coordinate out of range")
        outcomes = tuple(outcomes)
        if len(outcomes) != factorial(k):
            raise ValueError(f"need one outcome per ranking, got {len(outcomes)}")
        if not all(0 <= x < k for x in outcomes):
            raise ValueError("outcome out of range")
        self.i = i
        self.outcomes = outcomes

    def evaluate_orders(self, orders):
        return self.outcomes[ranking_rank_of(self.k)[orders[self.i]]]

    def range(self, cap: int = DEFAULT_TABLE_CAP) -> frozenset[int]:
        return frozenset(self.outcomes)

    def describe(self) -> dict:
        return {
            "rule": "one-coordinate",
            "n": self.n,
            "k": self.k,
            "voter": self.i + 1,
            "outcomes": [x + 1 for x in self.outcomes],
        }


class PairBooleanSCF(SCF):
    """Two-valued SCF that depends on the profile only through the a-vs-b
    preference vector: ``table`` is indexed by the bitmask with bit i set when
    voter i prefers ``a`` over ``b``."""

    def __init__(self, n: int, k: int, pair: tuple[int, int], table):
        super().__init__(n, k)
        a, b = pair
        if a == b or not (0 <= a < k and 0 <= b < k):
            raise ValueError("pair must be two distinct alternatives")
        table = tuple(table)
        if len(table) != 1 << n:
            raise ValueError(f"table has {len(table)} entries, expected {1 << n}")
        if not all(v in (a, b) for v in table):
            raise ValueError("table values must lie in the pair")
        self.pair = (a, b)
        self.bool_table = table

    def evaluate_orders(self, orders):
        a, b = self.pair
        mask = 0
        for i, o in enumerate(orders):
            for alt in o:
                if alt == a:
                    mask |= 1 << i
                    break
                if alt == b:
                    break
        return self.bool_table[mask]

    def range(self, cap: int = DEFAULT_TABLE_CAP) -> frozenset[int]:
        return frozenset(self.bool_table)

    def describe(self) -> dict:
        a, b = self.pair
        return {
            "rule": "pair-boolean",
            "n": self.n,
            "k": self.k,
            "pair": [a + 1, b + 1],
            "table": [v + 1 for v in self.bool_table],
        }


def is_monotone_pair_table(n: int, pair: tuple[int, int], table) -> bool:
    """Flipping any voter's bit toward ``a`` never moves the outcome off ``a``."""
    a, _b = pair
    for mask in range(1 << n):
        if table[mask] != a:
            continue
        for i in range(n):
            bit = 1 << i
            if not mask & bit and table[mask | bit] != a:
                return False
    return True


class MonotoneTwoValued(PairBooleanSCF):
    """A :class:`PairBooleanSCF` whose table is monotone toward ``a``."""

    def __init__(self, n: int, k: int, pair: tuple[int, int], table):
        super().__init__(n, k, pair, table)
        if not is_monotone_pair_table(n, self.pair, self.bool_table):
            raise ValueError("table is not monotone toward the first pair member")

    def describe(self) -> dict:
        d = super().describe()
        d["rule"] = "monotone-two-valued"
        return d


# ---------------------------------------------------------------------------
# Derived functions and predicates.


def induced_one_voter(f: SCF, i: int, rest: tuple[Ranking, ...]) -> TableSCF:
    """The one-voter SCF obtained by freezing all coordinates but ``i``.

    ``rest`` lists the other voters' rankings in their original voter order.
    """
    if not 0 <= i < f.n:
        raise ValueError("coordinate out of range")
    if len(rest) != f.n - 1:
        raise ValueError(f"expected {f.n - 1} fixed coordinates, got {len(rest)}")
    rest_orders = tuple(r.order for r in rest)
    outcomes = []
    for order in ranking_orders(f.k):
        orders = rest_orders[:i] + (order,) + rest_orders[i:]
        outcomes.append(f.evaluate_orders(orders))
    return TableSCF(1, f.k, outcomes)


def is_anonymous(f: SCF, cap: int = DEFAULT_TABLE_CAP) -> bool:
    """Invariance under renaming voters, checked exhaustively.

    Swaps of adjacent voters generate all voter permutations, so checking the
    n-1 generators over every profile is an exact test.
    """
    if f.n == 1:
        return True
    table = f.table(cap)
    fact = factorial(f.k)
    n = f.n
    for i in range(n - 1):
        for digits in product(range(fact), repeat=n):
            index = 0
            for d in digits:
                index = index * fact + d
            swapped = list(digits)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            jndex = 0
            for d in swapped:
                jndex = jndex * fact + d
            if table[index] != table[jndex]:
                return False
    return True


def is_neutral(f: SCF, cap: int = DEFAULT_TABLE_CAP) -> bool:
    """Invariance under renaming alternatives, checked exhaustively.

    Adjacent alternative transpositions generate all relabelings.
    """
    table = f.table(cap)
    k, n = f.k, f.n
    fact = factorial(k)
    rank_of = ranking_rank_of(k)
    orders = ranking_orders(k)
    for c in range(k - 1):
        relabel = list(range(k))
        relabel[c], relabel[c + 1] = relabel[c + 1], relabel[c]
        rank_map = [rank_of[tuple(relabel[x] for x in order)] for order in orders]
        for digits in product(range(fact), repeat=n):
            index = 0
            for d in digits:
                index = index * fact + d
            jndex = 0
            for d in digits:
                jndex = jndex * fact + rank_map[d]
            if table[jndex] != relabel[table[index]]:
                return False
    return True


def exists_anonymous_neutral(n: int, k: int) -> bool:
    """Whether any SCF on (n, k) can be both anonymous and neutral.

    Possible exactly when k is not a sum (repetition allowed) of divisors
    d >= 2 of n; tie-breaking forces the obstruction otherwise.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    coins = [d for d in range(2, n + 1) if n % d == 0]
    reachable = [False] * (k + 1)
    reachable[0] = True
    for d in coins:
        for s in range(d, k + 1):
            if reachable[s - d]:
                reachable[s] = True
    return not reachable[k]


def majority_projection(g: SCF, pair: tuple[int, int], cap: int = DEFAULT_TABLE_CAP) -> PairBooleanSCF:
    """Collapse a two-valued SCF to the majority outcome on each preference fiber.

    Ties elect ``a`` (the first pair member). The result depends on a profile
    only through its a-vs-b preference vector.
    """
    a, b = pair
    rng = g.range(cap)
    if not rng <= {a, b}:
        raise ValueError(f"range {sorted(rng)} not within pair {pair}")
    table = g.table(cap)
    n, k = g.n, g.k
    counts_a = [0] * (1 << n)
    counts_b = [0] * (1 << n)
    pos = ranking_positions(k)
    index = 0
    for digits in product(range(factorial(k)), repeat=n):
        mask = 0
        for i, d in enumerate(digits):
            if pos[d][a] < pos[d][b]:
                mask |= 1 << i
        if table[index] == a:
            counts_a[mask] += 1
        elif table[index] == b:
            counts_b[mask] += 1
        index += 1
    boolean = tuple(a if counts_a[m] >= counts_b[m] else b for m in range(1 << n))
    return PairBooleanSCF(n, k, pair, boolean)


# ---------------------------------------------------------------------------
# Seeded random instances (reproducible test subjects).


def random_table_scf(n: int, k: int, seed: int, cap: int = DEFAULT_TABLE_CAP) -> TableSCF:
    """Each outcome independently uniform on the alternatives."""
    size = profile_space_size(n, k)
    if size > cap:
        raise CapExceededError(f"(k!)^n = {size} exceeds cap {cap}")
    rng = random.Random(seed)
    return TableSCF(n, k, [rng.randrange(k) for _ in range(size)])


def random_monotone_two_valued(n: int, k: int, seed: int) -> MonotoneTwoValued:
    """A seeded monotone two-valued SCF (upward closure of random labels)."""
    rng = random.Random(seed)
    a, b = rng.sample(range(k), 2)
    labels = [rng.choice((a, b)) for _ in range(1 << n)]
    table = [b] * (1 << n)
    for mask in range(1 << n):
        if labels[mask] == a or any(
            mask & (1 << i) and table[mask ^ (1 << i)] == a for i in range(n)
        ):
            table[mask] = a
    return MonotoneTwoValued(n, k, (a, b), table)


# ---------------------------------------------------------------------------
# Table file round-trip.


def dump_scf_table(f: SCF, path, cap: int = DEFAULT_TABLE_CAP) -> None:
    """Write the self-describing JSON table format (1-based outcomes)."""
    doc = {
        "n": f.n,
        "k": f.k,
        "encoding": SCF_TABLE_ENCODING,
        "outcomes": [x + 1 for x in f.table(cap)],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_scf_table(path, cap: int = DEFAULT_TABLE_CAP) -> TableSCF:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("encoding") != SCF_TABLE_ENCODING:
        raise ValueError(f"unsupported table encoding {doc.get('encoding')!r}")
    n, k = doc["n"], doc["k"]
    size = profile_space_size(n, k)
    if size > cap:
        raise CapExceededError(f"(k!)^n = {size} exceeds load cap {cap}")
    outcomes = [x - 1 for x in doc["outcomes"]]
    return TableSCF(n, k, outcomes)


def scfs_equal(f: SCF, g: SCF, cap: int = DEFAULT_TABLE_CAP) -> bool:
    return f.n == g.n and f.k == g.k and f.table(cap) == g.table(cap)
