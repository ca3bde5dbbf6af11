"""Explicit finite posets with downset enumeration and rank machinery.

Elements are indexed 0..n-1 with string labels; the strict order is kept
as per-element bitmasks of the elements strictly below.  Downsets are
bitmasks over element indices in declaration order, which makes closure
checks and hashing cheap and canonical.

Enumeration operations (downset lattice, downset ranks, the union-rank
verifier) refuse posets larger than a configurable bound, 20 by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, NamedTuple

from .ordinal import OMEGA, Ordinal, ord_pow

DEFAULT_BOUND = 20


class PosetError(ValueError):
    """Construction or precondition failure on a finite poset."""


def _bits(mask: int) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class FinitePoset:
    """Finite strict order, transitively closed.

    ``below[i]`` is the bitmask of elements strictly less than element i.
    """

    labels: tuple
    below: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "below", tuple(self.below))
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise PosetError("duplicate element name")
        if len(self.below) != n:
            raise PosetError("below must have one mask per element")
        for i, mask in enumerate(self.below):
            if mask >> n:
                raise PosetError("below mask out of range")
            if mask & (1 << i):
                raise PosetError("order must be irreflexive")
            for j in _bits(mask):
                if self.below[j] & ~mask:
                    raise PosetError("order must be transitive")
                if self.below[j] & (1 << i):
                    raise PosetError("order must be antisymmetric")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, name: str) -> int:
        try:
            return self.labels.index(name)
        except ValueError:
            raise PosetError(f"unknown element {name!r}") from None

    def lt(self, i: int, j: int) -> bool:
        return bool(self.below[j] & (1 << i))

    def leq(self, i: int, j: int) -> bool:
        return i == j or self.lt(i, j)

    def down_mask(self, i: int) -> int:
        return self.below[i] | (1 << i)

    def up_mask(self, i: int) -> int:
        bit = 1 << i
        return bit | sum(1 << j for j in range(self.n) if self.below[j] & bit)

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def is_downset(self, mask: int) -> bool:
        out = 0
        for i in _bits(mask):
            out |= self.below[i]
        return not (out & ~mask)

    def close_down(self, mask: int) -> int:
        out = mask
        for i in _bits(mask):
            out |= self.below[i]
        return out

    def max_of(self, mask: int) -> int:
        """Bitmask of the maximal elements within ``mask``."""
        out = 0
        for i in _bits(mask):
            above_in_mask = any(self.below[j] & (1 << i) for j in _bits(mask))
            if not above_in_mask:
                out |= 1 << i
        return out

    def min_of(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            if not (self.below[i] & mask):
                out |= 1 << i
        return out

    def covers(self) -> list:
        """Hasse diagram edges (i, j) with i covered by j."""
        out = []
        for j in range(self.n):
            for i in _bits(self.below[j]):
                between = self.below[j] & ~self.below[i] & ~(1 << i)
                if not any(self.below[k] & (1 << i) for k in _bits(between)):
                    out.append((i, j))
        return out

    def names(self, mask: int) -> frozenset:
        return frozenset(self.labels[i] for i in _bits(mask))

    def __repr__(self):
        rel = [(self.labels[i], self.labels[j]) for (i, j) in self.covers()]
        return f"FinitePoset({list(self.labels)}, covers={rel})"


@dataclass(frozen=True)
class DownSet:
    """Downward-closed subset, stored as a bitmask of element indices."""

    mask: int

    @classmethod
    def of(cls, poset: FinitePoset, names: Iterable[str]) -> "DownSet":
        mask = 0
        for name in names:
            mask |= 1 << poset.index(name)
        if not poset.is_downset(mask):
            raise PosetError("set is not downward closed")
        return cls(mask)

    def members(self, poset: FinitePoset) -> frozenset:
        return poset.names(self.mask)

    @property
    def size(self) -> int:
        return _popcount(self.mask)


# -- construction ------------------------------------------------------

def poset_from_covers(elements: Iterable[str], covers: Iterable) -> FinitePoset:
    """Build the transitive closure of a cover relation; rejects cycles."""
    labels = tuple(elements)
    if len(set(labels)) != len(labels):
        raise PosetError("duplicate element name")
    idx = {name: i for i, name in enumerate(labels)}
    n = len(labels)
    parents = [[] for _ in range(n)]
    for a, b in covers:
        if a not in idx:
            raise PosetError(f"unknown element {a!r} in cover")
        if b not in idx:
            raise PosetError(f"unknown element {b!r} in cover")
        parents[idx[a]].append(idx[b])
    below = [0] * n
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done

    def visit(j: int):
        if state[j] == 1:
            raise PosetError("cycle detected in covers")
        if state[j] == 2:
            return
        state[j] = 1
        for i in range(n):
            if j in parents[i]:
                visit(i)
                below[j] |= below[i] | (1 << i)
        state[j] = 2

    for j in range(n):
        visit(j)
    return FinitePoset(labels, tuple(below))


def poset_from_json(data: dict) -> FinitePoset:
    """Schema: {"elements": [names...], "covers": [[a, b]...]} with a < b."""
    if not isinstance(data, dict) or "elements" not in data:
        raise PosetError("poset JSON must have an 'elements' field")
    return poset_from_covers(data["elements"], data.get("covers", []))


def poset_to_json(poset: FinitePoset) -> dict:
    covers = [[poset.labels[i], poset.labels[j]] for (i, j) in poset.covers()]
    return {"elements": list(poset.labels), "covers": covers}


def poset_to_dot(poset: FinitePoset) -> str:
    """Hasse diagram in DOT, one rank layer per well-founded rank."""
    ranks_by_index = ranks(poset).by_index
    lines = ["digraph poset {", "  rankdir=BT;"]
    for r in sorted(set(ranks_by_index)):
        same = " ".join(f'"{poset.labels[i]}";' for i in range(poset.n)
                        if ranks_by_index[i] == r)
        lines.append(f"  {{ rank=same; {same} }}")
    for i, j in poset.covers():
        lines.append(f'  "{poset.labels[i]}" -> "{poset.labels[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- basic queries -----------------------------------------------------

def principal_sets(poset: FinitePoset, name: str):
    """Principal ideal (as a DownSet) and principal filter of an element."""
    i = poset.index(name)
    down = DownSet(poset.down_mask(i))
    up = poset.names(poset.up_mask(i))
    return down, up


class Extremal(NamedTuple):
    max: frozenset
    min: frozenset
    is_antichain: bool


def extremal(poset: FinitePoset, names: Iterable[str]) -> Extremal:
    mask = 0
    for name in names:
        mask |= 1 << poset.index(name)
    max_mask = poset.max_of(mask)
    min_mask = poset.min_of(mask)
    antichain = max_mask == mask and min_mask == mask
    return Extremal(poset.names(max_mask), poset.names(min_mask), antichain)


class Ranks(NamedTuple):
    elem_rank: dict
    poset_rank: int
    by_index: tuple


def ranks(poset: FinitePoset) -> Ranks:
    """Well-founded rank of each element and of the whole poset."""
    n = poset.n
    rank = [0] * n
    order = sorted(range(n), key=lambda i: _popcount(poset.below[i]))
    for i in order:
        rank[i] = max((rank[j] + 1 for j in _bits(poset.below[i])), default=0)
    poset_rank = max((r + 1 for r in rank), default=0)
    return Ranks({poset.labels[i]: rank[i] for i in range(n)}, poset_rank, tuple(rank))


def width(poset: FinitePoset) -> int:
    """Maximum antichain size, cross-checked against a minimum chain cover."""
    best = _max_antichain(poset)
    cover = poset.n - _max_matching(poset)
    if poset.n and best != cover:
        raise AssertionError(f"antichain {best} != chain cover {cover}")
    return best


def _max_antichain(poset: FinitePoset) -> int:
    # maximum independent set in the comparability graph
    n = poset.n
    adj = [poset.below[i] | sum(1 << j for j in range(n) if poset.below[j] & (1 << i))
           for i in range(n)]

    def mis(mask: int) -> int:
        if not mask:
            return 0
        # pick a vertex with comparabilities inside mask, if any
        pick = -1
        for i in _bits(mask):
            if adj[i] & mask:
                pick = i
                break
        if pick < 0:
            return _popcount(mask)
        without = mis(mask & ~(1 << pick))
        with_it = 1 + mis(mask & ~(1 << pick) & ~adj[pick])
        return max(without, with_it)

    return mis(poset.full_mask())


def _max_matching(poset: FinitePoset) -> int:
    # Kuhn's algorithm on the split bipartite graph of the strict order
    n = poset.n
    succ = [[j for j in range(n) if poset.below[j] & (1 << i)] for i in range(n)]
    match_right = [-1] * n

    def try_augment(i: int, seen: list) -> bool:
        for j in succ[i]:
            if not seen[j]:
                seen[j] = True
                if match_right[j] < 0 or try_augment(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    total = 0
    for i in range(n):
        if try_augment(i, [False] * n):
            total += 1
    return total


# -- downset enumeration ----------------------------------------------

def _check_bound(poset: FinitePoset, bound: int):
    if poset.n > bound:
        raise PosetError(f"size bound exceeded: {poset.n} > {bound}")


def all_downsets(poset: FinitePoset, bound: int = DEFAULT_BOUND) -> list:
    """All downsets as bitmasks, including 0 and the full set."""
    _check_bound(poset, bound)
    order = sorted(range(poset.n), key=lambda i: _popcount(poset.below[i]))
    below = poset.below
    out = []

    def rec(k: int, mask: int):
        if k == len(order):
            out.append(mask)
            return
        i = order[k]
        rec(k + 1, mask)
        if not (below[i] & ~mask):
            rec(k + 1, mask | (1 << i))

    rec(0, 0)
    return out


def antichain_masks(poset: FinitePoset) -> list:
    """All antichains as bitmasks, including the empty one."""
    n = poset.n
    comp = [poset.below[i] | sum(1 << j for j in range(n) if poset.below[j] & (1 << i))
            for i in range(n)]
    out = []

    def rec(i: int, mask: int):
        if i == n:
            out.append(mask)
            return
        rec(i + 1, mask)
        if not (comp[i] & mask):
            rec(i + 1, mask | (1 << i))

    rec(0, 0)
    return out


def downset_lattice(poset: FinitePoset, bound: int = DEFAULT_BOUND) -> FinitePoset:
    """The lattice of all downsets ordered by inclusion.

    Elements are labeled by their member sets; the complement bijection
    onto final sets is re-verified to be order reversing.
    """
    masks = sorted(all_downsets(poset, bound), key=lambda m: (_popcount(m), m))
    full = poset.full_mask()
    for a in masks:
        for b in masks:
            # complements are final sets; inclusion must flip
            if (a | b == b) != ((full & ~a) | (full & ~b) == full & ~a):
                raise AssertionError("complement map failed to reverse order")
    labels = tuple("{" + ",".join(sorted(poset.names(m))) + "}" for m in masks)
    pos = {m: i for i, m in enumerate(masks)}
    below = [0] * len(masks)
    for a in masks:
        for b in masks:
            if a != b and a | b == b:
                below[pos[b]] |= 1 << pos[a]
    return FinitePoset(labels, tuple(below))


def kw_rank(poset: FinitePoset, bound: int = DEFAULT_BOUND) -> dict:
    """Well-founded rank of every nonempty downset under inclusion."""
    _check_bound(poset, bound)
    if poset.n == 0:
        raise PosetError("empty poset")
    ranks_by_mask = _kw_rank_masks(poset, bound)
    return {DownSet(m): r for m, r in ranks_by_mask.items()}


def _kw_rank_masks(poset: FinitePoset, bound: int = DEFAULT_BOUND) -> dict:
    masks = [m for m in all_downsets(poset, bound) if m]
    masks.sort(key=_popcount)
    rank: dict = {}
    for m in masks:
        best = -1
        for i in _bits(poset.max_of(m)):
            pred = m & ~(1 << i)
            if pred:
                best = max(best, rank[pred])
        rank[m] = best + 1
    return rank


# -- union-rank verification -------------------------------------------

@dataclass
class ZaguiaReport:
    """Result of the downset union-rank checks on one poset.

    ``claim1``/``claim2`` verify the inductive reading in which each piece
    counts itself (ranks taken in the lattice with the empty set adjoined);
    ``claim1_literal``/``claim2_literal`` record the unshifted reading,
    which fails as soon as two pieces are disjoint.  ``claim3`` covers the
    ordinal bounds rank(down p) < w^rank(p) and rank(K) <= w^rank(P).
    """

    poset_summary: str
    claim1: bool
    claim2: bool
    claim3: bool
    claim1_literal: bool
    claim2_literal: bool
    counterexample: tuple | None = None
    literal_counterexample: tuple | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.claim1 and self.claim2 and self.claim3

    def to_json(self) -> dict:
        witness = None
        if self.counterexample is not None:
            witness = [sorted(d) for d in self.counterexample]
        return {
            "check": "zaguia",
            "pass": self.passed,
            "witness": witness,
            "claims": {
                "claim1": self.claim1,
                "claim2": self.claim2,
                "claim3": self.claim3,
                "claim1_literal": self.claim1_literal,
                "claim2_literal": self.claim2_literal,
            },
            "poset": self.poset_summary,
        }


def zaguia_verify(poset: FinitePoset, bound: int = DEFAULT_BOUND) -> ZaguiaReport:
    """Check the union-rank inequalities for downsets of a finite poset.

    Ground truth is the enumerated rank of every nonempty downset.  The
    natural sum on the finite ranks is plain integer addition; the
    ordinal-level bounds are evaluated exactly on Ordinal values.
    """
    _check_bound(poset, bound)
    if poset.n == 0:
        raise PosetError("empty poset")
    kw = _kw_rank_masks(poset, bound)
    masks = list(kw)
    claim1 = claim1_literal = True
    claim2 = claim2_literal = True
    counterexample = None
    literal_counterexample = None

    for a in masks:
        ra = kw[a]
        for b in masks:
            u = a | b
            ru = kw[u]
            # shifted reading: every piece also counts itself
            if ru > kw[b] + ra + 1:
                claim1 = False
                if counterexample is None:
                    counterexample = (_names(poset, a), _names(poset, b))
            if ru > kw[b] + ra:
                claim1_literal = False
                if literal_counterexample is None:
                    literal_counterexample = (_names(poset, a), _names(poset, b))

    for m in masks:
        parts = [kw[poset.down_mask(i)] for i in _bits(poset.max_of(m))]
        if kw[m] > sum(parts) + len(parts) - 1:
            claim2 = False
            if counterexample is None:
                counterexample = (_names(poset, m), _names(poset, poset.max_of(m)))
        if kw[m] > sum(parts):
            claim2_literal = False
            if literal_counterexample is None:
                literal_counterexample = (_names(poset, m), _names(poset, poset.max_of(m)))

    elem_ranks = ranks(poset)
    claim3 = True
    for i in range(poset.n):
        r = elem_ranks.by_index[i]
        k = Ordinal.from_int(kw[poset.down_mask(i)])
        if r == 0:
            if not k.is_zero:
                claim3 = False
        elif not k < ord_pow(OMEGA, Ordinal.from_int(r)):
            claim3 = False
        if not claim3 and counterexample is None:
            counterexample = (_names(poset, poset.down_mask(i)), frozenset({poset.labels[i]}))
            break
    k_rank = Ordinal.from_int(max(kw.values()) + 1)
    if not k_rank <= ord_pow(OMEGA, Ordinal.from_int(elem_ranks.poset_rank)):
        claim3 = False
        if counterexample is None:
            counterexample = (_names(poset, poset.full_mask()), frozenset())

    summary = f"n={poset.n}, downsets={len(masks)}"
    return ZaguiaReport(
        poset_summary=summary,
        claim1=claim1,
        claim2=claim2,
        claim3=claim3,
        claim1_literal=claim1_literal,
        claim2_literal=claim2_literal,
        counterexample=counterexample,
        literal_counterexample=literal_counterexample,
        details={"ranks": {tuple(sorted(_names(poset, m))): r for m, r in kw.items()}},
    )


def _names(poset: FinitePoset, mask: int) -> frozenset:
    return poset.names(mask)


# -- corpora ------------------------------------------------------------

@lru_cache(maxsize=None)
def all_labeled_posets(n: int) -> tuple:
    """Every labeled poset on elements "0".."n-1" (feasible for n <= 5)."""
    if n > 5:
        raise PosetError("labeled enumeration beyond 5 elements explodes")
    labels = tuple(str(i) for i in range(n))
    pair_list = [(i, j) for i in range(n) for j in range(i + 1, n)]
    natural: list = []
    for choice in range(1 << len(pair_list)):
        rel = set()
        for k, (i, j) in enumerate(pair_list):
            if choice >> k & 1:
                rel.add((i, j))
        if all((i, k) in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            natural.append(rel)
    seen = set()
    out = []
    for rel in natural:
        for perm in permutations(range(n)):
            mapped = frozenset((perm[i], perm[j]) for (i, j) in rel)
            if mapped not in seen:
                seen.add(mapped)
                below = [0] * n
                for i, j in mapped:
                    below[j] |= 1 << i
                out.append(FinitePoset(labels, tuple(below)))
    return tuple(out)


def random_poset(rng, n: int, edge_prob: float = 0.35) -> FinitePoset:
    """Seeded random poset: random DAG on a shuffled order, closed transitively."""
    order = list(range(n))
    rng.shuffle(order)
    below = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < edge_prob:
                i, j = order[a], order[b]
                below[j] |= below[i] | (1 << i)
    # re-close: adding edges above may miss inherited elements
    changed = True
    while changed:
        changed = False
        for j in range(n):
            acc = below[j]
            for i in _bits(below[j]):
                acc |= below[i]
            if acc != below[j]:
                below[j] = acc
                changed = True
    return FinitePoset(tuple(str(i) for i in range(n)), tuple(below))
