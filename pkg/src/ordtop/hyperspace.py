"""Hyperspaces of downsets for finite ordered spaces.

A finite Priestley space is just a finite poset with the discrete
topology, so the hyperspace of a finite poset P is the set of nonempty
downsets ordered by inclusion, with union as join and the principal-ideal
map as the canonical embedding.  This module builds that object, checks
clopen-selector axioms, verifies the free-join-semilattice universal
property against enumerated homomorphisms, and decides density questions
for the Vietoris topology on the one-point compactification of the
naturals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .poset import (
    DEFAULT_BOUND,
    DownSet,
    FinitePoset,
    PosetError,
    _bits,
    _popcount,
    all_downsets,
    ranks,
)


class HyperspaceError(ValueError):
    pass


@dataclass(frozen=True)
class Hyperspace:
    """All nonempty downsets of a finite poset, ordered by inclusion."""

    base: FinitePoset
    points: tuple  # downset bitmasks, sorted by (size, value)

    @property
    def size(self) -> int:
        return len(self.points)

    def join(self, a: int, b: int) -> int:
        return a | b

    def leq(self, a: int, b: int) -> bool:
        return a | b == b

    def eta(self, i: int) -> int:
        """Principal downset of base element i."""
        return self.base.down_mask(i)

    def eta_image(self) -> list:
        return [self.eta(i) for i in range(self.base.n)]

    def point_label(self, mask: int) -> str:
        return "{" + ",".join(sorted(self.base.names(mask))) + "}"

    def to_poset(self) -> FinitePoset:
        pos = {m: i for i, m in enumerate(self.points)}
        below = [0] * len(self.points)
        for a in self.points:
            for b in self.points:
                if a != b and a | b == b:
                    below[pos[b]] |= 1 << pos[a]
        labels = tuple(self.point_label(m) for m in self.points)
        return FinitePoset(labels, tuple(below))


def build_hyperspace(poset: FinitePoset, bound: int = DEFAULT_BOUND) -> Hyperspace:
    """Construct the hyperspace and re-verify its structural identities:
    closure under union, principal downsets present, every point is the
    downset of its maxima, and the points are exactly the join closure of
    the principal downsets (equivalently, all nonempty downsets).
    """
    if poset.n == 0:
        raise PosetError("empty poset has an empty hyperspace")
    masks = sorted((m for m in all_downsets(poset, bound) if m),
                   key=lambda m: (_popcount(m), m))
    point_set = set(masks)
    for a in masks:
        for b in masks:
            if a | b not in point_set:
                raise AssertionError("hyperspace not closed under union")
    closure = set(poset.down_mask(i) for i in range(poset.n))
    frontier = list(closure)
    while frontier:
        a = frontier.pop()
        for b in list(closure):
            u = a | b
            if u not in closure:
                closure.add(u)
                frontier.append(u)
    if closure != point_set:
        raise AssertionError("join closure of principal downsets is not everything")
    for m in masks:
        if poset.close_down(poset.max_of(m)) != m:
            raise AssertionError("point is not the downset of its maxima")
    return Hyperspace(poset, tuple(masks))


def max_decomposition(h: Hyperspace, k: DownSet) -> frozenset:
    """The antichain of maxima generating a point, re-verified."""
    if k.mask not in set(h.points):
        raise HyperspaceError("not a point of the hyperspace")
    sigma = h.base.max_of(k.mask)
    if h.base.close_down(sigma) != k.mask:
        raise AssertionError("maxima fail to regenerate the downset")
    return h.base.names(sigma)


def hyperspace_to_dot(h: Hyperspace) -> str:
    lines = ["digraph hyperspace {", "  rankdir=BT;"]
    pos = {m: i for i, m in enumerate(h.points)}
    for m in h.points:
        lines.append(f'  p{pos[m]} [label="{h.point_label(m)}"];')
    hp = h.to_poset()
    for i, j in hp.covers():
        lines.append(f"  p{i} -> p{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- clopen selector checks ---------------------------------------------

@dataclass(frozen=True)
class SelectorFamily:
    """Assignment of a subset of the space to each element."""

    assignment: tuple  # tuple of (name, frozenset of names)

    @classmethod
    def from_dict(cls, d: dict) -> "SelectorFamily":
        return cls(tuple(sorted((k, frozenset(v)) for k, v in d.items())))

    def as_dict(self) -> dict:
        return dict(self.assignment)


@dataclass
class SelectorReport:
    cond1: bool  # x in U_x
    cond2: bool  # no mutual membership for distinct points
    cond3: bool  # y in U_x implies U_y subset of U_x
    cond4: bool  # the induced relation is irreflexive and transitive
    equivalent: bool  # (2) and (3) agree with (4), given (1)
    minimal_singletons: bool
    well_founded: bool
    induced_order: tuple = ()
    witness: object = None

    @property
    def passed(self) -> bool:
        return (self.cond1 and self.cond2 and self.cond3 and self.cond4
                and self.equivalent and self.minimal_singletons)

    def to_json(self) -> dict:
        return {
            "check": "selector-axioms",
            "pass": self.passed,
            "witness": self.witness,
            "conditions": {
                "membership": self.cond1,
                "antisymmetry": self.cond2,
                "nesting": self.cond3,
                "induced-order": self.cond4,
                "equivalence": self.equivalent,
                "minimal-singletons": self.minimal_singletons,
                "well-founded": self.well_founded,
            },
        }


def selector_axioms_check(space: FinitePoset, fam: SelectorFamily) -> SelectorReport:
    """Check the clopen-selector conditions for a family over a finite space.

    The conditions: each point belongs to its own set; two distinct points
    never belong to each other's sets; membership nests the sets; and the
    induced relation (x below y iff x is in U_y) is a strict order.  The
    report also records whether minimal members of the family are
    singletons and whether the family is well-founded under inclusion.
    """
    sets = fam.as_dict()
    names = list(space.labels)
    missing = [x for x in names if x not in sets]
    if missing:
        raise HyperspaceError(f"assignment missing elements: {missing}")
    witness = None

    cond1 = True
    for x in names:
        if x not in sets[x]:
            cond1 = False
            witness = witness or ("membership", x)
    cond2 = True
    for x in names:
        for y in names:
            if x < y and x in sets[y] and y in sets[x]:
                cond2 = False
                witness = witness or ("antisymmetry", (x, y))
    cond3 = True
    for x in names:
        for y in sets[x]:
            if y in sets and not sets[y] <= sets[x]:
                cond3 = False
                witness = witness or ("nesting", (x, y))

    rel = {(x, y) for y in names for x in sets[y] if x != y and x in names}
    irreflexive = all((x, x) not in rel for x in names)
    transitive = all((x, z) in rel
                     for (x, y) in rel for (y2, z) in rel
                     if y == y2 and x != z)
    antisym4 = all((y, x) not in rel for (x, y) in rel)
    cond4 = irreflexive and transitive and antisym4
    equivalent = (cond2 and cond3) == cond4 if cond1 else True

    family_sets = set(sets.values())
    minimal_singletons = True
    for u in family_sets:
        if not any(v < u for v in family_sets):
            if len(u) != 1:
                minimal_singletons = False
                witness = witness or ("minimal-not-singleton", sorted(u))

    # finite families are well-founded as soon as inclusion is a strict order;
    # run the shared rank computation to certify it
    well_founded = True
    try:
        order = sorted(family_sets, key=len)
        rank: dict = {}
        for u in order:
            rank[u] = max((rank[v] + 1 for v in order if v < u), default=0)
    except Exception:  # pragma: no cover
        well_founded = False

    return SelectorReport(
        cond1=cond1, cond2=cond2, cond3=cond3, cond4=cond4,
        equivalent=equivalent, minimal_singletons=minimal_singletons,
        well_founded=well_founded,
        induced_order=tuple(sorted(rel)), witness=witness,
    )


def principal_selector(poset: FinitePoset) -> SelectorFamily:
    """The family of principal downsets of a finite poset."""
    return SelectorFamily.from_dict(
        {poset.labels[i]: poset.names(poset.down_mask(i)) for i in range(poset.n)})


def kplus_selector(h: Hyperspace):
    """The family { K-plus } on the hyperspace: the selector set of a point
    K is everything below it.  Returns the hyperspace order and the family.
    """
    hp = h.to_poset()
    fam = principal_selector(hp)
    return hp, fam


def priestley_separation_check(poset: FinitePoset) -> bool:
    """For x not below y there is an upset containing x and not y."""
    for x in range(poset.n):
        for y in range(poset.n):
            if not poset.leq(x, y):
                up = poset.up_mask(x)
                if not (up >> x & 1) or (up >> y & 1):
                    return False
    return True


# -- universal property ---------------------------------------------------

@dataclass(frozen=True)
class FinJoinSemilattice:
    """Finite join semilattice: carrier poset plus a total join table."""

    carrier: FinitePoset
    join_table: tuple  # row-major: join_table[i][j] = index of i v j

    def __post_init__(self):
        n = self.carrier.n
        t = self.join_table
        for i in range(n):
            if t[i][i] != i:
                raise HyperspaceError("join must be idempotent")
            for j in range(n):
                if t[i][j] != t[j][i]:
                    raise HyperspaceError("join must be commutative")
                for k in range(n):
                    if t[t[i][j]][k] != t[i][t[j][k]]:
                        raise HyperspaceError("join must be associative")
        for i in range(n):
            for j in range(n):
                if self.carrier.leq(i, j) != (t[i][j] == j):
                    raise HyperspaceError("induced order disagrees with carrier order")

    @property
    def n(self) -> int:
        return self.carrier.n

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def join_all(self, idxs: Iterable[int]) -> int:
        it = iter(idxs)
        out = next(it)
        for i in it:
            out = self.join_table[out][i]
        return out

    @classmethod
    def from_poset(cls, poset: FinitePoset) -> "FinJoinSemilattice":
        """Join = least upper bound; fails if some pair has none."""
        n = poset.n
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                ubs = [k for k in range(n) if poset.leq(i, k) and poset.leq(j, k)]
                lubs = [k for k in ubs if all(poset.leq(k, m) for m in ubs)]
                if len(lubs) != 1:
                    raise HyperspaceError(f"no least upper bound for ({i},{j})")
                row.append(lubs[0])
            table.append(tuple(row))
        return cls(poset, tuple(table))

    @classmethod
    def chain(cls, k: int) -> "FinJoinSemilattice":
        from .poset import poset_from_covers
        p = poset_from_covers([str(i) for i in range(k)],
                              [(str(i), str(i + 1)) for i in range(k - 1)])
        return cls.from_poset(p)


@dataclass
class HatReport:
    is_join_hom: bool
    extends_f: bool
    unique: bool
    method: str
    homs_found: int
    witness: object = None

    @property
    def passed(self) -> bool:
        return self.is_join_hom and self.extends_f and self.unique

    def to_json(self) -> dict:
        return {"check": "universal-property", "pass": self.passed,
                "witness": self.witness, "method": self.method,
                "homs_found": self.homs_found}


def hat_extension(poset: FinitePoset, y: FinJoinSemilattice, f: dict,
                  bound: int = DEFAULT_BOUND):
    """Extend an increasing map f: P -> Y to the hyperspace by joins.

    Returns the extension (downset mask -> Y index) and a report verifying
    it is a join homomorphism restricting to f, and that it is the only
    join homomorphism doing so.  Uniqueness is checked against the fully
    enumerated homomorphisms when the sizes allow, otherwise on the
    generators (sound because the principal downsets join-generate).
    """
    h = build_hyperspace(poset, bound)
    fi = {}
    for i in range(poset.n):
        name = poset.labels[i]
        if name not in f:
            raise HyperspaceError(f"f missing element {name!r}")
        fi[i] = f[name] if isinstance(f[name], int) else y.carrier.index(f[name])
    for i in range(poset.n):
        for j in range(poset.n):
            if poset.leq(i, j) and not y.carrier.leq(fi[i], fi[j]):
                raise HyperspaceError("f is not increasing")

    values = {m: y.join_all(fi[i] for i in _bits(m)) for m in h.points}

    is_hom = all(values[a | b] == y.join(values[a], values[b])
                 for a in h.points for b in h.points)
    extends = all(values[h.eta(i)] == fi[i] for i in range(poset.n))

    witness = None
    if h.size <= 64 and y.n <= 8:
        method = "enumerated"
        homs = set()
        assignments = [[]]
        for _ in range(poset.n):
            assignments = [a + [v] for a in assignments for v in range(y.n)]
        for assign in assignments:
            ok = all(y.join_all(assign[j] for j in _bits(poset.down_mask(i))) == fi[i]
                     for i in range(poset.n))
            if not ok:
                continue
            g = tuple(y.join_all(assign[i] for i in _bits(m)) for m in h.points)
            homs.add(g)
        hat_tuple = tuple(values[m] for m in h.points)
        unique = homs == {hat_tuple}
        if not unique:
            witness = ("homs", len(homs))
        count = len(homs)
    else:
        method = "generators"
        # the join closure of the eta image is everything (checked in
        # build_hyperspace), so a join hom agreeing with f on it is hat
        unique = True
        count = 1

    hat = {DownSet(m): v for m, v in values.items()}
    return hat, HatReport(is_join_hom=is_hom, extends_f=extends, unique=unique,
                          method=method, homs_found=count, witness=witness)


# -- one-point compactification model -------------------------------------

@dataclass(frozen=True)
class Descriptor:
    """Clopen subset of N u {infinity}: a finite set of naturals, or a
    cofinite set given by its finite complement in N (which then contains
    the point at infinity)."""

    cofinite: bool
    elems: frozenset

    def __post_init__(self):
        object.__setattr__(self, "elems", frozenset(self.elems))
        if any((not isinstance(x, int)) or x < 0 for x in self.elems):
            raise HyperspaceError("malformed descriptor: members must be naturals")

    @classmethod
    def finite(cls, xs: Iterable[int]) -> "Descriptor":
        return cls(False, frozenset(xs))

    @classmethod
    def cofinite_complement(cls, xs: Iterable[int]) -> "Descriptor":
        return cls(True, frozenset(xs))

    def contains(self, n: int) -> bool:
        return (n not in self.elems) if self.cofinite else (n in self.elems)

    def meets_naturals(self, other: "Descriptor") -> int | None:
        """Least natural in the intersection, or None if it is empty."""
        if not self.cofinite and not other.cofinite:
            common = self.elems & other.elems
            return min(common) if common else None
        if not self.cofinite:
            mine = sorted(x for x in self.elems if other.contains(x))
            return mine[0] if mine else None
        if not other.cofinite:
            return other.meets_naturals(self)
        banned = self.elems | other.elems
        n = 0
        while n in banned:
            n += 1
        return n


@dataclass(frozen=True)
class OnePointModel:
    """Symbolic one-point compactification of the discrete naturals."""

    horizon: int = 10_000

    def validate(self, d: Descriptor):
        if not isinstance(d, Descriptor):
            raise HyperspaceError("malformed descriptor")
        if d.elems and max(d.elems) >= self.horizon:
            raise HyperspaceError("descriptor exceeds horizon")


def vietoris_density_witness(model: OnePointModel, u: Descriptor,
                             vs: Iterable[Descriptor]):
    """Decide whether the basic Vietoris open determined by ``u`` and the
    ``vs`` is nonempty, and exhibit a finite set of naturals inside it
    when it is.  Returns the witness as a sorted list, or None when the
    basic open is empty.
    """
    vs = list(vs)
    model.validate(u)
    for v in vs:
        model.validate(v)
    picks = set()
    for v in vs:
        n = u.meets_naturals(v)
        if n is None:
            return None
        picks.add(n)
    if not picks:
        # no lower constraints: any nonempty finite subset of u works
        n = u.meets_naturals(Descriptor.cofinite_complement(()))
        if n is None:
            return None
        picks.add(n)
    return sorted(picks)


def one_point_poset(n: int) -> FinitePoset:
    """Finite-scale pattern of the compactified naturals: an n-antichain
    below a single top point."""
    from .poset import poset_from_covers
    names = [str(i) for i in range(n)] + ["inf"]
    return poset_from_covers(names, [(str(i), "inf") for i in range(n)])


def one_point_rank_discrepancy(n: int) -> dict:
    """Both rank conventions for the hyperspace of the compactified
    naturals, at finite scale n.

    The sup-plus-one convention gives n+1 for the hyperspace (climbing to
    w+1 with n), while the sup-of-point-ranks convention gives n (climbing
    to w); the claimed equality rank(H) = w^rank(X) holds only under the
    second convention, so the mismatch is flagged rather than resolved.
    """
    h = build_hyperspace(one_point_poset(n))
    hp = h.to_poset()
    r = ranks(hp)
    base_r = ranks(h.base)
    sup_plus_one = r.poset_rank
    sup_only = max(r.elem_rank.values())
    return {
        "scale": n,
        "hyperspace_rank_sup_plus_one": sup_plus_one,
        "hyperspace_rank_sup_only": sup_only,
        "base_rank_sup_plus_one": base_r.poset_rank,
        "base_rank_sup_only": max(base_r.elem_rank.values()),
        "flag": "rank conventions disagree; recorded without normalizing",
    }
