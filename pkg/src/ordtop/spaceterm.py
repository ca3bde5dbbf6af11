"""Symbolic calculus of scattered compact ordered spaces.

Terms denote spaces: ``ord(a)`` is the ordinal interval [0, a]; ``sum``
is the disjoint topological sum; ``prod`` the product; ``skel`` a
skeleton, i.e. a finite poset of distinguished points with strictly
increasing ordinal labels, standing for a canonical selector whose set at
a point is unitary of the labeled height.  Skeletons carry semantics, not
point sets: a finite explicit space would trivialize every height to 0,
so heights are computed from the labels alone.

The module computes height/end-point reports for terms, the exact bound
chain height <= rank < w^height * (endpoints+1) < w^(height+1), and the
hyperspace height calculus: a point of rank r contributes 0, 1 or
w^a (where 1+a = r) and an antichain contributes the natural sum of its
points' contributions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Union

from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    format_ordinal,
    nat_sum,
    one_plus_inverse,
    ord_add,
    ord_mul,
    ord_pow,
    parse_ordinal,
)
from .poset import FinitePoset, _bits, antichain_masks, poset_from_json


class TermError(ValueError):
    pass


@dataclass(frozen=True)
class OrdSpace:
    alpha: Ordinal


@dataclass(frozen=True)
class SumTerm:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise TermError("sum needs at least one part")


@dataclass(frozen=True)
class ProdTerm:
    left: "SpaceTerm"
    right: "SpaceTerm"


@dataclass(frozen=True)
class Skeleton:
    """Finite poset of distinguished points with ordinal height labels.

    Labels must strictly increase along the order; each element stands for
    a unitary selector set of that height, with the rank of the element
    equal to its height.
    """

    poset: FinitePoset
    labels: tuple  # Ordinal per element index

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.poset.n:
            raise TermError("one label per element required")
        for i in range(self.poset.n):
            for j in range(self.poset.n):
                if self.poset.lt(i, j) and not self.labels[i] < self.labels[j]:
                    raise TermError("labels must strictly increase along the order")

    def label_of(self, name: str) -> Ordinal:
        return self.labels[self.poset.index(name)]


@dataclass(frozen=True)
class SkelTerm:
    skeleton: Skeleton


SpaceTerm = Union[OrdSpace, SumTerm, ProdTerm, SkelTerm]


@dataclass(frozen=True)
class SpaceReport:
    height: Ordinal
    endpoint_count: int
    rank: Ordinal | None  # None means not computed for this term shape

    @property
    def unitary(self) -> bool:
        return self.endpoint_count == 1

    def to_json(self) -> dict:
        return {
            "height": format_ordinal(self.height),
            "endpoint_count": self.endpoint_count,
            "unitary": self.unitary,
            "rank": format_ordinal(self.rank) if self.rank is not None else "not-computed",
        }


def term_report(t: SpaceTerm) -> SpaceReport:
    """Height, end-point count and (where defined) rank of a space term.

    For [0, a] the rank is taken along the linear selector of all initial
    intervals, giving a+1; products combine heights by natural sum and
    multiply end-point counts; sums take the maximal height and add the
    counts of the parts attaining it, with no canonical rank.
    """
    if isinstance(t, OrdSpace):
        a = t.alpha
        if a.is_finite:
            return SpaceReport(ZERO, int(a) + 1, ord_add(a, ONE))
        return SpaceReport(a.degree, a.leading_coeff, ord_add(a, ONE))
    if isinstance(t, SumTerm):
        reports = [term_report(p) for p in t.parts]
        top = max((r.height for r in reports))
        count = sum(r.endpoint_count for r in reports if r.height == top)
        return SpaceReport(top, count, None)
    if isinstance(t, ProdTerm):
        lr, rr = term_report(t.left), term_report(t.right)
        return SpaceReport(nat_sum(lr.height, rr.height),
                           lr.endpoint_count * rr.endpoint_count, None)
    if isinstance(t, SkelTerm):
        sk = t.skeleton
        if sk.poset.n == 0:
            raise TermError("skeleton must have at least one point")
        maxima = list(_bits(sk.poset.max_of(sk.poset.full_mask())))
        top = max(sk.labels[i] for i in maxima)
        count = sum(1 for i in maxima if sk.labels[i] == top)
        return SpaceReport(top, count, top)
    raise TermError(f"not a space term: {t!r}")


@dataclass
class BoundsReport:
    height: Ordinal
    rank: Ordinal
    endpoint_count: int
    height_le_rank: bool
    rank_lt_scaled: bool
    scaled_lt_next_power: bool

    @property
    def passed(self) -> bool:
        return self.height_le_rank and self.rank_lt_scaled and self.scaled_lt_next_power

    def to_json(self) -> dict:
        return {
            "check": "height-rank-bounds",
            "pass": self.passed,
            "witness": None if self.passed else {
                "height": format_ordinal(self.height),
                "rank": format_ordinal(self.rank),
            },
            "inequalities": {
                "height<=rank": self.height_le_rank,
                "rank<w^h*(endpts+1)": self.rank_lt_scaled,
                "w^h*(endpts+1)<w^(h+1)": self.scaled_lt_next_power,
            },
        }


def check_height_rank_bounds(t: SpaceTerm) -> BoundsReport:
    """Exact bound chain height <= rank < w^h*(endpts+1) < w^(h+1)."""
    rep = term_report(t)
    if rep.rank is None:
        raise TermError("rank is not computed for this term shape")
    scaled = ord_mul(ord_pow(OMEGA, rep.height), Ordinal.from_int(rep.endpoint_count + 1))
    nxt = ord_pow(OMEGA, ord_add(rep.height, ONE))
    return BoundsReport(
        height=rep.height, rank=rep.rank, endpoint_count=rep.endpoint_count,
        height_le_rank=rep.height <= rep.rank,
        rank_lt_scaled=rep.rank < scaled,
        scaled_lt_next_power=scaled < nxt,
    )


# -- hyperspace height calculus -------------------------------------------

def hyper_point_height(r: Ordinal) -> Ordinal:
    """Height, in the hyperspace, of the selector set of a rank-r point:
    0 for r = 0, 1 for r = 1, and w^a with 1+a = r otherwise."""
    if r.is_zero:
        return ZERO
    if r == ONE:
        return ONE
    return Ordinal.omega_power(one_plus_inverse(r))


def hyper_antichain_height(labels: Iterable[Ordinal]) -> Ordinal:
    """Natural sum of the point contributions of an antichain's labels."""
    labels = list(labels)
    if not labels:
        raise TermError("antichain must be nonempty")
    out = ZERO
    for r in labels:
        out = nat_sum(out, hyper_point_height(r))
    return out


@dataclass
class SkeletonBoundReport:
    bound: Ordinal
    max_attained: Ordinal
    antichains_checked: int
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        return {
            "check": "hyperspace-height-bound",
            "pass": self.passed,
            "witness": self.witness,
            "bound": format_ordinal(self.bound),
            "max_attained": format_ordinal(self.max_attained),
            "antichains": self.antichains_checked,
        }


def skeleton_hyper_bound_check(sk: Skeleton) -> SkeletonBoundReport:
    """Every antichain's hyperspace height stays below w^rank, where the
    rank of the skeleton is max label + 1."""
    rank = ord_add(max(sk.labels), ONE) if sk.labels else ZERO
    bound = ord_pow(OMEGA, rank)
    best = ZERO
    witness = None
    count = 0
    passed = True
    for mask in antichain_masks(sk.poset):
        if not mask:
            continue
        count += 1
        h = hyper_antichain_height([sk.labels[i] for i in _bits(mask)])
        if best < h:
            best = h
        if not h < bound:
            passed = False
            witness = sorted(sk.poset.names(mask))
    return SkeletonBoundReport(bound, best, count, passed, witness)


@dataclass
class MonotonicityReport:
    """Strictness of the hyperspace height along strict downset inclusion
    of antichains.

    Ties can only arise when the smaller antichain differs from the larger
    one by height-0 points alone (their selector sets are singletons and
    contribute nothing to the natural sum); those pairs are reported
    separately from genuine order violations, which would be fatal.
    """

    pairs_checked: int
    strict_pairs: int
    ties: list = field(default_factory=list)
    inversions: list = field(default_factory=list)
    ties_all_zero_label: bool = True

    @property
    def passed(self) -> bool:
        return not self.inversions and self.ties_all_zero_label

    def to_json(self) -> dict:
        return {
            "check": "hyperspace-monotonicity",
            "pass": self.passed,
            "witness": (self.inversions or self.ties or [None])[0] if not self.passed else None,
            "pairs": self.pairs_checked,
            "strict": self.strict_pairs,
            "ties": len(self.ties),
        }


def _is_forest(p: FinitePoset) -> bool:
    for z in range(p.n):
        ups = [j for j in range(p.n) if p.lt(z, j)]
        for a in ups:
            for b in ups:
                if a != b and not p.lt(a, b) and not p.lt(b, a):
                    return False
    return True


def hyper_monotonicity_check(sk: Skeleton) -> MonotonicityReport:
    """Compare hyperspace heights over all pairs of antichains ordered by
    strict downset inclusion (forest skeletons only, where selector sets
    are nested or disjoint and the piecewise decomposition is exact)."""
    p = sk.poset
    if not _is_forest(p):
        raise TermError("skeleton is not a forest")
    masks = [m for m in antichain_masks(p) if m]
    downs = {m: p.close_down(m) for m in masks}
    heights = {m: hyper_antichain_height([sk.labels[i] for i in _bits(m)])
               for m in masks}
    checked = strict = 0
    ties = []
    inversions = []
    all_zero = True
    for rho in masks:
        for sigma in masks:
            dr, ds = downs[rho], downs[sigma]
            if dr == ds or dr & ~ds:
                continue
            checked += 1
            hr, hs = heights[rho], heights[sigma]
            if hr < hs:
                strict += 1
            elif hr == hs:
                pair = (sorted(p.names(rho)), sorted(p.names(sigma)))
                ties.append(pair)
                # a tie must be explained by height-0 shrinkage alone
                pos_sigma = {i for i in _bits(sigma) if not sk.labels[i].is_zero}
                if not all(rho >> i & 1 for i in pos_sigma):
                    all_zero = False
            else:
                inversions.append((sorted(p.names(rho)), sorted(p.names(sigma))))
    return MonotonicityReport(checked, strict, ties, inversions, all_zero)


# -- term syntax -------------------------------------------------------------
#
#   ord(<ordinal>) | sum(t1,t2,...) | prod(t1,t2) | skel(<poset-json>, {elem: ord})

def parse_term(text: str) -> SpaceTerm:
    term, pos = _parse_term(text, 0)
    if text[pos:].strip():
        raise TermError(f"trailing input after term: {text[pos:].strip()!r}")
    return term


def _parse_term(text: str, pos: int):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    for head in ("ord", "sum", "prod", "skel"):
        if text.startswith(head, pos):
            open_at = text.find("(", pos + len(head))
            if open_at < 0 or text[pos + len(head):open_at].strip():
                raise TermError(f"expected '(' after {head!r}")
            inner, after = _balanced(text, open_at)
            if head == "ord":
                return OrdSpace(parse_ordinal(inner)), after
            if head == "skel":
                parts = _split_args(inner)
                if len(parts) != 2:
                    raise TermError("skel takes a poset and a label map")
                poset = poset_from_json(json.loads(parts[0]))
                raw = json.loads(parts[1])
                labels = [None] * poset.n
                for name, val in raw.items():
                    labels[poset.index(name)] = (
                        Ordinal.from_int(val) if isinstance(val, int) else parse_ordinal(val))
                if any(v is None for v in labels):
                    raise TermError("label map must cover every element")
                return SkelTerm(Skeleton(poset, tuple(labels))), after
            args = [parse_term(a) for a in _split_args(inner)]
            if head == "sum":
                return SumTerm(tuple(args)), after
            if len(args) != 2:
                raise TermError("prod takes exactly two terms")
            return ProdTerm(args[0], args[1]), after
    raise TermError(f"expected a space term at position {pos}")


def _balanced(text: str, open_at: int):
    """Contents of the parenthesized group opening at ``open_at`` and the
    index just past its closing parenthesis."""
    depth = 0
    in_string = False
    for i in range(open_at, len(text)):
        ch = text[i]
        if in_string:
            in_string = ch != '"'
        elif ch == '"':
            in_string = True
        elif ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth == 0:
                return text[open_at + 1:i], i + 1
    raise TermError("unbalanced parentheses")


def _split_args(inner: str) -> list:
    parts = []
    depth = 0
    in_string = False
    start = 0
    for i, ch in enumerate(inner):
        if in_string:
            in_string = ch != '"'
        elif ch == '"':
            in_string = True
        elif ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(inner[start:i])
            start = i + 1
    parts.append(inner[start:])
    return [p for p in parts if p.strip()]


def format_term(t: SpaceTerm) -> str:
    if isinstance(t, OrdSpace):
        return f"ord({format_ordinal(t.alpha, compact=True)})"
    if isinstance(t, SumTerm):
        return "sum(" + ",".join(format_term(p) for p in t.parts) + ")"
    if isinstance(t, ProdTerm):
        return f"prod({format_term(t.left)},{format_term(t.right)})"
    if isinstance(t, SkelTerm):
        from .poset import poset_to_json
        sk = t.skeleton
        labels = {sk.poset.labels[i]: format_ordinal(sk.labels[i], compact=True)
                  for i in range(sk.poset.n)}
        return (f"skel({json.dumps(poset_to_json(sk.poset), sort_keys=True)},"
                f"{json.dumps(labels, sort_keys=True)})")
    raise TermError(f"not a space term: {t!r}")
