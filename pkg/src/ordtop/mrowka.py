"""Almost disjoint families over the naturals with decidable representations.

Family members are eventually periodic: a residue set modulo a period,
toggled by a finite symmetric difference.  That makes membership, infinitude
and pairwise almost-disjointness all decidable by residue arithmetic, with an
infinite-intersection certificate (a common residue class) on failure.

On top of the families this module builds the finite-subset coding of the
star construction, the join of the quotient semilattice over a family
(finite sets, branches, and a top), net-convergence certificates for that
join, finite stages of the Lusin construction with exact fresh-intersection
counts, and the canonical-selector check for the associated compact space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

SCAN_CAP = 10_000_000


class MrowkaError(ValueError):
    pass


@dataclass(frozen=True)
class EvPeriodicSet:
    """Symmetric difference of {n : n mod period in residues} with a
    finite toggle set."""

    period: int
    residues: frozenset
    delta: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "residues", frozenset(self.residues))
        object.__setattr__(self, "delta", frozenset(self.delta))
        if self.period < 1:
            raise MrowkaError("period must be positive")
        if any(r < 0 or r >= self.period for r in self.residues):
            raise MrowkaError("residues must lie in [0, period)")
        if any(d < 0 for d in self.delta):
            raise MrowkaError("delta members must be naturals")

    @property
    def is_infinite(self) -> bool:
        return bool(self.residues)

    def contains(self, n: int) -> bool:
        return (n % self.period in self.residues) != (n in self.delta)

    def ascending(self, start: int = 0):
        """Members in increasing order, striding by residues rather than
        scanning every natural."""
        added = sorted(x for x in self.delta
                       if x >= start and x % self.period not in self.residues)
        removed = self.delta - frozenset(added)
        res = sorted(self.residues)
        ai = 0
        base = start - (start % self.period)
        while base < SCAN_CAP:
            for r in res:
                n = base + r
                if n < start:
                    continue
                while ai < len(added) and added[ai] < n:
                    yield added[ai]
                    ai += 1
                if n not in removed:
                    yield n
            base += self.period
            if not res:
                break
        yield from added[ai:]
        if res:
            raise MrowkaError("scan cap exceeded")

    def elements_below(self, limit: int) -> list:
        return [n for n in range(limit) if self.contains(n)]

    def to_json(self) -> dict:
        return {"period": self.period,
                "residues": sorted(self.residues),
                "delta": sorted(self.delta)}


def common_residue_classes(a: EvPeriodicSet, b: EvPeriodicSet) -> list:
    """Residue classes mod lcm of the periods along which both sets are
    eventually full; nonempty exactly when the intersection is infinite."""
    modulus = lcm(a.period, b.period)
    return [r for r in range(modulus)
            if r % a.period in a.residues and r % b.period in b.residues]


@dataclass
class ADReport:
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        return {"check": "almost-disjoint", "pass": self.passed, "witness": self.witness}


def ad_check(sets: Sequence[EvPeriodicSet]) -> ADReport:
    """Pairwise almost-disjointness by residue arithmetic; on failure the
    witness names the offending pair and a common residue class."""
    for k, s in enumerate(sets):
        if not isinstance(s, EvPeriodicSet):
            raise MrowkaError("ad_check needs eventually periodic sets")
        if not s.is_infinite:
            raise MrowkaError(f"set {k} is finite")
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            common = common_residue_classes(sets[i], sets[j])
            if common:
                modulus = lcm(sets[i].period, sets[j].period)
                return ADReport(False, {"pair": [i, j],
                                        "residue": common[0],
                                        "modulus": modulus})
    return ADReport(True)


@dataclass(frozen=True)
class ADFamily:
    """Validated almost disjoint family of infinite eventually periodic sets."""

    sets: tuple

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        report = ad_check(self.sets)
        if not report.passed:
            raise MrowkaError(f"family is not almost disjoint: {report.witness}")

    @classmethod
    def progressions(cls, modulus: int) -> "ADFamily":
        return cls(tuple(EvPeriodicSet(modulus, frozenset({r})) for r in range(modulus)))

    @classmethod
    def from_json(cls, data: dict) -> "ADFamily":
        if "sets" not in data:
            raise MrowkaError("family JSON must have a 'sets' field")
        return cls(tuple(EvPeriodicSet(s["period"], frozenset(s.get("residues", ())),
                                       frozenset(s.get("delta", ())))
                         for s in data["sets"]))

    def to_json(self) -> dict:
        return {"sets": [s.to_json() for s in self.sets]}

    def __len__(self) -> int:
        return len(self.sets)


# -- the quotient semilattice ------------------------------------------------

@dataclass(frozen=True)
class GPoint:
    """Point of the quotient semilattice over a family: a nonempty finite
    set of naturals, a branch of the family, or the collapsed top."""

    kind: str
    fin: frozenset = frozenset()
    branch: int = -1

    def __post_init__(self):
        if self.kind not in ("fin", "branch", "top"):
            raise MrowkaError(f"bad point kind {self.kind!r}")
        if self.kind == "fin" and not self.fin:
            raise MrowkaError("finite point must be nonempty")
        if self.kind == "branch" and self.branch < 0:
            raise MrowkaError("branch index out of range")

    @classmethod
    def fin_pt(cls, xs: Iterable[int]) -> "GPoint":
        return cls("fin", frozenset(xs))

    @classmethod
    def branch_pt(cls, i: int) -> "GPoint":
        return cls("branch", branch=i)

    @classmethod
    def top(cls) -> "GPoint":
        return cls("top")

    def __str__(self) -> str:
        if self.kind == "fin":
            return "fin:" + ",".join(map(str, sorted(self.fin)))
        if self.kind == "branch":
            return f"branch:{self.branch}"
        return "top"


def g_join(x: GPoint, y: GPoint, fam: ADFamily) -> GPoint:
    """Join in the quotient: the image of the union of the two downsets.

    Finite sets join by union; a finite set absorbed by a branch's set
    joins into the branch, otherwise the pair collapses to the top; two
    distinct branches always collapse.
    """
    for p in (x, y):
        if p.kind == "branch" and p.branch >= len(fam.sets):
            raise MrowkaError("branch index out of range")
    if x.kind == "top" or y.kind == "top":
        return GPoint.top()
    if x.kind == "branch" and y.kind == "branch":
        return x if x.branch == y.branch else GPoint.top()
    if x.kind == "fin" and y.kind == "fin":
        return GPoint.fin_pt(x.fin | y.fin)
    fin, br = (x, y) if x.kind == "fin" else (y, x)
    a = fam.sets[br.branch]
    if all(a.contains(n) for n in fin.fin):
        return br
    return GPoint.top()


def g_leq(x: GPoint, y: GPoint, fam: ADFamily) -> bool:
    """Induced order: x <= y iff x v y = y."""
    return g_join(x, y, fam) == y


# -- star construction ---------------------------------------------------------

def code_of(sigma: Iterable[int]) -> int:
    out = 0
    for k in sigma:
        out |= 1 << k
    return out


def support_of(code: int) -> frozenset:
    return frozenset(i for i in range(code.bit_length()) if code >> i & 1)


@dataclass
class StarReport:
    passed: bool
    code_bound: int
    sizes: list
    witness: object = None

    def to_json(self) -> dict:
        return {"check": "star-truncation", "pass": self.passed,
                "witness": self.witness, "sizes": self.sizes}


def star_truncation(fam: ADFamily, n_bound: int):
    """Codes of the nonempty finite subsets of each branch, truncated to
    code values below ``n_bound`` (a set codes as the sum of 2^k over its
    members).

    The pairwise intersection law is re-verified exactly: the shared codes
    of two branches are the codes of the finite subsets of the (finite)
    intersection.
    """
    if n_bound > 1 << 24:
        raise MrowkaError("code bound exceeded (max 2^24)")
    bits = max(0, (n_bound - 1).bit_length())
    per_branch = []
    for a in fam.sets:
        mask = sum(1 << k for k in range(bits) if a.contains(k))
        per_branch.append(frozenset(_submasks_below(mask, n_bound)))
    passed = True
    witness = None
    for i in range(len(per_branch)):
        for j in range(i + 1, len(per_branch)):
            inter_mask = (sum(1 << k for k in range(bits) if fam.sets[i].contains(k))
                          & sum(1 << k for k in range(bits) if fam.sets[j].contains(k)))
            expected = frozenset(_submasks_below(inter_mask, n_bound))
            if per_branch[i] & per_branch[j] != expected:
                passed = False
                witness = {"pair": [i, j]}
    report = StarReport(passed, n_bound, [len(c) for c in per_branch], witness)
    return {i: per_branch[i] for i in range(len(per_branch))}, report


def _submasks_below(mask: int, n_bound: int):
    s = mask
    while True:
        if s and s < n_bound:
            yield s
        if s == 0:
            return
        s = (s - 1) & mask


# -- convergence of joins --------------------------------------------------------

@dataclass
class ConvergenceReport:
    threshold: int
    horizon: int
    witnesses: dict
    first_nonempty: tuple
    prefix_growth: bool

    @property
    def passed(self) -> bool:
        return self.prefix_growth

    def to_json(self) -> dict:
        return {"check": "join-convergence", "pass": self.passed,
                "witness": None if self.passed else "prefixes stalled",
                "threshold": self.threshold,
                "escape_witnesses": {str(k): v for k, v in self.witnesses.items()}}


def convergence_check(fam: ADFamily, i: int, j: int, horizon: int) -> ConvergenceReport:
    """Certify, below a horizon, the convergence behaviour of prefix nets:
    the prefixes of branch i converge to the branch point (they grow
    without bound inside it), while the joins of the prefixes of branches
    i and j escape every branch from a threshold on.

    The threshold is the least n at which both prefixes are nonempty and
    their union already fails to sit inside any branch; unions only grow,
    so escape is permanent once witnessed.
    """
    if i == j:
        raise MrowkaError("branch indices must differ")
    if not (0 <= i < len(fam.sets) and 0 <= j < len(fam.sets)):
        raise MrowkaError("branch index out of range")
    a, b = fam.sets[i], fam.sets[j]
    threshold = None
    witnesses: dict = {}
    first_i = first_j = None
    sigma: set = set()
    tau: set = set()
    for n in range(1, horizon + 1):
        if a.contains(n - 1):
            sigma.add(n - 1)
        if b.contains(n - 1):
            tau.add(n - 1)
        if first_i is None and sigma:
            first_i = n
        if first_j is None and tau:
            first_j = n
        if threshold is None and sigma and tau:
            joined = g_join(GPoint.fin_pt(sigma), GPoint.fin_pt(tau), fam)
            if joined != GPoint.fin_pt(sigma | tau):
                raise AssertionError("join of finite prefixes must be their union")
            escape = {}
            union = sigma | tau
            for k, branch_set in enumerate(fam.sets):
                out = [x for x in union if not branch_set.contains(x)]
                if not out:
                    escape = None
                    break
                escape[k] = min(out)
            if escape is not None:
                threshold = n
                witnesses = escape
    if threshold is None:
        raise MrowkaError("horizon too small to certify (threshold not reached)")
    # permanence scan: past the threshold the union stays outside every branch
    union = set(a.elements_below(horizon)) | set(b.elements_below(horizon))
    for k, branch_set in enumerate(fam.sets):
        if all(branch_set.contains(x) for x in union):
            raise AssertionError("union of full prefixes re-entered a branch")
    growth = (len(a.elements_below(horizon)) >= 2
              and len(a.elements_below(horizon)) > len(a.elements_below(horizon // 2)))
    return ConvergenceReport(threshold, horizon, witnesses,
                             (first_i, first_j), growth)


# -- Lusin stages ------------------------------------------------------------------

@dataclass(frozen=True)
class LusinStage:
    """Finite stage of the Lusin construction: for each prior set, the
    block of fresh elements taken from it (the n-th block has exactly n
    members that avoid all earlier sets).  The stage is the finite
    certificate of the new set; its unconstructed continuation is the
    disjoint tail living outside the listed sets (empty when they cover
    the naturals)."""

    blocks: tuple
    m: int
    l1_counts: tuple

    @cached_property
    def elements(self) -> frozenset:
        return frozenset(x for block in self.blocks for x in block)

    def contains(self, n: int) -> bool:
        return n in self.elements

    @property
    def is_infinite(self) -> bool:
        return False  # only the finite certificate is materialized


def _members_ascending(s):
    if isinstance(s, EvPeriodicSet):
        return s.ascending()
    if isinstance(s, LusinStage):
        return iter(sorted(s.elements))
    if isinstance(s, (set, frozenset)):
        return iter(sorted(s))
    raise MrowkaError(f"unsupported set representation: {type(s).__name__}")


class _MembershipIndex:
    """Positions of the prior sets containing a given natural, resolved in
    O(1)-ish time: one residue lookup per period group plus hash lookups
    for the finite certificates (delta toggles checked individually)."""

    def __init__(self, prev: Sequence):
        self.by_period: dict = {}
        self.finite: dict = {}
        self.slow: list = []
        for n, s in enumerate(prev):
            if isinstance(s, EvPeriodicSet):
                if s.delta:
                    self.slow.append((n, s))
                else:
                    table = self.by_period.setdefault(s.period, {})
                    for r in s.residues:
                        table.setdefault(r, []).append(n)
            elif isinstance(s, (LusinStage, set, frozenset)):
                members = s.elements if isinstance(s, LusinStage) else s
                for x in members:
                    self.finite.setdefault(x, []).append(n)
            else:
                raise MrowkaError(f"unsupported set representation: {type(s).__name__}")

    def positions(self, x: int) -> list:
        out = list(self.finite.get(x, ()))
        for period, table in self.by_period.items():
            out.extend(table.get(x % period, ()))
        for n, s in self.slow:
            if s.contains(x):
                out.append(n)
        out.sort()
        return out


def lusin_stage(prev: Sequence, strategy: str = "greedy-least") -> LusinStage:
    """Build the next set against the enumerated prior family: exactly n
    fresh elements inside the n-th prior set, fresh meaning outside all
    earlier ones.  The greedy-least strategy always picks the least
    candidates.

    Raises when some prior set cannot supply n fresh elements, or when the
    eventually periodic members of ``prev`` fail almost-disjointness.
    """
    if strategy != "greedy-least":
        raise MrowkaError(f"unknown strategy {strategy!r}")
    periodic = [s for s in prev if isinstance(s, EvPeriodicSet)]
    for s in periodic:
        if not s.is_infinite:
            raise MrowkaError("prior set is finite")
    rep = ad_check(periodic)
    if not rep.passed:
        raise MrowkaError(f"non-AD input: {rep.witness}")

    m = len(prev)
    index = _MembershipIndex(prev)
    blocks = []
    for n in range(m):
        chosen = []
        if n:
            for x in _members_ascending(prev[n]):
                if index.positions(x)[0] < n:
                    continue
                chosen.append(x)
                if len(chosen) == n:
                    break
            if len(chosen) < n:
                raise MrowkaError(
                    f"prior set {n} has fewer than {n} elements outside its predecessors")
        blocks.append(tuple(chosen))

    stage = LusinStage(tuple(blocks), m, ())
    # exact-count recount over the finished element set
    counts = [0] * m
    maxima = [-1] * m
    for x in stage.elements:
        pos = index.positions(x)
        counts[pos[0]] += 1
        for n in pos:
            if x > maxima[n]:
                maxima[n] = x
    for n in range(m):
        if counts[n] != n:
            raise AssertionError(f"fresh-intersection count at {n} is {counts[n]}, wanted {n}")
    # finite consequence of the splitting condition: for each probe k, how
    # many prior sets meet the new set only below k (boundedly many)
    probes = sorted({0, 1} | {max(b) + 1 for b in blocks if b})
    l1 = tuple((k, sum(1 for n in range(m) if maxima[n] < k)) for k in probes)
    return LusinStage(tuple(blocks), m, l1)


def lusin_iterate(base: ADFamily, steps: int) -> list:
    """Run consecutive stages, enumerating newest stages first so that
    every prior set still has fresh elements to offer."""
    stages: list = []
    for _ in range(steps):
        prev = list(reversed(stages)) + list(base.sets)
        stages.append(lusin_stage(prev))
    return stages


# -- canonical selector of the compact space ---------------------------------------

@dataclass
class SelectorCheckReport:
    conditions: dict
    induced_order_ok: bool
    ad_ok: bool
    heights_ok: bool
    witness: object = None

    @property
    def passed(self) -> bool:
        return (all(self.conditions.values()) and self.induced_order_ok
                and self.ad_ok and self.heights_ok)

    def to_json(self) -> dict:
        return {"check": "mrowka-selector", "pass": self.passed,
                "witness": self.witness, "conditions": self.conditions,
                "induced_order": self.induced_order_ok, "ad": self.ad_ok,
                "heights": self.heights_ok}


def mrowka_selector_check(sets: Sequence[EvPeriodicSet] | ADFamily,
                          truncation: int) -> SelectorCheckReport:
    """Check the canonical selector of the compactified family space on a
    truncated point set: singletons at the naturals, the branch sets at
    the branches, everything at the top point.

    Clopenness of a branch set needs almost-disjointness (an infinite
    shared residue class makes one branch accumulate inside another); that
    is certified by residue arithmetic and reported with a witness.
    """
    members = tuple(sets.sets) if isinstance(sets, ADFamily) else tuple(sets)
    points = list(range(truncation)) + [("branch", k) for k in range(len(members))] + ["inf"]
    u: dict = {}
    for n in range(truncation):
        u[n] = frozenset({n})
    for k, a in enumerate(members):
        # closure of the branch set: another branch accumulating inside it
        # (infinite overlap) belongs to the closure, spoiling the selector
        accumulating = {("branch", j) for j, b in enumerate(members)
                        if j != k and common_residue_classes(a, b)}
        u[("branch", k)] = (frozenset(a.elements_below(truncation))
                            | {("branch", k)} | accumulating)
    u["inf"] = frozenset(points)

    conditions = {"membership": True, "antisymmetry": True, "nesting": True}
    witness = None
    for x in points:
        if x not in u[x]:
            conditions["membership"] = False
            witness = witness or ("membership", str(x))
    for x in points:
        for y in points:
            if x != y and x in u[y] and y in u[x]:
                conditions["antisymmetry"] = False
                witness = witness or ("antisymmetry", (str(x), str(y)))
    for x in points:
        for y in u[x]:
            if not u[y] <= u[x]:
                conditions["nesting"] = False
                witness = witness or ("nesting", (str(x), str(y)))

    induced_ok = True
    for n in range(truncation):
        for k, a in enumerate(members):
            if (n in u[("branch", k)]) != a.contains(n):
                induced_ok = False
    for k in range(len(members)):
        if ("branch", k) not in u["inf"]:
            induced_ok = False

    ad_ok = True
    try:
        rep = ad_check(members)
        ad_ok = rep.passed
        if not rep.passed:
            witness = witness or ("infinite overlap", rep.witness)
    except MrowkaError as e:
        ad_ok = False
        witness = witness or ("bad member", str(e))

    # combinatorial heights: naturals 0, branches 1 (nonempty at the
    # truncation and certified infinite), top 2
    heights_ok = all(a.is_infinite and a.elements_below(truncation)
                     for a in members) and bool(members)
    if not heights_ok:
        witness = witness or ("heights", "branch empty at truncation")

    return SelectorCheckReport(conditions, induced_ok, ad_ok, heights_ok, witness)
