"""Acceptance battery: every check the package must pass, exactly at the
stated sizes and budgets.

Each criterion is a seeded, deterministic function returning pass/fail
plus a human-readable detail line; the pytest suite and the CLI selftest
both run this list.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations

from .clopen import clopen_cb, cnf_truncation_grid, min_clopen_with_endpoint, tip_selector
from .hyperspace import (
    Descriptor,
    FinJoinSemilattice,
    OnePointModel,
    build_hyperspace,
    hat_extension,
    kplus_selector,
    selector_axioms_check,
    vietoris_density_witness,
)
from .mrowka import (
    ADFamily,
    GPoint,
    convergence_check,
    g_join,
    lusin_stage,
    mrowka_selector_check,
    star_truncation,
)
from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    format_ordinal,
    nat_prod,
    nat_sum,
    nat_sum_split_below,
    odot,
    ord_pow,
    parse_ordinal,
    random_ordinal,
    random_ordinal_below,
    tip_deg,
)
from .poset import (
    all_labeled_posets,
    _kw_rank_masks,
    random_poset,
    ranks,
    zaguia_verify,
)
from .spaceterm import (
    OrdSpace,
    ProdTerm,
    check_height_rank_bounds,
    hyper_antichain_height,
    hyper_point_height,
    term_report,
)

P = parse_ordinal

EXAMPLE_LABELS = ("0", "1", "1", "2", "10", "10", "w+7", "3")
EXAMPLE_VALUE = "w^(w+7) + w^9*2 + w^2 + w + 2"


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion-{self.number:02d} {self.name} ({self.elapsed:.3f}s) {self.detail}"


def _fail(detail):
    return False, detail


def criterion_01_example_antichain(seed: int):
    labels = [P(x) for x in EXAMPLE_LABELS]
    t0 = time.perf_counter()
    value = hyper_antichain_height(labels)
    text = format_ordinal(value)
    dt = time.perf_counter() - t0
    if text != EXAMPLE_VALUE:
        return _fail(f"got {text!r}")
    if dt >= 0.010:
        return _fail(f"took {dt * 1000:.2f}ms (budget 10ms)")
    return True, f"{text} in {dt * 1e6:.0f}us"


def criterion_02_nat_sum_example(seed: int):
    a = P("w^(w+w)*8 + w^7*3")
    b = P("w^w + w^7 + w^2 + 5")
    want = P("w^(w+w)*8 + w^w + w^7*4 + w^2 + 5")
    got = nat_sum(a, b)
    if got != want:
        return _fail(f"got {got}")
    return True, str(got)


def criterion_03_hessenberg_examples(seed: int):
    two = Ordinal.from_int(2)
    checks = [
        (nat_prod(OMEGA, two), P("w+w"), "w(x)2"),
        (nat_prod(two, OMEGA), P("w+w"), "2(x)w"),
        (odot(OMEGA, 2), P("w+w"), "w(.)2"),
        (odot(two, OMEGA), OMEGA, "2(.)w"),
    ]
    for got, want, label in checks:
        if got != want:
            return _fail(f"{label} gave {got}, wanted {want}")
    return True, "all four products agree"


def criterion_04_tip_examples(seed: int):
    if tip_deg(P("w^w*2 + w^7 + w^3*5")).tip != P("w^3"):
        return _fail("first tip wrong")
    if tip_deg(P("w+5")).tip != ONE:
        return _fail("second tip wrong")
    return True, "tip(w^w*2+w^7+w^3*5)=w^3, tip(w+5)=1"


def criterion_05_hyper_point_table(seed: int):
    table = {"0": "0", "1": "1", "2": "w", "3": "w^2",
             "10": "w^9", "w": "w^w", "w+7": "w^(w+7)"}
    for r, want in table.items():
        if hyper_point_height(P(r)) != P(want):
            return _fail(f"height at rank {r} wrong")
    rng = random.Random(seed)
    pairs = 0
    while pairs < 1000:
        a = random_ordinal(rng, depth=1)
        b = random_ordinal(rng, depth=1)
        if a.is_zero or b.is_zero or a == b:
            continue
        lo, hi = (a, b) if a < b else (b, a)
        if not hyper_point_height(lo) < hyper_point_height(hi):
            return _fail(f"not strict at ({lo}, {hi})")
        pairs += 1
    return True, f"table exact, {pairs} strict pairs"


def criterion_06_nat_sum_properties(seed: int):
    rng = random.Random(seed)
    t0 = time.perf_counter()
    enum_checked = 0
    for trial in range(10_000):
        a = random_ordinal(rng, max_terms=6, depth=1, max_coeff=6)
        b = random_ordinal(rng, max_terms=6, depth=1, max_coeff=6)
        c = random_ordinal(rng, max_terms=6, depth=1, max_coeff=6)
        ab = nat_sum(a, b)
        if ab != nat_sum(b, a):
            return _fail("commutativity broke")
        if nat_sum(ab, c) != nat_sum(a, nat_sum(b, c)):
            return _fail("associativity broke")
        if nat_sum(a, ZERO) != a:
            return _fail("zero identity broke")
        # order equivalence and strict monotonicity in each argument
        if b != c:
            lo, hi = (b, c) if b < c else (c, b)
            if not nat_sum(a, lo) < nat_sum(a, hi):
                return _fail("monotonicity broke")
            if not nat_sum(lo, a) < nat_sum(hi, a):
                return _fail("left monotonicity broke")
        # closure below a power of w dominating both arguments
        delta = nat_sum(a.degree, b.degree) + 1
        if not nat_sum(a, b) < ord_pow(OMEGA, delta):
            return _fail("closure below w^delta broke")
        # decomposability of anything below the sum
        if not ab.is_zero:
            gamma = random_ordinal_below(rng, ab)
            a_half, b_half = nat_sum_split_below(gamma, a, b)
            if nat_sum(a_half, b_half) != gamma or not (a_half <= a and b_half <= b):
                return _fail(f"decomposition broke at {gamma}")
            if enum_checked < 150 and len(gamma.terms) <= 2 and all(
                    c <= 3 for _, c in gamma.terms):
                if not _decompose_by_enumeration(gamma, a, b):
                    return _fail(f"enumeration found no split of {gamma}")
                enum_checked += 1
    dt = time.perf_counter() - t0
    if dt >= 5.0:
        return _fail(f"took {dt:.2f}s (budget 5s)")
    return True, f"10000 triples, {enum_checked} enumerated splits, {dt:.2f}s"


def _decompose_by_enumeration(gamma, a, b):
    """Every split of gamma is a coefficient splitting of its terms; try
    them all and keep any with halves below a and b."""
    choices = [()]
    for e, c in gamma.terms:
        choices = [prev + ((e, k),) for prev in choices for k in range(c + 1)]
    for assignment in choices:
        left = Ordinal(tuple((e, k) for e, k in assignment if k))
        right = Ordinal(tuple((e, c - k) for (e, c), (_, k) in zip(gamma.terms, assignment)
                              if c - k))
        if left <= a and right <= b and nat_sum(left, right) == gamma:
            return True
    return False


def criterion_07_zaguia_suite(seed: int):
    rng = random.Random(seed)
    t0 = time.perf_counter()
    count = 0
    for n in range(1, 5):
        for p in all_labeled_posets(n):
            if not _zaguia_one(p):
                return _fail(f"exhaustive poset failed: {p!r}")
            count += 1
    for _ in range(1000):
        p = random_poset(rng, rng.choice([6, 7, 8]), rng.choice([0.25, 0.35, 0.5]))
        if not _zaguia_one(p):
            return _fail(f"random poset failed: {p!r}")
        count += 1
    dt = time.perf_counter() - t0
    if dt >= 30.0:
        return _fail(f"took {dt:.2f}s (budget 30s)")
    return True, f"{count} posets, {dt:.2f}s"


def _zaguia_one(p) -> bool:
    kw = _kw_rank_masks(p)
    items = list(kw.items())
    for i_mask, i_rank in items:
        for j_mask, j_rank in items:
            if i_mask != j_mask and i_mask & ~j_mask == 0 and not i_rank < j_rank:
                return False
    rep = zaguia_verify(p)
    return rep.passed


def criterion_08_hyperspace_suite(seed: int):
    rng = random.Random(seed)
    checked = unique_runs = 0
    for n in range(1, 6):
        posets = all_labeled_posets(n)
        for p in posets:
            h = build_hyperspace(p)  # structural identities assert inside
            hp, fam = kplus_selector(h)
            if not selector_axioms_check(hp, fam).passed:
                return _fail(f"selector axioms failed on {p!r}")
            checked += 1
    y3 = FinJoinSemilattice.chain(3)
    y2 = FinJoinSemilattice.chain(2)
    for n in range(1, 5):
        for p in all_labeled_posets(n):
            f = {p.labels[i]: min(ranks(p).by_index[i], 2) for i in range(p.n)}
            _, rep = hat_extension(p, y3, f)
            if not (rep.passed and rep.method == "enumerated"):
                return _fail(f"uniqueness failed on {p!r}")
            unique_runs += 1
    five = all_labeled_posets(5)
    for p in [five[rng.randrange(len(five))] for _ in range(80)]:
        f = {p.labels[i]: min(ranks(p).by_index[i], 1) for i in range(p.n)}
        _, rep = hat_extension(p, y2, f)
        if not (rep.passed and rep.method == "enumerated"):
            return _fail(f"uniqueness failed on {p!r}")
        unique_runs += 1
    return True, f"{checked} hyperspaces, {unique_runs} uniqueness runs"


def criterion_09_bound_chain(seed: int):
    rng = random.Random(seed)
    count = 0
    for _ in range(1000):
        alpha = _random_alpha_below_w_w_10(rng)
        if not check_height_rank_bounds(OrdSpace(alpha)).passed:
            return _fail(f"bounds failed at {alpha}")
        count += 1
    for n in range(1, 41):
        rep = check_height_rank_bounds(OrdSpace(P(f"w+{n}")))
        if not (rep.passed and rep.height == ONE and rep.rank == P(f"w+{n + 1}")):
            return _fail(f"sharpness family failed at n={n}")
        count += 1
    return True, f"{count} interval spaces"


def _random_alpha_below_w_w_10(rng):
    # finite-exponent normal forms, optionally headed by w^w * c with c <= 9
    alpha = random_ordinal(rng, max_terms=4, depth=0, max_coeff=9, max_finite_exp=7)
    if rng.random() < 0.3:
        head = Ordinal.omega_power(OMEGA, rng.randint(1, 9))
        alpha = nat_sum(head, alpha)
    return alpha


def criterion_10_product_rule(seed: int):
    rng = random.Random(seed)
    for _ in range(1000):
        a = random_ordinal(rng, max_terms=3, depth=1)
        b = random_ordinal(rng, max_terms=3, depth=1)
        ra, rb = term_report(OrdSpace(a)), term_report(OrdSpace(b))
        rp = term_report(ProdTerm(OrdSpace(a), OrdSpace(b)))
        if rp.height != nat_sum(ra.height, rb.height):
            return _fail(f"height rule failed at ({a}, {b})")
        if rp.endpoint_count != ra.endpoint_count * rb.endpoint_count:
            return _fail(f"endpoint product failed at ({a}, {b})")
        best = ZERO
        for x in _point_samples(rng, a):
            for y in _point_samples(rng, b):
                rx = ZERO if x.is_zero else tip_deg(x).tip_exponent
                ry = ZERO if y.is_zero else tip_deg(y).tip_exponent
                v = nat_sum(rx, ry)
                if best < v:
                    best = v
        if rp.height != best:
            return _fail(f"tip maximization disagrees at ({a}, {b})")
    return True, "1000 products"


def _point_samples(rng, alpha):
    pts = {ZERO, alpha}
    if not alpha.is_zero and not alpha.is_finite:
        pts.add(Ordinal.omega_power(alpha.degree))  # a rank maximizer
    for _ in range(4):
        if not alpha.is_zero:
            pts.add(random_ordinal_below(rng, alpha))
    return pts


def criterion_11_tip_selector(seed: int):
    rng = random.Random(seed)
    ambient = P("w^w*5")
    betas = []
    while len(betas) < 1000:
        beta = random_ordinal_below(rng, ambient)
        betas.append(beta)
    intervals = []
    for beta in betas:
        u = tip_selector(beta, ambient)
        data = clopen_cb(u)
        if not data.unitary or data.lastpt != beta:
            return _fail(f"selector set not unitary at {beta}")
        if not beta.is_zero:
            if data.height != tip_deg(beta).tip_exponent:
                return _fail(f"height wrong at {beta}")
            intervals.append(u.intervals[0])
        grid = cnf_truncation_grid(beta)
        if beta.is_zero:
            continue
        if min_clopen_with_endpoint(beta, ambient, grid) != u:
            return _fail(f"grid search disagrees at {beta}")
    for (s1, t1), (s2, t2) in combinations(intervals, 2):
        disjoint = t1 <= s2 or t2 <= s1
        nested = (s2 <= s1 and t1 <= t2) or (s1 <= s2 and t2 <= t1)
        if not (disjoint or nested):
            return _fail(f"not laminar: ({s1},{t1}] vs ({s2},{t2}]")
    return True, f"{len(betas)} selector sets, {len(intervals)} laminar intervals"


def criterion_12_mrowka_suite(seed: int):
    fam4 = ADFamily.progressions(4)
    # exhaustive semilattice axioms: all nonempty subsets of [0,8), 4
    # branches and the top, with the join table built from the real join
    branch_masks = [sum(1 << k for k in range(8) if fam4.sets[r].contains(k))
                    for r in range(4)]
    points = [GPoint.fin_pt(frozenset(k for k in range(8) if mask >> k & 1))
              for mask in range(1, 256)]
    points += [GPoint.branch_pt(r) for r in range(4)] + [GPoint.top()]
    index = {pt: i for i, pt in enumerate(points)}
    table = [[index[g_join(x, y, fam4)] for y in points] for x in points]
    size = len(points)
    for i in range(size):
        row = table[i]
        if row[i] != i:
            return _fail("idempotence broke")
        for j in range(size):
            if row[j] != table[j][i]:
                return _fail("commutativity broke")
    for i in range(size):
        row_i = table[i]
        for j in range(size):
            row_ij = table[row_i[j]]
            row_j = table[j]
            if row_ij != [row_i[v] for v in row_j]:
                return _fail(f"associativity broke at ({i},{j})")
    _, star_rep = star_truncation(fam4, 1 << 12)
    if not star_rep.passed:
        return _fail("star intersection law broke")
    fam5 = ADFamily.progressions(5)
    for i in range(5):
        for j in range(5):
            if i != j and not convergence_check(fam5, i, j, 128).passed:
                return _fail(f"convergence failed for pair ({i},{j})")
    if not mrowka_selector_check(fam5, 64).passed:
        return _fail("selector check failed")
    return True, f"{size}^3 join triples, star at 2^12, 20 convergence pairs"


def criterion_13_lusin_stages(seed: int):
    base = ADFamily.progressions(64)
    t0 = time.perf_counter()
    stages: list = []
    for _ in range(50):
        prev = list(reversed(stages)) + list(base.sets)
        stage = lusin_stage(prev)  # exact fresh counts re-verified inside
        for n, block in enumerate(stage.blocks):
            if len(block) != n:
                return _fail(f"block {n} has {len(block)} elements")
        stages.append(stage)
    dt = time.perf_counter() - t0
    if dt >= 10.0:
        return _fail(f"took {dt:.2f}s (budget 10s)")
    return True, f"50 stages, final m={stages[-1].m}, {dt:.2f}s"


def criterion_14_vietoris_density(seed: int):
    rng = random.Random(seed)
    model = OnePointModel()
    for _ in range(200):
        def rand_desc():
            if rng.random() < 0.45:
                return Descriptor.finite(rng.sample(range(40), rng.randint(0, 5)))
            return Descriptor.cofinite_complement(rng.sample(range(40), rng.randint(0, 5)))
        u = rand_desc()
        vs = [rand_desc() for _ in range(rng.randint(0, 4))]
        got = vietoris_density_witness(model, u, vs)
        want = _density_scan_oracle(u, vs)
        if (got is not None) != want:
            return _fail("witness decision disagrees with the scan oracle")
        if got is not None:
            if not all(u.contains(n) for n in got):
                return _fail("witness leaves the upper constraint")
            if any(not any(v.contains(n) for n in got) for v in vs):
                return _fail("witness misses a lower constraint")
    return True, "200 basic opens"


def _density_scan_oracle(u, vs, horizon=500):
    for v in vs:
        if not any(u.contains(n) and v.contains(n) for n in range(horizon)):
            return False
    if not vs:
        return any(u.contains(n) for n in range(horizon))
    return True


CRITERIA = [
    (1, "example-antichain-height", criterion_01_example_antichain),
    (2, "natural-sum-example", criterion_02_nat_sum_example),
    (3, "hessenberg-products", criterion_03_hessenberg_examples),
    (4, "tip-extraction", criterion_04_tip_examples),
    (5, "hyper-point-heights", criterion_05_hyper_point_table),
    (6, "natural-sum-properties", criterion_06_nat_sum_properties),
    (7, "downset-rank-bounds", criterion_07_zaguia_suite),
    (8, "hyperspace-structure", criterion_08_hyperspace_suite),
    (9, "height-rank-chain", criterion_09_bound_chain),
    (10, "product-heights", criterion_10_product_rule),
    (11, "tip-selector", criterion_11_tip_selector),
    (12, "quotient-semilattice", criterion_12_mrowka_suite),
    (13, "lusin-stages", criterion_13_lusin_stages),
    (14, "vietoris-density", criterion_14_vietoris_density),
]


def run_all(seed: int = 0, numbers=None) -> list:
    results = []
    for number, name, fn in CRITERIA:
        if numbers and number not in numbers:
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn(seed)
        except Exception as e:  # a crash is a failure, not an abort
            passed, detail = False, f"raised {type(e).__name__}: {e}"
        results.append(CriterionResult(number, name, passed,
                                       time.perf_counter() - t0, detail))
    return results
