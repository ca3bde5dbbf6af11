import random
from itertools import combinations

import pytest

from ordtop.mrowka import (
    ADFamily,
    EvPeriodicSet,
    GPoint,
    MrowkaError,
    ad_check,
    code_of,
    common_residue_classes,
    convergence_check,
    g_join,
    g_leq,
    lusin_iterate,
    lusin_stage,
    mrowka_selector_check,
    star_truncation,
    support_of,
)

EVENS = EvPeriodicSet(2, frozenset({0}))
ODDS = EvPeriodicSet(2, frozenset({1}))


def brute_intersection_infinite(a, b, horizon=5000):
    return sum(1 for n in range(horizon) if a.contains(n) and b.contains(n)) > 64


# -- representations -----------------------------------------------------

def test_membership_with_delta():
    s = EvPeriodicSet(3, frozenset({0}), frozenset({0, 5}))
    assert not s.contains(0)  # toggled out
    assert s.contains(3) and s.contains(5)
    assert not s.contains(1)


def test_validation():
    with pytest.raises(MrowkaError):
        EvPeriodicSet(0, frozenset())
    with pytest.raises(MrowkaError):
        EvPeriodicSet(2, frozenset({5}))
    with pytest.raises(MrowkaError):
        EvPeriodicSet(2, frozenset({0}), frozenset({-1}))


def test_family_json_roundtrip():
    fam = ADFamily.progressions(4)
    again = ADFamily.from_json(fam.to_json())
    assert again == fam


# -- almost disjointness ----------------------------------------------------

def test_ad_check_disjoint_progressions():
    assert ad_check([EVENS, ODDS]).passed


def test_ad_check_nested_progressions_fail_with_certificate():
    rep = ad_check([EVENS, EvPeriodicSet(4, frozenset({0}))])
    assert not rep.passed
    assert rep.witness["residue"] == 0 and rep.witness["modulus"] == 4


def test_ad_check_binary_tree_prefix_classes():
    # depth-6 prefix classes: residues mod 64 are pairwise disjoint
    fam = [EvPeriodicSet(64, frozenset({r})) for r in range(0, 64, 7)]
    assert ad_check(fam).passed


def test_ad_check_certificate_matches_brute_force():
    rng = random.Random(0)
    for _ in range(60):
        p1, p2 = rng.choice([2, 3, 4, 6]), rng.choice([2, 3, 4, 6])
        a = EvPeriodicSet(p1, frozenset(rng.sample(range(p1), rng.randint(1, p1))))
        b = EvPeriodicSet(p2, frozenset(rng.sample(range(p2), rng.randint(1, p2))))
        rep = ad_check([a, b])
        assert rep.passed == (not brute_intersection_infinite(a, b))


def test_ad_check_rejects_finite_member():
    with pytest.raises(MrowkaError, match="finite"):
        ad_check([EvPeriodicSet(2, frozenset(), frozenset({1, 2}))])


def test_family_constructor_validates():
    with pytest.raises(MrowkaError):
        ADFamily((EVENS, EvPeriodicSet(4, frozenset({0}))))


# -- quotient join -------------------------------------------------------------

def test_join_two_branches_collapse():
    fam = ADFamily.progressions(2)
    assert g_join(GPoint.branch_pt(0), GPoint.branch_pt(1), fam) == GPoint.top()
    assert g_join(GPoint.branch_pt(0), GPoint.branch_pt(0), fam) == GPoint.branch_pt(0)


def test_join_finite_absorbed_by_branch():
    fam = ADFamily.progressions(2)
    assert g_join(GPoint.fin_pt({2, 4}), GPoint.branch_pt(0), fam) == GPoint.branch_pt(0)
    assert g_join(GPoint.fin_pt({2, 3}), GPoint.branch_pt(0), fam) == GPoint.top()


def test_join_idempotent_on_samples():
    fam = ADFamily.progressions(3)
    pts = [GPoint.fin_pt({1}), GPoint.fin_pt({0, 3}), GPoint.branch_pt(1), GPoint.top()]
    for x in pts:
        assert g_join(x, x, fam) == x


def test_join_is_upper_bound():
    fam = ADFamily.progressions(3)
    pts = ([GPoint.fin_pt(s) for s in ({0}, {1, 4}, {2, 3})]
           + [GPoint.branch_pt(i) for i in range(3)] + [GPoint.top()])
    for x in pts:
        for y in pts:
            z = g_join(x, y, fam)
            assert g_leq(x, z, fam) and g_leq(y, z, fam)


def test_join_oracle_via_truncated_downsets():
    # union of downsets, then classification: inside one branch -> that
    # branch, otherwise top
    fam = ADFamily.progressions(3)
    rng = random.Random(1)
    for _ in range(100):
        sigma = frozenset(rng.sample(range(12), rng.randint(1, 4)))
        k = rng.randrange(3)
        expected = (GPoint.branch_pt(k)
                    if all(fam.sets[k].contains(n) for n in sigma)
                    else GPoint.top())
        assert g_join(GPoint.fin_pt(sigma), GPoint.branch_pt(k), fam) == expected


def test_join_semilattice_axioms_exhaustive_small():
    fam = ADFamily.progressions(2)
    pts = ([GPoint.fin_pt(frozenset(c))
            for r in range(1, 4) for c in combinations(range(4), r)]
           + [GPoint.branch_pt(0), GPoint.branch_pt(1), GPoint.top()])
    for x in pts:
        for y in pts:
            assert g_join(x, y, fam) == g_join(y, x, fam)
            for z in pts:
                assert (g_join(g_join(x, y, fam), z, fam)
                        == g_join(x, g_join(y, z, fam), fam))


def test_branch_index_validation():
    fam = ADFamily.progressions(2)
    with pytest.raises(MrowkaError):
        g_join(GPoint.branch_pt(5), GPoint.top(), fam)
    with pytest.raises(MrowkaError):
        GPoint.fin_pt(set())


# -- star truncation --------------------------------------------------------------

def test_star_disjoint_branches_share_nothing():
    fam = ADFamily.progressions(2)
    codes, rep = star_truncation(fam, 8)
    assert rep.passed
    assert codes[0] & codes[1] == frozenset()
    # supports really live inside each branch
    for c in codes[0]:
        assert all(EVENS.contains(k) for k in support_of(c))


def test_star_shared_code_is_exactly_the_common_part():
    a = EvPeriodicSet(4, frozenset({0}), frozenset())          # 0, 4, 8, ...
    b = EvPeriodicSet(4, frozenset({1}), frozenset({0, 1}))    # 0, 5, 9, ... (0 in, 1 out)
    fam = ADFamily((a, b))
    codes, rep = star_truncation(fam, 16)
    assert rep.passed
    # the only shared element below 4 bits is 0, coded as 1
    assert codes[0] & codes[1] == frozenset({code_of({0})})


def test_star_counts_nonempty_subsets():
    fam = ADFamily.progressions(2)
    for m in (4, 8, 12):
        codes, _ = star_truncation(fam, 1 << m)
        for i, a in enumerate(fam.sets):
            assert len(codes[i]) == 2 ** len(a.elements_below(m)) - 1


def test_star_bound_enforced():
    with pytest.raises(MrowkaError, match="bound"):
        star_truncation(ADFamily.progressions(2), (1 << 24) + 1)


# -- convergence --------------------------------------------------------------------

def test_convergence_even_odd():
    fam = ADFamily.progressions(2)
    rep = convergence_check(fam, 0, 1, horizon=64)
    assert rep.passed
    # oracle: first n with both prefixes nonempty and the union escaping
    # every branch; prefixes are A-cap-[0,n)
    sigma, tau = set(), set()
    oracle = None
    for n in range(1, 65):
        if fam.sets[0].contains(n - 1):
            sigma.add(n - 1)
        if fam.sets[1].contains(n - 1):
            tau.add(n - 1)
        if sigma and tau:
            union = sigma | tau
            if all(any(not s.contains(x) for x in union) for s in fam.sets):
                oracle = n
                break
    assert rep.threshold == oracle == 2
    assert rep.witnesses == {0: 1, 1: 0}


def test_convergence_rejects_equal_indices():
    with pytest.raises(MrowkaError):
        convergence_check(ADFamily.progressions(2), 1, 1, 32)


def test_convergence_all_pairs_of_five_progressions():
    fam = ADFamily.progressions(5)
    for i in range(5):
        for j in range(5):
            if i != j:
                rep = convergence_check(fam, i, j, horizon=128)
                assert rep.passed
                assert rep.threshold <= 16


def test_convergence_horizon_too_small():
    fam = ADFamily.progressions(5)
    with pytest.raises(MrowkaError, match="horizon"):
        convergence_check(fam, 0, 1, horizon=1)


# -- Lusin stages -----------------------------------------------------------------

def recount_oracle(stage, prev):
    """Fully independent recount of the fresh-intersection sizes."""
    def contains(s, x):
        return s.contains(x) if hasattr(s, "contains") else x in s
    counts = []
    for n in range(len(prev)):
        fresh = [x for x in stage.elements
                 if contains(prev[n], x) and not any(contains(prev[k], x) for k in range(n))]
        counts.append(len(fresh))
    return counts


def test_lusin_single_stage_mod8():
    prev = list(ADFamily.progressions(8).sets)
    stage = lusin_stage(prev)
    assert recount_oracle(stage, prev) == list(range(8))
    assert stage.blocks[0] == ()
    # greedy-least takes the least fresh members of each class
    assert stage.blocks[1] == (1,)
    assert stage.blocks[2] == (2, 10)


def test_lusin_stage_n0_forces_empty_meet():
    prev = [EVENS]
    stage = lusin_stage(prev)
    assert stage.elements == frozenset()


def test_lusin_insufficient_fresh_elements():
    # the second set has a single element outside the first
    prev = [EvPeriodicSet(2, frozenset({0})), frozenset({1, 2, 4, 6}),
            frozenset({3, 5})]
    with pytest.raises(MrowkaError, match="fewer than"):
        lusin_stage([prev[0], prev[1], frozenset({0, 2})])


def test_lusin_non_ad_input_rejected():
    with pytest.raises(MrowkaError, match="non-AD"):
        lusin_stage([EVENS, EvPeriodicSet(4, frozenset({0}))])


def test_lusin_iterated_stages_mod16():
    base = ADFamily.progressions(16)
    stages = lusin_iterate(base, 10)
    for step, stage in enumerate(stages):
        prev = list(reversed(stages[:step])) + list(base.sets)
        assert recount_oracle(stage, prev) == list(range(len(prev)))


def test_lusin_l1_counts_are_bounded_and_monotone():
    base = ADFamily.progressions(8)
    stages = lusin_iterate(base, 4)
    stage = stages[-1]
    ks = [k for k, _ in stage.l1_counts]
    cs = [c for _, c in stage.l1_counts]
    assert ks == sorted(ks)
    assert cs == sorted(cs)
    assert all(c <= stage.m for c in cs)
    # only the empty-block position can avoid the new set entirely at the top probe
    assert cs[-1] <= stage.m


def test_lusin_stage_elements_disjoint_from_earlier_stages():
    base = ADFamily.progressions(8)
    stages = lusin_iterate(base, 5)
    # position 0 in each later stage is the newest earlier stage: empty meet
    for i in range(1, len(stages)):
        assert stages[i].elements.isdisjoint(stages[i - 1].elements)


# -- canonical selector -------------------------------------------------------------

def test_selector_two_progressions():
    rep = mrowka_selector_check(ADFamily.progressions(2), truncation=16)
    assert rep.passed


def test_selector_overlapping_input_fails_with_witness():
    rep = mrowka_selector_check([EVENS, EvPeriodicSet(4, frozenset({0}))],
                                truncation=16)
    assert not rep.passed
    assert not rep.conditions["antisymmetry"] or not rep.conditions["nesting"]
    assert rep.witness is not None


def test_selector_five_branches():
    rep = mrowka_selector_check(ADFamily.progressions(5), truncation=64)
    assert rep.passed
    assert rep.induced_order_ok


def test_selector_empty_branch_at_truncation():
    far = EvPeriodicSet(64, frozenset({63}))
    rep = mrowka_selector_check([far], truncation=4)
    assert not rep.heights_ok


def test_common_residue_classes_symmetry():
    a = EvPeriodicSet(6, frozenset({0, 3}))
    b = EvPeriodicSet(4, frozenset({3}))
    assert bool(common_residue_classes(a, b)) == bool(common_residue_classes(b, a))
