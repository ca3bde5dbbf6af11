import random
from itertools import combinations

import pytest

from ordtop.ordinal import Ordinal, ord_pow, OMEGA
from ordtop.poset import (
    DownSet,
    FinitePoset,
    PosetError,
    all_downsets,
    all_labeled_posets,
    antichain_masks,
    downset_lattice,
    extremal,
    kw_rank,
    poset_from_covers,
    poset_from_json,
    poset_to_dot,
    poset_to_json,
    principal_sets,
    random_poset,
    ranks,
    width,
    zaguia_verify,
)


def chain(k):
    return poset_from_covers([str(i) for i in range(k)],
                             [(str(i), str(i + 1)) for i in range(k - 1)])


def antichain(k):
    return poset_from_covers([str(i) for i in range(k)], [])


def vee():
    return poset_from_covers(["a", "b", "c"], [("a", "c"), ("b", "c")])


# -- oracles -----------------------------------------------------------

def brute_downsets(poset):
    """Filter all 2^n subsets by downward closure."""
    out = []
    for mask in range(1 << poset.n):
        if all(poset.below[i] & ~mask == 0 for i in range(poset.n) if mask >> i & 1):
            out.append(mask)
    return out


def reachable_down(poset, i):
    """Reflexive-transitive reachability in the cover DAG, going down."""
    covers = poset.covers()
    seen = {i}
    frontier = [i]
    while frontier:
        j = frontier.pop()
        for a, b in covers:
            if b == j and a not in seen:
                seen.add(a)
                frontier.append(a)
    return seen


def longest_chain_below(poset, i):
    best = 0
    for j in range(poset.n):
        if poset.lt(j, i):
            best = max(best, longest_chain_below(poset, j) + 1)
    return best


def brute_max_antichain(poset):
    best = 0
    for r in range(poset.n, 0, -1):
        for combo in combinations(range(poset.n), r):
            if all(not poset.lt(a, b) and not poset.lt(b, a)
                   for a, b in combinations(combo, 2)):
                return r
    return best


def brute_kw_rank(poset):
    """Longest strictly increasing chain of nonempty downsets below each."""
    downs = [m for m in brute_downsets(poset) if m]
    rank = {}
    for m in sorted(downs, key=lambda x: bin(x).count("1")):
        preds = [d for d in downs if d != m and d & ~m == 0]
        rank[m] = max((rank[d] + 1 for d in preds), default=0)
    return rank


# -- construction -------------------------------------------------------

def test_one_element_antichain():
    p = poset_from_covers(["a"], [])
    assert p.n == 1 and p.below == (0,)


def test_vee_shape():
    p = vee()
    assert p.lt(p.index("a"), p.index("c"))
    assert p.lt(p.index("b"), p.index("c"))
    assert not p.lt(p.index("a"), p.index("b"))


def test_cycle_rejected():
    with pytest.raises(PosetError, match="cycle"):
        poset_from_covers(["a", "b"], [("a", "b"), ("b", "a")])


def test_duplicate_and_unknown_names_rejected():
    with pytest.raises(PosetError, match="duplicate"):
        poset_from_covers(["a", "a"], [])
    with pytest.raises(PosetError, match="unknown"):
        poset_from_covers(["a"], [("a", "z")])


def test_transitive_closure_of_covers():
    p = chain(4)
    assert p.lt(p.index("0"), p.index("3"))


def test_json_roundtrip_and_dot():
    p = vee()
    assert poset_from_json(poset_to_json(p)).below == p.below
    dot = poset_to_dot(p)
    assert '"a" -> "c"' in dot and "rank=same" in dot


# -- principal sets ------------------------------------------------------

def test_principal_sets_antichain():
    p = antichain(3)
    down, up = principal_sets(p, "1")
    assert down.members(p) == {"1"} and up == {"1"}


def test_principal_sets_chain():
    p = poset_from_covers(["a", "b", "c"], [("a", "b"), ("b", "c")])
    down, up = principal_sets(p, "b")
    assert down.members(p) == {"a", "b"}
    assert up == {"b", "c"}


def test_principal_sets_match_reachability_oracle():
    rng = random.Random(1)
    for _ in range(40):
        p = random_poset(rng, 7)
        for i in range(p.n):
            down, _ = principal_sets(p, p.labels[i])
            assert down.members(p) == {p.labels[j] for j in reachable_down(p, i)}


def test_principal_sets_unknown_element():
    with pytest.raises(PosetError):
        principal_sets(antichain(2), "z")


# -- extremal -------------------------------------------------------------

def test_extremal_empty():
    r = extremal(antichain(3), [])
    assert r.max == frozenset() and r.min == frozenset() and r.is_antichain


def test_extremal_chain_ends():
    p = poset_from_covers(["a", "b", "c"], [("a", "b"), ("b", "c")])
    r = extremal(p, ["a", "c"])
    assert r.max == {"c"} and r.min == {"a"} and not r.is_antichain


def test_extremal_matches_pairwise_scan():
    rng = random.Random(2)
    for _ in range(60):
        p = random_poset(rng, 6)
        members = [p.labels[i] for i in range(p.n) if rng.random() < 0.5]
        r = extremal(p, members)
        idxs = [p.index(m) for m in members]
        oracle_max = {p.labels[i] for i in idxs
                      if not any(p.lt(i, j) for j in idxs)}
        oracle_min = {p.labels[i] for i in idxs
                      if not any(p.lt(j, i) for j in idxs)}
        assert r.max == oracle_max and r.min == oracle_min
        assert r.is_antichain == all(not p.lt(a, b) and not p.lt(b, a)
                                     for a, b in combinations(idxs, 2))


# -- ranks ----------------------------------------------------------------

def test_ranks_antichain():
    r = ranks(antichain(5))
    assert set(r.elem_rank.values()) == {0} and r.poset_rank == 1


def test_ranks_chain():
    r = ranks(chain(4))
    assert [r.elem_rank[str(i)] for i in range(4)] == [0, 1, 2, 3]
    assert r.poset_rank == 4


def test_ranks_match_longest_path_oracle():
    rng = random.Random(3)
    for _ in range(30):
        p = random_poset(rng, 8)
        r = ranks(p)
        for i in range(p.n):
            assert r.elem_rank[p.labels[i]] == longest_chain_below(p, i)


def test_ranks_empty_poset():
    assert ranks(FinitePoset((), ())).poset_rank == 0


# -- width ------------------------------------------------------------------

def test_width_chain_and_antichain():
    assert width(chain(5)) == 1
    assert width(antichain(6)) == 6


def test_width_matches_exhaustive_antichain():
    rng = random.Random(4)
    for _ in range(25):
        p = random_poset(rng, 10, edge_prob=rng.choice([0.15, 0.3, 0.5]))
        assert width(p) == brute_max_antichain(p)


# -- downset lattice ----------------------------------------------------------

def test_downset_lattice_antichain_is_boolean():
    lat = downset_lattice(antichain(3))
    assert lat.n == 8


def test_downset_lattice_chain():
    lat = downset_lattice(chain(3))
    assert lat.n == 4
    assert width(lat) == 1


def test_downset_lattice_fence_matches_subset_filter():
    fence = poset_from_covers(["a", "b", "c", "d"],
                              [("a", "b"), ("c", "b"), ("c", "d")])
    assert downset_lattice(fence).n == len(brute_downsets(fence))


def test_all_downsets_match_filter_oracle():
    rng = random.Random(5)
    for _ in range(40):
        p = random_poset(rng, 7)
        assert sorted(all_downsets(p)) == sorted(brute_downsets(p))


def test_downset_bound_enforced():
    with pytest.raises(PosetError, match="bound"):
        downset_lattice(antichain(6), bound=5)


def test_downset_type_validates_closure():
    p = chain(3)
    with pytest.raises(PosetError):
        DownSet.of(p, ["2"])
    assert DownSet.of(p, ["0", "1"]).size == 2


# -- kw_rank ---------------------------------------------------------------

def test_kw_rank_singleton():
    p = antichain(1)
    r = kw_rank(p)
    assert r[DownSet(1)] == 0


def test_kw_rank_antichain_full_set():
    p = antichain(4)
    r = kw_rank(p)
    assert r[DownSet(p.full_mask())] == 3


def test_kw_rank_chain_top():
    p = chain(5)
    r = kw_rank(p)
    assert r[DownSet(p.full_mask())] == 4


def test_kw_rank_matches_longest_chain_oracle():
    rng = random.Random(6)
    for _ in range(25):
        p = random_poset(rng, 6)
        got = {d.mask: r for d, r in kw_rank(p).items()}
        assert got == brute_kw_rank(p)


def test_kw_rank_monotone():
    rng = random.Random(7)
    for _ in range(25):
        p = random_poset(rng, 6)
        got = kw_rank(p)
        for a in got:
            for b in got:
                if a.mask != b.mask and a.mask & ~b.mask == 0:
                    assert got[a] < got[b]


def test_kw_rank_empty_poset_rejected():
    with pytest.raises(PosetError):
        kw_rank(FinitePoset((), ()))


# -- downset identities --------------------------------------------------------

def test_downsets_equal_down_of_max_exhaustive():
    for p in all_labeled_posets(4):
        for m in all_downsets(p):
            if m:
                assert p.close_down(p.max_of(m)) == m


def test_final_sets_are_up_of_min():
    # finite form: every nonempty final subset equals the upset of its minima
    for p in all_labeled_posets(4):
        full = p.full_mask()
        for m in all_downsets(p):
            final = full & ~m
            if final:
                up = 0
                for i in range(p.n):
                    if p.min_of(final) >> i & 1:
                        up |= p.up_mask(i)
                assert up == final


# -- zaguia_verify --------------------------------------------------------------

def test_zaguia_chain_passes():
    rep = zaguia_verify(chain(4))
    assert rep.passed and rep.counterexample is None
    assert rep.claim1_literal and rep.claim2_literal


def test_zaguia_antichain_literal_reading_fails_but_gating_passes():
    rep = zaguia_verify(antichain(4))
    assert rep.passed and rep.counterexample is None
    # disjoint pieces break the unshifted reading; the report records it
    assert not rep.claim1_literal
    assert not rep.claim2_literal
    assert rep.literal_counterexample is not None


def test_zaguia_all_labeled_posets_up_to_4():
    for n in range(1, 5):
        for p in all_labeled_posets(n):
            assert zaguia_verify(p).passed


def test_zaguia_claim3_ordinal_bound_spot_check():
    p = chain(3)
    r = ranks(p)
    kw = {d.mask: v for d, v in kw_rank(p).items()}
    for i in range(p.n):
        if r.by_index[i] >= 1:
            assert Ordinal.from_int(kw[p.down_mask(i)]) < ord_pow(OMEGA, Ordinal.from_int(r.by_index[i]))


def test_labeled_poset_counts():
    assert len(all_labeled_posets(1)) == 1
    assert len(all_labeled_posets(2)) == 3
    assert len(all_labeled_posets(3)) == 19
    assert len(all_labeled_posets(4)) == 219


def test_antichain_masks_count():
    # antichains of a 3-chain: empty + singletons
    assert len(antichain_masks(chain(3))) == 4
    assert len(antichain_masks(antichain(3))) == 8
