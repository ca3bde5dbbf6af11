import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordtop.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    NatOrOmega,
    Ordinal,
    OrdinalError,
    ParseError,
    format_ordinal,
    nat_prod,
    nat_sum,
    nat_sum_split_below,
    odot,
    one_plus_inverse,
    ord_add,
    ord_cmp,
    ord_mul,
    ord_pow,
    parse_ordinal,
    random_ordinal,
    random_ordinal_below,
    tip_deg,
)

P = parse_ordinal


def w_pow(e, c=1):
    return Ordinal.omega_power(P(e) if isinstance(e, str) else Ordinal.from_int(e), c)


@st.composite
def ordinals(draw, depth=1, max_terms=4):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_ordinal(random.Random(seed), max_terms=max_terms, depth=depth)


# -- parsing and formatting ------------------------------------------

def test_parse_zero_is_empty_term_list():
    assert P("0") == ZERO
    assert P("0").terms == ()


def test_parse_example_antichain_value():
    a = P("w^(w+7) + w^9*2 + w^2 + w + 2")
    exps = [t[0] for t in a.terms]
    coeffs = [t[1] for t in a.terms]
    assert exps == [P("w+7"), P("9"), P("2"), P("1"), P("0")]
    assert coeffs == [1, 2, 1, 1, 2]


def test_parse_normalizes_w_plus_w():
    # oracle: ordinal addition of the parsed halves
    assert P("w + w") == ord_add(P("w"), P("w"))
    assert format_ordinal(P("w + w")) == "w*2"


def test_format_trivial():
    assert format_ordinal(ZERO) == "0"
    assert format_ordinal(OMEGA) == "w"


def test_format_example_value_byte_exact():
    s = "w^(w+7) + w^9*2 + w^2 + w + 2"
    assert format_ordinal(P(s)) == s


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as e:
        P("w + ")
    assert e.value.position == 4
    with pytest.raises(ParseError):
        P("w^")
    with pytest.raises(ParseError):
        P("w*0")
    with pytest.raises(ParseError):
        P("w w")


def test_roundtrip_on_random_normal_forms():
    rng = random.Random(7)
    for _ in range(10_000):
        a = random_ordinal(rng, depth=2)
        assert P(format_ordinal(a)) == a


# -- comparison -------------------------------------------------------

def test_cmp_trivial():
    assert ord_cmp(OMEGA, OMEGA) == 0
    assert ord_cmp(P("w+1"), P("w*2")) == -1


def test_cmp_leading_exponent_rule():
    # oracle: independent leading-exponent comparison from the order axioms
    a, b = P("w^w"), P("w^9*500")
    assert a.degree > b.degree
    assert ord_cmp(a, b) == 1


@given(ordinals(), ordinals(), ordinals())
def test_cmp_is_a_total_order(a, b, c):
    assert ord_cmp(a, b) == -ord_cmp(b, a)
    if a <= b and b <= c:
        assert a <= c
    if ord_cmp(a, b) == 0:
        assert a == b


# -- ordinary arithmetic ----------------------------------------------

def test_add_trivial_and_absorption():
    assert ord_add(OMEGA, ONE) == P("w+1")
    # oracle: sup of finite approximants 1+n is omega
    approx = [ord_add(ONE, Ordinal.from_int(n)) for n in range(50)]
    assert all(x < OMEGA for x in approx)
    assert all(approx[i] < approx[i + 1] for i in range(49))
    assert ord_add(ONE, OMEGA) == OMEGA


def test_add_merges_equal_exponents():
    assert ord_add(P("w^9*2"), P("w^9 + w")) == P("w^9*3 + w")


@given(ordinals(), ordinals(), ordinals())
def test_add_monotone_and_associative(a, b, c):
    assert ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c))
    if b < c:
        assert ord_add(a, b) < ord_add(a, c)
    assert ord_add(a, b) >= a


def test_mul_trivial():
    assert ord_mul(OMEGA, ZERO) == ZERO
    assert ord_mul(ZERO, OMEGA) == ZERO
    assert ord_mul(w_pow(2), Ordinal.from_int(3)) == P("w^2*3")


def test_mul_two_times_omega():
    # oracle: sup of 2*n is omega
    approx = [ord_mul(Ordinal.from_int(2), Ordinal.from_int(n)) for n in range(30)]
    assert all(x < OMEGA for x in approx)
    assert ord_mul(Ordinal.from_int(2), OMEGA) == OMEGA


@given(ordinals(), ordinals())
def test_mul_successor_recursion(a, b):
    # a * (b+1) = a*b + a at every successor step
    assert ord_mul(a, ord_add(b, ONE)) == ord_add(ord_mul(a, b), a)


@given(ordinals(depth=0, max_terms=3), ordinals(depth=0, max_terms=3))
def test_mul_limit_approximants(a, b):
    # a*(b + w) dominates every a*(b + n)
    limit = ord_mul(a, ord_add(b, OMEGA))
    for n in (1, 2, 5):
        assert ord_mul(a, ord_add(b, Ordinal.from_int(n))) <= limit


def test_pow_trivial():
    for a in (ZERO, ONE, OMEGA, P("w^2+3")):
        assert ord_pow(a, ZERO) == ONE
    assert ord_pow(ZERO, P("w")) == ZERO


def test_pow_single_term():
    assert ord_pow(OMEGA, P("w+7")) == w_pow("w+7")
    assert ord_pow(OMEGA, P("w+7")).terms == ((P("w+7"), 1),)


def test_pow_two_to_omega():
    # oracle: sup of 2^n is omega
    approx = [ord_pow(Ordinal.from_int(2), Ordinal.from_int(n)) for n in range(20)]
    assert all(x < OMEGA for x in approx)
    assert ord_pow(Ordinal.from_int(2), OMEGA) == OMEGA


def test_pow_finite_base_limits():
    assert ord_pow(Ordinal.from_int(2), P("w^2")) == P("w^w")
    assert ord_pow(Ordinal.from_int(3), P("w*2 + 3")) == P("w^2*27")


@given(ordinals(max_terms=2), st.integers(min_value=0, max_value=4))
def test_pow_successor_recursion(a, n):
    b = Ordinal.from_int(n)
    assert ord_pow(a, ord_add(b, ONE)) == ord_mul(ord_pow(a, b), a)


def test_pow_infinite_base_against_repeated_mul():
    a = P("w^2 + w")
    sq = ord_mul(a, a)
    assert ord_pow(a, Ordinal.from_int(2)) == sq
    assert ord_pow(a, Ordinal.from_int(3)) == ord_mul(sq, a)
    # degree of a is 2 and 2*w = w, so the powers a^n (degree 2n) climb to w^w
    assert ord_pow(a, OMEGA) == P("w^w")


# -- natural sum and product ------------------------------------------

def test_nat_sum_worked_example():
    a = P("w^(w+w)*8 + w^7*3")
    b = P("w^w + w^7 + w^2 + 5")
    assert nat_sum(a, b) == P("w^(w+w)*8 + w^w + w^7*4 + w^2 + 5")


def test_nat_sum_zero_identity():
    for a in (ZERO, OMEGA, P("w^3*4+2")):
        assert nat_sum(a, ZERO) == a


def test_nat_sum_two_term_hand_merge():
    # oracle: coefficient merge by hand on two-term normal forms
    assert nat_sum(OMEGA, ONE) == P("w+1")
    assert nat_sum(ONE, OMEGA) == P("w+1")


@given(ordinals(), ordinals(), ordinals())
def test_nat_sum_laws(a, b, c):
    assert nat_sum(a, b) == nat_sum(b, a)
    assert nat_sum(nat_sum(a, b), c) == nat_sum(a, nat_sum(b, c))
    if b < c:
        assert nat_sum(a, b) < nat_sum(a, c)
    assert ord_add(a, b) <= nat_sum(a, b)


def test_nat_prod_examples():
    two = Ordinal.from_int(2)
    assert nat_prod(OMEGA, two) == P("w+w")
    assert nat_prod(two, OMEGA) == P("w+w")
    assert nat_prod(P("w^3+5"), ONE) == P("w^3+5")
    # oracle: the exponent rule agrees with ordinary product on monomials
    assert nat_prod(w_pow(2), w_pow(3)) == ord_mul(w_pow(2), w_pow(3)) == P("w^5")


@given(ordinals(max_terms=3), ordinals(max_terms=3))
def test_nat_prod_commutative(a, b):
    assert nat_prod(a, b) == nat_prod(b, a)


# -- odot --------------------------------------------------------------

def test_odot_worked_examples():
    assert odot(OMEGA, 2) == P("w+w")
    assert odot(Ordinal.from_int(2), NatOrOmega.omega()) == OMEGA
    assert odot(P("w^2*4 + 3"), 0) == ZERO


def test_odot_matches_iterated_nat_sum():
    rng = random.Random(3)
    for _ in range(100):
        a = random_ordinal(rng)
        acc = ZERO
        for n in range(5):
            assert odot(a, n) == acc
            acc = nat_sum(acc, a)


def test_odot_omega_is_sup_of_finite_multiples():
    rng = random.Random(4)
    for _ in range(60):
        a = random_ordinal(rng)
        limit = odot(a, NatOrOmega.omega())
        for n in range(1, 6):
            assert odot(a, n) < limit or a.is_zero
        if not a.is_zero:
            # the finite multiples are cofinal below the limit's base power
            assert limit == Ordinal.omega_power(ord_add(a.degree, ONE))


def test_odot_rejects_arguments_beyond_omega():
    with pytest.raises(OrdinalError):
        odot(OMEGA, P("w+1"))
    with pytest.raises(OrdinalError):
        odot(OMEGA, P("w^2"))


def test_odot_on_monomials_matches_ordinary_product():
    rng = random.Random(5)
    for _ in range(60):
        e = random_ordinal(rng, max_terms=2, depth=0)
        n = rng.randint(0, 6)
        m = Ordinal.omega_power(e)
        assert odot(m, n) == ord_mul(m, Ordinal.from_int(n)) == nat_prod(m, Ordinal.from_int(n))


@given(ordinals(), ordinals(max_terms=2))
def test_product_comparison_chain(a, b):
    # a*b <= a(.)b <= a(x)b for finite and omega right arguments
    for right in (ZERO, ONE, Ordinal.from_int(3), OMEGA):
        lhs = ord_mul(a, right)
        mid = odot(a, right)
        rhs = nat_prod(a, right)
        assert lhs <= mid <= rhs


# -- tip and one_plus_inverse ------------------------------------------

def test_tip_worked_examples():
    t = tip_deg(P("w^w*2 + w^7 + w^3*5"))
    assert t.tip == P("w^3")
    assert t.tip_exponent == Ordinal.from_int(3)
    assert t.degree == P("w")
    assert tip_deg(P("w+5")).tip == ONE
    single = tip_deg(P("w^(w+7)"))
    assert single.tip == P("w^(w+7)")
    assert single.tip_exponent == P("w+7")
    assert single.degree == P("w+7")


def test_tip_rejects_zero():
    with pytest.raises(OrdinalError):
        tip_deg(ZERO)


def test_one_plus_inverse_examples():
    assert one_plus_inverse(Ordinal.from_int(2)) == ONE
    assert one_plus_inverse(P("w+7")) == P("w+7")
    assert one_plus_inverse(Ordinal.from_int(10)) == Ordinal.from_int(9)
    with pytest.raises(OrdinalError):
        one_plus_inverse(ZERO)


@given(ordinals())
def test_one_plus_inverse_solves_equation(r):
    if r.is_zero:
        return
    assert ord_add(ONE, one_plus_inverse(r)) == r


# -- generators used by the property suites ----------------------------

def test_random_ordinal_below_is_below():
    rng = random.Random(11)
    for _ in range(300):
        bound = random_ordinal(rng)
        if bound.is_zero:
            continue
        assert random_ordinal_below(rng, bound) < bound


@settings(max_examples=60)
@given(ordinals(), ordinals())
def test_nat_sum_closure_below_power(a, b):
    d = ord_add(nat_sum(a.degree, b.degree), ONE)
    bound = Ordinal.omega_power(d)
    assert a < bound and b < bound
    assert nat_sum(a, b) < bound


# -- decomposability of the natural sum --------------------------------

def test_split_below_examples():
    a, b = P("w^2*2 + 3"), P("w + 1")
    for gamma in (ZERO, P("w^2"), P("w^2*2 + w + 3"), P("w^2 + w + 4"), P("5")):
        left, right = nat_sum_split_below(gamma, a, b)
        assert nat_sum(left, right) == gamma
        assert left <= a and right <= b


def test_split_below_rejects_values_at_or_above_the_sum():
    with pytest.raises(OrdinalError):
        nat_sum_split_below(P("w*2"), OMEGA, OMEGA)
    with pytest.raises(OrdinalError):
        nat_sum_split_below(P("w^2"), OMEGA, OMEGA)


@given(ordinals(), ordinals(), st.integers(min_value=0, max_value=2**32 - 1))
def test_split_below_property(a, b, gseed):
    s = nat_sum(a, b)
    if s.is_zero:
        return
    gamma = random_ordinal_below(random.Random(gseed), s)
    left, right = nat_sum_split_below(gamma, a, b)
    assert nat_sum(left, right) == gamma
    assert left <= a and right <= b


# -- additional arithmetic laws ------------------------------------------

@given(ordinals(max_terms=2), ordinals(max_terms=2), ordinals(max_terms=2))
def test_mul_associative(a, b, c):
    assert ord_mul(ord_mul(a, b), c) == ord_mul(a, ord_mul(b, c))


@given(ordinals(max_terms=2), ordinals(max_terms=2), ordinals(max_terms=2))
def test_mul_left_distributes_over_add(a, b, c):
    assert ord_mul(a, ord_add(b, c)) == ord_add(ord_mul(a, b), ord_mul(a, c))


@given(ordinals(max_terms=2), ordinals(max_terms=2), ordinals(max_terms=2))
def test_pow_splits_over_exponent_sum(a, b, c):
    assert ord_pow(a, ord_add(b, c)) == ord_mul(ord_pow(a, b), ord_pow(a, c))
