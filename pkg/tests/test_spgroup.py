from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from scoh import classify as c
from scoh import spgroup as sp
from scoh.descriptors import (
    ConstExp,
    INFINITE,
    LinearExp,
    NO,
    SpGroupSpec,
    YES,
)
from scoh.groups import stab_index
from scoh.primes import ALL_PRIMES

EX1 = SpGroupSpec(ALL_PRIMES, LinearExp())  # e_i = i over 2, 3, 5, 7, ...
FLAT = SpGroupSpec(ALL_PRIMES, ConstExp(1))

Z = sp.one_element(EX1)


# -- components and canonical form --------------------------------------------


def test_component_of_identity_is_one_everywhere():
    for i in (1, 2, 3, 7):
        assert sp.component(Z, EX1, i) == 1


def test_component_uses_modular_inverse():
    x = sp.sp_element(FLAT, Fraction(1, 3), {2: 0})
    # at p_3 = 5 (e=1) the default is 3^{-1} mod 5 = 2
    assert sp.component(x, FLAT, 3) == 2


def test_missing_mandatory_correction_is_an_error():
    with pytest.raises(sp.SpElementError, match="prime 3 divides"):
        sp.sp_element(EX1, Fraction(1, 3))


def test_redundant_corrections_are_dropped():
    x = sp.sp_element(EX1, 2, {3: 2})  # 2 is already the default at index 3
    assert x.corrections == ()


def test_canonicalization_idempotent():
    x = sp.sp_element(EX1, Fraction(1, 2), {1: 1, 2: 5})
    y = sp.sp_element(EX1, x.q, dict(x.corrections))
    assert x == y


# -- arithmetic ----------------------------------------------------------------


def test_add_inverse_gives_zero():
    x = sp.sp_element(EX1, Fraction(5, 3), {2: 4})
    assert sp.elem_add(x, sp.elem_neg(x, EX1), EX1).is_zero()


def test_identity_element_is_multiplicative_identity():
    assert sp.elem_mul(Z, Z, EX1) == Z
    x = sp.sp_element(EX1, Fraction(7, 2), {1: 1, 3: 10})
    assert sp.elem_mul(Z, x, EX1) == x


def test_mul_two_by_half_recovers_identity_componentwise():
    half = sp.sp_element(EX1, Fraction(1, 2), {1: 1})
    two = sp.sp_element(EX1, 2)
    prod = sp.elem_mul(two, half, EX1)
    for i in (1, 2, 3):
        expected = (sp.component(two, EX1, i) * sp.component(half, EX1, i)) % EX1.modulus(i)
        assert sp.component(prod, EX1, i) == expected
    # away from the corrected prime the product is literally z
    assert prod.q == 1


@st.composite
def elements(draw):
    num = draw(st.integers(min_value=-6, max_value=6))
    den = draw(st.sampled_from([1, 2, 3, 5]))
    q = Fraction(num, den)
    corr = {}
    for i in draw(st.sets(st.integers(min_value=1, max_value=4), max_size=3)):
        corr[i] = draw(st.integers(min_value=0, max_value=EX1.modulus(i) - 1))
    for p in (2, 3, 5):
        idx = ALL_PRIMES.index_of(p)
        if q.denominator % p == 0 and idx not in corr:
            corr[idx] = draw(st.integers(min_value=0, max_value=EX1.modulus(idx) - 1))
    return sp.sp_element(EX1, q, corr)


@given(elements(), elements(), elements())
@settings(max_examples=120, deadline=None)
def test_ring_laws(x, y, z):
    add, mul = sp.elem_add, sp.elem_mul
    assert add(x, y, EX1) == add(y, x, EX1)
    assert mul(x, y, EX1) == mul(y, x, EX1)
    assert add(add(x, y, EX1), z, EX1) == add(x, add(y, z, EX1), EX1)
    assert mul(mul(x, y, EX1), z, EX1) == mul(x, mul(y, z, EX1), EX1)
    assert mul(x, add(y, z, EX1), EX1) == add(mul(x, y, EX1), mul(x, z, EX1), EX1)
    assert mul(Z, x, EX1) == x


@given(elements())
@settings(max_examples=80, deadline=None)
def test_multiplication_faithful(x):
    # mult-by-x kills z exactly when x is zero, and z is never torsion
    assert (sp.elem_mul(x, Z, EX1).is_zero()) == x.is_zero()


# -- valuation ------------------------------------------------------------------


def test_valuation_examples():
    assert sp.valuation(Z, EX1, 4) == 0
    p3 = sp.sp_element(EX1, 5)  # p_3 = 5, e_3 = 3
    assert sp.valuation(p3, EX1, 3) == 1
    assert sp.valuation(sp.zero_element(EX1), EX1, 2) == INFINITE


# -- closed-form stabilization ----------------------------------------------------


def test_stab_identity_is_zero():
    rep = sp.stab_index_mul(Z, EX1)
    assert rep.index == 0
    assert rep.case == sp.CASE_EVENTUAL_AUTOMORPHISM


def test_stab_zero_element_is_one():
    rep = sp.stab_index_mul(sp.zero_element(EX1), EX1)
    assert rep.index == 1
    assert rep.case == sp.CASE_TORSION_IMAGE


def test_stab_prime_multiples_hit_their_exponent():
    for n in range(1, 13):
        rep = sp.stab_index_mul(sp.sp_element(EX1, EX1.prime(n)), EX1)
        assert rep.index == n


def test_stab_flat_spec_is_at_most_one_for_nonzero_rational():
    cases = [sp.sp_element(FLAT, a) for a in (2, 3, 6, 30)]
    cases.append(sp.sp_element(FLAT, Fraction(4, 7), {4: 3}))
    for alpha in cases:
        rep = sp.stab_index_mul(alpha, FLAT)
        assert rep.index <= 1
        assert rep.case == sp.CASE_EVENTUAL_AUTOMORPHISM


def test_stab_report_covers_exactly_exceptional_indices():
    alpha = sp.sp_element(EX1, 6, {4: 7})
    rep = sp.stab_index_mul(alpha, EX1)
    assert [i for i, _, _ in rep.per_prime] == [1, 2, 4]


@given(elements())
@settings(max_examples=100, deadline=None)
def test_stab_always_classifies_and_is_finite(x):
    rep = sp.stab_index_mul(x, EX1)
    assert rep.case in (sp.CASE_TORSION_IMAGE, sp.CASE_EVENTUAL_AUTOMORPHISM)
    assert 0 <= rep.index < 10**6


# -- truncation bridge -------------------------------------------------------------


def test_truncate_first_three():
    tr = sp.truncate(EX1, 3)
    assert tr.group.factors == ((2, 1), (3, 2), (5, 3))
    assert tr.element(Z).coords == (1, 1, 1)


def test_truncate_single_component():
    tr = sp.truncate(FLAT, 1)
    assert tr.group.factors == ((2, 1),)
    with pytest.raises(ValueError, match=">= 1"):
        sp.truncate(FLAT, 0)


def test_truncation_consistent_with_closed_form():
    cases = [Z, sp.sp_element(EX1, 2), sp.sp_element(EX1, 6)]
    cases += [sp.sp_element(EX1, EX1.prime(n)) for n in range(1, 9)]
    cases += [sp.torsion_element(EX1, 3, 5), sp.torsion_element(EX1, 3, 25)]
    for n in range(1, 9):
        tr = sp.truncate(EX1, n)
        for alpha in cases:
            rep = sp.stab_index_mul(alpha, EX1)
            expected = max(rep.step_at(i) for i in range(1, n + 1))
            assert stab_index(tr.mult_endo(alpha)) == expected


# -- Ulm subgroup -------------------------------------------------------------------


def test_ulm_examples():
    assert sp.ulm_is_zero(sp.zero_element(EX1), EX1)
    assert not sp.ulm_is_zero(Z, EX1)
    assert not sp.ulm_is_zero(sp.torsion_element(EX1, 2, 3), EX1)


@given(elements())
@settings(max_examples=80, deadline=None)
def test_ulm_only_zero_survives(x):
    assert sp.ulm_is_zero(x, EX1) == x.is_zero()


# -- uniformity of the model ---------------------------------------------------------


def test_uniform_sp_examples():
    assert sp.is_uniformly_scoh_sp(SpGroupSpec(ALL_PRIMES, ConstExp(4))).answer is YES
    v = sp.is_uniformly_scoh_sp(EX1)
    assert v.answer is NO
    assert "witness" in v.rules[0].note
    assert sp.is_uniformly_scoh_sp(FLAT).answer is YES


# -- bundled example constructions ----------------------------------------------------


def test_example_ex0_verdicts():
    g = sp.build_example("ex0")
    assert c.group_is_scoh(g).answer is YES
    assert c.torsion_verdict(g).answer is YES
    assert c.quotient_verdict(g).answer is NO


def test_example_ex1_verdicts():
    g = sp.build_example("ex1")
    assert c.group_is_scoh(g).answer is YES
    assert c.torsion_verdict(g).answer is NO
    assert c.is_uniformly_scoh_desc(g).answer is NO


def test_example_ex3_verdicts():
    g = sp.build_example("ex3")
    assert c.group_is_scoh(g).answer is NO
    assert c.torsion_verdict(g).answer is NO
    assert c.quotient_verdict(g).answer is YES


def test_unknown_example_id():
    with pytest.raises(ValueError, match="unknown example id"):
        sp.build_example("ex2")
