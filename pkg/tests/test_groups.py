import pytest
from hypothesis import given, settings, strategies as st

from scoh.groups import (
    CapExceededError,
    GroupValidationError,
    HomValidationError,
    compose,
    endo_by_rank,
    endo_count,
    enumerate_endos,
    hom_power,
    identity_hom,
    image,
    image_chain_cards,
    kernel,
    make_group,
    max_stab_index,
    stab_index,
    subgroup_equal,
    subgroup_from_gens,
    subgroup_join,
    sum_decomposition_check,
    validate_hom,
    whole_subgroup,
    zero_hom,
    zero_subgroup,
)

Z8 = make_group([(2, 3)])
Z4Z2 = make_group([(2, 2), (2, 1)])
Z2 = make_group([(2, 1)])
Z4 = make_group([(2, 2)])
ZERO = make_group([])


# -- construction ------------------------------------------------------------


def test_make_group_examples():
    assert ZERO.cardinality == 1
    assert Z8.cardinality == 8
    G = make_group([(2, 2), (2, 1), (3, 1)])
    assert G.cardinality == 24
    assert G.factors == ((2, 2), (2, 1), (3, 1))


def test_make_group_rejects_bad_factors():
    with pytest.raises(GroupValidationError, match="4 is not prime"):
        make_group([(4, 1)])
    with pytest.raises(GroupValidationError, match="exponent 0"):
        make_group([(2, 0)])


def test_normalized_sorts_factors():
    G = make_group([(3, 1), (2, 2), (2, 1)])
    assert G.normalized().factors == ((2, 1), (2, 2), (3, 1))


# -- homomorphism validation -------------------------------------------------


def test_validate_hom_identity():
    f = validate_hom([[1]], Z8, Z8)
    assert f.matrix == ((1,),)


def test_validate_hom_rejects_congruence_failure():
    with pytest.raises(HomValidationError, match=r"divisible by 2"):
        validate_hom([[1]], Z2, Z4)


def test_validate_hom_embedding():
    f = validate_hom([[2]], Z2, Z4)
    assert f(Z2.element([1])).coords == (2,)


def test_validate_hom_reduces_entries():
    f = validate_hom([[9]], Z8, Z8)
    assert f.matrix == ((1,),)


# -- composition -------------------------------------------------------------


def test_compose_identity_law():
    f = validate_hom([[3]], Z8, Z8)
    assert compose(identity_hom(Z8), f).matrix == f.matrix
    assert compose(f, identity_hom(Z8)).matrix == f.matrix


def test_compose_zero_absorbs():
    f = validate_hom([[3]], Z8, Z8)
    assert compose(zero_hom(Z8, Z8), f).matrix == ((0,),)


def test_compose_mult_by_two_squares_to_four():
    f = validate_hom([[2]], Z8, Z8)
    assert compose(f, f).matrix == ((4,),)


def test_compose_agrees_with_pointwise_application():
    f = validate_hom([[2, 2], [0, 1]], Z4Z2, Z4Z2)
    g = validate_hom([[3, 2], [1, 1]], Z4Z2, Z4Z2)
    fg = compose(f, g)
    for x in Z4Z2.elements():
        assert fg(x) == f(g(x))


# -- subgroups, image, kernel ------------------------------------------------


def test_image_identity_is_whole_group():
    assert image(identity_hom(Z8)).is_whole()


def test_image_mult_by_two():
    im = image(validate_hom([[2]], Z8, Z8))
    assert im.cardinality == 4
    assert im.elements() == frozenset({(0,), (2,), (4,), (6,)})


def test_image_column_span_matches_enumeration():
    # The span of the columns (2,0) and (1,0) inside Z(4)+Z(2); an
    # independent oracle collects every value of the representative map
    # (x1, x2) -> (2 x1 + x2, 0) over all 8 coordinate pairs.
    sub = subgroup_from_gens(Z4Z2, [(2, 0), (1, 0)])
    oracle = frozenset(
        ((2 * x1 + x2) % 4, 0) for x1 in range(4) for x2 in range(2)
    )
    assert sub.cardinality == 4
    assert sub.elements() == oracle
    assert subgroup_equal(sub, subgroup_from_gens(Z4Z2, [(1, 0)]))


def test_kernel_examples():
    assert kernel(identity_hom(Z8)).is_zero()
    assert kernel(zero_hom(Z8, Z8)).is_whole()
    ker = kernel(validate_hom([[2]], Z8, Z8))
    assert ker.cardinality == 2
    assert ker.elements() == frozenset({(0,), (4,)})


def test_subgroup_equal_examples():
    im2 = image(validate_hom([[2]], Z8, Z8))
    gen6 = subgroup_from_gens(Z8, [(6,)])
    assert subgroup_equal(im2, gen6)
    assert not subgroup_equal(whole_subgroup(Z2), zero_subgroup(Z2))
    f = identity_hom(Z8)
    assert subgroup_equal(image(f), image(compose(f, f)))


def test_canonical_form_is_generator_independent():
    # Regression: these two generating sets span the same subgroup of
    # Z(2)^3 but once produced different "canonical" bases, which made
    # the image chain of ((0,0,1),(0,1,0),(0,1,1)) look non-stationary.
    Z2cube = make_group([(2, 1)] * 3)
    a = subgroup_from_gens(Z2cube, [(0, 1, 1), (1, 0, 1)])
    b = subgroup_from_gens(Z2cube, [(1, 1, 0), (1, 0, 1)])
    assert a.basis == b.basis
    f = validate_hom([[0, 0, 1], [0, 1, 0], [0, 1, 1]], Z2cube, Z2cube)
    assert stab_index(f) == 1


def test_subgroup_equal_rejects_ambient_mismatch():
    with pytest.raises(ValueError, match="ambient"):
        subgroup_equal(whole_subgroup(Z2), whole_subgroup(Z4))


# -- stabilization -----------------------------------------------------------


def test_stab_index_examples():
    assert stab_index(identity_hom(Z8)) == 0
    assert stab_index(zero_hom(Z8, Z8)) == 1
    assert stab_index(validate_hom([[2]], Z8, Z8)) == 3


def test_image_chain_cards():
    assert image_chain_cards(validate_hom([[2]], Z8, Z8)) == (8, 4, 2, 1, 1)


def test_sum_decomposition_examples():
    assert sum_decomposition_check(identity_hom(Z8), 1)
    f = validate_hom([[2]], Z8, Z8)
    assert not sum_decomposition_check(f, 1)
    assert sum_decomposition_check(f, 3)


# -- enumeration -------------------------------------------------------------


def test_enumerate_endos_z2():
    endos = list(enumerate_endos(Z2, 10))
    assert len(endos) == 2
    assert endos[0].matrix == ((0,),)
    assert endos[1].matrix == ((1,),)


def test_enumerate_endos_count_z4z2():
    assert endo_count(Z4Z2) == 32
    endos = list(enumerate_endos(Z4Z2, 100))
    assert len(endos) == 32
    assert len({e.matrix for e in endos}) == 32
    # every enumerated matrix passes validation unchanged
    for e in endos:
        assert validate_hom(e.matrix, Z4Z2, Z4Z2).matrix == e.matrix


def test_enumerate_endos_cap_refusal():
    with pytest.raises(CapExceededError) as err:
        list(enumerate_endos(Z8, 4))
    assert err.value.count == 8


def test_endo_by_rank_matches_enumeration_order():
    for rk, f in enumerate(enumerate_endos(Z4Z2, 100)):
        assert endo_by_rank(Z4Z2, rk).matrix == f.matrix


def test_enumeration_is_lexicographic_on_flattened_matrices():
    flats = [sum(f.matrix, ()) for f in enumerate_endos(Z4Z2, 100)]
    assert flats == sorted(flats)


# -- max stabilization -------------------------------------------------------


def test_max_stab_index_z2():
    best, witness = max_stab_index(Z2, 10)
    assert best == 1
    assert witness.matrix == ((0,),)


def test_max_stab_index_z8():
    best, witness = max_stab_index(Z8, 10)
    assert best == 3
    assert witness.matrix == ((2,),)


def test_max_stab_index_zero_group():
    best, witness = max_stab_index(ZERO, 10)
    assert best == 0
    assert witness.matrix == ()


# -- properties --------------------------------------------------------------

SMALL_GROUPS = [
    ZERO,
    Z2,
    Z4,
    Z8,
    Z4Z2,
    make_group([(2, 1), (2, 1)]),
    make_group([(3, 2)]),
    make_group([(2, 2), (3, 1)]),
    make_group([(2, 1), (2, 1), (2, 1)]),
    make_group([(3, 1), (2, 2)]),
]


@st.composite
def group_and_endo(draw):
    G = draw(st.sampled_from(SMALL_GROUPS))
    matrix = []
    import math

    for n_i in G.orders:
        row = []
        for n_j in G.orders:
            g = math.gcd(n_i, n_j)
            step = n_i // g
            row.append(step * draw(st.integers(min_value=0, max_value=g - 1)))
        matrix.append(row)
    return G, validate_hom(matrix, G, G)


@given(group_and_endo(), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_canonical_form_invariant_under_generator_shuffle(ge, rng):
    G, f = ge
    cols = [f.column(j) for j in range(G.rank)]
    sub = subgroup_from_gens(G, cols)
    shuffled = list(cols)
    rng.shuffle(shuffled)
    # also throw in a sum of two generators; it changes nothing
    if len(cols) >= 2:
        shuffled.append(tuple(u + v for u, v in zip(cols[0], cols[1])))
    assert subgroup_from_gens(G, shuffled).basis == sub.basis


@given(group_and_endo())
@settings(max_examples=150, deadline=None)
def test_chain_monotone_and_strict_before_stab(ge):
    G, f = ge
    s = stab_index(f)
    prev = whole_subgroup(G)
    for n in range(1, s + 3):
        im = image(hom_power(f, n))
        assert prev.contains(im)
        if n <= s:
            assert not subgroup_equal(prev, im)
        prev = im


@given(group_and_endo())
@settings(max_examples=100, deadline=None)
def test_stationarity_persists(ge):
    G, f = ge
    s = stab_index(f)
    stable = image(hom_power(f, s))
    for k in range(1, 4):
        assert subgroup_equal(stable, image(hom_power(f, s + k)))


@given(group_and_endo())
@settings(max_examples=100, deadline=None)
def test_duality_of_counts(ge):
    G, f = ge
    assert image(f).cardinality * kernel(f).cardinality == G.cardinality


@given(group_and_endo())
@settings(max_examples=100, deadline=None)
def test_sum_decomposition_iff_stabilized(ge):
    G, f = ge
    s = stab_index(f)
    for n in range(1, s + 3):
        assert sum_decomposition_check(f, n) == (n >= s)


@given(group_and_endo())
@settings(max_examples=100, deadline=None)
def test_restriction_to_stable_image_is_bijective(ge):
    G, f = ge
    stable = image(hom_power(f, stab_index(f))).elements()
    mapped = {f(G.element(x)).coords for x in stable}
    assert mapped == stable


@given(group_and_endo())
@settings(max_examples=60, deadline=None)
def test_join_of_image_and_kernel_matches_elementwise_sum(ge):
    G, f = ge
    im, ker = image(f), kernel(f)
    joined = subgroup_join(im, ker)
    pointwise = {
        tuple((u + v) % n for u, v, n in zip(a, b, G.orders))
        for a in im.elements()
        for b in ker.elements()
    }
    assert joined.elements() == frozenset(pointwise)
