import pytest

from scoh import oracle
from scoh.descriptors import LinearExp, SpGroupSpec
from scoh.groups import make_group, stab_index
from scoh.primes import ALL_PRIMES
from scoh.spgroup import one_element, sp_element, torsion_element

EX1 = SpGroupSpec(ALL_PRIMES, LinearExp())


def test_verify_exponent_bound_z8():
    r = oracle.verify_exponent_bound(make_group([(2, 3)]))
    assert r.exhaustive_max == 3
    assert r.theoretical_bound == 3
    assert r.witness.matrix == ((2,),)
    assert dict(r.lower_witnesses)["MultByP"] == 3


def test_verify_exponent_bound_z2_squared():
    r = oracle.verify_exponent_bound(make_group([(2, 1), (2, 1)]))
    assert r.exhaustive_max <= 2
    assert r.theoretical_bound == 2
    assert dict(r.lower_witnesses)["RankShift"] == 2


def test_verify_exponent_bound_z2():
    r = oracle.verify_exponent_bound(make_group([(2, 1)]))
    assert r.exhaustive_max == 1
    assert r.theoretical_bound == 1


def test_verify_rejects_mixed_primes():
    with pytest.raises(ValueError, match="p-group"):
        oracle.verify_exponent_bound(make_group([(2, 1), (3, 1)]))


def test_construct_witness_rank_shift():
    G = make_group([(2, 1)] * 3)
    w = oracle.construct_witness(G, oracle.WITNESS_RANK_SHIFT)
    assert stab_index(w) == 3


def test_construct_witness_mult_by_p():
    G = make_group([(3, 4)])
    w = oracle.construct_witness(G, oracle.WITNESS_MULT_BY_P)
    assert stab_index(w) == 4


def test_construct_witness_rank_shift_needs_homocyclic():
    with pytest.raises(ValueError, match="homocyclic"):
        oracle.construct_witness(make_group([(2, 2), (2, 1)]), oracle.WITNESS_RANK_SHIFT)


def test_witness_lower_bounds_attained_on_homocyclic():
    for p in (2, 3):
        for c in (1, 2):
            for r in (1, 2):
                G = make_group([(p, c)] * r)
                res = oracle.verify_exponent_bound(G)
                assert res.exhaustive_max >= max(r, c)


def test_sweep_small_two_groups():
    report = oracle.sweep(oracle.p_groups_up_to(2, 16))
    assert report.ok
    assert len(report.results) == 11  # partitions of 1..4
    assert report.max_ratio <= 1
    for r in report.results:
        achieved = dict(r.lower_witnesses)
        # every witness is dominated by the exhaustive maximum, and the
        # scalar witness attains exactly the largest exponent
        assert all(v <= r.exhaustive_max for v in achieved.values())
        assert achieved["MultByP"] == max(e for _, e in r.group.factors)
        if r.group.is_homocyclic():
            assert achieved["RankShift"] == r.group.rank


def test_sweep_empty():
    report = oracle.sweep(())
    assert report.ok
    assert report.results == ()
    assert report.max_ratio == 0


def test_sweep_records_cap_failures_without_aborting():
    groups = [make_group([(2, 1)]), make_group([(2, 3)])]
    report = oracle.sweep(groups, cap=4)
    assert len(report.results) == 1
    assert len(report.failures) == 1
    assert "exceeds cap" in report.failures[0][1]


def test_sweep_deterministic_across_workers():
    groups = oracle.p_groups_up_to(2, 16)
    a = oracle.sweep(groups, workers=1)
    b = oracle.sweep(groups, workers=3)
    assert a == b


def test_check_sum_decomposition_equivalence():
    for G in (make_group([(2, 3)]), make_group([(2, 2), (2, 1)]), make_group([(2, 1), (3, 1)])):
        viols, first = oracle.check_sum_decomposition_equivalence(G)
        assert viols == 0 and first == -1


def test_cross_check_truncation_examples():
    assert oracle.cross_check_truncation(EX1, one_element(EX1), 5)
    assert oracle.cross_check_truncation(EX1, sp_element(EX1, 5), 5)
    assert oracle.cross_check_truncation(EX1, torsion_element(EX1, 2, 3), 4)


def test_partitions_order():
    assert list(oracle.partitions(5))[:3] == [(5,), (4, 1), (3, 2)]
    assert list(oracle.partitions(3)) == [(3,), (2, 1), (1, 1, 1)]


def test_group_universes():
    gs = oracle.p_groups_up_to(2, 32)
    assert len(gs) == 18  # partitions of 1, 2, 3, 4, 5
    all_groups = oracle.abelian_groups_up_to(12)
    names = [str(g) for g in all_groups]
    assert "Z(4)+Z(3)" in names
    assert "Z(2)+Z(2)+Z(3)" in names
    assert len(all_groups) == len(set(names))
