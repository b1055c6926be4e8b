"""The dense bitmask scanner must agree with the Hermite-normal-form route."""

import pytest

from scoh import _scan
from scoh.groups import (
    endo_by_rank,
    endo_count,
    enumerate_endos,
    make_group,
    stab_index,
    sum_decomposition_check,
)

GROUPS = [
    make_group([]),
    make_group([(2, 1)]),
    make_group([(2, 3)]),
    make_group([(2, 2), (2, 1)]),
    make_group([(2, 1), (2, 1), (2, 1)]),
    make_group([(3, 2)]),
    make_group([(2, 1), (3, 1)]),
    make_group([(2, 2), (3, 1)]),
    make_group([(5, 1), (2, 1)]),
    make_group([(3, 1), (3, 1)]),
]


@pytest.mark.parametrize("G", GROUPS, ids=str)
def test_scan_matches_lattice_route(G):
    dense = _scan.DenseGroup.build(G)
    assert dense is not None
    count = endo_count(G)
    res = _scan.scan(dense, 0, count, check_equiv=True)
    best, best_rank = -1, -1
    for rk, f in enumerate(enumerate_endos(G, 10**7)):
        s = stab_index(f)
        if s > best:
            best, best_rank = s, rk
    assert res.max_stab == best
    assert res.max_rank == best_rank
    assert res.violations == 0


@pytest.mark.parametrize("G", GROUPS[1:6], ids=str)
def test_scan_equivalence_flag_matches_direct_checks(G):
    # the kernel's sum-decomposition test replays the HNF-based one
    dense = _scan.DenseGroup.build(G)
    for f in enumerate_endos(G, 10**7):
        s = stab_index(f)
        for n in range(1, s + 3):
            assert sum_decomposition_check(f, n) == (n >= s)


def test_scan_worker_count_does_not_change_result():
    G = make_group([(2, 2), (2, 1)])
    dense = _scan.DenseGroup.build(G)
    count = endo_count(G)
    base = _scan.scan(dense, 0, count, workers=1, check_equiv=True)
    for w in (2, 3, 5, 16):
        assert _scan.scan(dense, 0, count, workers=w, check_equiv=True) == base


def test_python_mirror_matches_kernel():
    G = make_group([(2, 2), (3, 1)])
    dense = _scan.DenseGroup.build(G)
    count = endo_count(G)
    py = _scan._scan_range_py(dense, 0, count, True)
    assert _scan.scan_range(dense, 0, count, True) == py


def test_dense_build_refuses_large_groups():
    assert _scan.DenseGroup.build(make_group([(2, 6)])) is None


def test_max_stab_falls_back_to_lattice_route_beyond_mask_limit():
    from scoh.groups import max_stab_index

    best, witness = max_stab_index(make_group([(101, 1)]), 200)
    assert best == 1 and witness.matrix == ((0,),)
    best, witness = max_stab_index(make_group([(2, 7)]), 200)
    assert best == 7 and witness.matrix == ((2,),)


def test_witness_rank_decodes_to_lex_smallest_maximizer():
    G = make_group([(2, 3)])
    dense = _scan.DenseGroup.build(G)
    res = _scan.scan(dense, 0, endo_count(G))
    assert endo_by_rank(G, res.max_rank).matrix == ((2,),)
