"""Brute-force verification: exhaustive endomorphism sweeps at desk scale.

Everything quantitative that the classifier asserts symbolically is
checked here by enumerating every endomorphism of every small group in
scope: the exponent bound on p-groups, the witness constructions
attaining rank and exponent from below, the image-kernel sum
equivalence, and the agreement of the closed-form sp-group stabilization
with plain iteration on truncations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import _scan
from .descriptors import SpGroupSpec
from .groups import (
    CapExceededError,
    FinAbGroup,
    Homomorphism,
    endo_count,
    enumerate_endos,
    make_group,
    max_stab_index,
    stab_index,
    sum_decomposition_check,
    validate_hom,
)
from .spgroup import SpElement, stab_index_mul, truncate

DEFAULT_CAP = 1 << 25  # admits every 2-group of cardinality <= 32

WITNESS_RANK_SHIFT = "RankShift"
WITNESS_MULT_BY_P = "MultByP"


class BoundViolationError(AssertionError):
    """An exhaustive sweep found a stabilization index above the bound."""

    def __init__(self, result: "BoundCheckResult"):
        super().__init__(
            f"{result.group}: exhaustive max {result.exhaustive_max} exceeds "
            f"bound {result.theoretical_bound}"
        )
        self.result = result


@dataclass(frozen=True)
class BoundCheckResult:
    group: FinAbGroup
    endo_count: int
    exhaustive_max: int
    theoretical_bound: int
    witness: Homomorphism
    lower_witnesses: tuple[tuple[str, int], ...]  # (witness kind, achieved index)

    @property
    def ok(self) -> bool:
        return self.exhaustive_max <= self.theoretical_bound

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.exhaustive_max, self.theoretical_bound)


def construct_witness(G: FinAbGroup, kind: str) -> Homomorphism:
    """Endomorphisms attaining the two lower bounds on a p-group.

    RankShift (homocyclic groups only: the shift must preserve orders)
    sends each factor's generator to the next factor's generator and the
    last to zero; its index is exactly the rank.  MultByP is scalar
    multiplication by p; its index is exactly the largest exponent.
    """
    p = G.p_group_prime()
    if p is None:
        raise ValueError(f"witness construction needs a nonzero p-group, got {G}")
    k = G.rank
    if kind == WITNESS_RANK_SHIFT:
        if not G.is_homocyclic():
            raise ValueError(
                f"rank-shift witness needs a homocyclic group, got {G}"
            )
        matrix = [[1 if i == j + 1 else 0 for j in range(k)] for i in range(k)]
    elif kind == WITNESS_MULT_BY_P:
        matrix = [[p if i == j else 0 for j in range(k)] for i in range(k)]
    else:
        raise ValueError(f"unknown witness kind {kind!r}")
    return validate_hom(matrix, G, G)


def verify_exponent_bound(
    G: FinAbGroup, cap: int = DEFAULT_CAP, workers: int = 1
) -> BoundCheckResult:
    """Exhaustively confirm max stab index <= e where card(G) = p^e."""
    p = G.p_group_prime()
    if p is None:
        raise ValueError(f"exponent bound check needs a p-group, got {G}")
    e = sum(exp for _, exp in G.factors)
    best, witness = max_stab_index(G, cap, workers=workers)
    lower = [(WITNESS_MULT_BY_P, stab_index(construct_witness(G, WITNESS_MULT_BY_P)))]
    if G.is_homocyclic():
        lower.append(
            (WITNESS_RANK_SHIFT, stab_index(construct_witness(G, WITNESS_RANK_SHIFT)))
        )
    result = BoundCheckResult(G, endo_count(G), best, e, witness, tuple(lower))
    if not result.ok:
        raise BoundViolationError(result)
    return result


@dataclass(frozen=True)
class SweepReport:
    results: tuple[BoundCheckResult, ...]
    violations: tuple[BoundCheckResult, ...]
    failures: tuple[tuple[FinAbGroup, str], ...]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.failures

    @property
    def max_ratio(self) -> Fraction:
        rows = self.results + self.violations
        return max((r.ratio for r in rows), default=Fraction(0))


def sweep(groups, cap: int = DEFAULT_CAP, workers: int = 1) -> SweepReport:
    """Run the exponent-bound check on every group; never abort mid-sweep."""
    results: list[BoundCheckResult] = []
    violations: list[BoundCheckResult] = []
    failures: list[tuple[FinAbGroup, str]] = []
    for G in groups:
        try:
            results.append(verify_exponent_bound(G, cap, workers=workers))
        except BoundViolationError as err:
            violations.append(err.result)
        except (CapExceededError, ValueError) as err:
            failures.append((G, str(err)))
    return SweepReport(tuple(results), tuple(violations), tuple(failures))


def check_sum_decomposition_equivalence(
    G: FinAbGroup, cap: int = DEFAULT_CAP, workers: int = 1
) -> tuple[int, int]:
    """(violations, first violating rank or -1) over all endomorphisms of G.

    For every endomorphism f and every 1 <= n <= stab+2, the image and
    kernel of f^n must generate the whole group exactly when n has
    reached the stabilization index.
    """
    count = endo_count(G)
    if count > cap:
        raise CapExceededError(count, cap)
    dense = _scan.DenseGroup.build(G)
    if dense is None:
        for rank, f in enumerate(enumerate_endos(G, cap)):
            s = stab_index(f)
            for n in range(1, s + 3):
                if sum_decomposition_check(f, n) != (n >= s):
                    return 1, rank
        return 0, -1
    res = _scan.scan(dense, 0, count, workers=workers, check_equiv=True)
    return res.violations, res.first_violation_rank


def cross_check_truncation(spec: SpGroupSpec, alpha: SpElement, n: int) -> bool:
    """Does the closed-form stabilization match plain iteration on the
    first n components?"""
    rep = stab_index_mul(alpha, spec)
    tr = truncate(spec, n)
    expected = max(rep.step_at(i) for i in range(1, n + 1))
    return stab_index(tr.mult_endo(alpha)) == expected


# ---------------------------------------------------------------------------
# Group universes for the sweeps
# ---------------------------------------------------------------------------


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Descending partitions of n, largest first part first."""
    if n == 0:
        yield ()
        return
    largest = min(largest or n, n)
    for first in range(largest, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def p_groups_up_to(p: int, max_card: int) -> tuple[FinAbGroup, ...]:
    """Every abelian p-group of cardinality <= max_card, all exponent partitions."""
    out = []
    e = 1
    while p**e <= max_card:
        for part in partitions(e):
            out.append(make_group([(p, x) for x in part]))
        e += 1
    return tuple(out)


def abelian_groups_up_to(max_card: int) -> tuple[FinAbGroup, ...]:
    """Every abelian group of cardinality <= max_card, including the zero group."""
    from .primes import prime_factors
    import itertools

    out = [make_group([])]
    for n in range(2, max_card + 1):
        per_prime = []
        for p in prime_factors(n):
            a = 0
            m = n
            while m % p == 0:
                m //= p
                a += 1
            per_prime.append([[(p, x) for x in part] for part in partitions(a)])
        for combo in itertools.product(*per_prime):
            out.append(make_group([f for block in combo for f in block]))
    return tuple(out)
