"""Symbolic descriptors for possibly-infinite abelian groups, and verdicts.

A descriptor names a group by shape: a torsion group given per-prime with
a tail rule, a torsion-free group by rank and divisibility, a divisible
group by its ranks, the full product of the p-components of a torsion
descriptor, the rational-quotient pure-subgroup model of
:mod:`scoh.spgroup`, or a direct sum.  Structural flags (reduced,
cotorsion, ...) are user-asserted facts; the constructor rejects only
detectable contradictions.

Verdicts are three-valued.  Yes/No verdicts carry a certificate: the
ordered list of rules that fired, each with the sub-verdicts or witnesses
it consumed.  Unknown verdicts carry a reason tag instead; "unknown" is a
first-class answer, never a failure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .groups import FinAbGroup
from .primes import ALL_PRIMES, PrimeSelector

INFINITE = float("inf")
Rank = Union[int, float]


def rank_str(r: Rank) -> str:
    return "inf" if r == INFINITE else str(int(r))


# ---------------------------------------------------------------------------
# Tail rules: the p-components at all primes beyond the explicit part.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroTail:
    """T_p = 0 for every tail prime."""


@dataclass(frozen=True)
class ConstExp:
    """T_p = Z(p^c)^r for every tail prime."""

    c: int
    r: int = 1

    def __post_init__(self):
        if self.c < 1 or self.r < 1:
            raise ValueError("ConstExp parameters must be >= 1")


@dataclass(frozen=True)
class LinearExp:
    """T_p = Z(p^n) where n is the prime's position in its family."""


TailRule = Union[ZeroTail, ConstExp, LinearExp]


@dataclass(frozen=True)
class TailSegment:
    """One tail rule over a prime family, minus finitely many carve-outs.

    ``excluded`` primes contribute nothing, but do not shift the position
    index used by :class:`LinearExp`; that keeps merging two descriptors
    (for the torsion part of a direct sum) a plain concatenation.
    """

    selector: PrimeSelector
    rule: TailRule
    excluded: frozenset[int] = frozenset()


@dataclass(frozen=True)
class TorsionDescriptor:
    """explicit per-prime components plus tail segments for the rest."""

    explicit: tuple[tuple[int, FinAbGroup], ...] = ()
    segments: tuple[TailSegment, ...] = ()

    def explicit_map(self) -> dict[int, FinAbGroup]:
        return dict(self.explicit)

    def component_at(self, p: int) -> FinAbGroup:
        """The p-component as a finite group; explicit entries win over tails."""
        em = self.explicit_map()
        if p in em:
            return em[p]
        factors: list[tuple[int, int]] = []
        for seg in self.segments:
            if p in seg.excluded:
                continue
            idx = seg.selector.index_of(p)
            if idx is None:
                continue
            if isinstance(seg.rule, ConstExp):
                factors.extend([(p, seg.rule.c)] * seg.rule.r)
            elif isinstance(seg.rule, LinearExp):
                factors.append((p, idx))
        return FinAbGroup(tuple(factors))

    def has_infinite_support(self) -> bool:
        return any(not isinstance(seg.rule, ZeroTail) for seg in self.segments)


def torsion_descriptor(
    explicit: dict[int, FinAbGroup] | None = None,
    tail: TailRule = ZeroTail(),
    primes: PrimeSelector = ALL_PRIMES,
) -> TorsionDescriptor:
    """Validate and build a single-segment torsion descriptor."""
    explicit = dict(explicit or {})
    from .primes import is_prime

    items = []
    for p in sorted(explicit):
        if not is_prime(p):
            raise ValueError(f"explicit torsion key {p} is not prime")
        comp = explicit[p]
        if any(q != p for q, _ in comp.factors):
            raise ValueError(f"component at {p} is not a {p}-group: {comp}")
        items.append((p, comp))
    segments: tuple[TailSegment, ...] = ()
    if not isinstance(tail, ZeroTail):
        segments = (TailSegment(primes, tail, frozenset(explicit)),)
    return TorsionDescriptor(tuple(items), segments)


# ---------------------------------------------------------------------------
# Divisible ranks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstRank:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("rank bound must be >= 0")


@dataclass(frozen=True)
class UnboundedRank:
    pass


@dataclass(frozen=True)
class DivisibleDescriptor:
    r0: Rank  # torsion-free rank
    rp: Union[ConstRank, UnboundedRank] = ConstRank(0)


# ---------------------------------------------------------------------------
# The sp-group model specification (elements live in scoh.spgroup)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpGroupSpec:
    """Pure subgroup of prod Z(p_i^{e_i}) containing the torsion and the
    all-ones element, with rational quotient; exponents come from the rule."""

    primes: PrimeSelector = ALL_PRIMES
    exps: Union[ConstExp, LinearExp] = LinearExp()

    def __post_init__(self):
        if isinstance(self.exps, ConstExp) and self.exps.r != 1:
            raise ValueError("sp-group exponent rule must have multiplicity 1")

    def exponent(self, i: int) -> int:
        return self.exps.c if isinstance(self.exps, ConstExp) else i

    def prime(self, i: int) -> int:
        return self.primes.nth(i)

    def modulus(self, i: int) -> int:
        return self.prime(i) ** self.exponent(i)

    def torsion(self) -> TorsionDescriptor:
        return TorsionDescriptor((), (TailSegment(self.primes, self.exps),))


# ---------------------------------------------------------------------------
# Shapes and the full descriptor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Torsion:
    torsion: TorsionDescriptor


@dataclass(frozen=True)
class TorsionFree:
    divisible: bool
    rank: Rank


@dataclass(frozen=True)
class Divisible:
    ranks: DivisibleDescriptor


@dataclass(frozen=True)
class ReducedProductSp:
    """The full product of the p-components of a torsion descriptor."""

    torsion: TorsionDescriptor


@dataclass(frozen=True)
class ERingSp:
    spec: SpGroupSpec


@dataclass(frozen=True)
class Sum:
    left: "GroupDescriptor"
    right: "GroupDescriptor"


Shape = Union[Torsion, TorsionFree, Divisible, ReducedProductSp, ERingSp, Sum]

FLAG_REDUCED = "reduced"
FLAG_COTORSION = "cotorsion"
FLAG_ADJUSTED_COTORSION = "adjusted-cotorsion"
FLAG_ALG_COMPACT = "alg-compact"
KNOWN_FLAGS = (FLAG_REDUCED, FLAG_COTORSION, FLAG_ADJUSTED_COTORSION, FLAG_ALG_COMPACT)


class DescriptorError(ValueError):
    pass


@dataclass(frozen=True)
class GroupDescriptor:
    shape: Shape
    flags: frozenset[str] = frozenset()


def _definitely_not_reduced(shape: Shape) -> bool:
    """True when the shape provably contains a nonzero divisible subgroup."""
    if isinstance(shape, Divisible):
        d = shape.ranks
        return d.r0 != 0 or d.rp != ConstRank(0)
    if isinstance(shape, TorsionFree):
        return shape.divisible and shape.rank != 0
    if isinstance(shape, Sum):
        return _definitely_not_reduced(shape.left.shape) or _definitely_not_reduced(
            shape.right.shape
        )
    return False


def describe(shape: Shape, flags=()) -> GroupDescriptor:
    """Attach flags to a shape, rejecting detectable contradictions."""
    fl = frozenset(flags)
    for f in fl:
        if f not in KNOWN_FLAGS:
            raise DescriptorError(f"unknown flag {f!r}")
    if FLAG_REDUCED in fl and _definitely_not_reduced(shape):
        raise DescriptorError(
            "flag 'reduced' contradicts a shape with a nonzero divisible part"
        )
    return GroupDescriptor(shape, fl)


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


class Answer(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


YES, NO, UNKNOWN = Answer.YES, Answer.NO, Answer.UNKNOWN


@dataclass(frozen=True)
class RuleApplication:
    rule: str
    note: str = ""
    children: tuple["Verdict", ...] = ()


@dataclass(frozen=True)
class Verdict:
    answer: Answer
    rules: tuple[RuleApplication, ...] = ()
    reason: str | None = None

    def __post_init__(self):
        if self.answer is UNKNOWN:
            if not self.reason:
                raise ValueError("an unknown verdict needs a reason tag")
        elif not self.rules:
            raise ValueError("a definite verdict needs a nonempty certificate")

    def rule_names(self) -> tuple[str, ...]:
        """All rule names, certificate order, parents before children."""
        out: list[str] = []

        def walk(v: Verdict):
            for app in v.rules:
                out.append(app.rule)
                for child in app.children:
                    walk(child)

        walk(self)
        return tuple(out)


def yes(rule: str, note: str = "", children=()) -> Verdict:
    return Verdict(YES, (RuleApplication(rule, note, tuple(children)),))


def no(rule: str, note: str = "", children=()) -> Verdict:
    return Verdict(NO, (RuleApplication(rule, note, tuple(children)),))


def unknown(reason: str, rules=()) -> Verdict:
    return Verdict(UNKNOWN, tuple(rules), reason)
