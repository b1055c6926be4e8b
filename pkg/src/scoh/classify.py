"""Decision procedures over group descriptors.

Every procedure returns a three-valued :class:`~scoh.descriptors.Verdict`
whose certificate names the rules that fired, in order, with the
sub-verdicts they consumed.  The rule set is deliberately closed: where
no rule applies the answer is Unknown with a reason tag, never a guess.
In particular a direct sum with no vanishing-Hom certificate and no
non-stationary summand stays Unknown; whether such sums are always
stationary is open.
"""

from __future__ import annotations

from functools import cache

from . import descriptors as d
from .descriptors import (
    NO,
    UNKNOWN,
    YES,
    Answer,
    ConstExp,
    ConstRank,
    Divisible,
    DivisibleDescriptor,
    ERingSp,
    GroupDescriptor,
    INFINITE,
    LinearExp,
    Rank,
    ReducedProductSp,
    RuleApplication,
    Sum,
    Torsion,
    TorsionDescriptor,
    TorsionFree,
    UnboundedRank,
    Verdict,
    ZeroTail,
    no,
    rank_str,
    unknown,
    yes,
)
from .groups import FinAbGroup, Homomorphism, direct_sum
from .primes import EVEN_POSITIONS, ODD_POSITIONS, PrimeSelector, is_prime

# Rule vocabulary.  Names describe what a rule concludes from, so a
# certificate replays without any outside context.
RULE_TORSION_BOUND = "bounded-component-cards"
RULE_DIVISIBLE_RANKS = "divisible-finite-ranks"
RULE_TF = "torsionfree-divisible-finite-rank"
RULE_HOM_DIV_RED = "divisible-into-reduced"
RULE_HOM_DISJOINT = "disjoint-torsion-supports"
RULE_HOM_WITNESS = "explicit-nonzero-hom"
RULE_HOM_SPLIT = "summand-split"
RULE_TORSION_GROUP = "torsion-group"
RULE_TF_GROUP = "torsionfree-group"
RULE_DIV_GROUP = "divisible-group"
RULE_PRODUCT = "product-of-p-components"
RULE_ERING = "ering-rational-quotient"
RULE_INDEP = "independent-summands"
RULE_SUMMAND = "summand-closure"
RULE_LIFT = "torsion-quotient-lift"
RULE_ADJUSTED = "reduced-adjusted-cotorsion"
RULE_UNIFORM_MIRROR = "uniform-implies-stationary"
RULE_UNIFORM_DIV = "divisible-always-uniform"
RULE_UNIFORM_IFF = "uniform-iff-torsion-bounded"
RULE_COTORSION = "cotorsion-implies-algebraically-compact"
RULE_BOUND_RANK = "rank-bound"
RULE_BOUND_DOUBLE = "double-rank-bound"
RULE_BOUND_EXP = "component-exponent-bound"
RULE_BOUND_SUM = "summand-bound-addition"
RULE_BOUND_TRANSFER = "torsion-bound-transfer"


class PreconditionError(ValueError):
    """An operation was called outside its stated precondition."""


# ---------------------------------------------------------------------------
# Torsion boundedness
# ---------------------------------------------------------------------------


def minimal_card_exponent(t: TorsionDescriptor):
    """(bounded, e, witness_note): least e with card(T_p) <= p^e for all p.

    Tail segments with constant rule contribute a fixed exponent at
    infinitely many primes; a linear rule is unbounded.  The two position
    parity classes are the atoms of every selector, so overlapping
    segments are summed per class.
    """
    values = [0]
    for _, comp in t.explicit:
        values.append(sum(e for _, e in comp.factors))
    for seg in t.segments:
        if isinstance(seg.rule, LinearExp):
            samples = []
            i = 1
            while len(samples) < 3:
                p = seg.selector.nth(i)
                if p not in seg.excluded:
                    samples.append(f"Z({p}^{i})")
                i += 1
            note = (
                f"components {', '.join(samples)}, ... over {seg.selector.kind} "
                "primes grow without bound"
            )
            return False, None, note
    for atom in (ODD_POSITIONS, EVEN_POSITIONS):
        total = 0
        for seg in t.segments:
            if atom in seg.selector.positions() and isinstance(seg.rule, ConstExp):
                total += seg.rule.c * seg.rule.r
        values.append(total)
    return True, max(values), None


def torsion_is_scoh(t: TorsionDescriptor) -> Verdict:
    """Are all image chains of the torsion group stationary?

    Yes exactly when the p-component cardinalities admit a uniform
    exponent bound; the certificate carries the least such bound, or the
    unbounded tail as witness.
    """
    bounded, e, note = minimal_card_exponent(t)
    if bounded:
        return yes(RULE_TORSION_BOUND, f"card(T_p) <= p^{e} for all p; e={e}")
    return no(RULE_TORSION_BOUND, note)


def divisible_is_scoh(dd: DivisibleDescriptor) -> Verdict:
    if dd.r0 == INFINITE:
        return no(RULE_DIVISIBLE_RANKS, "torsion-free rank is infinite")
    if isinstance(dd.rp, UnboundedRank):
        return no(RULE_DIVISIBLE_RANKS, "p-ranks are unbounded")
    n0 = max(int(dd.r0), dd.rp.k)
    return yes(RULE_DIVISIBLE_RANKS, f"all ranks bounded by n0={n0}")


def torsionfree_is_scoh(divisible: bool, rank: Rank) -> Verdict:
    if not divisible and rank != 0:
        return no(RULE_TF, "not divisible")
    if rank == INFINITE:
        return no(RULE_TF, "infinite rank")
    return yes(RULE_TF, f"divisible of finite rank {rank_str(rank)}")


# ---------------------------------------------------------------------------
# Support and structural analyses
# ---------------------------------------------------------------------------


def _explicit_nonzero(t: TorsionDescriptor) -> tuple[int, ...]:
    return tuple(p for p, comp in t.explicit if comp.factors)


def _tail_atoms(t: TorsionDescriptor) -> frozenset[str]:
    atoms: set[str] = set()
    for seg in t.segments:
        if not isinstance(seg.rule, ZeroTail):
            atoms |= seg.selector.positions()
    return frozenset(atoms)


def _in_tail_support(t: TorsionDescriptor, p: int) -> bool:
    if p in dict(t.explicit):
        return False
    for seg in t.segments:
        if isinstance(seg.rule, ZeroTail) or p in seg.excluded:
            continue
        if seg.selector.index_of(p) is not None:
            return True
    return False


def _in_support(t: TorsionDescriptor, p: int) -> bool:
    return p in _explicit_nonzero(t) or _in_tail_support(t, p)


def supports_disjoint(t1: TorsionDescriptor, t2: TorsionDescriptor) -> bool:
    if _tail_atoms(t1) & _tail_atoms(t2):
        return False
    for p in _explicit_nonzero(t1):
        if _in_support(t2, p):
            return False
    for p in _explicit_nonzero(t2):
        if _in_support(t1, p):
            return False
    return True


def _common_support_prime(t1: TorsionDescriptor, t2: TorsionDescriptor) -> int | None:
    candidates = [
        p for p in _explicit_nonzero(t1) + _explicit_nonzero(t2)
        if _in_support(t1, p) and _in_support(t2, p)
    ]
    shared_atoms = _tail_atoms(t1) & _tail_atoms(t2)
    for atom in shared_atoms:
        sel = PrimeSelector(atom)
        i = 1
        while True:
            p = sel.nth(i)
            if _in_support(t1, p) and _in_support(t2, p):
                candidates.append(p)
                break
            i += 1
            if i > 64:  # finite exclusions cannot mask a whole family
                break
    return min(candidates) if candidates else None


def is_divisible_desc(g: GroupDescriptor) -> Answer:
    s = g.shape
    if isinstance(s, Divisible):
        return YES
    if isinstance(s, TorsionFree):
        return YES if (s.divisible or s.rank == 0) else NO
    if isinstance(s, Torsion):
        has = bool(_explicit_nonzero(s.torsion)) or s.torsion.has_infinite_support()
        return NO if has else YES
    if isinstance(s, ReducedProductSp):
        has = bool(_explicit_nonzero(s.torsion)) or s.torsion.has_infinite_support()
        return NO if has else YES
    if isinstance(s, ERingSp):
        return NO
    if isinstance(s, Sum):
        parts = (is_divisible_desc(s.left), is_divisible_desc(s.right))
        if NO in parts:
            return NO
        if all(p is YES for p in parts):
            return YES
        return UNKNOWN
    return UNKNOWN


def is_reduced_desc(g: GroupDescriptor) -> Answer:
    if d.FLAG_REDUCED in g.flags:
        return YES
    s = g.shape
    if isinstance(s, (Torsion, ReducedProductSp, ERingSp)):
        return YES
    if isinstance(s, TorsionFree):
        if s.rank == 0:
            return YES
        return NO if s.divisible else UNKNOWN
    if isinstance(s, Divisible):
        zero = s.ranks.r0 == 0 and s.ranks.rp == ConstRank(0)
        return YES if zero else NO
    if isinstance(s, Sum):
        parts = (is_reduced_desc(s.left), is_reduced_desc(s.right))
        if NO in parts:
            return NO
        if all(p is YES for p in parts):
            return YES
        return UNKNOWN
    return UNKNOWN


# ---------------------------------------------------------------------------
# Hom triviality
# ---------------------------------------------------------------------------


def _nonzero_hom_witness(src: FinAbGroup, tgt: FinAbGroup) -> Homomorphism:
    """The canonical nonzero map between nonzero p-groups for the same p."""
    a = src.factors[0][1]
    b = tgt.factors[0][1]
    p = tgt.factors[0][0]
    matrix = [[0] * src.rank for _ in range(tgt.rank)]
    matrix[0][0] = p ** max(0, b - a)
    from .groups import validate_hom

    return validate_hom(matrix, src, tgt)


def hom_trivial(b: GroupDescriptor, a: GroupDescriptor) -> Verdict:
    """Is every homomorphism from b into a zero?

    Yes only by rule (divisible source into reduced target, or reduced
    torsion groups with disjoint supports); No only with an explicit
    nonzero witness from finite data; otherwise Unknown.
    """
    if is_divisible_desc(b) is YES and is_reduced_desc(a) is YES:
        return yes(RULE_HOM_DIV_RED, "divisible source, reduced target")
    if isinstance(b.shape, Torsion) and isinstance(a.shape, Torsion):
        tb, ta = b.shape.torsion, a.shape.torsion
        if supports_disjoint(tb, ta):
            return yes(RULE_HOM_DISJOINT, "reduced torsion with disjoint supports")
        p = _common_support_prime(tb, ta)
        if p is not None:
            w = _nonzero_hom_witness(tb.component_at(p), ta.component_at(p))
            return no(RULE_HOM_WITNESS, f"nonzero map at prime {p}: {w}")
    if isinstance(b.shape, Sum):
        h1 = hom_trivial(b.shape.left, a)
        h2 = hom_trivial(b.shape.right, a)
        if h1.answer is YES and h2.answer is YES:
            return yes(RULE_HOM_SPLIT, "both source summands map trivially", (h1, h2))
        for side, h in (("left", h1), ("right", h2)):
            if h.answer is NO:
                return no(RULE_HOM_SPLIT, f"{side} source summand maps nontrivially", (h,))
    if isinstance(a.shape, Sum):
        h1 = hom_trivial(b, a.shape.left)
        h2 = hom_trivial(b, a.shape.right)
        if h1.answer is YES and h2.answer is YES:
            return yes(RULE_HOM_SPLIT, "both target summands receive trivially", (h1, h2))
        for side, h in (("left", h1), ("right", h2)):
            if h.answer is NO:
                return no(RULE_HOM_SPLIT, f"{side} target summand receives nontrivially", (h,))
    return unknown("no-vanishing-rule")


# ---------------------------------------------------------------------------
# Torsion part and torsion-free quotient of a descriptor
# ---------------------------------------------------------------------------


def _merge_torsion(t1: TorsionDescriptor, t2: TorsionDescriptor) -> TorsionDescriptor:
    keys = sorted(set(dict(t1.explicit)) | set(dict(t2.explicit)))
    explicit = tuple(
        (p, direct_sum(t1.component_at(p), t2.component_at(p))) for p in keys
    )
    keyset = frozenset(keys)
    segments = tuple(
        d.TailSegment(seg.selector, seg.rule, seg.excluded | keyset)
        for seg in t1.segments + t2.segments
    )
    return TorsionDescriptor(explicit, segments)


def torsion_of(g: GroupDescriptor) -> TorsionDescriptor | None:
    """The torsion part as a descriptor, or None when not expressible."""
    s = g.shape
    if isinstance(s, Torsion):
        return s.torsion
    if isinstance(s, TorsionFree):
        return TorsionDescriptor()
    if isinstance(s, Divisible):
        # a nonzero divisible torsion part is quasicyclic: out of grammar
        return TorsionDescriptor() if s.ranks.rp == ConstRank(0) else None
    if isinstance(s, ReducedProductSp):
        return s.torsion
    if isinstance(s, ERingSp):
        return s.spec.torsion()
    if isinstance(s, Sum):
        t1, t2 = torsion_of(s.left), torsion_of(s.right)
        if t1 is None or t2 is None:
            return None
        return _merge_torsion(t1, t2)
    return None


def quotient_of(g: GroupDescriptor) -> TorsionFree | None:
    """G modulo its torsion part, as a torsion-free shape, when derivable."""
    s = g.shape
    if isinstance(s, Torsion):
        return TorsionFree(True, 0)
    if isinstance(s, TorsionFree):
        return s
    if isinstance(s, Divisible):
        return TorsionFree(True, s.ranks.r0)
    if isinstance(s, ReducedProductSp):
        inf = s.torsion.has_infinite_support()
        return TorsionFree(True, INFINITE if inf else 0)
    if isinstance(s, ERingSp):
        return TorsionFree(True, 1)
    if isinstance(s, Sum):
        q1, q2 = quotient_of(s.left), quotient_of(s.right)
        if q1 is None or q2 is None:
            return None
        return TorsionFree(q1.divisible and q2.divisible, q1.rank + q2.rank)
    return None


def finite_group_of(g: GroupDescriptor) -> FinAbGroup | None:
    """The finite group a descriptor denotes, or None if it is infinite
    or not expressible as one."""
    s = g.shape
    if isinstance(s, (Torsion, ReducedProductSp)):
        t = s.torsion
        if t.has_infinite_support():
            return None
        factors: tuple[tuple[int, int], ...] = ()
        for _, comp in t.explicit:
            factors += comp.factors
        return FinAbGroup(factors)
    if isinstance(s, TorsionFree):
        return FinAbGroup(()) if s.rank == 0 else None
    if isinstance(s, Divisible):
        zero = s.ranks.r0 == 0 and s.ranks.rp == ConstRank(0)
        return FinAbGroup(()) if zero else None
    if isinstance(s, Sum):
        left = finite_group_of(s.left)
        right = finite_group_of(s.right)
        if left is None or right is None:
            return None
        return direct_sum(left, right)
    return None


def torsion_verdict(g: GroupDescriptor) -> Verdict | None:
    t = torsion_of(g)
    return None if t is None else torsion_is_scoh(t)


def quotient_verdict(g: GroupDescriptor) -> Verdict | None:
    q = quotient_of(g)
    return None if q is None else torsionfree_is_scoh(q.divisible, q.rank)


# ---------------------------------------------------------------------------
# The main classifier
# ---------------------------------------------------------------------------


@cache
def group_is_scoh(g: GroupDescriptor) -> Verdict:
    """Is every endomorphism image chain of the described group stationary?"""
    s = g.shape
    if isinstance(s, Torsion):
        sub = torsion_is_scoh(s.torsion)
        return Verdict(sub.answer, (RuleApplication(RULE_TORSION_GROUP, children=(sub,)),))
    if isinstance(s, TorsionFree):
        sub = torsionfree_is_scoh(s.divisible, s.rank)
        return Verdict(sub.answer, (RuleApplication(RULE_TF_GROUP, children=(sub,)),))
    if isinstance(s, Divisible):
        sub = divisible_is_scoh(s.ranks)
        return Verdict(sub.answer, (RuleApplication(RULE_DIV_GROUP, children=(sub,)),))
    if isinstance(s, ReducedProductSp):
        sub = torsion_is_scoh(s.torsion)
        note = "full product of finite p-components; chains track the torsion"
        return Verdict(sub.answer, (RuleApplication(RULE_PRODUCT, note, (sub,)),))
    if isinstance(s, ERingSp):
        return yes(
            RULE_ERING,
            "endomorphisms are multiplications; rational quotient is a field",
        )
    if isinstance(s, Sum):
        return _sum_is_scoh(g, s)
    raise TypeError(f"unhandled shape {type(s).__name__}")


def _sum_is_scoh(g: GroupDescriptor, s: Sum) -> Verdict:
    lv = group_is_scoh(s.left)
    rv = group_is_scoh(s.right)
    ht = hom_trivial(s.right, s.left)
    note = "Hom(right, left) = 0"
    if ht.answer is not YES:
        swapped = hom_trivial(s.left, s.right)
        if swapped.answer is YES:
            ht, note = swapped, "Hom(left, right) = 0"
    if ht.answer is YES:
        if lv.answer is NO or rv.answer is NO:
            return no(RULE_INDEP, note, (ht, lv, rv))
        if lv.answer is YES and rv.answer is YES:
            return yes(RULE_INDEP, note, (ht, lv, rv))
        # one side Unknown: fall through to the remaining rules
    if lv.answer is NO:
        return no(RULE_SUMMAND, "left summand is not stationary", (lv,))
    if rv.answer is NO:
        return no(RULE_SUMMAND, "right summand is not stationary", (rv,))
    tv = torsion_verdict(g)
    qv = quotient_verdict(g)
    if tv is not None and qv is not None and tv.answer is YES and qv.answer is YES:
        return yes(RULE_LIFT, "torsion part and quotient both stationary", (tv, qv))
    if {d.FLAG_REDUCED, d.FLAG_ADJUSTED_COTORSION} <= g.flags and tv is not None:
        return Verdict(
            tv.answer,
            (RuleApplication(RULE_ADJUSTED, "verdict follows the torsion part", (tv,)),),
        )
    return unknown("genuinely-mixed-no-rule")


def is_uniformly_scoh_desc(g: GroupDescriptor) -> Verdict:
    """Is there one bound after which every image chain has stabilized?"""
    gv = group_is_scoh(g)
    if gv.answer is NO:
        return no(RULE_UNIFORM_MIRROR, "not stationary at all", (gv,))
    if gv.answer is UNKNOWN:
        return unknown(
            "stationarity-undecided",
            (RuleApplication(RULE_UNIFORM_MIRROR, children=(gv,)),),
        )
    s = g.shape
    if isinstance(s, Divisible) or (isinstance(s, TorsionFree) and s.divisible):
        return yes(RULE_UNIFORM_DIV, "divisible with bounded ranks", (gv,))
    tv = torsion_verdict(g)
    if tv is None:
        return unknown("torsion-part-not-derivable")
    return Verdict(
        tv.answer,
        (RuleApplication(RULE_UNIFORM_IFF, "verdict follows the torsion part", (tv,)),),
    )


def _bound_of(g: GroupDescriptor) -> tuple[int | None, str]:
    s = g.shape
    if isinstance(s, Torsion):
        _, e, _ = minimal_card_exponent(s.torsion)
        return e, RULE_BOUND_EXP
    if isinstance(s, TorsionFree):
        return int(s.rank), RULE_BOUND_RANK
    if isinstance(s, Divisible):
        n0 = max(int(s.ranks.r0), s.ranks.rp.k)
        return 2 * n0, RULE_BOUND_DOUBLE
    if isinstance(s, (ReducedProductSp, ERingSp)):
        t = s.torsion if isinstance(s, ReducedProductSp) else s.spec.torsion()
        _, e, _ = minimal_card_exponent(t)
        return e, RULE_BOUND_TRANSFER
    if isinstance(s, Sum):
        ht = hom_trivial(s.right, s.left)
        if ht.answer is not YES:
            ht = hom_trivial(s.left, s.right)
        if ht.answer is YES:
            bl, _ = _bound_of(s.left)
            br, _ = _bound_of(s.right)
            if bl is not None and br is not None:
                return bl + br, RULE_BOUND_SUM
        return None, ""
    return None, ""


def scoh_bound(g: GroupDescriptor) -> int | None:
    """A valid (not necessarily minimal) uniform bound, when a rule yields one."""
    uv = is_uniformly_scoh_desc(g)
    if uv.answer is not YES:
        raise PreconditionError(
            f"scoh_bound needs a uniformly stationary descriptor (got {uv.answer})"
        )
    bound, _ = _bound_of(g)
    return bound


def necessity_card_bound(m: int, p: int) -> int:
    """Largest p-component cardinality compatible with uniform bound m."""
    if m < 0:
        raise ValueError("bound must be >= 0")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p ** ((m + 1) ** 2)


def cotorsion_infer(g: GroupDescriptor) -> Verdict:
    """Conclude algebraic compactness from cotorsion plus stationary chains."""
    if d.FLAG_COTORSION not in g.flags:
        raise PreconditionError("missing premise: cotorsion flag not asserted")
    gv = group_is_scoh(g)
    if gv.answer is not YES:
        raise PreconditionError(
            f"missing premise: stationary chains not established (verdict {gv.answer})"
        )
    rules = [RuleApplication(RULE_COTORSION, "cotorsion + stationary chains", (gv,))]
    if isinstance(g.shape, ReducedProductSp):
        rules.append(
            RuleApplication(RULE_PRODUCT, "already the product of its p-components")
        )
    return Verdict(YES, tuple(rules))
