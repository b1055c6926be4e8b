"""Finite abelian groups, their homomorphisms, and image-chain stabilization.

A group is an ordered direct sum of prime-power cyclic factors; a
homomorphism is an integer matrix subject to the usual congruence
``entry * source_order == 0 (mod target_order)``.  Subgroups are kept in
a unique Hermite-style normal form, so equality of subgroups is a plain
matrix comparison.  All arithmetic is exact Python integers; nothing
here may overflow or wrap.

>>> G = make_group([(2, 3)])
>>> f = validate_hom([[2]], G, G)
>>> stab_index(f)
3
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .primes import is_prime


class GroupValidationError(ValueError):
    """Raised when a factor list does not describe a finite abelian group."""


class HomValidationError(ValueError):
    """Raised when a matrix is not a well-defined homomorphism."""


class CapExceededError(RuntimeError):
    """An exhaustive enumeration was refused because it exceeds the cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"endomorphism count {count} exceeds cap {cap}")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class FinAbGroup:
    """Direct sum of cyclic groups Z(p^e), one per factor, in the order given."""

    factors: tuple[tuple[int, int], ...]

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    @cached_property
    def cardinality(self) -> int:
        return prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def is_zero(self) -> bool:
        return not self.factors

    def p_group_prime(self) -> int | None:
        """The unique prime if this is a (possibly zero) p-group, else None."""
        ps = {p for p, _ in self.factors}
        return ps.pop() if len(ps) == 1 else None

    def is_homocyclic(self) -> bool:
        """All factors equal (and at least one)."""
        return len(set(self.factors)) == 1

    def normalized(self) -> "FinAbGroup":
        """Canonical form for group identity: factors sorted by (p, e)."""
        return FinAbGroup(tuple(sorted(self.factors)))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != self.rank:
            raise ValueError(
                f"element needs {self.rank} coordinates, got {len(coords)}"
            )
        return GroupElement(tuple(c % n for c, n in zip(coords, self.orders)))

    def zero(self) -> "GroupElement":
        return GroupElement((0,) * self.rank)

    def elements(self) -> Iterator["GroupElement"]:
        """All elements, odometer order (first coordinate fastest)."""
        for coords in itertools.product(*(range(n) for n in reversed(self.orders))):
            yield GroupElement(tuple(reversed(coords)))

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return "+".join(f"Z({p**e})" for p, e in self.factors)


def make_group(factors: Iterable[tuple[int, int]]) -> FinAbGroup:
    """Validate a factor list; factor order is preserved as given."""
    fs = tuple((int(p), int(e)) for p, e in factors)
    for idx, (p, e) in enumerate(fs):
        if not is_prime(p):
            raise GroupValidationError(f"factor {idx}: {p} is not prime")
        if e < 1:
            raise GroupValidationError(f"factor {idx}: exponent {e} must be >= 1")
    return FinAbGroup(fs)


def direct_sum(a: FinAbGroup, b: FinAbGroup) -> FinAbGroup:
    return FinAbGroup(a.factors + b.factors)


@dataclass(frozen=True)
class GroupElement:
    """Coordinates of an element, each reduced modulo its factor order."""

    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


# ---------------------------------------------------------------------------
# Integer row Hermite normal form.  Rows span a sublattice of Z^n; the
# fully reduced form (positive pivots, entries above a pivot reduced into
# [0, pivot)) is the unique canonical basis of that lattice.
# ---------------------------------------------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return x, y, g


def hnf_rows(rows: Iterable[Sequence[int]], ncols: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Return (basis rows, pivot columns) of the lattice spanned by ``rows``."""
    mat = [list(r) for r in rows if any(r)]
    top = 0
    pivots: list[int] = []
    for col in range(ncols):
        piv = next((i for i in range(top, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[top], mat[piv] = mat[piv], mat[top]
        for i in range(top + 1, len(mat)):
            while mat[i][col]:
                a, b = mat[top][col], mat[i][col]
                if b % a == 0:
                    q = b // a
                    mat[i] = [u - q * v for u, v in zip(mat[i], mat[top])]
                else:
                    x, y, g = _xgcd(a, b)
                    ag, mbg = a // g, -(b // g)
                    mat[top], mat[i] = (
                        [x * u + y * v for u, v in zip(mat[top], mat[i])],
                        [mbg * u + ag * v for u, v in zip(mat[top], mat[i])],
                    )
        if mat[top][col] < 0:
            mat[top] = [-u for u in mat[top]]
        pivots.append(col)
        top += 1
    # Reduce entries above each pivot into [0, pivot).  Pivots must be
    # processed left to right: reducing by pivot k rewrites columns >= its
    # pivot column in the rows above, and later pivots then fix those up.
    for k in range(len(pivots)):
        col, p = pivots[k], mat[k][pivots[k]]
        for up in range(k):
            q = mat[up][col] // p
            if q:
                mat[up] = [u - q * v for u, v in zip(mat[up], mat[k])]
    return tuple(tuple(r) for r in mat[: len(pivots)]), tuple(pivots)


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form.

    ``basis`` is the unique HNF basis of the integer lattice L with
    diag(orders)*Z^k <= L <= Z^k whose image mod the orders is the
    subgroup.  Equal subsets of the ambient group always produce equal
    bases, so structural equality decides subgroup equality.
    """

    ambient: FinAbGroup
    basis: tuple[tuple[int, ...], ...]

    @cached_property
    def cardinality(self) -> int:
        det = prod(self.basis[i][i] for i in range(len(self.basis)))
        return self.ambient.cardinality // det

    def is_whole(self) -> bool:
        return all(self.basis[i][i] == 1 for i in range(len(self.basis)))

    def is_zero(self) -> bool:
        return self.cardinality == 1

    def contains_coords(self, coords: Sequence[int]) -> bool:
        v = list(coords)
        for i, row in enumerate(self.basis):
            if v[i] % row[i]:
                return False
            q = v[i] // row[i]
            if q:
                v = [u - q * w for u, w in zip(v, row)]
        return not any(v)

    def contains(self, other: "Subgroup") -> bool:
        if other.ambient != self.ambient:
            raise ValueError("subgroups of different ambient groups")
        return all(self.contains_coords(row) for row in other.basis)

    def generators(self) -> tuple[GroupElement, ...]:
        """Basis rows reduced into the group; zero rows dropped."""
        gens = []
        for row in self.basis:
            el = self.ambient.element(row)
            if not el.is_zero():
                gens.append(el)
        return tuple(gens)

    def elements(self) -> frozenset[tuple[int, ...]]:
        """Every element, enumerated; intended for tests on small groups."""
        out = {(0,) * self.ambient.rank}
        orders = self.ambient.orders
        for g in self.generators():
            new = set()
            for base in out:
                cur = base
                while True:
                    new.add(cur)
                    cur = tuple((c + d) % n for c, d, n in zip(cur, g.coords, orders))
                    if cur == base:
                        break
            out = new
        return frozenset(out)


def subgroup_from_gens(ambient: FinAbGroup, gens: Iterable[Sequence[int]]) -> Subgroup:
    k = ambient.rank
    rows = [list(g) for g in gens]
    for i, n in enumerate(ambient.orders):
        rows.append([n if j == i else 0 for j in range(k)])
    basis, pivots = hnf_rows(rows, k)
    assert pivots == tuple(range(k)), "relation rows guarantee full rank"
    return Subgroup(ambient, basis)


def whole_subgroup(ambient: FinAbGroup) -> Subgroup:
    return subgroup_from_gens(
        ambient,
        ([1 if j == i else 0 for j in range(ambient.rank)] for i in range(ambient.rank)),
    )


def zero_subgroup(ambient: FinAbGroup) -> Subgroup:
    return subgroup_from_gens(ambient, ())


def subgroup_equal(s1: Subgroup, s2: Subgroup) -> bool:
    if s1.ambient != s2.ambient:
        raise ValueError("subgroups of different ambient groups")
    return s1.basis == s2.basis


def subgroup_join(s1: Subgroup, s2: Subgroup) -> Subgroup:
    if s1.ambient != s2.ambient:
        raise ValueError("subgroups of different ambient groups")
    return subgroup_from_gens(s1.ambient, list(s1.basis) + list(s2.basis))


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    """matrix[i][j] sends the j-th source generator into target factor i."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def is_endo(self) -> bool:
        return self.source == self.target

    def __call__(self, x: GroupElement | Sequence[int]) -> GroupElement:
        coords = x.coords if isinstance(x, GroupElement) else tuple(x)
        if len(coords) != self.source.rank:
            raise ValueError("element does not live in the source group")
        return self.target.element(
            [sum(c * xj for c, xj in zip(row, coords)) for row in self.matrix]
        )

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.matrix[i][j] for i in range(self.target.rank))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.matrix) + "]"


def validate_hom(
    matrix: Sequence[Sequence[int]], src: FinAbGroup, tgt: FinAbGroup
) -> Homomorphism:
    """Check the well-definedness congruence and reduce entries mod target orders."""
    t, s = tgt.rank, src.rank
    if len(matrix) != t or any(len(row) != s for row in matrix):
        raise HomValidationError(
            f"matrix must be {t}x{s} for these groups, got "
            f"{len(matrix)}x{len(matrix[0]) if matrix else 0}"
        )
    reduced = []
    for i in range(t):
        m_i = tgt.orders[i]
        row = []
        for j in range(s):
            c = int(matrix[i][j])
            need = m_i // gcd(m_i, src.orders[j])
            if c % need:
                raise HomValidationError(
                    f"entry ({i},{j}) = {c} must be divisible by {need} "
                    f"(target order {m_i}, source order {src.orders[j]})"
                )
            row.append(c % m_i)
        reduced.append(tuple(row))
    return Homomorphism(src, tgt, tuple(reduced))


def identity_hom(G: FinAbGroup) -> Homomorphism:
    k = G.rank
    return Homomorphism(
        G, G, tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    )


def zero_hom(src: FinAbGroup, tgt: FinAbGroup) -> Homomorphism:
    return Homomorphism(src, tgt, tuple((0,) * src.rank for _ in range(tgt.rank)))


def compose(f: Homomorphism, g: Homomorphism) -> Homomorphism:
    """f after g.  Compositions of valid homomorphisms are again valid."""
    if g.target != f.source:
        raise HomValidationError("compose: target of inner must equal source of outer")
    t, mid, s = f.target.rank, f.source.rank, g.source.rank
    matrix = tuple(
        tuple(
            sum(f.matrix[i][k] * g.matrix[k][j] for k in range(mid)) % f.target.orders[i]
            for j in range(s)
        )
        for i in range(t)
    )
    return Homomorphism(g.source, f.target, matrix)


def hom_power(f: Homomorphism, n: int) -> Homomorphism:
    """f composed with itself n times; n = 0 gives the identity."""
    if not f.is_endo():
        raise HomValidationError("powers need an endomorphism")
    if n < 0:
        raise ValueError("power must be >= 0")
    acc = identity_hom(f.source)
    base = f
    while n:
        if n & 1:
            acc = compose(acc, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return acc


def image(f: Homomorphism) -> Subgroup:
    return subgroup_from_gens(f.target, (f.column(j) for j in range(f.source.rank)))


def kernel(f: Homomorphism) -> Subgroup:
    """All x with f(x) = 0, via the HNF of the matrix augmented with relations."""
    t, s = f.target.rank, f.source.rank
    rows = []
    for j in range(s):
        rows.append(list(f.column(j)) + [1 if jj == j else 0 for jj in range(s)])
    for i in range(t):
        rows.append([f.target.orders[i] if ii == i else 0 for ii in range(t)] + [0] * s)
    basis, pivots = hnf_rows(rows, t + s)
    gens = [row[t:] for row, piv in zip(basis, pivots) if piv >= t]
    return subgroup_from_gens(f.source, gens)


def stab_index(f: Homomorphism) -> int:
    """Least n >= 0 with image(f^n) == image(f^(n+1)); f^0 is the identity."""
    if not f.is_endo():
        raise HomValidationError("stabilization index needs an endomorphism")
    prev = whole_subgroup(f.source)
    power = f
    n = 0
    # Each strict step at least halves the image, so n can never pass
    # log2(cardinality); exceeding it would mean broken canonical forms.
    limit = f.source.cardinality.bit_length() + 1
    while True:
        im = image(power)
        if im.basis == prev.basis:
            return n
        prev = im
        power = compose(f, power)
        n += 1
        assert n <= limit, "image chain failed to stabilize: non-canonical subgroup form"


def image_chain_cards(f: Homomorphism) -> tuple[int, ...]:
    """Cardinalities of image(f^0), image(f^1), ... through stabilization + 1."""
    if not f.is_endo():
        raise HomValidationError("image chain needs an endomorphism")
    cards = [f.source.cardinality]
    prev = whole_subgroup(f.source)
    power = f
    while True:
        im = image(power)
        cards.append(im.cardinality)
        if im.basis == prev.basis:
            return tuple(cards)
        prev = im
        power = compose(f, power)


def sum_decomposition_check(f: Homomorphism, n: int) -> bool:
    """Does image(f^n) together with kernel(f^n) generate the whole group?"""
    if not f.is_endo():
        raise HomValidationError("sum decomposition needs an endomorphism")
    if n < 0:
        raise ValueError("n must be >= 0")
    fn = hom_power(f, n)
    return subgroup_join(image(fn), kernel(fn)).is_whole()


# ---------------------------------------------------------------------------
# Exhaustive endomorphism enumeration
# ---------------------------------------------------------------------------


def endo_degrees(G: FinAbGroup) -> tuple[tuple[int, int], ...]:
    """(step, count) per matrix position in row-major order.

    Position (i, j) admits exactly gcd(n_i, n_j) entries, the multiples
    of n_i / gcd(n_i, n_j) in [0, n_i).
    """
    degs = []
    for n_i in G.orders:
        for n_j in G.orders:
            g = gcd(n_i, n_j)
            degs.append((n_i // g, g))
    return tuple(degs)


def endo_count(G: FinAbGroup) -> int:
    return prod(c for _, c in endo_degrees(G))


def _matrix_from_digits(G: FinAbGroup, degs, digits) -> Homomorphism:
    k = G.rank
    matrix = tuple(
        tuple(digits[i * k + j] * degs[i * k + j][0] for j in range(k)) for i in range(k)
    )
    return Homomorphism(G, G, matrix)


def endo_by_rank(G: FinAbGroup, rank: int) -> Homomorphism:
    """The rank-th endomorphism in enumeration order (last position fastest)."""
    degs = endo_degrees(G)
    digits = [0] * len(degs)
    r = rank
    for pos in range(len(degs) - 1, -1, -1):
        _, cnt = degs[pos]
        digits[pos] = r % cnt
        r //= cnt
    if r:
        raise ValueError(f"rank {rank} out of range")
    return _matrix_from_digits(G, degs, digits)


def enumerate_endos(G: FinAbGroup, cap: int) -> Iterator[Homomorphism]:
    """Every endomorphism exactly once, row-major odometer order.

    The order is lexicographic on the flattened matrix, so the first
    witness found by any scan is also the lexicographically smallest.
    """
    count = endo_count(G)
    if count > cap:
        raise CapExceededError(count, cap)
    degs = endo_degrees(G)
    for digits in itertools.product(*(range(c) for _, c in degs)):
        yield _matrix_from_digits(G, degs, digits)


def max_stab_index(
    G: FinAbGroup, cap: int, workers: int = 1
) -> tuple[int, Homomorphism]:
    """Maximum stabilization index over all endomorphisms, with the first witness.

    The scan may be partitioned across workers; the result (including the
    witness, the lexicographically smallest maximizer) is independent of
    the partitioning.
    """
    count = endo_count(G)
    if count > cap:
        raise CapExceededError(count, cap)
    from . import _scan

    dense = _scan.DenseGroup.build(G)
    if dense is None:
        best, best_rank = -1, 0
        for rk, f in enumerate(enumerate_endos(G, cap)):
            s = stab_index(f)
            if s > best:
                best, best_rank = s, rk
        return best, endo_by_rank(G, best_rank)
    res = _scan.scan(dense, 0, count, workers=workers)
    return res.max_stab, endo_by_rank(G, res.max_rank)
