"""The line-oriented descriptor grammar: parse and canonical print.

    file      := stanza
    stanza    := "torsion" torsionspec | "divisible" divspec
               | "torsionfree" tfspec | "product-sp" torsionspec
               | "spring" springspec
               | "sum" "{" stanza "}" "{" stanza "}"
               | stanza "flags=" flaglist
    torsionspec := ("primes=" SEL)? ("p=" PRIME "exps=" INTLIST)*
                   "tail=" ("zero" | "const:" C "x" R | "linear")
    divspec   := "r0=" (NAT | "inf") "rp=" ("const:" NAT | "unbounded")
    tfspec    := "divisible=" BOOL "rank=" (NAT | "inf")
    springspec:= "primes=" SEL "exps=" ("const:" C | "linear")
    SEL       := "all" | "odd-positions" | "even-positions"
    flaglist  := comma-separated from {reduced, cotorsion,
                  adjusted-cotorsion, alg-compact}

Tokens are whitespace separated; braces are tokens of their own.  The
``primes=`` clause of torsionspec restricts the tail rule to a prime
family, which the ``sum`` form needs to put torsion parts on disjoint
families.  Printing produces the canonical form (defaults omitted,
explicit primes sorted, flags in fixed order), and parsing the printed
form returns a structurally equal descriptor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .descriptors import (
    ConstExp,
    ConstRank,
    Divisible,
    DivisibleDescriptor,
    DescriptorError,
    ERingSp,
    GroupDescriptor,
    INFINITE,
    LinearExp,
    KNOWN_FLAGS,
    ReducedProductSp,
    SpGroupSpec,
    Sum,
    Torsion,
    TorsionDescriptor,
    TorsionFree,
    UnboundedRank,
    ZeroTail,
    describe,
    rank_str,
    torsion_descriptor,
)
from .groups import GroupValidationError, make_group
from .primes import (
    ALL_PRIMES,
    EVEN_POSITION_PRIMES,
    ODD_POSITION_PRIMES,
    PrimeSelector,
)

_SELECTORS = {
    "all": ALL_PRIMES,
    "odd-positions": ODD_POSITION_PRIMES,
    "even-positions": EVEN_POSITION_PRIMES,
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    for ln, line in enumerate(text.splitlines(), start=1):
        col = 0
        n = len(line)
        while col < n:
            ch = line[col]
            if ch.isspace():
                col += 1
                continue
            if ch in "{}":
                tokens.append(_Token(ch, ln, col + 1))
                col += 1
                continue
            start = col
            while col < n and not line[col].isspace() and line[col] not in "{}":
                col += 1
            tokens.append(_Token(line[start:col], ln, start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError(
                f"unexpected end of input (expected {expected or 'more tokens'})",
                last.line if last else 1,
                last.col if last else 1,
            )
        if expected is not None and tok.text != expected:
            raise ParseError(f"expected {expected!r}, found {tok.text!r}", tok.line, tok.col)
        self.pos += 1
        return tok

    def _kv(self, key: str) -> tuple[str, _Token]:
        tok = self.take(None)
        prefix = key + "="
        if not tok.text.startswith(prefix):
            raise ParseError(f"expected {prefix}..., found {tok.text!r}", tok.line, tok.col)
        return tok.text[len(prefix):], tok

    def _peek_kv(self, key: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text.startswith(key + "=")

    # ---- grammar productions ----

    def stanza(self) -> GroupDescriptor:
        tok = self.take(None)
        head = tok.text
        if head in ("torsion", "product-sp"):
            td = self.torsionspec()
            shape = Torsion(td) if head == "torsion" else ReducedProductSp(td)
        elif head == "divisible":
            shape = Divisible(self.divspec())
        elif head == "torsionfree":
            shape = self.tfspec()
        elif head == "spring":
            shape = ERingSp(self.springspec())
        elif head == "sum":
            self.take("{")
            left = self.stanza()
            self.take("}")
            self.take("{")
            right = self.stanza()
            self.take("}")
            shape = Sum(left, right)
        else:
            raise ParseError(f"unknown stanza {head!r}", tok.line, tok.col)
        flags: tuple[str, ...] = ()
        if self._peek_kv("flags"):
            raw, ftok = self._kv("flags")
            flags = tuple(raw.split(","))
            for fl in flags:
                if fl not in KNOWN_FLAGS:
                    raise ParseError(f"unknown flag {fl!r}", ftok.line, ftok.col)
        try:
            return describe(shape, flags)
        except DescriptorError as err:
            raise ParseError(str(err), tok.line, tok.col) from err

    def torsionspec(self) -> TorsionDescriptor:
        selector = ALL_PRIMES
        if self._peek_kv("primes"):
            raw, tok = self._kv("primes")
            selector = self._selector(raw, tok)
        explicit = {}
        while self._peek_kv("p"):
            raw, tok = self._kv("p")
            p = self._nat(raw, tok)
            exps_raw, etok = self._kv("exps")
            try:
                exps = [self._nat(x, etok) for x in exps_raw.split(",")]
                comp = make_group([(p, e) for e in exps])
            except GroupValidationError as err:
                raise ParseError(str(err), tok.line, tok.col) from err
            if p in explicit:
                raise ParseError(f"duplicate explicit prime {p}", tok.line, tok.col)
            explicit[p] = comp
        raw, tok = self._kv("tail")
        tail = self._tail(raw, tok, allow_multiplicity=True)
        try:
            return torsion_descriptor(explicit, tail, selector)
        except ValueError as err:
            raise ParseError(str(err), tok.line, tok.col) from err

    def divspec(self) -> DivisibleDescriptor:
        raw, tok = self._kv("r0")
        r0 = INFINITE if raw == "inf" else self._nat(raw, tok, allow_zero=True)
        raw, tok = self._kv("rp")
        if raw == "unbounded":
            rp = UnboundedRank()
        elif raw.startswith("const:"):
            rp = ConstRank(self._nat(raw[6:], tok, allow_zero=True))
        else:
            raise ParseError(f"bad rp value {raw!r}", tok.line, tok.col)
        return DivisibleDescriptor(r0, rp)

    def tfspec(self) -> TorsionFree:
        raw, tok = self._kv("divisible")
        if raw not in ("true", "false"):
            raise ParseError(f"divisible must be true or false, got {raw!r}", tok.line, tok.col)
        divisible = raw == "true"
        raw, tok = self._kv("rank")
        rank = INFINITE if raw == "inf" else self._nat(raw, tok, allow_zero=True)
        return TorsionFree(divisible, rank)

    def springspec(self) -> SpGroupSpec:
        raw, tok = self._kv("primes")
        selector = self._selector(raw, tok)
        raw, tok = self._kv("exps")
        exps = self._tail(raw, tok, allow_multiplicity=False)
        if isinstance(exps, ZeroTail):
            raise ParseError("spring exponents must be const:C or linear", tok.line, tok.col)
        return SpGroupSpec(selector, exps)

    # ---- scalar helpers ----

    def _selector(self, raw: str, tok: _Token) -> PrimeSelector:
        if raw not in _SELECTORS:
            raise ParseError(f"unknown prime family {raw!r}", tok.line, tok.col)
        return _SELECTORS[raw]

    def _nat(self, raw: str, tok: _Token, allow_zero: bool = False) -> int:
        try:
            value = int(raw)
        except ValueError:
            raise ParseError(f"expected an integer, found {raw!r}", tok.line, tok.col)
        if value < 0 or (value == 0 and not allow_zero):
            raise ParseError(f"value {value} out of range", tok.line, tok.col)
        return value

    def _tail(self, raw: str, tok: _Token, allow_multiplicity: bool):
        if raw == "zero":
            return ZeroTail()
        if raw == "linear":
            return LinearExp()
        if raw.startswith("const:"):
            body = raw[6:]
            if allow_multiplicity and "x" in body:
                c_raw, r_raw = body.split("x", 1)
                return ConstExp(self._nat(c_raw, tok), self._nat(r_raw, tok))
            return ConstExp(self._nat(body, tok))
        raise ParseError(f"bad tail rule {raw!r}", tok.line, tok.col)


def parse_descriptor(text: str) -> GroupDescriptor:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty descriptor", 1, 1)
    parser = _Parser(tokens)
    desc = parser.stanza()
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(
            f"trailing input {trailing.text!r}", trailing.line, trailing.col
        )
    return desc


# ---------------------------------------------------------------------------
# Element literals for the sp-group model:  RAT [";" IDX "=" RES ("," ...)]
# e.g. "1", "5", "1/3;2=4", "0;3=25"
# ---------------------------------------------------------------------------


def parse_alpha(spec: SpGroupSpec, text: str):
    from fractions import Fraction

    from .spgroup import SpElementError, sp_element

    text = text.strip()
    rational, _, rest = text.partition(";")
    try:
        q = Fraction(rational.strip())
    except (ValueError, ZeroDivisionError) as err:
        raise ParseError(f"bad rational part {rational.strip()!r}: {err}") from err
    corrections = {}
    if rest.strip():
        for item in rest.split(","):
            idx_raw, sep, res_raw = item.partition("=")
            if not sep:
                raise ParseError(f"bad correction {item.strip()!r}; use INDEX=RESIDUE")
            try:
                corrections[int(idx_raw)] = int(res_raw)
            except ValueError as err:
                raise ParseError(f"bad correction {item.strip()!r}: {err}") from err
    try:
        return sp_element(spec, q, corrections)
    except SpElementError as err:
        raise ParseError(str(err)) from err


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------


def _tail_str(rule, with_multiplicity: bool) -> str:
    if isinstance(rule, ZeroTail):
        return "zero"
    if isinstance(rule, LinearExp):
        return "linear"
    if with_multiplicity:
        return f"const:{rule.c}x{rule.r}"
    return f"const:{rule.c}"


def _torsionspec_str(t: TorsionDescriptor) -> str:
    if len(t.segments) > 1:
        raise ValueError("multi-segment torsion descriptors are not grammar-expressible")
    parts = []
    keys = frozenset(p for p, _ in t.explicit)
    if t.segments:
        seg = t.segments[0]
        if seg.excluded != keys:
            raise ValueError("tail carve-outs beyond explicit primes are not printable")
        if seg.selector != ALL_PRIMES:
            parts.append(f"primes={seg.selector.kind}")
        tail = seg.rule
    else:
        tail = ZeroTail()
    for p, comp in t.explicit:
        exps = ",".join(str(e) for _, e in comp.factors)
        parts.append(f"p={p} exps={exps}")
    parts.append(f"tail={_tail_str(tail, True)}")
    return " ".join(parts)


def print_descriptor(g: GroupDescriptor) -> str:
    s = g.shape
    if isinstance(s, Torsion):
        body = f"torsion {_torsionspec_str(s.torsion)}"
    elif isinstance(s, ReducedProductSp):
        body = f"product-sp {_torsionspec_str(s.torsion)}"
    elif isinstance(s, Divisible):
        rp = (
            "unbounded"
            if isinstance(s.ranks.rp, UnboundedRank)
            else f"const:{s.ranks.rp.k}"
        )
        body = f"divisible r0={rank_str(s.ranks.r0)} rp={rp}"
    elif isinstance(s, TorsionFree):
        body = (
            f"torsionfree divisible={'true' if s.divisible else 'false'} "
            f"rank={rank_str(s.rank)}"
        )
    elif isinstance(s, ERingSp):
        body = (
            f"spring primes={s.spec.primes.kind} "
            f"exps={_tail_str(s.spec.exps, False)}"
        )
    elif isinstance(s, Sum):
        body = f"sum {{ {print_descriptor(s.left)} }} {{ {print_descriptor(s.right)} }}"
    else:
        raise TypeError(f"unhandled shape {type(s).__name__}")
    if g.flags:
        ordered = [f for f in KNOWN_FLAGS if f in g.flags]
        body += " flags=" + ",".join(ordered)
    return body
