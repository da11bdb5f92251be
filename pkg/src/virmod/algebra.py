"""The Virasoro algebra and its universal enveloping algebra.

Convention: ``[L_i, L_j] = (j - i) L_{i+j} + (i^3 - i)/12 * delta_{i,-j} C``
and ``C`` is central.  ``L_j`` therefore raises the ``L_0`` eigenvalue by ``j``.

A PBW monomial ``L_{-i_1} ... L_{-i_p} L_0^a C^b L_{j_1} ... L_{j_q}`` with
``i_1 >= ... >= i_p >= 1`` and ``1 <= j_1 <= ... <= j_q`` is stored as a sorted
tuple of generator indices (``(-i_1, ..., -i_p, 0, ..., 0, j_1, ..., j_q)``) plus
the power of ``C``.  Sorting the indices ascending is exactly the
negative-then-zero-then-positive order.
"""

from __future__ import annotations

import os
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple

from .scalars import GaussianRational, gr, gr_format, gr_parse

__all__ = [
    "CENTRAL",
    "Generator",
    "LieElement",
    "PBWMonomial",
    "UEAElement",
    "bracket",
    "degree_of",
    "normal_order_product",
    "normal_form_word",
    "omega",
    "parse_lie",
    "parse_uea",
    "MAX_WORD_LENGTH",
    "MAX_TERMS",
]

CENTRAL = "C"
Generator = object  # an int ``i`` for L_i, or the string CENTRAL

MAX_WORD_LENGTH = int(os.environ.get("VIRMOD_MAX_WORD", "8"))
MAX_TERMS = int(os.environ.get("VIRMOD_MAX_TERMS", "200000"))


def _central_coefficient(i: int) -> Fraction:
    return Fraction(i * i * i - i, 12)


def _gen_key(g) -> tuple:
    return (1, 0) if g == CENTRAL else (0, g)


# ---------------------------------------------------------------------------
# Lie algebra


class LieElement:
    """A finite linear combination of the basis ``{L_i} U {C}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for g, c in (terms or {}).items():
            if g != CENTRAL and not isinstance(g, int):
                raise TypeError(f"bad generator {g!r}")
            c = gr(c)
            if c:
                clean[g] = c
        self.terms: Dict = clean

    @classmethod
    def _clean(cls, terms: Mapping) -> "LieElement":
        # terms already hold GaussianRational coefficients
        x = object.__new__(cls)
        x.terms = {g: c for g, c in terms.items() if c}
        return x

    @classmethod
    def L(cls, i: int, coeff=1) -> "LieElement":
        return cls({i: coeff})

    @classmethod
    def central(cls, coeff=1) -> "LieElement":
        return cls({CENTRAL: coeff})

    def __add__(self, other: "LieElement") -> "LieElement":
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out[g] + c if g in out else c
        return LieElement._clean(out)

    def __neg__(self) -> "LieElement":
        return LieElement({g: -c for g, c in self.terms.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def scale(self, s) -> "LieElement":
        s = gr(s)
        return LieElement({g: c * s for g, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def to_uea(self) -> "UEAElement":
        out = {}
        for g, c in self.terms.items():
            m = PBWMonomial.from_word((), 1) if g == CENTRAL else PBWMonomial.from_word((g,))
            out[m] = c
        return UEAElement(out)

    def __str__(self):
        return str(self.to_uea())

    def __repr__(self):
        return f"LieElement({str(self)!r})"


def bracket(x: LieElement, y: LieElement) -> LieElement:
    out: Dict = defaultdict(lambda: GaussianRational(0))
    for g, a in x.terms.items():
        if g == CENTRAL:
            continue
        for h, b in y.terms.items():
            if h == CENTRAL:
                continue
            ab = a * b
            if h != g:
                out[g + h] += ab * (h - g)
            if g == -h:
                cc = _central_coefficient(g)
                if cc:
                    out[CENTRAL] += ab * cc
    return LieElement._clean(out)


# ---------------------------------------------------------------------------
# PBW monomials


@dataclass(frozen=True)
class PBWMonomial:
    """``L_{-neg_part[0]} ... L_0^l0_power C^central_power L_{pos_part[0]} ...``."""

    neg_part: Tuple[int, ...] = ()
    l0_power: int = 0
    central_power: int = 0
    pos_part: Tuple[int, ...] = ()

    def __post_init__(self):
        neg, pos = self.neg_part, self.pos_part
        if any(i < 1 for i in neg) or any(neg[t] < neg[t + 1] for t in range(len(neg) - 1)):
            raise ValueError(f"negative part must be non-increasing positive integers: {neg}")
        if any(j < 1 for j in pos) or any(pos[t] > pos[t + 1] for t in range(len(pos) - 1)):
            raise ValueError(f"positive part must be non-decreasing positive integers: {pos}")
        if self.l0_power < 0 or self.central_power < 0:
            raise ValueError("powers must be nonnegative")

    @classmethod
    def from_word(cls, word: Tuple[int, ...], central_power: int = 0) -> "PBWMonomial":
        """Build from an ascending tuple of generator indices."""
        neg = tuple(-i for i in word if i < 0)
        return cls(
            neg_part=neg,
            l0_power=sum(1 for i in word if i == 0),
            central_power=central_power,
            pos_part=tuple(i for i in word if i > 0),
        )

    @property
    def word(self) -> Tuple[int, ...]:
        return tuple(-i for i in self.neg_part) + (0,) * self.l0_power + self.pos_part

    def degree(self) -> int:
        return sum(self.pos_part) - sum(self.neg_part)

    def length(self) -> int:
        return len(self.neg_part) + self.l0_power + self.central_power + len(self.pos_part)

    def sort_key(self) -> tuple:
        return (self.degree(), self.neg_part, self.l0_power, self.central_power, self.pos_part)

    def is_identity(self) -> bool:
        return self.length() == 0

    def __str__(self):
        parts = [f"L{i}" for i in self.word]
        if self.central_power:
            # C commutes with everything; print it between L_0 and the positive part
            k = len(self.neg_part) + self.l0_power
            parts[k:k] = ["C"] * self.central_power
        return " ".join(parts) if parts else "1"


IDENTITY = PBWMonomial()


def degree_of(m: PBWMonomial) -> int:
    return m.degree()


# ---------------------------------------------------------------------------
# normal ordering on words


def _add_into(acc: dict, key, coeff) -> None:
    v = acc.get(key, 0) + coeff
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@lru_cache(maxsize=None)
def _insert(i: int, word: Tuple[int, ...]) -> Tuple[Tuple[Tuple[Tuple[int, ...], int], Fraction], ...]:
    """Normal form of ``L_i * word`` for an ascending ``word``.

    Returns ``((sorted_word, extra_central_power), coefficient)`` pairs.
    """
    if not word or i <= word[0]:
        return ((((i,) + word, 0), Fraction(1)),)
    first, rest = word[0], word[1:]
    acc: dict = {}
    # L_i L_first rest = L_first (L_i rest) + [L_i, L_first] rest
    for (w, cp), coeff in _insert(i, rest):
        for (w2, cp2), coeff2 in _insert(first, w):
            _add_into(acc, (w2, cp + cp2), coeff * coeff2)
    for (w, cp), coeff in _insert(i + first, rest):
        _add_into(acc, (w, cp), coeff * (first - i))
    if i + first == 0:
        cc = _central_coefficient(i)
        if cc:
            _add_into(acc, (rest, 1), cc)
    if len(acc) > MAX_TERMS:
        raise MemoryError(f"normal ordering exceeded {MAX_TERMS} terms (VIRMOD_MAX_TERMS)")
    return tuple(acc.items())


def normal_form_word(word: Iterable[int], central_power: int = 0) -> Dict[Tuple[Tuple[int, ...], int], Fraction]:
    """Normal form of an arbitrary product ``L_{w_0} L_{w_1} ...`` of generators.

    The result maps ``(ascending_word, central_power)`` to rational coefficients.
    """
    word = tuple(word)
    current: dict = {((), central_power): Fraction(1)}
    for i in reversed(word):
        nxt: dict = {}
        for (w, cp), coeff in current.items():
            for (w2, cp2), coeff2 in _insert(i, w):
                _add_into(nxt, (w2, cp + cp2), coeff * coeff2)
        current = nxt
        if len(current) > MAX_TERMS:
            raise MemoryError(f"normal ordering exceeded {MAX_TERMS} terms (VIRMOD_MAX_TERMS)")
    return current


# ---------------------------------------------------------------------------
# enveloping algebra elements


class UEAElement:
    """Finite linear combination of PBW monomials with Gaussian rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[PBWMonomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = gr(c)
            if c:
                clean[m] = c
        self.terms: Dict[PBWMonomial, GaussianRational] = clean

    @classmethod
    def one(cls) -> "UEAElement":
        return cls({IDENTITY: 1})

    @classmethod
    def generator(cls, g) -> "UEAElement":
        if g == CENTRAL:
            return cls({PBWMonomial(central_power=1): 1})
        return cls({PBWMonomial.from_word((g,)): 1})

    @classmethod
    def from_word(cls, word: Iterable, coeff=1) -> "UEAElement":
        """The normal form of a product of generators (ints, or CENTRAL)."""
        word = list(word)
        cpow = sum(1 for g in word if g == CENTRAL)
        ls = tuple(g for g in word if g != CENTRAL)
        coeff = gr(coeff)
        return cls(
            {PBWMonomial.from_word(w, cp): coeff * c for (w, cp), c in normal_form_word(ls, cpow).items()}
        )

    def __add__(self, other: "UEAElement") -> "UEAElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, GaussianRational(0)) + c
        return UEAElement(out)

    def __neg__(self) -> "UEAElement":
        return UEAElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "UEAElement") -> "UEAElement":
        return self + (-other)

    def scale(self, s) -> "UEAElement":
        s = gr(s)
        return UEAElement({m: c * s for m, c in self.terms.items()})

    def __mul__(self, other: "UEAElement") -> "UEAElement":
        return normal_order_product(self, other)

    def __eq__(self, other):
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        """Terms in the deterministic print order (descending monomial key)."""
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key(), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            cs = gr_format(c)
            if c.re and c.im:
                cs = f"({cs})"
            out.append(cs if m.is_identity() else f"{cs}*{m}")
        return " + ".join(out)

    def __repr__(self):
        return f"UEAElement({str(self)!r})"


def normal_order_product(x: UEAElement, y: UEAElement) -> UEAElement:
    acc: Dict[Tuple[Tuple[int, ...], int], GaussianRational] = {}
    for mx, cx in x.terms.items():
        wx = mx.word
        for my, cy in y.terms.items():
            cxy = cx * cy
            current: dict = {(my.word, mx.central_power + my.central_power): Fraction(1)}
            for i in reversed(wx):
                nxt: dict = {}
                for (w, cp), coeff in current.items():
                    for (w2, cp2), coeff2 in _insert(i, w):
                        _add_into(nxt, (w2, cp + cp2), coeff * coeff2)
                current = nxt
            for key, coeff in current.items():
                prev = acc.get(key)
                term = cxy * coeff
                acc[key] = term if prev is None else prev + term
    return UEAElement({PBWMonomial.from_word(w, cp): c for (w, cp), c in acc.items()})


def omega(x: UEAElement) -> UEAElement:
    """The anti-involution fixing ``C`` and sending ``L_j`` to ``L_{-j}``.

    Reversing a PBW monomial and negating its indices gives a PBW monomial again,
    so no reordering is needed.
    """
    out = {}
    for m, c in x.terms.items():
        out[PBWMonomial(tuple(reversed(m.pos_part)), m.l0_power, m.central_power, tuple(reversed(m.neg_part)))] = c
    return UEAElement(out)


# ---------------------------------------------------------------------------
# text syntax: ``coeff*L-2 L1 C + (1/2+1i)*L0 + 3``

_TOKEN_RE = re.compile(r"\s*(?:(?P<gen>L[+-]?\d+|C)(?![\w/])|(?P<paren>\([^()]*\))|(?P<num>\d+(?:/\d+)?)|(?P<op>[*+-]))")


def _tokenize(text: str):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} near position {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
        pos = m.end()
    return toks


def parse_uea(text: str, max_word: int | None = None) -> UEAElement:
    """Parse the element syntax used on the command line.

    Terms are ``[coeff *] generator generator ...`` (generators may also be
    joined by ``*``) or a bare coefficient, joined
    by ``+`` or ``-``.  Generators are ``L<k>`` (``L-2``) and ``C``.  A coefficient
    with an imaginary part must be parenthesised: ``(1/2-3i)*L1``.  Words longer than
    ``max_word`` generators are rejected.
    """
    max_word = MAX_WORD_LENGTH if max_word is None else max_word
    toks = _tokenize(text)
    if not toks:
        raise ValueError("empty element")
    result = UEAElement()
    t = 0
    expect_term = True
    sign = 1
    while t < len(toks):
        kind, val = toks[t]
        if kind == "op" and val in "+-":
            if not expect_term:
                expect_term = True
                sign = 1 if val == "+" else -1
            else:
                sign = sign * (1 if val == "+" else -1)
            t += 1
            continue
        if not expect_term:
            raise ValueError(f"expected '+' or '-' before {val!r} in {text!r}")
        coeff = gr(sign)
        have_coeff = False
        if kind in ("num", "paren"):
            coeff = coeff * gr_parse(val[1:-1] if kind == "paren" else val)
            have_coeff = True
            t += 1
            if t < len(toks) and toks[t] == ("op", "*"):
                t += 1
                if t >= len(toks) or toks[t][0] != "gen":
                    raise ValueError(f"expected a generator after '*' in {text!r}")
        word = []
        while t < len(toks) and toks[t][0] == "gen":
            g = toks[t][1]
            word.append(CENTRAL if g == "C" else int(g[1:]))
            t += 1
            if t + 1 < len(toks) and toks[t] == ("op", "*") and toks[t + 1][0] == "gen":
                t += 1
        if not word and not have_coeff:
            raise ValueError(f"unexpected token {val!r} in {text!r}")
        if len(word) > max_word:
            raise ValueError(f"word of {len(word)} generators exceeds the cap of {max_word} (VIRMOD_MAX_WORD)")
        result = result + UEAElement.from_word(word, coeff)
        expect_term = False
        sign = 1
    if expect_term:
        raise ValueError(f"dangling operator in {text!r}")
    return result


def parse_lie(text: str) -> LieElement:
    """Parse a linear combination of single generators."""
    x = parse_uea(text)
    out = {}
    for m, c in x.terms.items():
        if m.length() != 1:
            raise ValueError(f"{text!r} is not a Lie algebra element (term {m})")
        out[CENTRAL if m.central_power else m.word[0]] = c
    return LieElement(out)
