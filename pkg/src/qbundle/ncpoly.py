"""Noncommutative *-polynomials over exact Laurent scalars.

A :class:`Presentation` fixes the generators, the star involution and an
oriented rewrite system; :class:`Element` values are always kept in the
normal form that system produces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from . import kernel
from .laurent import ONE, ZERO, QLaurent

Word = tuple


class PresentationError(ValueError):
    """Raised for malformed presentations (bad orientation, unknown symbols)."""


class PresentationMismatch(ValueError):
    """Raised when combining elements of different presentations."""


def deglex_key(word: Word):
    return (len(word), word)


class Presentation:
    """Generators with a star pairing and an oriented rewrite system.

    ``symbols`` lists every symbol (starred ones included) in the declared
    monomial order; ``star`` maps each symbol index to its partner.
    ``rules`` maps a left-hand side word to its right-hand side terms.
    """

    def __init__(
        self,
        name: str,
        symbols: Sequence[str],
        star: Sequence[int],
        rules: Mapping[Word, Iterable[tuple[Word, QLaurent]]] | None = None,
        q_value: Fraction | None = None,
    ):
        self.name = name
        self.symbols = tuple(symbols)
        self.star_index = tuple(star)
        if len(self.star_index) != len(self.symbols):
            raise PresentationError("star pairing must cover every symbol")
        for i, j in enumerate(self.star_index):
            if self.star_index[j] != i:
                raise PresentationError(f"star is not an involution on {self.symbols[i]!r}")
        self._index = {s: i for i, s in enumerate(self.symbols)}
        self.q_value = q_value
        self.rules: dict[Word, tuple[tuple[Word, QLaurent], ...]] = {}
        for lhs, rhs in (rules or {}).items():
            self._add_rule(tuple(lhs), rhs)
        self.lengths = tuple(sorted({len(lhs) for lhs in self.rules}))
        self.hopf = None
        self.coactions: dict[str, object] = {}
        self.morphisms: dict[str, object] = {}
        # unoriented relations (raw word/coefficient lists) that must vanish
        self.relations: list[list[tuple[Word, QLaurent]]] = []
        self._cache: dict = {}
        self._cache_right: dict = {}
        self._specialized: dict = {}

    def _add_rule(self, lhs: Word, rhs) -> None:
        if not lhs:
            raise PresentationError("rule with empty left-hand side")
        if lhs in self.rules:
            raise PresentationError(f"duplicate rule for {self.format_word(lhs)}")
        terms = []
        for word, coef in rhs:
            coef = QLaurent.coerce(coef)
            if not coef:
                continue
            word = tuple(word)
            if deglex_key(word) >= deglex_key(lhs):
                raise PresentationError(
                    f"rule {self.format_word(lhs)} -> ... does not decrease the order "
                    f"(term {self.format_word(word)})"
                )
            terms.append((word, coef))
        self.rules[lhs] = tuple(terms)

    # -- symbols and words ---------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r} in presentation {self.name!r}") from None

    def has_symbol(self, name: str) -> bool:
        return name in self._index

    def star_word(self, word: Word) -> Word:
        s = self.star_index
        return tuple(s[i] for i in reversed(word))

    def format_word(self, word: Word) -> str:
        if not word:
            return "1"
        return "*".join(self.symbols[i] for i in word)

    def is_normal_word(self, word: Word) -> bool:
        return kernel.find_redex(tuple(word), self.rules, self.lengths) is None

    def normal_words(self, max_degree: int) -> list[Word]:
        """All irreducible words of degree <= max_degree, deglex sorted."""
        out = [()]
        frontier = [()]
        n = len(self.symbols)
        for _ in range(max_degree):
            nxt = []
            for w in frontier:
                for s in range(n):
                    cand = w + (s,)
                    if self.is_normal_word(cand):
                        nxt.append(cand)
            out.extend(nxt)
            frontier = nxt
        return sorted(out, key=deglex_key)

    # -- element construction -------------------------------------------

    def word_nf(self, word: Word, rightmost: bool = False) -> dict:
        cache = self._cache_right if rightmost else self._cache
        return kernel.word_nf(tuple(word), self.rules, self.lengths, cache, ONE, rightmost)

    def element(self, terms: Iterable[tuple[Word, object]] | Mapping[Word, object]) -> "Element":
        """Normalised element from ``(word, coefficient)`` pairs."""
        if isinstance(terms, Mapping):
            terms = terms.items()
        pairs = [(tuple(w), QLaurent.coerce(c)) for w, c in terms]
        return Element(self, kernel.nf_terms(pairs, self.rules, self.lengths, self._cache, ONE))

    def word(self, word: Word, coef=ONE) -> "Element":
        return self.element([(tuple(word), coef)])

    def gen(self, name: str) -> "Element":
        return self.word((self.index(name),))

    def scalar(self, value) -> "Element":
        c = QLaurent.coerce(value)
        return Element(self, {(): c} if c else {})

    def one(self) -> "Element":
        return self.scalar(ONE)

    def zero(self) -> "Element":
        return Element(self, {})

    def parse(self, text: str) -> "Element":
        from .parser import parse_element

        return parse_element(text, self)

    # -- specialisation ---------------------------------------------------

    def specialize(self, q0) -> "Presentation":
        """Copy of this presentation with q evaluated at the rational ``q0``."""
        q0 = Fraction(q0)
        if q0 == 0:
            raise ValueError("cannot specialise at q = 0")
        hit = self._specialized.get(q0)
        if hit is not None:
            return hit
        rules = {
            lhs: [(w, QLaurent.constant(c.evaluate(q0))) for w, c in rhs]
            for lhs, rhs in self.rules.items()
        }
        sp = Presentation(f"{self.name}[q={q0}]", self.symbols, self.star_index, rules, q_value=q0)
        self._specialized[q0] = sp
        if self.hopf is not None:
            sp.hopf = self.hopf.specialize(sp, q0)
        for side, spec in self.coactions.items():
            sp.coactions[side] = spec.rebind(sp)
        for name, morph in self.morphisms.items():
            sp.morphisms[name] = morph.specialize(sp, q0)
        sp.relations = [
            [(w, QLaurent.constant(c.evaluate(q0))) for w, c in rel] for rel in self.relations
        ]
        return sp

    def free(self) -> "Presentation":
        """Same symbols and star, no rewrite rules (the free *-algebra)."""
        return Presentation(f"free({self.name})", self.symbols, self.star_index)

    def __repr__(self):
        return f"Presentation({self.name!r}, symbols={self.symbols}, rules={len(self.rules)})"


class Element:
    """A normalised linear combination of words with Laurent coefficients."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: Presentation, terms: dict):
        self.presentation = presentation
        self.terms = terms

    def _check(self, other: "Element") -> None:
        if other.presentation is not self.presentation:
            raise PresentationMismatch(
                f"cannot combine elements of {self.presentation.name!r} "
                f"and {other.presentation.name!r}"
            )

    def _coerce(self, other) -> "Element | None":
        if isinstance(other, Element):
            self._check(other)
            return other
        if isinstance(other, (QLaurent, int, Fraction)):
            return self.presentation.scalar(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for w, c in other.terms.items():
            s = acc.get(w)
            if s is None:
                acc[w] = c
            else:
                s = s + c
                if s:
                    acc[w] = s
                else:
                    del acc[w]
        return Element(self.presentation, acc)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.presentation, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Element":
        c = QLaurent.coerce(c)
        if not c:
            return self.presentation.zero()
        return Element(self.presentation, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (QLaurent, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        p = self.presentation
        return Element(p, kernel.mul_terms(self.terms, other.terms, p.rules, p.lengths, p._cache, ONE))

    def __rmul__(self, other):
        if isinstance(other, (QLaurent, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use Element.inverse() for negative powers")
        result = self.presentation.one()
        for _ in range(n):
            result = result * self
        return result

    def star(self) -> "Element":
        p = self.presentation
        return p.element((p.star_word(w), c.conjugate()) for w, c in self.terms.items())

    def inverse(self) -> "Element":
        """Inverse of a unit scalar monomial or of a unitary element."""
        if self.is_scalar():
            return self.presentation.scalar(self.scalar_value().inverse())
        s = self.star()
        one = self.presentation.one()
        if s * self == one and self * s == one:
            return s
        raise ZeroDivisionError(f"{self} is not invertible")

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_scalar(self) -> bool:
        return all(w == () for w in self.terms)

    def scalar_value(self) -> QLaurent:
        if not self.is_scalar():
            raise ValueError(f"{self} is not a scalar")
        return self.terms.get((), ZERO)

    def coefficient(self, word: Word) -> QLaurent:
        return self.terms.get(tuple(word), ZERO)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: deglex_key(kv[0]))

    def __eq__(self, other):
        if isinstance(other, (QLaurent, int, Fraction)):
            other = self.presentation.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.presentation is other.presentation and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.presentation), frozenset(self.terms.items())))

    def __repr__(self):
        return f"Element({self.presentation.name}: {self})"

    def __str__(self):
        return format_terms(self.presentation, self.terms)


def format_coefficient(c: QLaurent) -> str:
    s = str(c)
    if len(c.coeffs) > 1:
        return f"({s})"
    return s


def format_terms(p: Presentation, terms: Mapping[Word, QLaurent]) -> str:
    if not terms:
        return "0"
    out = ""
    for w, c in sorted(terms.items(), key=lambda kv: deglex_key(kv[0])):
        neg = c.is_monomial() and next(iter(c.coeffs.values())) < 0
        mag = -c if neg else c
        if not w:
            body = format_coefficient(mag)
        elif mag == ONE:
            body = p.format_word(w)
        else:
            body = f"{format_coefficient(mag)}*{p.format_word(w)}"
        if not out:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out


# -- module-level operations ---------------------------------------------


def parse_element(text: str, p: Presentation) -> Element:
    from .parser import parse_element as _parse

    return _parse(text, p)


def normal_form(x, p: Presentation | None = None, strategy: str = "leftmost") -> Element:
    """Canonical representative of ``x``.

    ``x`` may be an :class:`Element` or raw ``(word, coefficient)`` pairs; the
    ``rightmost`` strategy is exposed for checking strategy independence.
    """
    if isinstance(x, Element):
        p = p or x.presentation
        pairs = list(x.terms.items())
    else:
        if p is None:
            raise ValueError("raw terms need a presentation")
        pairs = [(tuple(w), QLaurent.coerce(c)) for w, c in (x.items() if isinstance(x, Mapping) else x)]
    rightmost = strategy == "rightmost"
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    cache = p._cache_right if rightmost else p._cache
    return Element(p, kernel.nf_terms(pairs, p.rules, p.lengths, cache, ONE, rightmost))


def multiply(x: Element, y: Element, p: Presentation | None = None) -> Element:
    if p is not None and (x.presentation is not p or y.presentation is not p):
        raise PresentationMismatch("operands are not over the given presentation")
    return x * y


def star(x: Element, p: Presentation | None = None) -> Element:
    return x.star()


def specialize_q(x: Element, q0) -> Element:
    """Evaluate every coefficient of ``x`` at the rational ``q0``."""
    q0 = Fraction(q0)
    if q0 == 0:
        raise ValueError("cannot specialise at q = 0")
    sp = x.presentation.specialize(q0)
    return sp.element((w, QLaurent.constant(c.evaluate(q0))) for w, c in x.terms.items())


# -- confluence --------------------------------------------------------


@dataclass
class Overlap:
    word: Word
    first: Word
    second: Word
    kind: str
    left: Element
    right: Element

    @property
    def resolved(self) -> bool:
        return self.left == self.right


@dataclass
class ConfluenceReport:
    presentation: str
    overlaps: list[Overlap] = field(default_factory=list)

    @property
    def confluent(self) -> bool:
        return all(o.resolved for o in self.overlaps)

    @property
    def failures(self) -> list[Overlap]:
        return [o for o in self.overlaps if not o.resolved]


def _rewrite_at(p: Presentation, word: Word, pos: int, lhs: Word) -> list:
    head, tail = word[:pos], word[pos + len(lhs):]
    return [(head + rw + tail, c) for rw, c in p.rules[lhs]]


def check_local_confluence(p: Presentation) -> ConfluenceReport:
    """Resolve every overlap and inclusion ambiguity of the rule set."""
    report = ConfluenceReport(p.name)
    lhss = sorted(p.rules, key=deglex_key)
    for l1, l2 in iproduct(lhss, lhss):
        # suffix of l1 equals prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] != l2[:k]:
                continue
            w = l1 + l2[k:]
            left = normal_form(_rewrite_at(p, w, 0, l1), p)
            right = normal_form(_rewrite_at(p, w, len(l1) - k, l2), p)
            report.overlaps.append(Overlap(w, l1, l2, "overlap", left, right))
        if l1 != l2 and len(l2) < len(l1):
            for i in range(len(l1) - len(l2) + 1):
                if l1[i:i + len(l2)] == l2:
                    left = normal_form(_rewrite_at(p, l1, 0, l1), p)
                    right = normal_form(_rewrite_at(p, l1, i, l2), p)
                    report.overlaps.append(Overlap(l1, l1, l2, "inclusion", left, right))
    return report


class Morphism:
    """Algebra map given on generators and extended multiplicatively.

    Images of starred symbols default to the star of the image of their
    partner, so a map declared on plain generators is a *-map.
    """

    def __init__(self, name: str, source: Presentation, target: Presentation, images: Mapping[int, Element]):
        self.name = name
        self.source = source
        self.target = target
        imgs = dict(images)
        for i, j in enumerate(source.star_index):
            if i not in imgs and j in imgs:
                imgs[i] = imgs[j].star()
        missing = [source.symbols[i] for i in range(len(source.symbols)) if i not in imgs]
        if missing:
            raise PresentationError(f"morphism {name!r} has no image for {missing}")
        for x in imgs.values():
            if x.presentation is not target:
                raise PresentationMismatch(f"morphism {name!r}: image outside {target.name!r}")
        self.images = imgs
        self._cache: dict = {(): target.one()}

    def apply_word(self, word: Word) -> Element:
        word = tuple(word)
        hit = self._cache.get(word)
        if hit is None:
            hit = self.apply_word(word[:-1]) * self.images[word[-1]]
            self._cache[word] = hit
        return hit

    def apply(self, x: Element) -> Element:
        if x.presentation is not self.source:
            raise PresentationMismatch(f"morphism {self.name!r} expects {self.source.name!r}")
        out = self.target.zero()
        for w, c in x.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    __call__ = apply

    def respects_relations(self) -> list[Word]:
        """Left-hand sides whose rule is not preserved by the map."""
        bad = []
        for lhs, rhs in self.source.rules.items():
            img = self.apply_word(lhs)
            for w, c in rhs:
                img = img - self.apply_word(w).scale(c)
            if not img.is_zero():
                bad.append(lhs)
        return bad

    def specialize(self, sp: Presentation, q0) -> "Morphism":
        tgt = self.target.specialize(q0)
        imgs = {
            i: tgt.element((w, QLaurent.constant(c.evaluate(q0))) for w, c in x.terms.items())
            for i, x in self.images.items()
        }
        return Morphism(self.name, sp, tgt, imgs)
