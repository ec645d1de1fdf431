"""Hopf structure maps, multi-leg tensors, axiom checks and smash products."""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Mapping, Sequence

from .laurent import ONE, ZERO, QLaurent
from .ncpoly import Element, Presentation, Word, deglex_key
from .report import Report


class NoHopfData(ValueError):
    """The presentation carries no Hopf structure."""


# -- tensors -----------------------------------------------------------------


def _accumulate(acc: dict, key, coef) -> None:
    prev = acc.get(key)
    acc[key] = coef if prev is None else prev + coef


def _prune(acc: dict) -> dict:
    return {k: v for k, v in acc.items() if v}


def _expand_into(acc: dict, legs: Sequence[Presentation], words: Sequence[Word], coef) -> None:
    """Add ``coef * NF(w_1) ⊗ ... ⊗ NF(w_k)`` to ``acc``."""
    parts = [legs[i].word_nf(words[i]) for i in range(len(legs))]
    if all(len(part) == 1 for part in parts):
        c = coef
        key = []
        for part in parts:
            (w, cc), = part.items()
            c = c * cc
            key.append(w)
        _accumulate(acc, tuple(key), c)
        return
    for combo in iproduct(*(list(part.items()) for part in parts)):
        c = coef
        key = []
        for w, cc in combo:
            c = c * cc
            key.append(w)
        _accumulate(acc, tuple(key), c)


class TensorElement:
    """A finite sum of pure tensors; leg ``i`` lives in ``legs[i]``.

    Each leg word is kept in the normal form of its presentation and like
    tensors are merged, so equality is structural.
    """

    __slots__ = ("legs", "terms")

    def __init__(self, legs: Sequence[Presentation], terms: dict):
        self.legs = tuple(legs)
        self.terms = terms

    @classmethod
    def from_terms(cls, legs, pairs: Iterable[tuple[Sequence[Word], object]]) -> "TensorElement":
        legs = tuple(legs)
        acc: dict = {}
        for words, coef in pairs:
            coef = QLaurent.coerce(coef)
            if coef:
                _expand_into(acc, legs, [tuple(w) for w in words], coef)
        return cls(legs, _prune(acc))

    @classmethod
    def from_elements(cls, legs, elements: Sequence[Element]) -> "TensorElement":
        legs = tuple(legs)
        if len(elements) != len(legs):
            raise ValueError("wrong number of tensor legs")
        for leg, x in zip(legs, elements):
            if x.presentation is not leg:
                raise ValueError(f"leg expects {leg.name!r}, got {x.presentation.name!r}")
        acc: dict = {}
        for combo in iproduct(*(list(x.terms.items()) for x in elements)):
            c = ONE
            for _, cc in combo:
                c = c * cc
            _accumulate(acc, tuple(w for w, _ in combo), c)
        return cls(legs, _prune(acc))

    @classmethod
    def unit(cls, legs) -> "TensorElement":
        legs = tuple(legs)
        return cls(legs, {tuple(() for _ in legs): ONE})

    @classmethod
    def zero(cls, legs) -> "TensorElement":
        return cls(tuple(legs), {})

    @classmethod
    def from_element(cls, x: Element) -> "TensorElement":
        return cls((x.presentation,), {(w,): c for w, c in x.terms.items()})

    @property
    def rank(self) -> int:
        return len(self.legs)

    def _check(self, other: "TensorElement") -> None:
        if len(self.legs) != len(other.legs) or any(a is not b for a, b in zip(self.legs, other.legs)):
            raise ValueError("tensor legs do not match")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(acc, k, v)
        return TensorElement(self.legs, _prune(acc))

    def __neg__(self):
        return TensorElement(self.legs, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = QLaurent.coerce(c)
        if not c:
            return TensorElement(self.legs, {})
        return TensorElement(self.legs, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (QLaurent, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        acc: dict = {}
        legs = self.legs
        for ws1, c1 in self.terms.items():
            for ws2, c2 in other.terms.items():
                _expand_into(acc, legs, [a + b for a, b in zip(ws1, ws2)], c1 * c2)
        return TensorElement(legs, _prune(acc))

    def __rmul__(self, other):
        if isinstance(other, (QLaurent, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            len(self.legs) == len(other.legs)
            and all(a is b for a, b in zip(self.legs, other.legs))
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: tuple(deglex_key(w) for w in kv[0]))

    def to_element(self) -> Element:
        if len(self.legs) != 1:
            raise ValueError("only a one-leg tensor is an element")
        return Element(self.legs[0], {ws[0]: c for ws, c in self.terms.items()})

    def to_scalar(self) -> QLaurent:
        if self.legs:
            raise ValueError("only a zero-leg tensor is a scalar")
        return self.terms.get((), ZERO)

    def star(self) -> "TensorElement":
        """Leg-wise involution (legs are not reversed)."""
        return TensorElement.from_terms(
            self.legs,
            ((tuple(p.star_word(w) for p, w in zip(self.legs, ws)), c.conjugate()) for ws, c in self.terms.items()),
        )

    def __repr__(self):
        return f"TensorElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        from .ncpoly import format_coefficient

        out = ""
        for ws, c in self.items():
            neg = c.is_monomial() and next(iter(c.coeffs.values())) < 0
            mag = -c if neg else c
            body = "[" + ", ".join(p.format_word(w) for p, w in zip(self.legs, ws)) + "]"
            if mag != ONE:
                body = f"{format_coefficient(mag)}*{body}"
            if not out:
                out = f"-{body}" if neg else body
            else:
                out += f" - {body}" if neg else f" + {body}"
        return out


def apply_leg(t: TensorElement, leg: int, fn: Callable[[Word], object], out_legs: Sequence[Presentation]) -> TensorElement:
    """Replace leg ``leg`` by ``fn(word)``, a tensor over ``out_legs``.

    ``fn`` may return a :class:`TensorElement`, an :class:`Element` (one leg)
    or a scalar (zero legs, the leg disappears).
    """
    out_legs = tuple(out_legs)
    legs = t.legs[:leg] + out_legs + t.legs[leg + 1:]
    acc: dict = {}
    for ws, c in t.terms.items():
        img = fn(ws[leg])
        if isinstance(img, Element):
            img_terms = {(w,): v for w, v in img.terms.items()}
        elif isinstance(img, TensorElement):
            img_terms = img.terms
        else:
            img = QLaurent.coerce(img)
            img_terms = {(): img} if img else {}
        head, tail = ws[:leg], ws[leg + 1:]
        for iws, ic in img_terms.items():
            _accumulate(acc, head + iws + tail, c * ic)
    return TensorElement(legs, _prune(acc))


def multiply_legs(t: TensorElement) -> Element:
    """The multiplication map ``x_1 ⊗ ... ⊗ x_k ↦ x_1 ... x_k``."""
    p = t.legs[0]
    if any(leg is not p for leg in t.legs):
        raise ValueError("legs live in different algebras")
    return p.element((sum(ws, ()), c) for ws, c in t.terms.items())


# -- Hopf structure -------------------------------------------------------------


class HopfStructure:
    """Images of Δ, ε and S on every symbol of a presentation.

    Δ and ε extend multiplicatively, S anti-multiplicatively.
    """

    def __init__(
        self,
        p: Presentation,
        delta: Mapping[int, TensorElement],
        counit: Mapping[int, object],
        antipode: Mapping[int, Element],
    ):
        self.p = p
        n = len(p.symbols)
        missing = [p.symbols[i] for i in range(n) if i not in delta or i not in counit or i not in antipode]
        if missing:
            raise NoHopfData(f"Hopf data missing for {missing}")
        self.delta = {i: delta[i] for i in range(n)}
        self.counit = {i: QLaurent.coerce(counit[i]) for i in range(n)}
        self.antipode = {i: antipode[i] for i in range(n)}
        self._delta_cache: dict = {(): TensorElement.unit((p, p))}
        self._counit_cache: dict = {(): ONE}
        self._antipode_cache: dict = {(): p.one()}

    def comultiply_word(self, word: Word) -> TensorElement:
        word = tuple(word)
        hit = self._delta_cache.get(word)
        if hit is None:
            hit = self.comultiply_word(word[:-1]) * self.delta[word[-1]]
            self._delta_cache[word] = hit
        return hit

    def counit_word(self, word: Word) -> QLaurent:
        word = tuple(word)
        hit = self._counit_cache.get(word)
        if hit is None:
            hit = self.counit_word(word[:-1]) * self.counit[word[-1]]
            self._counit_cache[word] = hit
        return hit

    def antipode_word(self, word: Word) -> Element:
        word = tuple(word)
        hit = self._antipode_cache.get(word)
        if hit is None:
            hit = self.antipode_word(word[1:]) * self.antipode[word[0]]
            self._antipode_cache[word] = hit
        return hit

    def comultiply(self, x: Element) -> TensorElement:
        p = self.p
        acc = TensorElement.zero((p, p))
        for w, c in x.terms.items():
            acc = acc + self.comultiply_word(w).scale(c)
        return acc

    def counit_of(self, x: Element) -> QLaurent:
        return sum((c * self.counit_word(w) for w, c in x.terms.items()), ZERO)

    def antipode_of(self, x: Element) -> Element:
        out = self.p.zero()
        for w, c in x.terms.items():
            out = out + self.antipode_word(w).scale(c)
        return out

    def specialize(self, sp: Presentation, q0) -> "HopfStructure":
        def ev(c):
            return QLaurent.constant(c.evaluate(q0))

        delta = {
            i: TensorElement.from_terms((sp, sp), ((ws, ev(c)) for ws, c in t.terms.items()))
            for i, t in self.delta.items()
        }
        counit = {i: ev(c) for i, c in self.counit.items()}
        antipode = {i: sp.element((w, ev(c)) for w, c in x.terms.items()) for i, x in self.antipode.items()}
        return HopfStructure(sp, delta, counit, antipode)


def hopf_of(p: Presentation) -> HopfStructure:
    if p.hopf is None:
        raise NoHopfData(f"presentation {p.name!r} has no Hopf data")
    return p.hopf


def comultiply(x: Element) -> TensorElement:
    return hopf_of(x.presentation).comultiply(x)


def counit(x: Element) -> QLaurent:
    return hopf_of(x.presentation).counit_of(x)


def antipode(x: Element) -> Element:
    return hopf_of(x.presentation).antipode_of(x)


# -- verification -------------------------------------------------------------


def verify_hopf_axioms(p: Presentation, max_degree: int = 4) -> Report:
    """Check coassociativity, counit and antipode axioms exactly on the
    normal-word basis up to ``max_degree``.

    Each check records the first failing word (deglex order) as its witness
    and the full list of failing words in ``detail``.
    """
    hopf = hopf_of(p)
    report = Report("hopf-axioms", environment={"algebra": p.name, "max_degree": max_degree})
    names = ["coassociativity", "left counit", "right counit", "left antipode", "right antipode"]
    failures: dict[str, list[str]] = {n: [] for n in names}
    words = p.normal_words(max_degree)

    with report.timed() as clock:
        for w in words:
            d = hopf.comultiply_word(w)
            lhs = apply_leg(d, 0, hopf.comultiply_word, (p, p))
            rhs = apply_leg(d, 1, hopf.comultiply_word, (p, p))
            if lhs != rhs:
                failures["coassociativity"].append(p.format_word(w))
            target = TensorElement.from_terms((p,), [((w,), ONE)])
            if apply_leg(d, 0, hopf.counit_word, ()) != target:
                failures["left counit"].append(p.format_word(w))
            if apply_leg(d, 1, hopf.counit_word, ()) != target:
                failures["right counit"].append(p.format_word(w))
            unit = p.scalar(hopf.counit_word(w))
            if multiply_legs(apply_leg(d, 0, hopf.antipode_word, (p,))) != unit:
                failures["left antipode"].append(p.format_word(w))
            if multiply_legs(apply_leg(d, 1, hopf.antipode_word, (p,))) != unit:
                failures["right antipode"].append(p.format_word(w))

    for name in names:
        bad = failures[name]
        report.add(
            name,
            not bad,
            witness=bad[0] if bad else None,
            detail={"words_checked": len(words), "failing": bad} if bad else {"words_checked": len(words)},
        )
    report.checks[0].runtime = clock["runtime"]
    return report


def _raw_image(terms, fn, zero):
    out = zero
    for w, c in terms:
        img = fn(w)
        out = out + (img * c if isinstance(img, QLaurent) else img.scale(c))
    return out


def verify_relation_compat(p: Presentation, relations: Sequence[Sequence[tuple[Word, QLaurent]]] | None = None) -> Report:
    """Check that Δ, ε and S respect every rewrite rule (and every raw
    relation, given as ``(word, coefficient)`` lists that must vanish)."""
    hopf = hopf_of(p)
    report = Report("relations", environment={"algebra": p.name})
    tz = TensorElement.zero((p, p))

    def images(terms):
        d = _raw_image(terms, hopf.comultiply_word, tz)
        e = _raw_image(terms, hopf.counit_word, ZERO)
        s = _raw_image(terms, hopf.antipode_word, p.zero())
        return d, e, s

    bad = {"comultiplication": [], "counit": [], "antipode": []}
    checked = []
    for lhs, rhs in sorted(p.rules.items(), key=lambda kv: deglex_key(kv[0])):
        checked.append((p.format_word(lhs), [(lhs, ONE)] + [(w, -c) for w, c in rhs]))
    if relations is None:
        relations = getattr(p, "relations", [])
    for rel in relations:
        from .ncpoly import format_terms

        checked.append((format_terms(p, dict(rel)), list(rel)))
    for label, terms in checked:
        d, e, s = images(terms)
        if not d.is_zero():
            bad["comultiplication"].append(label)
        if e:
            bad["counit"].append(label)
        if not s.is_zero():
            bad["antipode"].append(label)
    for name, labels in bad.items():
        report.add(
            f"{name} respects relations",
            not labels,
            witness=labels[0] if labels else None,
            detail={"relations_checked": len(checked)},
        )
    return report


def verify_star_compat(p: Presentation, max_degree: int = 3) -> Report:
    """Δ∘star = (star⊗star)∘Δ and S∘star∘S∘star = id on normal words."""
    hopf = hopf_of(p)
    report = Report("star-compat", environment={"algebra": p.name, "max_degree": max_degree})
    bad_delta, bad_s = [], []
    for w in p.normal_words(max_degree):
        x = p.word(w)
        if hopf.comultiply(x.star()) != hopf.comultiply(x).star():
            bad_delta.append(p.format_word(w))
        if hopf.antipode_of(hopf.antipode_of(x.star()).star()) != x:
            bad_s.append(p.format_word(w))
    report.add("comultiplication is a *-map", not bad_delta, witness=bad_delta[0] if bad_delta else None)
    report.add("S∘*∘S∘* = id", not bad_s, witness=bad_s[0] if bad_s else None)
    return report


# -- module algebras and smash products -------------------------------------------


class ModuleAlgebraAction:
    """A left action ``h ▷ b`` given on basis words and extended bilinearly."""

    def __init__(self, H: Presentation, B: Presentation, on_words: Callable[[Word, Word], Element]):
        self.H = H
        self.B = B
        self._fn = on_words
        self._cache: dict = {}

    def act_words(self, h: Word, b: Word) -> Element:
        key = (h, b)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._fn(h, b)
            self._cache[key] = hit
        return hit

    def act(self, h: Element, b: Element) -> Element:
        out = self.B.zero()
        for hw, hc in h.terms.items():
            for bw, bc in b.terms.items():
                out = out + self.act_words(hw, bw).scale(hc * bc)
        return out

    __call__ = act


def trivial_action(H: Presentation, B: Presentation) -> ModuleAlgebraAction:
    hopf = hopf_of(H)
    return ModuleAlgebraAction(H, B, lambda h, b: B.word(b, hopf.counit_word(h)))


def grading_action(H: Presentation, B: Presentation, factor) -> ModuleAlgebraAction:
    """``uⁿ ▷ b = factor^(n·wt(b)) b`` for a Laurent H and a graded B."""
    factor = QLaurent.coerce(factor)
    wh = H.coactions["right"].weight
    wb = B.coactions["right"].weight
    return ModuleAlgebraAction(H, B, lambda h, b: B.word(b, factor ** (wh(h) * wb(b))))


def check_module_algebra(act: ModuleAlgebraAction, max_degree: int = 2) -> Report:
    H, B = act.H, act.B
    hopf = hopf_of(H)
    report = Report("module-algebra", environment={"H": H.name, "B": B.name, "max_degree": max_degree})
    hw, bw = H.normal_words(max_degree), B.normal_words(max_degree)
    bad_mult, bad_unit, bad_assoc = [], [], []
    for h in hw:
        x = H.word(h)
        if act(x, B.one()) != B.scalar(hopf.counit_word(h)):
            bad_unit.append(H.format_word(h))
        d = hopf.comultiply_word(h)
        for b1 in bw:
            for b2 in bw:
                lhs = act(x, B.word(b1) * B.word(b2))
                rhs = B.zero()
                for (h1, h2), c in d.terms.items():
                    rhs = rhs + (act(H.word(h1), B.word(b1)) * act(H.word(h2), B.word(b2))).scale(c)
                if lhs != rhs:
                    bad_mult.append(f"{H.format_word(h)} ▷ {B.format_word(b1)}·{B.format_word(b2)}")
        for k in hw:
            for b in bw:
                if act(x * H.word(k), B.word(b)) != act(x, act(H.word(k), B.word(b))):
                    bad_assoc.append(f"{H.format_word(h)}·{H.format_word(k)} ▷ {B.format_word(b)}")
    report.add("h▷(bb') = (h1▷b)(h2▷b')", not bad_mult, witness=bad_mult[0] if bad_mult else None)
    report.add("h▷1 = ε(h)1", not bad_unit, witness=bad_unit[0] if bad_unit else None)
    report.add("(hk)▷b = h▷(k▷b)", not bad_assoc, witness=bad_assoc[0] if bad_assoc else None)
    return report


def smash_multiply(x: tuple[Element, Element], y: tuple[Element, Element], act: ModuleAlgebraAction) -> TensorElement:
    """``(a⊗h)(b⊗k) = a (h₁▷b) ⊗ h₂ k``."""
    a, h = x
    b, k = y
    B, H = act.B, act.H
    out = TensorElement.zero((B, H))
    d = hopf_of(H).comultiply(h)
    for (h1, h2), c in d.terms.items():
        left = a * act(H.word(h1), b)
        right = H.word(h2) * k
        out = out + TensorElement.from_elements((B, H), [left, right]).scale(c)
    return out


class SmashProduct:
    """The algebra ``B ⋊ H`` on tensors over ``(B, H)`` with coaction id⊗Δ."""

    def __init__(self, act: ModuleAlgebraAction):
        self.act = act
        self.B, self.H = act.B, act.H
        self.legs = (self.B, self.H)
        self._mul_cache: dict = {}

    def one(self) -> TensorElement:
        return TensorElement.unit(self.legs)

    def zero(self) -> TensorElement:
        return TensorElement.zero(self.legs)

    def add(self, x, y):
        return x + y

    def scale(self, x, c):
        return x.scale(c)

    def pure(self, b: Element, h: Element) -> TensorElement:
        return TensorElement.from_elements(self.legs, [b, h])

    def _mul_words(self, bh1, bh2) -> TensorElement:
        key = (bh1, bh2)
        hit = self._mul_cache.get(key)
        if hit is None:
            B, H = self.legs
            hit = smash_multiply((B.word(bh1[0]), H.word(bh1[1])), (B.word(bh2[0]), H.word(bh2[1])), self.act)
            self._mul_cache[key] = hit
        return hit

    def mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        out = self.zero()
        for ws1, c1 in x.terms.items():
            for ws2, c2 in y.terms.items():
                out = out + self._mul_words(ws1, ws2).scale(c1 * c2)
        return out

    def coact(self, x: TensorElement) -> dict:
        hopf = hopf_of(self.H)
        buckets: dict = {}
        for (b, h), c in x.terms.items():
            for (h1, h2), dc in hopf.comultiply_word(h).terms.items():
                t = TensorElement(self.legs, {(b, h1): c * dc})
                buckets[h2] = buckets[h2] + t if h2 in buckets else t
        return {k: v for k, v in buckets.items() if not v.is_zero()}

    def close(self, x, y, tol: float = 0.0) -> tuple[bool, float]:
        ok = x == y
        return ok, 0.0 if ok else float("inf")


def is_cleaving_hom(
    j: Callable[[Word], object],
    H: Presentation,
    target,
    max_degree: int = 2,
    tol: float = 0.0,
) -> Report:
    """Check that ``j`` (given on normal words of ``H``) is a unital, colinear
    algebra map with convolution inverse ``j∘S``.

    ``target`` provides ``one, zero, add, scale, mul, coact, close``.
    """
    hopf = hopf_of(H)
    report = Report("cleaving", environment={"H": H.name, "max_degree": max_degree, "tol": tol})
    words = H.normal_words(max_degree)
    cache: dict = {}

    def jw(w):
        hit = cache.get(w)
        if hit is None:
            hit = j(w)
            cache[w] = hit
        return hit

    def jlin(x: Element):
        out = target.zero()
        for w, c in x.terms.items():
            out = target.add(out, target.scale(jw(w), c))
        return out

    worst = {"unital": 0.0, "multiplicative": 0.0, "colinear": 0.0, "convolution inverse": 0.0}
    bad: dict[str, list[str]] = {k: [] for k in worst}

    def record(name, ok, res, label):
        worst[name] = max(worst[name], res)
        if not ok:
            bad[name].append(label)

    ok, res = target.close(jw(()), target.one(), tol)
    record("unital", ok, res, "1")

    for h in words:
        for k in words:
            if len(h) + len(k) > max_degree:
                continue
            lhs = target.mul(jw(h), jw(k))
            rhs = jlin(H.word(h + k))
            ok, res = target.close(lhs, rhs, tol)
            record("multiplicative", ok, res, f"{H.format_word(h)}·{H.format_word(k)}")

    for h in words:
        d = hopf.comultiply_word(h)
        expected: dict = {}
        for (h1, h2), c in d.terms.items():
            t = target.scale(jw(h1), c)
            expected[h2] = target.add(expected[h2], t) if h2 in expected else t
        got = target.coact(jw(h))
        for key in sorted(set(expected) | set(got), key=deglex_key):
            ok, res = target.close(got.get(key, target.zero()), expected.get(key, target.zero()), tol)
            record("colinear", ok, res, H.format_word(h))

        unit = target.scale(target.one(), hopf.counit_word(h))
        left = target.zero()
        right = target.zero()
        for (h1, h2), c in d.terms.items():
            left = target.add(left, target.scale(target.mul(jw(h1), jlin(hopf.antipode_word(h2))), c))
            right = target.add(right, target.scale(target.mul(jlin(hopf.antipode_word(h1)), jw(h2)), c))
        ok1, r1 = target.close(left, unit, tol)
        ok2, r2 = target.close(right, unit, tol)
        record("convolution inverse", ok1 and ok2, max(r1, r2), H.format_word(h))

    exact = tol == 0.0
    for name in worst:
        labels = sorted(set(bad[name]))
        report.add(
            name,
            not labels,
            residual=None if exact else worst[name],
            exact=exact,
            witness=labels[0] if labels else None,
        )
    return report
