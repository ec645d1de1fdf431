"""U(1)-coactions as integer gradings, cotensor products, the canonical map
and a recursive strong connection."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .hopf import TensorElement, apply_leg, hopf_of, multiply_legs
from .ncpoly import Element, Presentation, PresentationError, Word
from .report import Report


@dataclass(frozen=True)
class CoactionSpec:
    """A diagonal O(U(1))-coaction: ``x ↦ x ⊗ u^wt(x)`` (or ``u^wt(x) ⊗ x``)."""

    side: str
    presentation: Presentation
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"coaction side must be 'left' or 'right', not {self.side!r}")
        if len(self.weights) != len(self.presentation.symbols):
            raise ValueError("one weight per symbol required")

    @classmethod
    def from_generators(cls, p: Presentation, side: str, weights: Mapping[str, int]) -> "CoactionSpec":
        """Weights on plain generators; starred partners get the negated weight."""
        w: dict[int, int] = {}
        for name, value in weights.items():
            i = p.index(name)
            j = p.star_index[i]
            for k, v in ((i, value), (j, -value)):
                if k in w and w[k] != v:
                    raise PresentationError(f"inconsistent weight for {p.symbols[k]!r}")
                w[k] = v
        missing = [p.symbols[i] for i in range(len(p.symbols)) if i not in w]
        if missing:
            raise PresentationError(f"no {side} weight for {missing}")
        return cls(side, p, tuple(w[i] for i in range(len(p.symbols))))

    def weight(self, word: Word) -> int:
        ws = self.weights
        return sum(ws[i] for i in word)

    def element_weight(self, x: Element) -> int | None:
        """Common weight of all terms, or ``None`` if ``x`` is not homogeneous."""
        found = {self.weight(w) for w in x.terms}
        if len(found) > 1:
            return None
        return found.pop() if found else 0

    def non_homogeneous_rules(self) -> list[Word]:
        p = self.presentation
        return [
            lhs for lhs, rhs in p.rules.items()
            if any(self.weight(w) != self.weight(lhs) for w, _ in rhs)
        ]

    def rebind(self, p: Presentation) -> "CoactionSpec":
        return CoactionSpec(self.side, p, self.weights)

    def generator_weights(self) -> dict[str, int]:
        p = self.presentation
        seen, out = set(), {}
        for i, name in enumerate(p.symbols):
            if i in seen:
                continue
            seen.update((i, p.star_index[i]))
            out[name] = self.weights[i]
        return out


def coaction_of(p: Presentation, side: str) -> CoactionSpec:
    try:
        return p.coactions[side]
    except KeyError:
        raise ValueError(f"presentation {p.name!r} has no {side} coaction") from None


def weight(w: Word, c: CoactionSpec) -> int:
    return c.weight(w)


def u_power(U: Presentation, n: int) -> Element:
    """``uⁿ`` in the Laurent algebra, with ``u^{-k} = (u*)^k``."""
    u = U.index("u")
    s = u if n >= 0 else U.star_index[u]
    return U.word((s,) * abs(n))


def u_exponent(U: Presentation, word: Word) -> int:
    u = U.index("u")
    return sum(1 if s == u else -1 for s in word)


def default_u1() -> Presentation:
    from .presets import load_preset

    return load_preset("u1")


def project_pi(x: Element) -> Element:
    """The Hopf *-algebra map onto O(U(1)) declared as morphism ``pi``."""
    try:
        pi = x.presentation.morphisms["pi"]
    except KeyError:
        raise ValueError(f"presentation {x.presentation.name!r} has no morphism 'pi'") from None
    return pi.apply(x)


def coinvariant_basis(p: Presentation, c: CoactionSpec, max_degree: int) -> list[Word]:
    return [w for w in p.normal_words(max_degree) if c.weight(w) == 0]


def coaction_via_hopf(x: Element, side: str) -> TensorElement:
    """``(id⊗π)∘Δ`` (right) or ``(π⊗id)∘Δ`` (left), computed from the Hopf
    data rather than from weight tables."""
    p = x.presentation
    pi = p.morphisms["pi"]
    d = hopf_of(p).comultiply(x)
    if side == "right":
        return apply_leg(d, 1, pi.apply_word, (pi.target,))
    if side == "left":
        return apply_leg(d, 0, pi.apply_word, (pi.target,))
    raise ValueError(side)


# -- cotensor products ---------------------------------------------------------


@dataclass
class CotensorResult:
    ok: bool
    witness: str | None = None

    def __bool__(self):
        return self.ok


def cotensor_check(t: TensorElement, right: CoactionSpec | None = None, left: CoactionSpec | None = None) -> CotensorResult:
    """Membership of ``t`` in ``P □ H``: every pure tensor must pair a right
    weight on leg one with the same left weight on leg two."""
    P, H = t.legs
    right = right or coaction_of(P, "right")
    left = left or coaction_of(H, "left")
    for (pw, hw), _ in t.items():
        a, b = right.weight(pw), left.weight(hw)
        if a != b:
            return CotensorResult(False, f"[{P.format_word(pw)}, {H.format_word(hw)}] (weights {a} != {b})")
    return CotensorResult(True)


def cotensor_basis(P: Presentation, H: Presentation, bidegree: tuple[int, int]) -> list[tuple[Word, Word]]:
    right, left = coaction_of(P, "right"), coaction_of(H, "left")
    hw = H.normal_words(bidegree[1])
    by_weight: dict[int, list[Word]] = {}
    for w in hw:
        by_weight.setdefault(left.weight(w), []).append(w)
    out = []
    for pw in P.normal_words(bidegree[0]):
        for w in by_weight.get(right.weight(pw), []):
            out.append((pw, w))
    return out


def dump_cotensor_basis(P: Presentation, H: Presentation, bidegree: tuple[int, int]) -> str:
    right = coaction_of(P, "right")
    rows = [
        {"left": P.format_word(pw), "right": H.format_word(hw), "coefficient": "1", "weight": right.weight(pw)}
        for pw, hw in cotensor_basis(P, H, bidegree)
    ]
    return json.dumps(
        {"P": P.name, "H": H.name, "bidegree": list(bidegree), "basis": rows}, indent=2, sort_keys=True
    )


# -- canonical map and strong connection ------------------------------------------


def canonical_map(t: TensorElement, U: Presentation | None = None) -> TensorElement:
    """``can(p⊗q) = p q₍₀₎ ⊗ q₍₁₎`` for the right weight coaction of ``P``."""
    P = t.legs[0]
    if t.legs[1] is not P:
        raise ValueError("canonical map needs a tensor over P⊗P")
    U = U or default_u1()
    right = coaction_of(P, "right")
    acc = TensorElement.zero((P, U))
    for (pw, qw), c in t.terms.items():
        acc = acc + TensorElement.from_elements((P, U), [P.word(pw + qw), u_power(U, right.weight(qw))]).scale(c)
    return acc


def _lift_of_u(p: Presentation) -> int:
    pi = p.morphisms["pi"]
    U = pi.target
    u = U.word((U.index("u"),))
    for i, img in pi.images.items():
        if img == u:
            return i
    raise ValueError(f"no generator of {p.name!r} maps to u under pi")


def strong_connection_base(p: Presentation, sign: int) -> TensorElement:
    """``ℓ(u^{±1}) = S(x₍₁₎) ⊗ x₍₂₎`` for the generator ``x`` lifting ``u^{±1}``."""
    hopf = hopf_of(p)
    g = _lift_of_u(p)
    if sign < 0:
        g = p.star_index[g]
    d = hopf.comultiply_word((g,))
    return apply_leg(d, 0, hopf.antipode_word, (p,))


def strong_connection(n: int, p: Presentation | None = None) -> TensorElement:
    """``ℓ(uⁿ)`` built by splicing the base cases leg-wise:
    ``ℓ(u·uⁿ) = Σ x y ⊗ y' x'`` for ``ℓ(u) = Σ x⊗x'``, ``ℓ(uⁿ) = Σ y⊗y'``."""
    if p is None:
        from .presets import load_preset

        p = load_preset("suq2")
    cache = p.__dict__.setdefault("_strong_connection_cache", {})
    if n in cache:
        return cache[n]
    if n == 0:
        result = TensorElement.unit((p, p))
    else:
        sign = 1 if n > 0 else -1
        base = strong_connection_base(p, sign)
        inner = strong_connection(n - sign, p)
        acc: dict = {}
        from .hopf import _expand_into, _prune

        for (x, x2), c1 in base.terms.items():
            for (y, y2), c2 in inner.terms.items():
                _expand_into(acc, (p, p), [x + y, y2 + x2], c1 * c2)
        result = TensorElement((p, p), _prune(acc))
    cache[n] = result
    return result


def verify_strong_connection(n: int, p: Presentation | None = None, U: Presentation | None = None) -> Report:
    if p is None:
        from .presets import load_preset

        p = load_preset("suq2")
    U = U or p.morphisms["pi"].target
    ell = strong_connection(n, p)
    report = Report("connection", environment={"algebra": p.name, "n": n})
    target = TensorElement.from_elements((p, U), [p.one(), u_power(U, n)])
    got = canonical_map(ell, U)
    report.add(f"can(l(u^{n})) = 1⊗u^{n}", got == target, witness=None if got == target else str(got))
    m = multiply_legs(ell)
    report.add(f"m(l(u^{n})) = 1", m == p.one(), witness=None if m == p.one() else str(m))
    return report


def homogeneity_report(p: Presentation) -> Report:
    report = Report("coaction", environment={"algebra": p.name})
    for side in ("right", "left"):
        if side not in p.coactions:
            continue
        bad = p.coactions[side].non_homogeneous_rules()
        report.add(
            f"{side} weights homogeneous on rules",
            not bad,
            witness=p.format_word(bad[0]) if bad else None,
        )
    return report
