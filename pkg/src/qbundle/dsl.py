"""Line-oriented file format for presented *-algebras.

Example::

    algebra u1
      order u u^*
      rule u * u^* -> 1
      rule u^* * u -> 1
      delta u = [u, u]
      counit u = 1
      antipode u = u^*
      antipode u^* = u
      coaction right u=1
    end

Statements inside an ``algebra`` block:

``order s1 s2 ...``
    every symbol, in increasing monomial order; ``x^*`` is the star partner
    of ``x`` (a symbol listed without partner is self-adjoint).
``rule LHS -> RHS``
    oriented rewrite rule; LHS is a product of symbols.
``relation EXPR``
    an unoriented relation ``EXPR = 0`` used by the compatibility checks.
``delta g = TENSOR`` / ``counit g = SCALAR`` / ``antipode s = EXPR``
    Hopf data; Δ and ε of starred symbols default to the starred images.
``coaction left|right g=w ...``
    integer weights of plain generators (starred ones get ``-w``).
``morphism NAME -> TARGET: g = EXPR; ...``
    algebra map into a previously defined algebra or preset.

``#`` starts a comment.  Expressions use the grammar of :mod:`qbundle.parser`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .comodule import CoactionSpec
from .hopf import HopfStructure
from .laurent import ONE
from .ncpoly import (
    Morphism,
    Presentation,
    PresentationError,
    check_local_confluence,
    deglex_key,
    format_terms,
)
from .parser import ParseError, parse_element, parse_tensor


class DSLError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = "<string>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


@dataclass
class _Block:
    name: str
    line: int
    order: list[tuple[str, int, int]] = field(default_factory=list)
    rules: list[tuple[str, str, int, int, int]] = field(default_factory=list)
    relations: list[tuple[str, int, int]] = field(default_factory=list)
    delta: list[tuple[str, str, int, int]] = field(default_factory=list)
    counit: list[tuple[str, str, int, int]] = field(default_factory=list)
    antipode: list[tuple[str, str, int, int]] = field(default_factory=list)
    coactions: list[tuple[str, dict, int]] = field(default_factory=list)
    morphisms: list[tuple[str, str, list, int]] = field(default_factory=list)


_DEF = re.compile(r"^(delta|counit|antipode)\s+(\S+)\s*=\s*(.*)$")
_MORPH = re.compile(r"^morphism\s+(\w+)\s*->\s*(\w+)\s*:\s*(.*)$")


def _split_blocks(text: str, source: str) -> list[_Block]:
    blocks: list[_Block] = []
    cur: _Block | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        col = indent + 1
        head = stripped.split(None, 1)[0]
        rest = stripped[len(head):].strip()
        rest_col = col + len(stripped) - len(stripped[len(head):].lstrip())
        if head == "algebra":
            if cur is not None:
                raise DSLError("nested 'algebra' block (missing 'end')", lineno, col, source)
            if not re.fullmatch(r"\w+", rest):
                raise DSLError("expected an algebra name", lineno, rest_col, source)
            cur = _Block(rest, lineno)
            continue
        if cur is None:
            raise DSLError(f"statement {head!r} outside an algebra block", lineno, col, source)
        if head == "end":
            blocks.append(cur)
            cur = None
        elif head == "order":
            pos = rest_col
            for m in re.finditer(r"\S+", rest):
                cur.order.append((m.group(0), lineno, pos + m.start()))
        elif head == "rule":
            if "->" not in rest:
                raise DSLError("rule needs '->'", lineno, rest_col, source)
            lhs, rhs = rest.split("->", 1)
            rhs_col = rest_col + len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
            cur.rules.append((lhs.strip(), rhs.strip(), lineno, rest_col, rhs_col))
        elif head == "relation":
            cur.relations.append((rest, lineno, rest_col))
        elif head in ("delta", "counit", "antipode"):
            m = _DEF.match(stripped)
            if m is None:
                raise DSLError(f"expected '{head} SYMBOL = EXPR'", lineno, col, source)
            expr_col = col + m.start(3)
            getattr(cur, head).append((m.group(2), m.group(3), lineno, expr_col))
        elif head == "coaction":
            parts = rest.split()
            if not parts or parts[0] not in ("left", "right"):
                raise DSLError("coaction side must be 'left' or 'right'", lineno, rest_col, source)
            weights = {}
            for item in parts[1:]:
                m = re.fullmatch(r"(\S+?)=(-?\d+)", item)
                if m is None:
                    raise DSLError(f"bad weight entry {item!r}", lineno, rest_col + rest.find(item), source)
                weights[m.group(1)] = int(m.group(2))
            cur.coactions.append((parts[0], weights, lineno))
        elif head == "morphism":
            m = _MORPH.match(stripped)
            if m is None:
                raise DSLError("expected 'morphism NAME -> TARGET: g = EXPR; ...'", lineno, col, source)
            assigns = []
            body_col = col + m.start(3)
            offset = 0
            for piece in m.group(3).split(";"):
                if piece.strip():
                    if "=" not in piece:
                        raise DSLError("morphism image needs '='", lineno, body_col + offset, source)
                    g, expr = piece.split("=", 1)
                    assigns.append((g.strip(), expr.strip(), body_col + offset + len(g) + 1))
                offset += len(piece) + 1
            cur.morphisms.append((m.group(1), m.group(2), assigns, lineno))
        else:
            raise DSLError(f"unknown statement {head!r}", lineno, col, source)
    if cur is not None:
        raise DSLError(f"algebra {cur.name!r} is missing 'end'", cur.line, 1, source)
    return blocks


def _wrap(exc: ParseError, line: int, col: int, source: str) -> DSLError:
    return DSLError(exc.message, line, col + exc.pos, source)


def _build(block: _Block, resolve: Callable[[str], Presentation], source: str, check_confluence: bool) -> Presentation:
    if not block.order:
        raise DSLError(f"algebra {block.name!r} has no 'order' statement", block.line, 1, source)
    names = [n for n, _, _ in block.order]
    for n, line, col in block.order:
        if names.count(n) > 1:
            raise DSLError(f"duplicate symbol {n!r}", line, col, source)
        if not re.fullmatch(r"[A-Za-z_]\w*(\^\*)?", n) or n in ("q", "star"):
            raise DSLError(f"invalid symbol name {n!r}", line, col, source)
    star = []
    for n, line, col in block.order:
        partner = n[:-2] if n.endswith("^*") else n + "^*"
        if partner in names:
            star.append(names.index(partner))
        elif n.endswith("^*"):
            raise DSLError(f"{n!r} has no plain partner", line, col, source)
        else:
            star.append(names.index(n))

    free = Presentation(f"free({block.name})", names, star)

    def raw(text, line, col):
        try:
            return parse_element(text, free)
        except ParseError as exc:
            raise _wrap(exc, line, col, source) from None

    rules = {}
    for lhs_text, rhs_text, line, lcol, rcol in block.rules:
        lhs = raw(lhs_text, line, lcol)
        if len(lhs.terms) != 1 or next(iter(lhs.terms.values())) != ONE:
            raise DSLError("rule left-hand side must be a single word", line, lcol, source)
        lhs_word = next(iter(lhs.terms))
        if lhs_word in rules:
            raise DSLError(f"duplicate rule for {lhs_text!r}", line, lcol, source)
        rhs = list(raw(rhs_text, line, rcol).terms.items())
        for w, _ in rhs:
            if deglex_key(w) >= deglex_key(lhs_word):
                raise DSLError(f"rule {lhs_text.strip()} -> ... does not decrease the order (term {free.format_word(w)})",
                               line, rcol, source)
        rules[lhs_word] = rhs
    try:
        p = Presentation(block.name, names, star, rules)
    except PresentationError as exc:
        raise DSLError(str(exc), block.line, 1, source) from None

    p.relations = [list(raw(t, line, col).terms.items()) for t, line, col in block.relations]

    def parse_in(text, line, col):
        try:
            return parse_element(text, p)
        except ParseError as exc:
            raise _wrap(exc, line, col, source) from None

    def symbol(name, line):
        if not p.has_symbol(name):
            raise DSLError(f"unknown symbol {name!r}", line, 1, source)
        return p.index(name)

    if block.delta or block.counit or block.antipode:
        delta, counit, antipode = {}, {}, {}
        for name, text, line, col in block.delta:
            try:
                delta[symbol(name, line)] = parse_tensor(text, (p, p))
            except ParseError as exc:
                raise _wrap(exc, line, col, source) from None
        for name, text, line, col in block.counit:
            x = parse_in(text, line, col)
            if not x.is_scalar():
                raise DSLError("counit image must be a scalar", line, col, source)
            counit[symbol(name, line)] = x.scalar_value()
        for name, text, line, col in block.antipode:
            antipode[symbol(name, line)] = parse_in(text, line, col)
        for i, j in enumerate(p.star_index):
            if i not in delta and j in delta:
                delta[i] = delta[j].star()
            if i not in counit and j in counit:
                counit[i] = counit[j].conjugate()
        missing = [p.symbols[i] for i in range(len(names)) if i not in antipode]
        if missing:
            raise DSLError(f"antipode missing for {missing}", block.line, 1, source)
        try:
            p.hopf = HopfStructure(p, delta, counit, antipode)
        except ValueError as exc:
            raise DSLError(str(exc), block.line, 1, source) from None

    for side, weights, line in block.coactions:
        try:
            spec = CoactionSpec.from_generators(p, side, weights)
        except (PresentationError, KeyError) as exc:
            raise DSLError(str(exc), line, 1, source) from None
        bad = spec.non_homogeneous_rules()
        if bad:
            raise DSLError(f"rule {p.format_word(bad[0])} is not homogeneous for the {side} coaction", line, 1, source)
        p.coactions[side] = spec

    for mname, target_name, assigns, line in block.morphisms:
        target = resolve(target_name)
        if target is None:
            raise DSLError(f"unknown target algebra {target_name!r}", line, 1, source)
        images = {}
        for g, expr, col in assigns:
            try:
                images[symbol(g, line)] = parse_element(expr, target)
            except ParseError as exc:
                raise _wrap(exc, line, col, source) from None
        try:
            morph = Morphism(mname, p, target, images)
        except PresentationError as exc:
            raise DSLError(str(exc), line, 1, source) from None
        bad = morph.respects_relations()
        if bad:
            raise DSLError(f"morphism {mname!r} does not respect rule {p.format_word(bad[0])}", line, 1, source)
        p.morphisms[mname] = morph

    if check_confluence:
        report = check_local_confluence(p)
        if not report.confluent:
            w = report.failures[0].word
            raise DSLError(f"rules are not confluent (overlap {p.format_word(w)})", block.line, 1, source)
    return p


def loads(text: str, *, source: str = "<string>", check_confluence: bool = True,
          resolve: Callable[[str], Presentation | None] | None = None) -> dict[str, Presentation]:
    """Parse every algebra block of ``text``; returns them by name."""
    out: dict[str, Presentation] = {}

    def lookup(name):
        if name in out:
            return out[name]
        if resolve is not None:
            return resolve(name)
        from .presets import PRESETS, load_preset

        return load_preset(name) if name in PRESETS else None

    for block in _split_blocks(text, source):
        if block.name in out:
            raise DSLError(f"algebra {block.name!r} defined twice", block.line, 1, source)
        out[block.name] = _build(block, lookup, source, check_confluence)
    return out


def load_file(path, check_confluence: bool = True) -> dict[str, Presentation]:
    path = Path(path)
    return loads(path.read_text(encoding="utf-8"), source=str(path), check_confluence=check_confluence)


def dumps(p: Presentation) -> str:
    """Canonical DSL text of ``p``."""
    lines = [f"algebra {p.name}", "  order " + " ".join(p.symbols)]
    for lhs, rhs in sorted(p.rules.items(), key=lambda kv: deglex_key(kv[0])):
        lines.append(f"  rule {p.format_word(lhs)} -> {format_terms(p, dict(rhs))}")
    for rel in p.relations:
        lines.append(f"  relation {format_terms(p, dict(rel))}")
    if p.hopf is not None:
        plain = [i for i, name in enumerate(p.symbols) if not name.endswith("^*")]
        for i in plain:
            lines.append(f"  delta {p.symbols[i]} = {p.hopf.delta[i]}")
        for i in plain:
            lines.append(f"  counit {p.symbols[i]} = {p.hopf.counit[i]}")
        for i in range(len(p.symbols)):
            lines.append(f"  antipode {p.symbols[i]} = {p.hopf.antipode[i]}")
    for side in ("right", "left"):
        spec = p.coactions.get(side)
        if spec is not None:
            ws = " ".join(f"{g}={w}" for g, w in spec.generator_weights().items())
            lines.append(f"  coaction {side} {ws}")
    for name, morph in sorted(p.morphisms.items()):
        plain = [i for i, s in enumerate(p.symbols) if not s.endswith("^*")]
        body = "; ".join(f"{p.symbols[i]} = {morph.images[i]}" for i in plain)
        lines.append(f"  morphism {name} -> {morph.target.name}: {body}")
    lines.append("end")
    return "\n".join(lines) + "\n"
