from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbundle.laurent import ONE, Q
from qbundle.ncpoly import (
    Presentation,
    PresentationError,
    PresentationMismatch,
    check_local_confluence,
    multiply,
    normal_form,
    specialize_q,
    star,
)

from strategies import elements, rationals_q, words


def test_parse_normalises(suq2):
    assert suq2.parse("alpha*gamma") == Q * suq2.parse("gamma*alpha")
    assert str(suq2.parse("alpha*gamma")) == "q*gamma*alpha"
    assert suq2.parse("1") == suq2.one()


def test_laurent_cancellation(u1):
    assert u1.parse("u^2 * u^-1") == u1.gen("u")


def test_unitarity_rule(suq2):
    assert suq2.parse("alpha^* * alpha") == suq2.parse("1 - gamma*gamma^*")


def test_commutator(suq2):
    x = suq2.parse("alpha*alpha^* - alpha^**alpha")
    # hand expansion: (1 - q²γγ*) - (1 - γ*γ) with γ*γ = γγ*
    by_hand = suq2.element([((), ONE), ((0, 1), -Q ** 2)]) - suq2.element([((), ONE), ((0, 1), -ONE)])
    assert x == by_hand
    assert x == (1 - Q ** 2) * suq2.parse("gamma*gamma^*")


def test_multiply_examples(suq2):
    g, gs = suq2.gen("gamma"), suq2.gen("gamma^*")
    assert multiply(g, gs) == suq2.word((0, 1))
    x = suq2.parse("alpha + gamma")
    assert multiply(x, suq2.one()) == x
    assert multiply(x, suq2.gen("alpha^*")) == suq2.parse("1 - q^2*gamma*gamma^* + gamma*alpha^*")


def test_mixed_presentations_rejected(suq2, u1):
    with pytest.raises(PresentationMismatch):
        multiply(suq2.gen("alpha"), u1.gen("u"))


def test_star_examples(suq2):
    ag = suq2.parse("alpha*gamma")
    assert star(ag) == normal_form(suq2.parse("gamma^* * alpha^*"))
    assert star(suq2.one()) == suq2.one()
    assert star(Q * suq2.gen("gamma")) == Q * suq2.gen("gamma^*")


def test_specialize_examples(suq2):
    half = Fraction(1, 2)
    assert specialize_q((1 - Q ** 2) * suq2.parse("gamma*gamma^*"), 1).is_zero()
    sp = suq2.specialize(half)
    assert specialize_q(Q * suq2.parse("gamma*alpha"), half) == sp.scalar(half) * sp.parse("gamma*alpha")
    comm = suq2.parse("alpha*alpha^* - alpha^**alpha")
    assert specialize_q(comm, half) == sp.scalar(Fraction(3, 4)) * sp.parse("gamma*gamma^*")
    with pytest.raises(ValueError):
        suq2.specialize(0)


def test_classical_words_commute(su2):
    # words free of a·a* pairs normalise to the sorted monomial
    w = su2.parse("a*c^* * c * a")
    assert w == su2.parse("c*c^* * a*a")
    # with both a and a* present unitarity also fires
    assert su2.parse("a*a^*") == su2.parse("1 - c*c^*")


def test_normal_basis_shape(suq2):
    g, gs, a, as_ = range(4)
    for w in suq2.normal_words(4):
        assert not (a in w and as_ in w)
        stripped = [s for s in w]
        assert stripped == sorted(stripped), w


def test_confluence_suq2(suq2):
    report = check_local_confluence(suq2)
    assert report.confluent
    assert len(report.overlaps) >= 7


def test_confluence_empty():
    p = Presentation("free", ["x"], {0: 0})
    assert check_local_confluence(p).confluent
    assert check_local_confluence(p).overlaps == []


def test_confluence_broken_fixture():
    p = Presentation("broken", ["a", "b"], {0: 0, 1: 1}, rules={(0, 1): [((), ONE)], (1, 0): [((1,), ONE)]})
    report = check_local_confluence(p)
    assert not report.confluent
    bad = report.failures[0]
    assert bad.word in ((0, 1, 0), (1, 0, 1))
    assert bad.left != bad.right


def test_rule_must_decrease():
    with pytest.raises(PresentationError):
        Presentation("bad", ["x", "y"], {0: 0, 1: 1}, rules={(0, 1): [((1, 1, 0), ONE)]})


@settings(max_examples=1000)
@given(st.data())
def test_normal_form_idempotent(suq2, data):
    x = data.draw(elements(suq2, max_len=6))
    n = normal_form(x)
    assert normal_form(n) == n
    assert all(suq2.is_normal_word(w) for w in n.terms)


@given(st.data())
def test_strategy_independence(suq2, data):
    w = data.draw(words(4, 7))
    left = normal_form([(w, ONE)], suq2, strategy="leftmost")
    right = normal_form([(w, ONE)], suq2, strategy="rightmost")
    assert left == right


@given(st.data())
def test_associativity(suq2, data):
    x, y, z = (data.draw(elements(suq2)) for _ in range(3))
    assert (x * y) * z == x * (y * z)


@given(st.data())
def test_unit_is_neutral(suq2, data):
    x = data.draw(elements(suq2))
    assert x * suq2.one() == x == suq2.one() * x


@given(st.data())
def test_star_involutive_antimultiplicative(suq2, data):
    x, y = data.draw(elements(suq2)), data.draw(elements(suq2))
    assert star(star(x)) == x
    assert star(x * y) == star(y) * star(x)


@given(st.data(), rationals_q.filter(lambda r: r <= 1))
def test_specialize_commutes(suq2, data, q0):
    x, y = data.draw(elements(suq2)), data.draw(elements(suq2))
    assert specialize_q(x * y, q0) == specialize_q(x, q0) * specialize_q(y, q0)
    raw = [(w, c) for w, c in (x + y).terms.items()]
    assert specialize_q(normal_form(raw, suq2), q0) == specialize_q(x, q0) + specialize_q(y, q0)


def test_raw_pairs_are_normalised(suq2):
    a, g = suq2.index("alpha"), suq2.index("gamma")
    assert normal_form([((a, g), ONE)], suq2) == Q * suq2.parse("gamma*alpha")
