import pytest
from hypothesis import given
from hypothesis import strategies as st

from qbundle.dsl import loads
from qbundle.hopf import (
    NoHopfData,
    SmashProduct,
    TensorElement,
    antipode,
    check_module_algebra,
    comultiply,
    counit,
    grading_action,
    is_cleaving_hom,
    multiply_legs,
    smash_multiply,
    trivial_action,
    verify_hopf_axioms,
    verify_relation_compat,
    verify_star_compat,
)
from qbundle.laurent import ONE, Q, ZERO
from qbundle.ncpoly import Presentation
from qbundle.presets import SUQ2

from strategies import elements


def tensor(p, text):
    from qbundle.parser import parse_tensor

    return parse_tensor(text, (p, p))


def test_comultiply_examples(suq2):
    assert comultiply(suq2.gen("alpha")) == tensor(suq2, "[alpha, alpha] - q*[gamma^*, gamma]")
    assert comultiply(suq2.gen("gamma")) == tensor(suq2, "[gamma, alpha] + [alpha^*, gamma]")
    assert comultiply(suq2.one()) == TensorElement.unit((suq2, suq2))


def test_counit_examples(suq2):
    assert counit(suq2.gen("alpha")) == ONE
    assert counit(suq2.parse("gamma*gamma^*")) == ZERO
    assert counit(suq2.parse("alpha^* * alpha + gamma^* * gamma")) == ONE
    assert counit(suq2.parse("alpha * alpha^* + q^2*gamma * gamma^*")) == ONE


def test_antipode_examples(suq2):
    assert antipode(suq2.gen("alpha")) == suq2.gen("alpha^*")
    assert antipode(suq2.gen("gamma")) == -Q * suq2.gen("gamma")
    assert antipode(suq2.one()) == suq2.one()
    # S(U_12) = U_21^* with U_12 = -q γ*, U_21 = γ
    assert antipode(suq2.parse("-q*gamma^*")) == suq2.gen("gamma^*")


def test_delta_respects_commutation(suq2):
    from qbundle.hopf import hopf_of

    a, g = suq2.index("alpha"), suq2.index("gamma")
    # the raw word αγ is not normal; its image is built generator by generator
    ag = hopf_of(suq2).comultiply_word((a, g))
    ga = hopf_of(suq2).comultiply_word((g, a))
    assert len(ag.terms) == 4
    assert ag == ga.scale(Q)


def test_no_hopf_data():
    p = Presentation("bare", ["x"], {0: 0})
    with pytest.raises(NoHopfData):
        comultiply(p.gen("x"))


@pytest.mark.parametrize("name,degree", [("suq2", 4), ("su2", 3), ("u1", 6)])
def test_axioms(name, degree, request):
    p = request.getfixturevalue(name)
    report = verify_hopf_axioms(p, degree)
    assert report.passed, report.to_text()


@pytest.mark.parametrize("name", ["suq2", "su2", "u1"])
def test_relation_compat(name, request):
    report = verify_relation_compat(request.getfixturevalue(name))
    assert report.passed, report.to_text()


def test_star_compat(suq2):
    assert verify_star_compat(suq2, 3).passed


def _broken_antipode():
    text = SUQ2.replace("antipode alpha = alpha^*", "antipode alpha = alpha").replace("algebra suq2", "algebra broken")
    return loads(text)["broken"]


def test_negative_control_reports_alpha():
    p = _broken_antipode()
    report = verify_hopf_axioms(p, 1)
    assert not report.passed
    left = report.check("left antipode")
    assert left.status == "fail"
    assert "alpha" in left.detail["failing"]
    assert not verify_relation_compat(p).passed


@given(st.data())
def test_delta_is_star_map(suq2, data):
    x = data.draw(elements(suq2))
    assert comultiply(x.star()) == comultiply(x).star()


@given(st.data())
def test_s_star_s_star(suq2, data):
    x = data.draw(elements(suq2))
    assert antipode(antipode(x.star()).star()) == x


@given(st.data())
def test_delta_multiplicative(suq2, data):
    x, y = data.draw(elements(suq2)), data.draw(elements(suq2))
    assert comultiply(x * y) == comultiply(x) * comultiply(y)


@given(st.data())
def test_antipode_antimultiplicative(suq2, data):
    x, y = data.draw(elements(suq2, max_len=2)), data.draw(elements(suq2, max_len=2))
    assert antipode(x * y) == antipode(y) * antipode(x)


# -- smash products ----------------------------------------------------------------


@pytest.fixture(scope="module")
def trivial(u1, su2):
    return SmashProduct(trivial_action(u1, su2))


@pytest.fixture(scope="module")
def graded(u1, suq2):
    return SmashProduct(grading_action(u1, suq2, Q))


def test_module_algebra_laws(u1, su2, suq2):
    assert check_module_algebra(trivial_action(u1, su2), 2).passed
    assert check_module_algebra(grading_action(u1, suq2, Q), 2).passed


@given(st.data())
def test_trivial_smash_is_tensor_algebra(trivial, su2, u1, data):
    b1, b2 = data.draw(elements(su2, 2, 2)), data.draw(elements(su2, 2, 2))
    h1, h2 = data.draw(elements(u1, 2, 2)), data.draw(elements(u1, 2, 2))
    lhs = smash_multiply((b1, h1), (b2, h2), trivial.act)
    rhs = trivial.pure(b1, h1) * trivial.pure(b2, h2)
    assert lhs == rhs


def test_group_part_is_subalgebra(graded, suq2, u1):
    u = u1.gen("u")
    assert graded.mul(graded.pure(suq2.one(), u), graded.pure(suq2.one(), u)) == graded.pure(suq2.one(), u * u)


def test_nontrivial_smash_formula(graded, suq2, u1):
    b, b2 = suq2.gen("gamma"), suq2.gen("alpha")
    u = u1.gen("u")
    got = graded.mul(graded.pure(b, u), graded.pure(b2, u))
    # u ▷ α = q^{wt(α)} α = q α
    assert got == graded.pure(b * b2.scale(Q), u * u)


@given(st.data())
def test_smash_associative(graded, suq2, u1, data):
    xs = [graded.pure(data.draw(elements(suq2, 2, 2)), data.draw(elements(u1, 2, 1))) for _ in range(3)]
    x, y, z = xs
    assert graded.mul(graded.mul(x, y), z) == graded.mul(x, graded.mul(y, z))


def test_canonical_cleaving_map(graded, suq2, u1):
    j = lambda w: graded.pure(suq2.one(), u1.word(w))
    report = is_cleaving_hom(j, u1, graded, max_degree=3)
    assert report.passed, report.to_text()


def test_degenerate_cleaving_map_fails(graded, suq2, u1):
    j = lambda w: graded.one() if not w else graded.zero()
    report = is_cleaving_hom(j, u1, graded, max_degree=2)
    assert report.check("unital").status == "pass"
    assert report.check("multiplicative").status == "fail"
    assert report.check("convolution inverse").status == "fail"


def test_multiply_legs_of_delta_is_not_identity(suq2):
    # m∘Δ(α) = α² - qγ*γ: sanity check of leg multiplication
    assert multiply_legs(comultiply(suq2.gen("alpha"))) == suq2.parse("alpha^2 - q*gamma^* * gamma")
