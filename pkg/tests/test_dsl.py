import pytest

from qbundle.dsl import DSLError, dumps, load_file, loads
from qbundle.hopf import comultiply
from qbundle.laurent import Q
from qbundle.presets import PRESETS, SUQ2, load_preset
from qbundle.parser import parse_tensor


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_round_trip(name):
    p = load_preset(name)
    text = dumps(p)
    again = loads(text, resolve=lambda n: load_preset(n) if n in PRESETS else None)[name]
    assert dumps(again) == text
    assert again.symbols == p.symbols
    assert {k: tuple(v) for k, v in again.rules.items()} == {k: tuple(v) for k, v in p.rules.items()}


def test_presets_are_cached():
    assert load_preset("suq2") is load_preset("suq2")


def test_suq2_preset_contents(suq2):
    assert len(suq2.rules) == 7
    assert len(suq2.relations) == 5
    assert set(suq2.coactions) == {"left", "right"}
    assert suq2.morphisms["pi"].target is load_preset("u1")


def test_u1_preset(u1):
    assert comultiply(u1.gen("u")) == parse_tensor("[u, u]", (u1, u1))
    assert u1.parse("u * u^*") == u1.one()


def test_load_file(tmp_path):
    path = tmp_path / "laurent.qb"
    path.write_text(PRESETS["u1"].replace("algebra u1", "algebra v1"))
    blocks = load_file(path)
    assert list(blocks) == ["v1"]


def _error(text, **kw):
    with pytest.raises(DSLError) as info:
        loads(text, **kw)
    return info.value


def test_positioned_syntax_error():
    err = _error("algebra x\n  order a a^*\n  rule a * a^* -> 1 +\nend\n")
    assert err.line == 3
    assert err.column > 1
    assert str(err).startswith("<string>:3:")


def test_unknown_statement():
    err = _error("algebra x\n  order a\n  frobnicate a\nend\n")
    assert err.line == 3 and err.column == 3


def test_missing_end():
    assert "missing 'end'" in str(_error("algebra x\n  order a\n"))


def test_increasing_rule_rejected():
    err = _error("algebra x\n  order a b\n  rule a -> b * b\nend\n")
    assert err.line == 3 and "decrease" in str(err)


def test_non_homogeneous_rule_rejected():
    text = "algebra x\n  order a a^* b b^*\n  rule b * a -> a\n  coaction right a=1 b=1\nend\n"
    err = _error(text)
    assert "homogeneous" in str(err)


def test_confluence_failure_and_skip():
    text = "algebra broken\n  order a b\n  rule a * b -> 1\n  rule b * a -> b\nend\n"
    err = _error(text)
    assert "confluent" in str(err)
    p = loads(text, check_confluence=False)["broken"]
    assert len(p.rules) == 2


def test_missing_antipode():
    text = SUQ2.replace("  antipode alpha^* = alpha\n", "")
    assert "antipode" in str(_error(text, resolve=lambda n: load_preset(n)))


def test_morphism_must_respect_relations():
    text = SUQ2.replace("morphism pi -> u1: alpha = u; gamma = 0", "morphism pi -> u1: alpha = u; gamma = u")
    assert "respect" in str(_error(text, resolve=lambda n: load_preset(n)))


def test_starred_delta_is_derived(suq2):
    assert comultiply(suq2.gen("alpha^*")) == comultiply(suq2.gen("alpha")).star()
    assert Q * comultiply(suq2.gen("gamma^*")) == comultiply(suq2.parse("q*gamma^*"))
