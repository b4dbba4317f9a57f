"""Parser, shape validation, and pretty-printer round trips."""

import pytest

from gr1report.syntax import (
    parse_spec, parse_expr, pretty, SpecError,
    Atom, Next, Compare, Add, Implies, Iff, Or, And, Not, IntConst,
)
from gr1report.compiler import validate_gr1_shape


def test_minimal_document():
    doc = parse_spec("[INPUT]\nr\n[SYS_LIVENESS]\nr\n")
    assert [v.name for v in doc.inputs()] == ["r"]
    assert len(doc.parts["sys_liveness"]) == 1
    assert doc.parts["sys_liveness"][0].formula == Atom("r")


def test_content_on_header_line():
    doc = parse_spec("[INPUT] r\n[SYS_LIVENESS] r")
    assert [v.name for v in doc.inputs()] == ["r"]
    assert len(doc.parts["sys_liveness"]) == 1


def test_integer_declaration():
    doc = parse_spec("[INPUT]\nx: 0...7\n")
    v = doc.var("x")
    assert v.is_int and (v.lo, v.hi) == (0, 7)


def test_unknown_section_header():
    with pytest.raises(SpecError, match="unknown section header"):
        parse_spec("[BOGUS]\nr\n")


def test_duplicate_variable():
    with pytest.raises(SpecError, match="duplicate"):
        parse_spec("[INPUT]\nr\nr\n")


def test_undeclared_reference():
    with pytest.raises(SpecError, match="undeclared"):
        parse_spec("[INPUT]\nr\n[SYS_TRANS]\nq\n")


def test_reversed_bounds():
    with pytest.raises(SpecError, match="reversed"):
        parse_spec("[INPUT]\nx: 5...2\n")


def test_syntax_error_has_location():
    with pytest.raises(SpecError) as err:
        parse_spec("[INPUT]\nr\n[SYS_TRANS]\nr & & r\n")
    assert "line 4" in str(err.value)


def test_precedence():
    e = parse_expr("!a & b | c -> d <-> e")
    # <-> loosest, then ->, |, &, !
    assert isinstance(e, Iff)
    assert isinstance(e.left, Implies)
    assert isinstance(e.left.left, Or)
    assert isinstance(e.left.left.left, And)
    assert isinstance(e.left.left.left.left, Not)


def test_implies_right_associative():
    e = parse_expr("a -> b -> c")
    assert isinstance(e, Implies) and isinstance(e.right, Implies)


def test_arithmetic_parsing():
    e = parse_expr("x + 1 < y + 2")
    assert isinstance(e, Compare) and e.op == "<"
    assert isinstance(e.left, Add) and e.left.right == IntConst(1)


def test_next_parsing():
    e = parse_expr("X(x) = x + 1")
    assert isinstance(e, Compare)
    assert e.left == Next(Atom("x"))


def test_roundtrip_regression_corpus(specs_dir):
    for path in sorted(specs_dir.glob("*.spec")):
        doc = parse_spec(path.read_text())
        again = parse_spec(pretty(doc))
        assert again == doc, path.name


def test_roundtrip_random():
    from conftest import random_spec_text
    for seed in range(40):
        doc = parse_spec(random_spec_text(seed))
        assert parse_spec(pretty(doc)) == doc, seed


# ----------------------------------------------------------------------
# grammar restrictions are reported as violation data

def _violations(text):
    return validate_gr1_shape(parse_spec(text))


def test_output_under_next_in_assumption():
    v = _violations("[INPUT]\nr\n[OUTPUT]\ng\n[ENV_TRANS]\nX(g)\n")
    assert any(x.rule == "output under next in assumption" for x in v)


def test_nested_next():
    v = _violations("[OUTPUT]\na\n[SYS_TRANS]\nX(X(a))\n")
    assert any(x.rule == "nested next" for x in v)


def test_unnested_next_in_liveness_is_fine():
    assert _violations("[OUTPUT]\na\n[SYS_LIVENESS]\nX(a)\n") == []


def test_next_in_init():
    v = _violations("[OUTPUT]\na\n[SYS_INIT]\nX(a)\n")
    assert any(x.rule == "next in initial part" for x in v)


def test_output_in_env_init():
    v = _violations("[INPUT]\nr\n[OUTPUT]\ng\n[ENV_INIT]\ng | r\n")
    assert any(x.rule == "output in initial assumption" for x in v)


def test_integer_as_boolean_flagged():
    v = _violations("[OUTPUT]\nx: 0...3\n[SYS_TRANS]\nx\n")
    assert any(x.rule == "arithmetic outside comparison" for x in v)


def test_boolean_in_arithmetic_flagged():
    v = _violations("[OUTPUT]\na\nx: 0...3\n[SYS_TRANS]\nx + a < 3\n")
    assert any(x.rule == "boolean in arithmetic" for x in v)


def test_comparison_on_boolean_flagged():
    v = _violations("[OUTPUT]\na\nb\n[SYS_TRANS]\na = b\n")
    assert any(x.rule == "comparison on boolean" for x in v)
