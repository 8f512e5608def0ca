import pytest

from uncprover.cops import CopsParseError, parse_cops, render_cops
from uncprover.trs import RewriteRule

from conftest import a, b, c, f, h, x


def test_parse_minimal():
    pf = parse_cops("(VAR x) (RULES f(x) -> x)")
    assert pf.variables == ("x",)
    assert pf.trs.rules == (RewriteRule(f(x), x),)
    assert pf.trs.signature.as_dict() == {"f": 1}


def test_parse_cops254():
    pf = parse_cops("(VAR x) (RULES a -> f(c) a -> f(h(c)) f(x) -> h(f(x)))")
    assert pf.trs.rules == (
        RewriteRule(a, f(c)), RewriteRule(a, f(h(c))),
        RewriteRule(f(x), h(f(x))))
    assert pf.trs.signature.as_dict() == {"a": 0, "c": 0, "f": 1, "h": 1}


def test_parse_rejects_fresh_rhs_variable():
    with pytest.raises(CopsParseError) as e:
        parse_cops("(VAR x) (RULES a -> x)")
    assert "fresh variables" in str(e.value)


def test_parse_rejects_variable_lhs():
    with pytest.raises(CopsParseError) as e:
        parse_cops("(VAR x) (RULES x -> a)")
    assert "left-hand side" in str(e.value)


def test_parse_rejects_arity_conflict():
    with pytest.raises(CopsParseError) as e:
        parse_cops("(RULES f(a) -> a f(a,a) -> a)")
    assert "arity" in str(e.value)


def test_parse_rejects_variable_with_arguments():
    with pytest.raises(CopsParseError):
        parse_cops("(VAR x) (RULES x(a) -> a)")


def test_parse_error_carries_position():
    with pytest.raises(CopsParseError) as e:
        parse_cops("(VAR x)\n(RULES a -> )")
    assert e.value.line == 2


def test_parse_unknown_block():
    with pytest.raises(CopsParseError):
        parse_cops("(FOO bar) (RULES a -> b)")


def test_parse_comment_block():
    pf = parse_cops("(VAR x)(RULES f(x) -> x)(COMMENT taken from somewhere)")
    assert pf.comment == "taken from somewhere"


def test_whitespace_insensitive():
    one = parse_cops("(VAR x y)(RULES f(x,y)->g(x))")
    two = parse_cops("(VAR x y)\n(RULES\n  f( x , y ) ->\n     g(x)\n)\n")
    assert one == two


def test_roundtrip():
    text = "(VAR x y)\n(RULES\n  f(x,y) -> g(x)\n  a -> b\n)\n(COMMENT hello)"
    pf = parse_cops(text)
    assert parse_cops(render_cops(pf)) == pf


def test_roundtrip_no_vars():
    pf = parse_cops("(RULES a -> b)")
    assert parse_cops(render_cops(pf)) == pf


def test_arrow_tokenizes_without_spaces():
    pf = parse_cops("(RULES a->b)")
    assert pf.trs.rules == (RewriteRule(a, b),)
