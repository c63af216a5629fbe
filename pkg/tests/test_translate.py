import pytest

from decorat.imp import Assign, IntConst, Skip, Throw, Var, bundled_programs, parse_cmd, parse_exp
from decorat.objtypes import Int, Unit
from decorat.purefn import CmpOp, Const, FromEmpty, Identity
from decorat.terms import (Comp, Decoration, Lookup, Pair, Tag, TPure, Update, infer_decoration,
                           typecheck)
from decorat.translate import d_cmd, d_exp


def test_expressions():
    assert d_exp(IntConst(14)) == TPure(Const(14, Int))
    assert d_exp(Var("x")) == Lookup("x")
    assert d_exp(parse_exp("x < 11")) == Comp(TPure(CmpOp("<")),
                                              Pair(Lookup("x"), TPure(Const(11, Int))))


def test_expression_decorations_are_accessors():
    for text in ("x + y * 2", "x <= 0 && y > 1", "true"):
        t = d_exp(parse_exp(text))
        assert infer_decoration(t).le(Decoration(1, 0))
        assert typecheck(t)[0] == Unit


def test_commands():
    assert d_cmd(Skip()) == TPure(Identity(Unit))
    assert d_cmd(Throw("e")) == Comp(TPure(FromEmpty(Unit)), Tag("e"))
    t = d_cmd(Assign("x", IntConst(14)))
    assert t == Comp(Update("x"), TPure(Const(14, Int)))
    assert infer_decoration(t) == Decoration(2, 0)


def test_sequence_composes():
    a, b = parse_cmd("x := 1"), parse_cmd("y := x")
    assert d_cmd(parse_cmd("x := 1; y := x")) == Comp(d_cmd(b), d_cmd(a))


@pytest.mark.parametrize("name, prog", sorted(bundled_programs().items()))
def test_corpus_translations_are_commands(name, prog):
    t = d_cmd(prog.body)
    assert typecheck(t) == (Unit, Unit)
    assert infer_decoration(t).le(Decoration(2, 1))
