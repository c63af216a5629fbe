import pytest
from hypothesis import given, settings, strategies as st

from decorat.errors import InvalidPath, TypeMismatch, UnknownLocation
from decorat.objtypes import Int, TypeEnv, Unit
from decorat.purefn import (ArithOp, ComposeSym, Const, Fst, Identity, PairSym, Snd,
                            normalize)
from decorat.syntax import parse_term
from decorat.terms import (Comp, Decoration, Downcast, Lookup, Pbl, Tag, TPure, Untag,
                           Update, infer_decoration, replace_at, subterm_at, typecheck)


def c(n):
    return TPure(Const(n, Int))


def test_update_after_constant_is_a_command():
    assert typecheck(Comp(Update("x"), c(2))) == (Unit, Unit)


def test_identity_signature():
    assert typecheck(TPure(Identity(Int))) == (Int, Int)


def test_update_after_lookup():
    assert typecheck(Comp(Update("x"), Lookup("y"))) == (Unit, Unit)


def test_composition_clash():
    with pytest.raises(TypeMismatch):
        typecheck(Comp(Update("x"), Update("y")))


def test_unknown_location():
    env = TypeEnv(locations=("x",), exceptions=())
    with pytest.raises(UnknownLocation):
        typecheck(Lookup("z"), env)


@pytest.mark.parametrize("term, dec", [
    (Comp(Update("x"), c(1)), (2, 0)),
    (c(5), (0, 0)),
    (Comp(Untag("e"), Tag("e")), (0, 2)),
    (Lookup("x"), (1, 0)),
    (Pbl(), (0, 0)),
    (Tag("e"), (0, 1)),
])
def test_decorations(term, dec):
    assert infer_decoration(term) == Decoration(*dec)


def test_downcast_caps_exception_degree():
    t = Downcast(Comp(Untag("e"), Tag("e")))
    assert infer_decoration(t) == Decoration(0, 1)


def test_decoration_bounds_subterms():
    t = parse_term("update(x) o tpure(+) o pair(lookup(x), constant(1)) o update(y) o constant(2)")
    top = infer_decoration(t)
    for path in [(0,), (1,), (1, 1), (1, 1, 0)]:
        assert infer_decoration(subterm_at(t, path)).le(top)


def test_paths():
    f, g = Lookup("x"), TPure(Identity(Unit))
    assert subterm_at(Comp(f, g), [1]) == g
    assert replace_at(Comp(f, g), [0], f) == Comp(f, g)
    a, b = Untag("e"), Tag("e")
    assert subterm_at(Downcast(Comp(a, b)), [0, 1]) == b


def test_bad_path():
    with pytest.raises(InvalidPath):
        subterm_at(Lookup("x"), [0])


def test_replace_checks_type():
    t = Comp(Update("x"), c(1))
    with pytest.raises(TypeMismatch):
        replace_at(t, [1], TPure(Identity(Unit)))


def test_normalize_projection_of_pair():
    f = ComposeSym(Fst(Int, Int), PairSym(Snd(Int, Int), Fst(Int, Int)))
    assert normalize(f) == Snd(Int, Int)


def test_normalize_folds_constants():
    f = ComposeSym(ArithOp("+"), PairSym(Const(2, Int), Const(4, Int)))
    assert normalize(f) == Const(6, Int)


def fns(depth):
    leaf = st.sampled_from([Fst(Int, Int), Snd(Int, Int), ArithOp("+"), ArithOp("*"),
                            ArithOp("-")])
    if depth == 0:
        return leaf
    sub = fns(depth - 1)
    return st.one_of(
        leaf,
        st.builds(lambda op, a, b: ComposeSym(op, PairSym(a, b)),
                  st.sampled_from([ArithOp("+"), ArithOp("-")]), sub, sub),
        st.builds(lambda a, b: ComposeSym(Fst(Int, Int), PairSym(a, b)), sub, sub),
        st.builds(lambda a: ComposeSym(Identity(Int), a), sub),
    )


@settings(max_examples=150, deadline=None)
@given(fns(3), st.integers(-50, 50), st.integers(-50, 50))
def test_normalize_preserves_meaning(f, a, b):
    g = normalize(f)
    assert g.eval((a, b)) == f.eval((a, b))
    assert normalize(g) == g
    assert g.sig() == f.sig()
