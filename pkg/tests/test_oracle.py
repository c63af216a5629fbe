import pytest
from hypothesis import given, settings, strategies as st

from decorat.equations import SS, SW, WS, WW
from decorat.errors import EffectMismatch, SignatureMismatch
from decorat.imp import bundled_programs, parse_cmd
from decorat.objtypes import Int, Unit
from decorat.oracle import (DIVERGENT, Exc, adequacy, combined_model, denote, exception_model,
                            semantic_eq, state_model)
from decorat.purefn import Const, Identity
from decorat.syntax import parse_term
from decorat.terms import Comp, Lookup, TPure, Update
from decorat.translate import d_cmd

STATE = state_model()
BOTH = combined_model(samples=20)


def test_lookup_after_update_in_the_state_model():
    f = denote(Comp(Lookup("x"), Update("x")), STATE)
    for v in (0, 3):
        for s in STATE.states():
            assert f(v, s) == (v, (v, s[1]))


def test_identity_propagates_exceptions():
    f = denote(TPure(Identity(Unit)), BOTH)
    assert f((), (1, 2)) == ((), (1, 2))
    assert f(Exc("e", ()), (1, 2)) == (Exc("e", ()), (1, 2))


def test_lemma3_denotation():
    prog = bundled_programs()["lemma3"]
    f = denote(d_cmd(prog.body), BOTH)
    for s in BOTH.states():
        assert f((), s) == ((), (0, 7))


def test_effect_mismatch():
    with pytest.raises(EffectMismatch):
        denote(parse_term("tag(e)"), STATE, "state")
    with pytest.raises(EffectMismatch):
        denote(Lookup("x"), exception_model(), "exception")


def test_lookup_update_is_only_weak():
    lhs, rhs = Comp(Lookup("x"), Update("x")), TPure(Identity(Int))
    assert semantic_eq(lhs, rhs, WS, STATE).holds
    v = semantic_eq(lhs, rhs, SS, STATE)
    assert not v.holds
    cx = v.counterexample
    assert cx["input"] != cx["state"]["x"]


def test_annihilation_lookup_update():
    t = Comp(Update("x"), Lookup("x"))
    assert semantic_eq(t, TPure(Identity(Unit)), SS, STATE).holds


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        semantic_eq(Lookup("x"), TPure(Identity(Unit)), SS, STATE)


def test_divergence_is_its_own_value():
    loop = d_cmd(parse_cmd("while (true) do skip"))
    f = denote(loop, BOTH, fuel=50)
    assert f((), (0, 0))[0] is DIVERGENT
    assert not semantic_eq(loop, TPure(Identity(Unit)), WW, BOTH, fuel=50).holds


TERMS = [
    "update(x) o constant(1)",
    "update(x) o lookup(x)",
    "update(x) o lookup(y)",
    "tpure(id) o (id : unit -> unit)",
    "update(y) o constant(2) o update(x) o constant(1)",
    "update(x) o constant(1) o update(y) o constant(2)",
    "empty(unit) o tag(e)",
    "empty(unit) o tag(f)",
    "try(empty(unit) o tag(e)) catch(e) (update(x) o constant(0))",
    "empty(unit) o tag(e) o update(x) o constant(3)",
]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TERMS), st.sampled_from(TERMS))
def test_kind_lattice(a, b):
    t1, t2 = parse_term(a), parse_term(b)
    held = {k.code: semantic_eq(t1, t2, k, BOTH).holds for k in (SS, SW, WS, WW)}
    if held["ss"]:
        assert held["sw"] and held["ws"]
    if held["sw"] or held["ws"]:
        assert held["ww"]


def test_throw_adequacy():
    v = adequacy(parse_cmd("throw e"), combined_model(("x",), ("e",)))
    assert v.holds


def test_divergence_adequacy():
    v = adequacy(parse_cmd("while (true) do skip"), combined_model(("x",), ("e",)), fuel=200)
    assert v.holds


@pytest.mark.parametrize("name, prog", sorted(bundled_programs().items()))
def test_corpus_adequacy(name, prog):
    model = combined_model(prog.locations, prog.exceptions or ("e",), samples=25, seed=1)
    v = adequacy(prog.body, model, fuel=2000)
    assert v.holds, v.counterexample
