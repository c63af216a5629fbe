import pytest

from decorat.equations import SS, WS
from decorat.errors import SideConditionViolated
from decorat.objtypes import Int
from decorat.purefn import ComposeSym, Fst, PairSym, Snd
from decorat.rules import CATALOG, RULES, instantiate, rule_catalog
from decorat.syntax import parse_term


def test_catalog_ids_are_unique():
    ids = [r.id for r in rule_catalog()]
    assert len(ids) == len(set(ids)) == 26


def test_catalog_groups():
    by_cat = {}
    for r in CATALOG:
        by_cat.setdefault(r.category, []).append(r.id)
    assert len(by_cat["state"]) == 5
    assert len(by_cat["exception"]) == 6
    assert len(by_cat["imp"]) == 8


def test_ax2_distinctness_is_declared():
    assert "i <> j" in RULES["ax2"].side_conditions
    with pytest.raises(SideConditionViolated):
        instantiate("ax2", {"i": "x", "j": "x"})


def test_copair2_is_strong():
    assert RULES["copair2"].kind == SS


def test_ax1():
    eq = instantiate("ax1", {"i": "x"}).equation
    assert str(eq) == "lookup(x) o update(x) ~.== id"
    assert eq.kind == WS


def test_imp1_folds_addition():
    eq = instantiate("imp1", {"op": "+", "p": 2, "q": 4}).equation
    assert str(eq.rhs) == "constant(6)"
    assert eq.kind == SS


def test_imp2_checks_the_comparison():
    eq = instantiate("imp2", {"op": "<", "p": 14, "q": 11}).equation
    assert str(eq.rhs) == "inr"
    with pytest.raises(SideConditionViolated):
        instantiate("imp2", {"op": "<", "p": 2, "q": 11})


def test_pair1_rejects_a_modifier():
    with pytest.raises(SideConditionViolated):
        instantiate("pair1", {"f1": parse_term("update(x) o constant(1)"),
                              "f2": parse_term("lookup(y)")})


def test_imp7_extensional():
    swap_twice = ComposeSym(PairSym(Snd(Int, Int), Fst(Int, Int)),
                            PairSym(Snd(Int, Int), Fst(Int, Int)))
    inst = instantiate("imp7", {"f": swap_twice, "g": PairSym(Fst(Int, Int), Snd(Int, Int))})
    assert inst.equation.kind == SS
    with pytest.raises(SideConditionViolated):
        instantiate("imp7", {"f": Fst(Int, Int), "g": Snd(Int, Int)})


def test_rule_json():
    doc = RULES["pair1"].to_json()
    assert doc["kind"] == "ws" and doc["side_conditions"]
