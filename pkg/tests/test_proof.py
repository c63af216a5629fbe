import json

import pytest

from decorat.script import bundled_script, check_script, lemma_library, parse_script
from decorat.errors import ParseError

M = "update(x) o constant(0) o update(y) o constant(20)"
HEAD = "locations x y z ; exceptions e ;\n"


def check(body):
    return check_script(HEAD + body)


def test_eax1_under_a_pure_up_to_exceptions_frame():
    v = check(f"""
lemma t : untag(e) o tag(e) o {M} ==.~ {M}
proof
  rewrite eax1 at lhs [0..1] ;
  refl ;
qed
""")
    assert v.accepted, v.reason
    assert v.transcript[0]["goal_after"] == f"{M} ==.~ {M}"


def test_conv_weakens_the_goal():
    v = check(f"""
lemma t : {M} ==.== {M}
proof
  conv ==.~ ;
  refl ;
qed
""")
    assert v.accepted


def test_weak_rewrite_under_update_is_impure():
    v = check("""
lemma t : update(z) o lookup(x) o update(x) o constant(1) ~.~ update(z) o constant(1)
proof
  rewrite ax1 at lhs [1..2] ;
  refl ;
qed
""")
    assert not v.accepted
    assert v.error == "ImpureContext"
    assert v.failed_step == 1


def test_weak_rule_cannot_prove_strong_goal():
    v = check("""
lemma t : lookup(x) o update(x) ==.== (id : int -> int)
proof
  rewrite ax1 at lhs [0..1] ;
  refl ;
qed
""")
    assert v.error == "KindTooWeak"


def test_refl_on_unequal_sides():
    v = check("""
lemma t : update(x) o constant(1) ==.== update(x) o constant(2)
proof
  refl ;
qed
""")
    assert v.error == "NotClosed"


def test_open_goal_is_not_accepted():
    v = check("""
lemma t : update(x) o constant(1) ==.== update(x) o constant(2)
proof
qed
""")
    assert not v.accepted


def test_empty_script():
    v = check_script("")
    assert v.accepted and v.lemmas == []


def test_proven_lemma_is_reusable():
    v = check(f"""
lemma tag_untag : untag(e) o tag(e) o {M} ==.~ {M}
proof
  rewrite eax1 at lhs [0..1] ;
  refl ;
qed

lemma again : untag(e) o tag(e) o {M} ==.~ {M}
proof
  rewrite tag_untag at lhs [0] ;
  refl ;
qed
""")
    assert v.accepted and v.lemmas == ["tag_untag", "again"]


def test_transcript_is_deterministic():
    text = bundled_script("lemma2")
    a, b = check_script(text), check_script(text)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_script("lemma t : proof")
    assert err.value.line == 1


@pytest.mark.parametrize("name", ["state", "exceptions", "imp", "lemma1", "lemma2", "lemma3"])
def test_bundled_scripts_accepted(name):
    v = check_script(bundled_script(name))
    assert v.accepted, (v.failed_lemma, v.failed_step, v.reason)


@pytest.mark.parametrize("name, lemma, step, error", [
    ("lemma2_flipped", "prog5_is_prog6", 4, "NoMatch"),
    ("lemma2_wrong_rule", "prog5_is_prog6", 4, "SideConditionViolated"),
    ("lemma3_impure", "prog7_is_prog8", 22, "ImpureContext"),
])
def test_mutants_rejected_at_the_mutated_step(name, lemma, step, error):
    v = check_script(bundled_script(name))
    assert not v.accepted
    assert (v.failed_lemma, v.failed_step, v.error) == (lemma, step, error)


def test_library_contents():
    lib = lemma_library()
    for name in ("annihilation_lookup_update", "interaction_update_lookup",
                 "commutation_catch_catch", "imp_commutation_lookup_constant_update"):
        assert name in lib
    assert lib["interaction_update_lookup"].kind.code == "ws"
