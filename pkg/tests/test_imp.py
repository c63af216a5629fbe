import random

import pytest
from hypothesis import given, settings, strategies as st

from decorat.errors import ParseError, TypeMismatch
from decorat.imp import (Assign, Binary, Final, IntConst, OutOfFuel, Seq, Skip, Throw,
                         TryCatch, Uncaught, Var, While, eval_exp, parse_cmd, parse_exp,
                         parse_program, run, show_cmd, step, trace)

PROG5 = "x := 2; while (x < 11) do x := x + 4"
LEMMA3 = ("x := 1; y := 20; try (while (true) do (if (x <= 0) then throw e "
          "else x := x - 1)) catch e => y := 7")


def test_parse_assign():
    assert parse_cmd("x := x + 4") == Assign("x", Binary("+", Var("x"), IntConst(4)))


def test_parse_try():
    assert parse_cmd("try skip catch e => skip") == TryCatch(Skip(), "e", Skip())


def test_parse_while():
    c = parse_cmd(PROG5)
    assert isinstance(c, Seq) and c.first == Assign("x", IntConst(2))
    assert isinstance(c.second, While) and c.second.cond.op == "<"


def test_sequence_is_right_associated():
    c = parse_cmd("skip; skip; x := 1")
    assert isinstance(c.second, Seq)


def test_precedence():
    assert parse_exp("1 + 2 * 3") == Binary("+", IntConst(1), Binary("*", IntConst(2), IntConst(3)))
    e = parse_exp("x < 1 || x > 2 && true")
    assert e.op == "||" and e.right.op == "&&"


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_cmd("x := ")
    assert err.value.line == 1


def test_ill_typed_guard():
    with pytest.raises(TypeMismatch):
        parse_cmd("while (x + 1) do skip")


def test_program_header():
    p = parse_program("locations x y ; exceptions e ;\n" + LEMMA3)
    assert p.locations == ("x", "y") and p.exceptions == ("e",)


def test_eval_exp():
    assert eval_exp(parse_exp("5 + 4"), {}) == 9
    assert eval_exp(Var("x"), {"x": 3}) == 3
    assert eval_exp(parse_exp("x < 11"), {"x": 14}) is False


def test_step_rules():
    s = {"x": 0}
    c = parse_cmd("x := 1")
    assert step(s, Seq(Skip(), c)) == (s, c)
    assert step(s, Seq(Throw("e"), c)) == (s, Throw("e"))
    assert step(s, TryCatch(Throw("e1"), "e2", c)) == (s, Throw("e1"))
    assert step(s, TryCatch(Throw("e"), "e", c)) == (s, c)
    assert step(s, TryCatch(Skip(), "e", c)) == (s, Skip())


def test_prog5_ends_with_14():
    rng = random.Random(0)
    c = parse_cmd(PROG5)
    for _ in range(50):
        out = run(c, {"x": rng.randint(-100, 100)})
        assert out == Final({"x": 14})


def test_lemma3_program():
    out = run(parse_cmd(LEMMA3), {"x": 5, "y": 0})
    assert out == Final({"x": 0, "y": 7})


def test_uncaught():
    out = run(parse_cmd("x := 1; throw e; x := 2"), {"x": 0})
    assert out == Uncaught("e", {"x": 1})


def test_divergence():
    assert isinstance(run(parse_cmd("while (true) do skip"), {}, fuel=100), OutOfFuel)


def test_trace_ends_in_the_outcome():
    tr = trace(parse_cmd(PROG5), {"x": 0})
    assert tr[0][1] == parse_cmd(PROG5)
    assert tr[-1] == ({"x": 14}, Skip())


def test_show_round_trips():
    for text in (PROG5, LEMMA3, "if (x = 1 && y >= 2) then { skip; x := 2 } else x := -3"):
        c = parse_cmd(text)
        assert parse_cmd(show_cmd(c)) == c


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 40), st.integers(-30, 30))
def test_more_fuel_never_changes_a_finished_run(fuel, x0):
    c = parse_cmd("while (x < 10) do x := x + 1")
    short = run(c, {"x": x0}, fuel)
    if not isinstance(short, OutOfFuel):
        assert run(c, {"x": x0}, fuel + 25) == short
