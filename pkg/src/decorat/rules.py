"""The rule catalog: axioms, strengthening and splitting rules, IMP rules."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .equations import SS, SW, WS, WW, EqKind, Equation
from .errors import (BindingTypeMismatch, DecorationBoundViolated, EvalError,
                     SideConditionViolated, TypeMismatch)
from .matching import Bindings, Unbound, finish_types, substitute
from .objtypes import Bool, Empty, EmptyT, Int, Prod, TVar, Two, Unit, UnitT, is_finite
from .purefn import (ARITH, BOOLOPS, CMP, ArithOp, BoolOp, CmpOp, ComposeSym, Const, FromEmpty,
                     Fst, Identity, InjLeft, InjRight, PFVar, Snd, ToUnit,
                     enumerate_type, normalize, sample_type)
from .terms import (Comp, Copair, Decoration, Downcast, Lookup, Lpi, Meta, Pair, Pbl,
                    TPure, Tag, Term, Untag, Update, canon, infer_decoration, show,
                    typecheck, Def)
from .values import Sym, TT, FF

X, Y, Z = TVar("X"), TVar("Y"), TVar("Z")


@dataclass(frozen=True)
class Schema:
    """An equation with variables; rules and proven lemmas both take this form."""

    name: str
    kind: EqKind
    lhs: Term
    rhs: Term
    finish: object = None
    origin: str = "rule"


@dataclass(frozen=True)
class Rule:
    id: str
    category: str
    kind: EqKind | None
    schema: str
    side_conditions: tuple = ()
    equation: Schema | None = None

    def to_json(self):
        return {"id": self.id, "category": self.category,
                "kind": self.kind.code if self.kind else None,
                "schema": self.schema, "side_conditions": list(self.side_conditions)}


@dataclass
class RuleInstance:
    rule: str
    bindings: dict
    equation: Equation | None = None
    premises: list = field(default_factory=list)
    flag: str | None = None


def _m(name, dom, cod, sd=2, ed=2):
    return Meta(name, dom, cod, Decoration(sd, ed))


def _tp(fn):
    return TPure(fn)


def _fn_var(name, dom, cod):
    return TPure(PFVar(name, dom, cod))


# IMP rule side computations

def _arith(b: Bindings):
    op = b.pfs["op"]
    if not isinstance(op, ArithOp):
        raise SideConditionViolated(f"{op} is not an arithmetic operator")
    try:
        r = op.eval((b.ints["p"], b.ints["q"]))
    except EvalError as exc:
        raise SideConditionViolated(f"cannot fold {op}: {exc}") from None
    if "r" in b.ints and b.ints["r"] != r:
        raise SideConditionViolated(f"{b.ints['p']} {op.op} {b.ints['q']} is {r}, not {b.ints['r']}")
    b.ints["r"] = r


def _decide(cls, want: bool):
    def check(b: Bindings):
        op = b.pfs["op"]
        if not isinstance(op, cls):
            raise SideConditionViolated(f"{op} is not a {cls.__name__} operator")
        try:
            got = op.eval((b.ints["p"], b.ints["q"]))
        except EvalError as exc:
            raise SideConditionViolated(f"cannot decide {op}: {exc}") from None
        if got != want:
            raise SideConditionViolated(
                f"{b.ints['p']} {op.op} {b.ints['q']} is {str(got).lower()}")
    return check


def ext_equal(f, g, samples: int = 1000, seed: int = 0):
    """(equal, flag): normal forms, else exhaustive, else sampled evaluation."""
    nf, ng = normalize(f), normalize(g)
    if nf == ng:
        return True, None
    dom = f.sig()[0]
    try:
        if is_finite(dom):
            return all(f.eval(v) == g.eval(v) for v in enumerate_type(dom)), None
        rng = random.Random(seed)
        ints = list(range(-1000, 1001))
        for _ in range(samples):
            v = sample_type(dom, rng, ints)
            if f.eval(v) != g.eval(v):
                return False, None
        return True, "bounded-extensional"
    except (EvalError, ValueError) as exc:
        raise SideConditionViolated(f"cannot compare {f} and {g}: {exc}") from None


def _imp7(b: Bindings):
    ok, flag = ext_equal(b.pfs["f"], b.pfs["g"])
    if not ok:
        raise SideConditionViolated(f"{b.pfs['f']} and {b.pfs['g']} differ on some input")
    return flag


def _cmp_lhs(ty):
    return Comp(Pbl(), Comp(_fn_var("op", Prod(ty, ty), Bool),
                            Pair(_tp(Const(Sym("p"), ty)), _tp(Const(Sym("q"), ty)))))


def _eq(name, kind, lhs, rhs, finish=None):
    return Schema(name, kind, lhs, rhs, finish)


_f1_acc = _m("f1", X, Y, 1, 2)
_f2 = _m("f2", X, Z)
_g1_prop = _m("f1", Y, X, 2, 1)
_g2 = _m("f2", Z, X)
# guards are accessors and bodies propagators, as produced by the translation
_b = _m("b", Unit, Two, 1, 0)
_body = _m("f", Unit, Unit, 2, 1)
_loop = Lpi(_b, _body)

CATALOG = [
    Rule("ax1", "state", WS, "lookup(i) o update(i) ~.== id", (),
         _eq("ax1", WS, Comp(Lookup("i"), Update("i")), _tp(Identity(Int)))),
    Rule("ax2", "state", WS, "lookup(i) o update(j) ~.== lookup(i) o forget", ("i <> j",),
         _eq("ax2", WS, Comp(Lookup("i"), Update("j")), Comp(Lookup("i"), _tp(ToUnit(Int))))),
    Rule("unit_w", "state", WS, "f ~.== forget  for f : X -> unit", ("f <= {2,2}",),
         _eq("unit_w", WS, _m("f", X, Unit), _tp(ToUnit(X)))),
    Rule("pair1", "state", WS, "pi1 o pair(f1, f2) ~.== f1", ("state degree of f1 <= 1",),
         _eq("pair1", WS, Comp(_tp(Fst(Y, Z)), Pair(_f1_acc, _f2)), _f1_acc)),
    Rule("pair2", "state", SS, "pi2 o pair(f1, f2) ==.== f2", ("state degree of f1 <= 1",),
         _eq("pair2", SS, Comp(_tp(Snd(Y, Z)), Pair(_f1_acc, _f2)), _f2)),
    Rule("eax1", "exception", SW, "untag(e) o tag(e) ==.~ id", (),
         _eq("eax1", SW, Comp(Untag("e"), Tag("e")), _tp(Identity(Unit)))),
    Rule("eax2", "exception", SW, "untag(e1) o tag(e2) ==.~ empty o tag(e2)", ("e1 <> e2",),
         _eq("eax2", SW, Comp(Untag("e1"), Tag("e2")), Comp(_tp(FromEmpty(Unit)), Tag("e2")))),
    Rule("empty_w", "exception", SW, "f ==.~ empty  for f : empty -> X", ("f <= {2,2}",),
         _eq("empty_w", SW, _m("f", Empty, X), _tp(FromEmpty(X)))),
    Rule("downcast_w", "exception", SW, "downcast(f) ==.~ f", ("f <= {2,2}",),
         _eq("downcast_w", SW, Downcast(_m("f", X, Y)), _m("f", X, Y))),
    Rule("copair1", "exception", SW, "copair(f1, f2) o inl ==.~ f1", ("exception degree of f1 <= 1",),
         _eq("copair1", SW, Comp(Copair(_g1_prop, _g2), _tp(InjLeft(Y, Z))), _g1_prop)),
    Rule("copair2", "exception", SS, "copair(f1, f2) o inr ==.== f2", ("exception degree of f1 <= 1",),
         _eq("copair2", SS, Comp(Copair(_g1_prop, _g2), _tp(InjRight(Y, Z))), _g2)),
    Rule("eq1", "strengthen", SS, "f ~.== g  gives  f ==.== g", ("state degrees of f, g <= 1",)),
    Rule("eeq1", "strengthen", SS, "f ==.~ g  gives  f ==.== g", ("exception degrees of f, g <= 1",)),
    Rule("ww_to_ss", "strengthen", SS, "f ~.~ g  gives  f ==.== g", ("all degrees of f, g <= 1",)),
    Rule("eq2", "split", SS, "forget o f ==.== forget o g  and  f ~.== g  give  f ==.== g"),
    Rule("eq3", "split", SS, "lookup(i) o f ~.== lookup(i) o g for every location i  gives  f ==.== g",
         ("f, g : X -> unit",)),
    Rule("eeq2", "split", SS, "f o empty ==.== g o empty  and  f ==.~ g  give  f ==.== g"),
    Rule("eeq3", "split", SS, "f o tag(e) ==.~ g o tag(e) for every exception e  gives  f ==.== g",
         ("f, g : empty -> X",)),
    Rule("imp_loopiter", "imp", SS, "lpi(b, f) ==.== copair(lpi(b, f) o f, id) o b",
         ("b <= {1,0}", "f <= {2,1}"),
         _eq("imp_loopiter", SS, _loop, Comp(Copair(Comp(_loop, _body), _tp(Identity(Unit))), _b))),
    Rule("imp1", "imp", SS, "tpure(op) o pair(constant(p), constant(q)) ==.== constant(op(p, q))",
         ("op arithmetic",),
         _eq("imp1", SS, Comp(_fn_var("op", Prod(Int, Int), Int),
                              Pair(_tp(Const(Sym("p"), Int)), _tp(Const(Sym("q"), Int)))),
             _tp(Const(Sym("r"), Int)), _arith)),
    Rule("imp2", "imp", SS, "pbl o tpure(cmp) o pair(constant(p), constant(q)) ==.== ffalse",
         ("cmp(p, q) is false",), _eq("imp2", SS, _cmp_lhs(Int), _tp(InjRight(Unit, Unit)),
                                      _decide(CmpOp, False))),
    Rule("imp3", "imp", SS, "pbl o tpure(cmp) o pair(constant(p), constant(q)) ==.== ttrue",
         ("cmp(p, q) is true",), _eq("imp3", SS, _cmp_lhs(Int), _tp(InjLeft(Unit, Unit)),
                                     _decide(CmpOp, True))),
    Rule("imp4", "imp", SS, "pbl o tpure(bop) o pair(constant(p), constant(q)) ==.== ffalse",
         ("bop(p, q) is false",), _eq("imp4", SS, _cmp_lhs(Bool), _tp(InjRight(Unit, Unit)),
                                      _decide(BoolOp, False))),
    Rule("imp5", "imp", SS, "pbl o tpure(bop) o pair(constant(p), constant(q)) ==.== ttrue",
         ("bop(p, q) is true",), _eq("imp5", SS, _cmp_lhs(Bool), _tp(InjLeft(Unit, Unit)),
                                     _decide(BoolOp, True))),
    Rule("imp6", "imp", SS, "tpure(f) o tpure(g) ==.== tpure(compose(f, g))", (),
         _eq("imp6", SS, Comp(_fn_var("f", Y, Z), _fn_var("g", X, Y)),
             _tp(ComposeSym(PFVar("f", Y, Z), PFVar("g", X, Y))))),
    Rule("imp7", "imp", SS, "tpure(f) ==.== tpure(g)  when f, g agree on every input",
         ("f, g extensionally equal",),
         _eq("imp7", SS, _fn_var("f", X, Y), _fn_var("g", X, Y), _imp7)),
]

RULES = {r.id: r for r in CATALOG}
REWRITE_RULES = {r.id: r.equation for r in CATALOG if r.equation is not None}

# Uniqueness half of the pair characterization; used by `split pair_u`.
PAIR_U = "pair_u"


def rule_catalog() -> list:
    return list(CATALOG)


# variables of a schema

def schema_vars(s: Schema) -> dict:
    """name -> kind ('term', 'pf', 'int', 'loc', 'exc') for every variable."""
    out: dict = {}

    def fn(f):
        if isinstance(f, PFVar):
            out.setdefault(f.name, "pf")
        elif isinstance(f, Const) and isinstance(f.value, Sym):
            out.setdefault(f.value.name, "int")
        for v in f.__dict__.values():
            if hasattr(v, "sig"):
                fn(v)

    def go(t):
        if isinstance(t, Meta):
            out.setdefault(t.name, "term")
        elif isinstance(t, (Lookup, Update)):
            out.setdefault(t.loc, "loc")
        elif isinstance(t, (Tag, Untag)):
            out.setdefault(t.exc, "exc")
        elif isinstance(t, TPure):
            fn(t.fn)
        for k in t.children():
            go(k)
    go(s.lhs)
    go(s.rhs)
    return out


def bind_values(s: Schema, values: dict, b: Bindings | None = None) -> Bindings:
    """Turn user-supplied values into typed bindings for schema s."""
    b = b or Bindings()
    kinds = schema_vars(s)
    metas = _metas(s)
    for name, v in values.items():
        kind = kinds.get(name)
        if kind is None:
            raise BindingTypeMismatch(f"{s.name} has no variable {name}")
        if kind in ("loc", "exc"):
            if not isinstance(v, str):
                raise BindingTypeMismatch(f"{name} must be a name")
            table = b.locs if kind == "loc" else b.excs
            if v in table.values() and table.get(name) != v:
                raise SideConditionViolated(f"{name} := {v} repeats a name already used by another variable")
            table[name] = v
        elif kind == "int":
            if not isinstance(v, (int, Sym)):
                raise BindingTypeMismatch(f"{name} must be a constant")
            b.ints[name] = v
        elif kind == "pf":
            if isinstance(v, TPure):
                v = v.fn
            elif isinstance(v, str):
                v = _operator(v)
            b.pfs[name] = v
        else:
            if not isinstance(v, Term):
                raise BindingTypeMismatch(f"{name} must be a term")
            m = metas[name]
            _check_meta(m, v, b)
            b.terms[name] = v
    return b


def _check_meta(m: Meta, t: Term, b: Bindings):
    from .objtypes import unify
    try:
        d, c = typecheck(t)
        unify(m.dom, d, b.types)
        unify(m.cod, c, b.types)
    except TypeMismatch as exc:
        raise BindingTypeMismatch(f"{m.name} := {show(t)}: {exc}") from None
    dec = infer_decoration(t)
    if not dec.le(m.bound):
        raise SideConditionViolated(f"{m.name} := {show(t)} has decoration {dec}, above {m.bound}")


def _operator(sym: str):
    for table, cls in ((ARITH, ArithOp), (CMP, CmpOp), (BOOLOPS, BoolOp)):
        if sym in table:
            return cls(sym)
    raise BindingTypeMismatch(f"{sym!r} is not an operator")


def _metas(s: Schema) -> dict:
    out = {}

    def go(t):
        if isinstance(t, Meta):
            out.setdefault(t.name, t)
        for k in t.children():
            go(k)
    go(s.lhs)
    go(s.rhs)
    return out


def complete(s: Schema, b: Bindings):
    """Run the schema's side computation and build both sides; returns (lhs, rhs, flag)."""
    flag = s.finish(b) if s.finish else None
    try:
        lhs = substitute(s.lhs, b)
        rhs = substitute(s.rhs, b)
        lhs, rhs = finish_types([lhs, rhs], b)
    except Unbound as exc:
        raise BindingTypeMismatch(str(exc)) from None
    return canon(lhs), canon(rhs), flag


def instantiate(rule: str, bindings: dict | None = None) -> RuleInstance:
    """Instantiate an equational rule with explicit values for its variables."""
    if rule not in RULES:
        raise BindingTypeMismatch(f"unknown rule {rule}")
    bindings = dict(bindings or {})
    r = RULES[rule]
    if r.equation is None:
        return _instantiate_implication(r, bindings)
    b = bind_values(r.equation, bindings)
    lhs, rhs, flag = complete(r.equation, b)
    eq = Equation(lhs, rhs, r.kind)
    eq.check()
    return RuleInstance(rule, bindings, eq, flag=flag)


def _instantiate_implication(r: Rule, bindings: dict) -> RuleInstance:
    f, g = bindings.get("f"), bindings.get("g")
    if not isinstance(f, Term) or not isinstance(g, Term):
        raise BindingTypeMismatch(f"{r.id} needs terms f and g")
    goal = Equation(canon(f), canon(g), SS)
    try:
        goal.check()
    except TypeMismatch as exc:
        raise BindingTypeMismatch(str(exc)) from None
    if r.category == "strengthen":
        target = {"eq1": WS, "eeq1": SW, "ww_to_ss": WW}[r.id]
        try:
            prem = strengthen_premise(goal, target)
        except DecorationBoundViolated as exc:
            raise SideConditionViolated(str(exc)) from None
        return RuleInstance(r.id, bindings, goal, [prem])
    locs = bindings.get("locations", ("x", "y"))
    excs = bindings.get("exceptions", ("e",))
    return RuleInstance(r.id, bindings, goal, split_goal(r.id, goal, locs, excs))


# strengthening and splitting, shared with the proof engine

def conv_rule(goal: EqKind, target: EqKind) -> str | None:
    """Which strengthening rule justifies replacing a `goal` equation by a `target` one."""
    weaken_s = goal.state_strong and not target.state_strong
    weaken_e = goal.exc_strong and not target.exc_strong
    if weaken_s and weaken_e:
        return "ww_to_ss"
    if weaken_s:
        return "eq1"
    if weaken_e:
        return "eeq1"
    return None


def strengthen_premise(goal: Equation, target: EqKind) -> Equation:
    rule = conv_rule(goal.kind, target)
    d1, d2 = infer_decoration(goal.lhs), infer_decoration(goal.rhs)
    if rule in ("eq1", "ww_to_ss") and (d1.sd > 1 or d2.sd > 1):
        raise DecorationBoundViolated(
            f"{rule} needs state degree <= 1 on both sides, got {d1} and {d2}")
    if rule in ("eeq1", "ww_to_ss") and (d1.ed > 1 or d2.ed > 1):
        raise DecorationBoundViolated(
            f"{rule} needs exception degree <= 1 on both sides, got {d1} and {d2}")
    return Equation(goal.lhs, goal.rhs, target)


FRESH = "_other"


def split_goal(how: str, goal: Equation, locations, exceptions) -> list:
    f, g = goal.lhs, goal.rhs
    dom, cod = typecheck(f)
    if how == PAIR_U:
        if not isinstance(cod, Prod):
            raise SideConditionViolated(f"pair_u needs a product codomain, not {cod}")
        p1 = TPure(Fst(cod.left, cod.right))
        p2 = TPure(Snd(cod.left, cod.right))
        weak = EqKind(False, goal.kind.exc_strong)
        return [Equation(canon(Comp(p1, f)), canon(Comp(p1, g)), weak),
                Equation(canon(Comp(p2, f)), canon(Comp(p2, g)), goal.kind)]
    if goal.kind != SS:
        raise SideConditionViolated(f"{how} splits only ==.== goals")
    if how == "eq2":
        forget = TPure(ToUnit(cod))
        return [Equation(canon(Comp(forget, f)), canon(Comp(forget, g)), SS),
                Equation(f, g, WS)]
    if how == "eq3":
        if not isinstance(cod, UnitT):
            raise SideConditionViolated(f"eq3 needs codomain unit, not {cod}")
        return [Equation(canon(Comp(Lookup(i), f)), canon(Comp(Lookup(i), g)), WS)
                for i in list(locations) + [FRESH]]
    if how == "eeq2":
        e = TPure(FromEmpty(dom))
        return [Equation(canon(Comp(f, e)), canon(Comp(g, e)), SS), Equation(f, g, SW)]
    if how == "eeq3":
        if not isinstance(dom, EmptyT):
            raise SideConditionViolated(f"eeq3 needs domain empty, not {dom}")
        return [Equation(canon(Comp(f, Tag(e))), canon(Comp(g, Tag(e))), SW)
                for e in list(exceptions) + [FRESH]]
    raise SideConditionViolated(f"unknown split rule {how}")
