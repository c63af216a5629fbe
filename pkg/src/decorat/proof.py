"""Proof engine: goals, steps, and legality checks for each step."""

from __future__ import annotations

from dataclasses import dataclass, field

from .equations import SS, EqKind, Equation
from .errors import (BindingTypeMismatch, DecoratError, ImpureContext, InvalidPath,
                     KindTooWeak, NoMatch, NotClosed, ParseError, TypeMismatch)
from .matching import Bindings, MatchFailure, match_chain
from .objtypes import TypeEnv, has_tvars, resolve, unify
from .purefn import normalize
from .rules import (PAIR_U, REWRITE_RULES, RULES, Schema, bind_values, complete,
                    conv_rule, schema_vars, split_goal, strengthen_premise, _metas)
from .syntax import Parser, Scope, elaborate, tokenize
from .terms import (Def, Pbl, TPure, Term, canon, chain, factors, infer,
                    infer_decoration, map_types, pbl_body, show, typecheck)


@dataclass
class Rewrite:
    source: str
    side: str = "lhs"
    path: tuple = (0,)
    backward: bool = False
    bindings: tuple = ()      # (name, text) pairs, interpreted per variable kind
    until: int | None = None  # last factor of an explicit range


@dataclass
class Conv:
    target: EqKind


@dataclass
class Unfold:
    name: str
    side: str = "lhs"
    path: tuple = (0,)


@dataclass
class Split:
    how: str


@dataclass
class Refl:
    pass


def describe(step) -> str:
    if isinstance(step, Rewrite):
        arrow = "<- " if step.backward else ""
        return f"rewrite {arrow}{step.source}"
    if isinstance(step, Conv):
        return f"conv {step.target}"
    if isinstance(step, Unfold):
        return f"unfold {step.name}"
    if isinstance(step, Split):
        return f"split {step.how}"
    return "refl"


@dataclass
class Context:
    """What a step may refer to besides the goal."""

    env: TypeEnv
    scope: Scope
    library: dict = field(default_factory=dict)   # lemma name -> Schema

    @property
    def locations(self):
        return [l for l in self.env.locations if not l.startswith("_")]

    @property
    def exceptions(self):
        return [e for e in self.env.exceptions if not e.startswith("_")]


@dataclass
class StepResult:
    goals: list
    rule: str
    flag: str | None = None


def show_goal(g: Equation) -> str:
    return f"{show(g.lhs)} {g.kind} {show(g.rhs)}"


def check_step(goal: Equation, step, ctx: Context) -> StepResult:
    if isinstance(step, Rewrite):
        return _rewrite(goal, step, ctx)
    if isinstance(step, Conv):
        rule = conv_rule(goal.kind, step.target)
        new = strengthen_premise(goal, step.target)
        return StepResult([new], rule or "weaken")
    if isinstance(step, Unfold):
        return _unfold(goal, step)
    if isinstance(step, Split):
        if step.how not in ("eq2", "eq3", "eeq2", "eeq3", PAIR_U):
            raise NoMatch(f"unknown split rule {step.how}")
        return StepResult(split_goal(step.how, goal, ctx.locations, ctx.exceptions), step.how)
    if isinstance(step, Refl):
        a, b = _pure_normal(goal.lhs), _pure_normal(goal.rhs)
        if a != b:
            raise NotClosed(f"sides differ: {show(a)} versus {show(b)}")
        return StepResult([], "refl")
    raise NoMatch(f"unknown step {step!r}")


def _pure_normal(t: Term) -> Term:
    if isinstance(t, TPure):
        return TPure(normalize(t.fn))
    kids = t.children()
    if kids:
        return canon(t.with_children([_pure_normal(k) for k in kids]))
    return t


def _side(goal: Equation, side: str) -> Term:
    if side not in ("lhs", "rhs"):
        raise InvalidPath(f"side must be lhs or rhs, not {side}")
    return goal.lhs if side == "lhs" else goal.rhs


def _with_side(goal: Equation, side: str, t: Term) -> Equation:
    t = canon(t)
    new = Equation(t, goal.rhs, goal.kind) if side == "lhs" else Equation(goal.lhs, t, goal.kind)
    new.check()
    return new


def _edit(t: Term, path, fn, depth=0) -> Term:
    """Apply fn(factors, start, depth) -> factors at the chain addressed by path."""
    fs = factors(t)
    if len(path) % 2 == 0:
        raise InvalidPath("a path alternates factor and child indices and ends on a factor")
    i = path[0]
    if not 0 <= i < len(fs):
        raise InvalidPath(f"no factor {i} in {show(t)} ({len(fs)} factors)")
    if len(path) == 1:
        return chain(fn(list(fs), i, depth))
    node = fs[i]
    kids = list(node.children())
    c = path[1]
    if not 0 <= c < len(kids):
        raise InvalidPath(f"no child {c} in {show(node)}")
    kids[c] = _edit(kids[c], path[2:], fn, depth + 1)
    fs[i] = node.with_children(kids)
    return chain(fs)


def find_source(name: str, ctx: Context) -> Schema:
    if name in ctx.library:
        return ctx.library[name]
    if name in REWRITE_RULES:
        return REWRITE_RULES[name]
    if name in RULES:
        raise NoMatch(f"{name} is not an equation; use conv or split")
    raise NoMatch(f"unknown rule or lemma {name}")


def _rewrite(goal: Equation, step: Rewrite, ctx: Context) -> StepResult:
    src = find_source(step.source, ctx)
    if not src.kind.ge(goal.kind):
        raise KindTooWeak(f"{src.name} is a {src.kind} equation; the goal is {goal.kind}")
    pattern, result = (src.rhs, src.lhs) if step.backward else (src.lhs, src.rhs)
    b, deferred = _prebind(src, step.bindings, ctx)
    out = {}

    def fn(fs, start, depth):
        if depth > 0 and src.kind != SS:
            raise ImpureContext(f"{src.name} is a weak equation; weak rewriting under "
                                "pair, copair, downcast or lpi is not allowed")
        pf = factors(pattern)
        end = step.until + 1 if step.until is not None else start + len(pf)
        if end > len(fs) or end <= start:
            raise InvalidPath(f"factors {start}..{end - 1} are out of range ({len(fs)} factors)")
        seg = fs[start:end]
        why = MatchFailure()
        found = None
        for cand in match_chain(pf, seg, b, why):
            found = cand
            break
        if found is None:
            raise NoMatch(f"{src.name} does not match {show(chain(seg))}"
                          + (f": {why.reason}" if why.reason else ""))
        _bind_deferred(src, deferred, found, ctx)
        lhs, rhs, flag = complete(src, found)
        repl = rhs if not step.backward else lhs
        if depth == 0:
            _check_frames(src, fs[:start], fs[end:])
        out["flag"] = flag
        return fs[:start] + factors(repl) + fs[end:]

    side = _side(goal, step.side)
    new_side = _edit(side, list(step.path), fn)
    try:
        new = _with_side(goal, step.side, new_side)
    except TypeMismatch as exc:
        raise BindingTypeMismatch(f"rewrite changes the type of the goal: {exc}") from None
    return StepResult([new], src.name, out.get("flag"))


def _check_frames(src: Schema, post: list, pre: list):
    if not src.kind.state_strong:
        for f in post:
            d = infer_decoration(f)
            if d.sd != 0:
                raise ImpureContext(f"{src.name} is weak for the state but {show(f)} "
                                    f"(decoration {d}) is composed after the rewritten term")
    if not src.kind.exc_strong:
        for f in pre:
            d = infer_decoration(f)
            if d.ed != 0:
                raise ImpureContext(f"{src.name} is weak for exceptions but {show(f)} "
                                    f"(decoration {d}) is composed before the rewritten term")


def _prebind(src: Schema, raw, ctx: Context):
    kinds = schema_vars(src)
    values, deferred = {}, []
    for name, text in raw:
        kind = kinds.get(name)
        if kind is None:
            raise BindingTypeMismatch(f"{src.name} has no variable {name}")
        if kind in ("loc", "exc"):
            values[name] = text.strip()
        elif kind == "int":
            p = Parser(tokenize(text), ctx.scope)
            values[name] = p.value()
        else:
            try:
                values[name] = _parse_binding(kind, text, ctx, None)
            except TypeMismatch:
                deferred.append((name, kind, text))
    b = bind_values(src, values)
    return b, deferred


def _parse_binding(kind, text, ctx, expected):
    p = Parser(tokenize(text), ctx.scope)
    t = TPure(p.purefn()) if kind == "pf" else p.term()
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r}")
    [t], subst = elaborate([t], ctx.env, allow_tvars=expected is not None)
    if expected is not None:
        d, c = infer(t, ctx.env, subst)
        try:
            unify(d, expected[0], subst)
            unify(c, expected[1], subst)
        except TypeMismatch as exc:
            raise BindingTypeMismatch(str(exc)) from None
        t = map_types(t, lambda ty: resolve(ty, subst))
    return t.fn if kind == "pf" else t


def _bind_deferred(src: Schema, deferred, b: Bindings, ctx: Context):
    if not deferred:
        return
    metas = _metas(src)
    pfs = _pf_vars(src)
    for name, kind, text in deferred:
        if kind == "term":
            m = metas[name]
            expected = (b.ty(m.dom), b.ty(m.cod))
        else:
            v = pfs[name]
            expected = (b.ty(v.dom), b.ty(v.cod))
        value = _parse_binding(kind, text, ctx, expected)
        table = b.terms if kind == "term" else b.pfs
        if name in table:
            same = canon(table[name]) == canon(value) if kind == "term" else table[name] == value
            if not same:
                raise NoMatch(f"{name} := {text.strip()} disagrees with the matched value")
            continue
        bind_values(src, {name: value}, b)


def _pf_vars(src: Schema) -> dict:
    from .purefn import PFVar
    out = {}

    def fn(f):
        if isinstance(f, PFVar):
            out.setdefault(f.name, f)
        for v in f.__dict__.values():
            if hasattr(v, "sig"):
                fn(v)

    def go(t):
        if isinstance(t, TPure):
            fn(t.fn)
        for k in t.children():
            go(k)
    go(src.lhs)
    go(src.rhs)
    return out


def _unfold(goal: Equation, step: Unfold) -> StepResult:
    def fn(fs, start, depth):
        node = fs[start]
        if step.name == "pbl" and isinstance(node, Pbl):
            body = pbl_body()
        elif isinstance(node, Def) and node.name == step.name:
            body = node.body
        else:
            raise NoMatch(f"factor {start} is {show(node)}, not {step.name}")
        return fs[:start] + factors(body) + fs[start + 1:]

    side = _side(goal, step.side)
    new = _with_side(goal, step.side, _edit(side, list(step.path), fn))
    return StepResult([new], f"unfold {step.name}")
