"""Matching rule and lemma schemas against concrete terms."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .errors import BindingTypeMismatch, TypeMismatch
from .objtypes import ObjType, TVar, has_tvars, resolve, unify
from .purefn import PFVar, PureFn
from .terms import (Comp, Def, Lookup, Meta, Tag, TPure, Term, Untag, Update,
                    canon, chain, factors, infer_decoration, map_types, show,
                    typecheck, OPEN_ENV)
from .values import Sym


@dataclass
class Bindings:
    """Values for the variables of a schema."""

    terms: dict = field(default_factory=dict)
    types: dict = field(default_factory=dict)
    ints: dict = field(default_factory=dict)
    pfs: dict = field(default_factory=dict)
    locs: dict = field(default_factory=dict)
    excs: dict = field(default_factory=dict)
    failure: str = ""

    def copy(self) -> "Bindings":
        return Bindings(dict(self.terms), dict(self.types), dict(self.ints),
                        dict(self.pfs), dict(self.locs), dict(self.excs), self.failure)

    def ty(self, t: ObjType) -> ObjType:
        return resolve(t, self.types)


class MatchFailure:
    """Collects the most informative reason a match failed."""

    def __init__(self):
        self.reason = ""

    def note(self, msg):
        if not self.reason or "decoration" in msg:
            self.reason = msg


def _bind_name(table: dict, var: str, value: str) -> bool:
    if var in table:
        return table[var] == value
    if value in table.values():
        return False
    table[var] = value
    return True


def match(p: Term, t: Term, b: Bindings, why: MatchFailure):
    """Yield extensions of b under which pattern p equals term t."""
    if isinstance(p, Meta):
        yield from _match_meta(p, [t], b, why)
        return
    if isinstance(p, Comp) or isinstance(t, Comp):
        yield from match_chain(factors(p), factors(t), b, why)
        return
    if type(p) is not type(t):
        why.note(f"{show(p)} does not match {show(t)}")
        return
    if isinstance(p, (Lookup, Update)):
        b = b.copy()
        if _bind_name(b.locs, p.loc, t.loc):
            yield b
        else:
            why.note(f"location {p.loc} cannot stand for {t.loc}")
        return
    if isinstance(p, (Tag, Untag)):
        b = b.copy()
        if _bind_name(b.excs, p.exc, t.exc):
            yield b
        else:
            why.note(f"exception {p.exc} cannot stand for {t.exc}")
        return
    if isinstance(p, TPure):
        b = b.copy()
        if match_fn(p.fn, t.fn, b):
            yield b
        else:
            why.note(f"{show(p)} does not match {show(t)}")
        return
    if isinstance(p, Def):
        if p == t:
            yield b
        else:
            why.note(f"definition {p.name} does not match {show(t)}")
        return
    kids_p, kids_t = p.children(), t.children()
    yield from _match_all(list(kids_p), list(kids_t), b, why)


def _match_all(ps, ts, b, why):
    if not ps:
        yield b
        return
    for b2 in match(ps[0], ts[0], b, why):
        yield from _match_all(ps[1:], ts[1:], b2, why)


def match_chain(ps: list, ts: list, b: Bindings, why: MatchFailure):
    if not ps:
        if not ts:
            yield b
        return
    if not ts:
        return
    p = ps[0]
    if isinstance(p, Meta):
        rest = len(ps) - 1
        if p.name in b.terms:
            fs = factors(b.terms[p.name])
            if ts[:len(fs)] == fs:
                yield from match_chain(ps[1:], ts[len(fs):], b, why)
            else:
                why.note(f"{p.name} is already {show(b.terms[p.name])}")
            return
        for k in range(1, len(ts) - rest + 1):
            for b2 in _match_meta(p, ts[:k], b, why):
                yield from match_chain(ps[1:], ts[k:], b2, why)
        return
    for b2 in match(p, ts[0], b, why):
        yield from match_chain(ps[1:], ts[1:], b2, why)


def _match_meta(p: Meta, ts: list, b: Bindings, why):
    t = chain(ts)
    if p.name in b.terms:
        if canon(b.terms[p.name]) == canon(t):
            yield b
        else:
            why.note(f"{p.name} is already {show(b.terms[p.name])}")
        return
    try:
        d, c = typecheck(t)
    except TypeMismatch as exc:
        why.note(str(exc))
        return
    b = b.copy()
    try:
        unify(p.dom, d, b.types)
        unify(p.cod, c, b.types)
    except TypeMismatch:
        why.note(f"{show(t)} has type {d} -> {c}, not {b.ty(p.dom)} -> {b.ty(p.cod)}")
        return
    dec = infer_decoration(t)
    if not dec.le(p.bound):
        why.note(f"decoration bound violated: {p.name} needs {p.bound} but {show(t)} is {dec}")
        return
    b.terms[p.name] = t
    yield b


def match_fn(p: PureFn, f: PureFn, b: Bindings) -> bool:
    """Match a pure-function pattern in place; on failure b may be partially extended."""
    if isinstance(p, PFVar):
        if p.name in b.pfs:
            return b.pfs[p.name] == f
        try:
            d, c = f.sig()
            unify(p.dom, d, b.types)
            unify(p.cod, c, b.types)
        except TypeMismatch:
            return False
        b.pfs[p.name] = f
        return True
    if type(p) is not type(f):
        return False
    for fld in fields(p):
        pv, fv = getattr(p, fld.name), getattr(f, fld.name)
        if isinstance(pv, ObjType):
            try:
                unify(pv, fv, b.types)
            except TypeMismatch:
                return False
        elif isinstance(pv, PureFn):
            if not match_fn(pv, fv, b):
                return False
        elif isinstance(pv, Sym):
            if pv.name in b.ints:
                if b.ints[pv.name] != fv:
                    return False
            else:
                b.ints[pv.name] = fv
        elif pv != fv:
            return False
    return True


class Unbound(Exception):
    def __init__(self, kind, name):
        super().__init__(f"{kind} {name} is not determined; supply it with `with {name} := ...`")
        self.kind = kind
        self.name = name


def substitute(p: Term, b: Bindings, strict: bool = True) -> Term:
    """Replace every schema variable in p by its binding."""
    if isinstance(p, Meta):
        if p.name in b.terms:
            return b.terms[p.name]
        if strict:
            raise Unbound("term", p.name)
        return Meta(p.name, b.ty(p.dom), b.ty(p.cod), p.bound)
    if isinstance(p, (Lookup, Update)):
        if p.loc not in b.locs:
            if strict:
                raise Unbound("location", p.loc)
            return p
        return type(p)(b.locs[p.loc])
    if isinstance(p, (Tag, Untag)):
        if p.exc not in b.excs:
            if strict:
                raise Unbound("exception", p.exc)
            return p
        return type(p)(b.excs[p.exc])
    if isinstance(p, TPure):
        return TPure(subst_fn(p.fn, b, strict))
    if isinstance(p, Def):
        return p
    kids = p.children()
    if kids:
        return p.with_children([substitute(k, b, strict) for k in kids])
    return p


def subst_fn(p: PureFn, b: Bindings, strict: bool = True) -> PureFn:
    if isinstance(p, PFVar):
        if p.name in b.pfs:
            return b.pfs[p.name]
        if strict:
            raise Unbound("pure function", p.name)
        return PFVar(p.name, b.ty(p.dom), b.ty(p.cod))
    changes = {}
    for fld in fields(p):
        v = getattr(p, fld.name)
        if isinstance(v, ObjType):
            changes[fld.name] = b.ty(v)
        elif isinstance(v, PureFn):
            changes[fld.name] = subst_fn(v, b, strict)
        elif isinstance(v, Sym):
            if v.name in b.ints:
                changes[fld.name] = b.ints[v.name]
            elif strict:
                raise Unbound("constant", v.name)
    return replace(p, **changes) if changes else p


def finish_types(terms: list, b: Bindings) -> list:
    """Solve remaining type variables by typing, then check none are left."""
    from .terms import infer
    subst = b.types
    for t in terms:
        try:
            infer(t, OPEN_ENV, subst)
        except TypeMismatch as exc:
            raise BindingTypeMismatch(str(exc)) from None
    if len(terms) == 2:
        try:
            s1 = infer(terms[0], OPEN_ENV, subst)
            s2 = infer(terms[1], OPEN_ENV, subst)
            unify(s1[0], s2[0], subst)
            unify(s1[1], s2[1], subst)
        except TypeMismatch as exc:
            raise BindingTypeMismatch(f"the two sides disagree: {exc}") from None
    out = [map_types(t, lambda ty: resolve(ty, subst)) for t in terms]
    for t in out:
        left = []

        def spot(ty):
            if has_tvars(ty):
                left.append(ty)
            return ty
        map_types(t, spot)
        if left:
            raise Unbound("type", str(left[0]))
    return out
