"""Decorated terms, typing, decorations and navigation."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidPath, TypeMismatch, UnknownException, UnknownLocation
from .objtypes import (Empty, EValOf, IMP_ENV, ObjType, Prod, Sum, Two, TypeEnv,
                       Unit, ValOf, Bool, resolve, unify)
from .purefn import (BoolToTwo, Const, FromEmpty, Fst, Identity, InjLeft, InjRight,
                     PureFn, Snd, ToUnit, infer_fn)

_SHORT = (Identity, Fst, Snd, ToUnit, InjLeft, InjRight, FromEmpty, Const)


@dataclass(frozen=True, order=True)
class Decoration:
    """State degree and exception degree, each 0 (pure), 1 or 2."""

    sd: int = 0
    ed: int = 0

    def join(self, other: "Decoration") -> "Decoration":
        return Decoration(max(self.sd, other.sd), max(self.ed, other.ed))

    def le(self, other: "Decoration") -> bool:
        return self.sd <= other.sd and self.ed <= other.ed

    def __str__(self):
        return f"{{{self.sd},{self.ed}}}"


PURE = Decoration(0, 0)
TOP = Decoration(2, 2)


class Term:
    __slots__ = ()

    def children(self) -> tuple:
        return ()

    def with_children(self, kids) -> "Term":
        return self

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class TPure(Term):
    fn: PureFn


@dataclass(frozen=True)
class Comp(Term):
    """outer o inner: run inner, then outer."""

    outer: Term
    inner: Term

    def children(self):
        return (self.outer, self.inner)

    def with_children(self, kids):
        return Comp(*kids)


@dataclass(frozen=True)
class Pair(Term):
    first: Term
    second: Term

    def children(self):
        return (self.first, self.second)

    def with_children(self, kids):
        return Pair(*kids)


@dataclass(frozen=True)
class Copair(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Copair(*kids)


@dataclass(frozen=True)
class Lookup(Term):
    loc: str


@dataclass(frozen=True)
class Update(Term):
    loc: str


@dataclass(frozen=True)
class Tag(Term):
    exc: str


@dataclass(frozen=True)
class Untag(Term):
    exc: str


@dataclass(frozen=True)
class Downcast(Term):
    body: Term

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Downcast(*kids)


@dataclass(frozen=True)
class Lpi(Term):
    """Loop iterator: cond is unit -> unit+unit, body is unit -> unit."""

    cond: Term
    body: Term

    def children(self):
        return (self.cond, self.body)

    def with_children(self, kids):
        return Lpi(*kids)


@dataclass(frozen=True)
class Pbl(Term):
    pass


@dataclass(frozen=True)
class Def(Term):
    """A named definition, opaque until unfolded."""

    name: str
    body: Term


@dataclass(frozen=True)
class Meta(Term):
    """A term variable with a type and a decoration bound."""

    name: str
    dom: ObjType
    cod: ObjType
    bound: Decoration = TOP


# derived abbreviations

def tid(t: ObjType) -> Term:
    return TPure(Identity(t))


def throw(target: ObjType, exc: str) -> Term:
    return Comp(TPure(FromEmpty(target)), Tag(exc))


def try_catch(exc: str, body: Term, handler: Term, ty: ObjType = Unit) -> Term:
    """Run body; on exception exc run handler. `ty` is the result type."""
    return Downcast(Comp(Comp(Copair(tid(ty), Comp(handler, Untag(exc))),
                              TPure(InjLeft(ty, Empty))), body))


def pbl_body() -> Term:
    return TPure(BoolToTwo())


# typing

def infer(t: Term, env: TypeEnv, subst: dict) -> tuple:
    """Signature of t, unifying type variables into subst as needed."""
    if isinstance(t, TPure):
        try:
            return infer_fn(t.fn, subst)
        except TypeMismatch as exc:
            raise TypeMismatch(f"in {show(t)}: {exc}") from None
    if isinstance(t, Comp):
        d1, c1 = infer(t.outer, env, subst)
        d2, c2 = infer(t.inner, env, subst)
        _expect(d1, c2, subst, lambda: f"composing {show(t.outer)} after {show(t.inner)}")
        return d2, c1
    if isinstance(t, Pair):
        d1, c1 = infer(t.first, env, subst)
        d2, c2 = infer(t.second, env, subst)
        _expect(d1, d2, subst, lambda: f"pair components {show(t.first)}, {show(t.second)}")
        return d1, Prod(c1, c2)
    if isinstance(t, Copair):
        d1, c1 = infer(t.left, env, subst)
        d2, c2 = infer(t.right, env, subst)
        _expect(c1, c2, subst, lambda: f"copair branches {show(t.left)}, {show(t.right)}")
        return Sum(d1, d2), c1
    if isinstance(t, Lookup):
        _check_loc(t.loc, env)
        return Unit, env.resolve(ValOf(t.loc))
    if isinstance(t, Update):
        _check_loc(t.loc, env)
        return env.resolve(ValOf(t.loc)), Unit
    if isinstance(t, Tag):
        _check_exc(t.exc, env)
        return env.resolve(EValOf(t.exc)), Empty
    if isinstance(t, Untag):
        _check_exc(t.exc, env)
        return Empty, env.resolve(EValOf(t.exc))
    if isinstance(t, Downcast):
        return infer(t.body, env, subst)
    if isinstance(t, Lpi):
        d1, c1 = infer(t.cond, env, subst)
        _expect(d1, Unit, subst, lambda: "loop condition domain")
        _expect(c1, Two, subst, lambda: "loop condition codomain")
        d2, c2 = infer(t.body, env, subst)
        _expect(d2, Unit, subst, lambda: "loop body domain")
        _expect(c2, Unit, subst, lambda: "loop body codomain")
        return Unit, Unit
    if isinstance(t, Pbl):
        return Bool, Two
    if isinstance(t, Def):
        return infer(t.body, env, subst)
    if isinstance(t, Meta):
        return t.dom, t.cod
    raise TypeMismatch(f"unknown term node {t!r}")


def _expect(a, b, subst, what):
    try:
        unify(a, b, subst)
    except TypeMismatch as exc:
        raise TypeMismatch(f"{what()}: {exc}") from None


def _check_loc(loc, env):
    if env.locations is not None and loc not in env.locations:
        raise UnknownLocation(f"undeclared location {loc}")


def _check_exc(exc, env):
    if env.exceptions is not None and exc not in env.exceptions:
        raise UnknownException(f"undeclared exception {exc}")


OPEN_ENV = TypeEnv(locations=None, exceptions=None)


def typecheck(t: Term, env: TypeEnv = OPEN_ENV) -> tuple:
    subst: dict = {}
    d, c = infer(t, env, subst)
    return resolve(d, subst), resolve(c, subst)


def infer_decoration(t: Term) -> Decoration:
    if isinstance(t, (TPure, Pbl)):
        return PURE
    if isinstance(t, Lookup):
        return Decoration(1, 0)
    if isinstance(t, Update):
        return Decoration(2, 0)
    if isinstance(t, Tag):
        return Decoration(0, 1)
    if isinstance(t, Untag):
        return Decoration(0, 2)
    if isinstance(t, Downcast):
        d = infer_decoration(t.body)
        return Decoration(d.sd, min(d.ed, 1))
    if isinstance(t, Def):
        return infer_decoration(t.body)
    if isinstance(t, Meta):
        return t.bound
    d = PURE
    for k in t.children():
        d = d.join(infer_decoration(k))
    return d


def map_types(t: Term, f) -> Term:
    """Apply f to every object type inside t."""
    if isinstance(t, TPure):
        return TPure(t.fn.map_types(f))
    if isinstance(t, Meta):
        return Meta(t.name, f(t.dom), f(t.cod), t.bound)
    if isinstance(t, Def):
        return Def(t.name, map_types(t.body, f))
    kids = t.children()
    if kids:
        return t.with_children([map_types(k, f) for k in kids])
    return t


# navigation on the binary tree

def subterm_at(t: Term, path) -> Term:
    for i in path:
        kids = t.children()
        if not 0 <= i < len(kids):
            raise InvalidPath(f"no child {i} in {show(t)}")
        t = kids[i]
    return t


def replace_at(t: Term, path, new: Term, env: TypeEnv = OPEN_ENV) -> Term:
    old = subterm_at(t, path)
    if typecheck(old, env) != typecheck(new, env):
        raise TypeMismatch(f"replacement {show(new)} does not have the type of {show(old)}")
    return _replace(t, list(path), new)


def _replace(t, path, new):
    if not path:
        return new
    kids = list(t.children())
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return t.with_children(kids)


# composition chains

def factors(t: Term) -> list:
    """Flatten nested compositions, outermost factor first."""
    if isinstance(t, Comp):
        return factors(t.outer) + factors(t.inner)
    return [t]


def chain(fs) -> Term:
    fs = list(fs)
    if not fs:
        raise ValueError("empty chain")
    t = fs[-1]
    for f in reversed(fs[:-1]):
        t = Comp(f, t)
    return t


def is_identity(t: Term) -> bool:
    return isinstance(t, TPure) and isinstance(t.fn, Identity)


def canon(t: Term) -> Term:
    """Right-nested chains without identity factors, recursively."""
    if isinstance(t, Comp):
        fs = [canon(f) for f in factors(t)]
        flat = []
        for f in fs:
            flat.extend(factors(f))
        kept = [f for f in flat if not is_identity(f)]
        return chain(kept or flat[-1:])
    kids = t.children()
    if kids:
        return t.with_children([canon(k) for k in kids])
    return t


def contains(t: Term, pred) -> bool:
    if pred(t):
        return True
    if isinstance(t, Def):
        return contains(t.body, pred)
    return any(contains(k, pred) for k in t.children())


# printing

def show(t: Term, decorations: bool = False) -> str:
    def go(t, top):
        s = _show_node(t, go)
        if decorations and not isinstance(t, Comp):
            s += str(infer_decoration(t))
        if isinstance(t, Comp) and not top:
            return "(" + s + ")"
        return s
    return go(t, True)


def _show_node(t, go):
    if isinstance(t, TPure):
        if isinstance(t.fn, _SHORT):
            return str(t.fn)
        return f"tpure({t.fn})"
    if isinstance(t, Comp):
        return " o ".join(go(f, False) for f in factors(t))
    if isinstance(t, Pair):
        return f"pair({go(t.first, True)}, {go(t.second, True)})"
    if isinstance(t, Copair):
        return f"copair({go(t.left, True)}, {go(t.right, True)})"
    if isinstance(t, Lookup):
        return f"lookup({t.loc})"
    if isinstance(t, Update):
        return f"update({t.loc})"
    if isinstance(t, Tag):
        return f"tag({t.exc})"
    if isinstance(t, Untag):
        return f"untag({t.exc})"
    if isinstance(t, Downcast):
        return f"downcast({go(t.body, True)})"
    if isinstance(t, Lpi):
        return f"lpi({go(t.cond, True)}, {go(t.body, True)})"
    if isinstance(t, Pbl):
        return "pbl"
    if isinstance(t, (Def, Meta)):
        return t.name
    raise TypeError(f"unknown term {t!r}")
