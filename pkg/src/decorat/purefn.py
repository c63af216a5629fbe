"""Closed registry of pure functions: signatures, evaluation, normalization."""

from __future__ import annotations

import operator
from dataclasses import dataclass, replace, fields

from .errors import EvalError, TypeMismatch
from .objtypes import (Bool, Empty, EmptyT, Int, ObjType, Prod, Sum, Two,
                       Unit, UnitT, unify, resolve)
from .values import Inl, Inr, Sym, TT, FF, show


class PureFn:
    __slots__ = ()

    def sig(self) -> tuple:
        raise NotImplementedError

    def eval(self, v):
        raise NotImplementedError

    def map_types(self, f) -> "PureFn":
        """Rebuild with every ObjType field passed through f."""
        changes = {}
        for fld in fields(self):
            val = getattr(self, fld.name)
            if isinstance(val, ObjType):
                changes[fld.name] = f(val)
            elif isinstance(val, PureFn):
                changes[fld.name] = val.map_types(f)
        return replace(self, **changes) if changes else self


@dataclass(frozen=True)
class Identity(PureFn):
    ty: ObjType

    def sig(self):
        return self.ty, self.ty

    def eval(self, v):
        return v

    def __str__(self):
        return "id"


@dataclass(frozen=True)
class Fst(PureFn):
    left: ObjType
    right: ObjType

    def sig(self):
        return Prod(self.left, self.right), self.left

    def eval(self, v):
        return v[0]

    def __str__(self):
        return "pi1"


@dataclass(frozen=True)
class Snd(PureFn):
    left: ObjType
    right: ObjType

    def sig(self):
        return Prod(self.left, self.right), self.right

    def eval(self, v):
        return v[1]

    def __str__(self):
        return "pi2"


@dataclass(frozen=True)
class ToUnit(PureFn):
    dom: ObjType

    def sig(self):
        return self.dom, Unit

    def eval(self, v):
        return ()

    def __str__(self):
        return "forget"


@dataclass(frozen=True)
class InjLeft(PureFn):
    left: ObjType
    right: ObjType

    def sig(self):
        return self.left, Sum(self.left, self.right)

    def eval(self, v):
        return Inl(v)

    def __str__(self):
        return "inl"


@dataclass(frozen=True)
class InjRight(PureFn):
    left: ObjType
    right: ObjType

    def sig(self):
        return self.right, Sum(self.left, self.right)

    def eval(self, v):
        return Inr(v)

    def __str__(self):
        return "inr"


@dataclass(frozen=True)
class FromEmpty(PureFn):
    target: ObjType

    def sig(self):
        return Empty, self.target

    def eval(self, v):
        raise EvalError("empty type has no values")

    def __str__(self):
        return f"empty({self.target})"


@dataclass(frozen=True)
class Const(PureFn):
    value: object
    ty: ObjType

    def sig(self):
        return Unit, self.ty

    def eval(self, v):
        return self.value

    def __str__(self):
        return f"constant({show(self.value)})"


ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul}
CMP = {"=": operator.eq, "<>": operator.ne, "<": operator.lt,
       ">": operator.gt, "<=": operator.le, ">=": operator.ge}
BOOLOPS = {"&&": lambda a, b: a and b, "||": lambda a, b: a or b}


def _concrete(*vals):
    for v in vals:
        if isinstance(v, Sym):
            raise EvalError(f"symbolic constant {v}")


@dataclass(frozen=True)
class ArithOp(PureFn):
    op: str

    def sig(self):
        return Prod(Int, Int), Int

    def eval(self, v):
        _concrete(*v)
        return ARITH[self.op](*v)

    def __str__(self):
        return self.op


@dataclass(frozen=True)
class CmpOp(PureFn):
    op: str

    def sig(self):
        return Prod(Int, Int), Bool

    def eval(self, v):
        _concrete(*v)
        return CMP[self.op](*v)

    def __str__(self):
        return self.op


@dataclass(frozen=True)
class BoolOp(PureFn):
    op: str

    def sig(self):
        return Prod(Bool, Bool), Bool

    def eval(self, v):
        _concrete(*v)
        return BOOLOPS[self.op](*v)

    def __str__(self):
        return self.op


@dataclass(frozen=True)
class BoolToTwo(PureFn):
    def sig(self):
        return Bool, Two

    def eval(self, v):
        _concrete(v)
        return TT if v else FF

    def __str__(self):
        return "bool_to_two"


@dataclass(frozen=True)
class ComposeSym(PureFn):
    """`outer` after `inner`."""

    outer: PureFn
    inner: PureFn

    def sig(self):
        d1, c1 = self.outer.sig()
        d2, c2 = self.inner.sig()
        if resolve(d1, {}) != c2 and not _unifiable(d1, c2):
            raise TypeMismatch(f"cannot compose {self.outer} after {self.inner}")
        return d2, c1

    def eval(self, v):
        return self.outer.eval(self.inner.eval(v))

    def __str__(self):
        return f"compose({self.outer}, {self.inner})"


@dataclass(frozen=True)
class PairSym(PureFn):
    first: PureFn
    second: PureFn

    def sig(self):
        d1, c1 = self.first.sig()
        d2, c2 = self.second.sig()
        if d1 != d2 and not _unifiable(d1, d2):
            raise TypeMismatch(f"pair of functions with domains {d1} and {d2}")
        return d1, Prod(c1, c2)

    def eval(self, v):
        return (self.first.eval(v), self.second.eval(v))

    def __str__(self):
        return f"pair({self.first}, {self.second})"


@dataclass(frozen=True)
class PFVar(PureFn):
    """Pattern variable standing for an unknown pure function."""

    name: str
    dom: ObjType
    cod: ObjType

    def sig(self):
        return self.dom, self.cod

    def eval(self, v):
        raise EvalError(f"pattern variable {self.name}")

    def __str__(self):
        return f"?{self.name}"


def _unifiable(a, b) -> bool:
    try:
        unify(a, b, {})
        return True
    except TypeMismatch:
        return False


def typed_const(value) -> Const:
    if isinstance(value, bool):
        return Const(value, Bool)
    if isinstance(value, (int, Sym)):
        return Const(value, Int)
    if value == ():
        return Const((), Unit)
    raise TypeMismatch(f"no type for constant {show(value)}")


def _try_eval(f: PureFn, v):
    try:
        return True, f.eval(v)
    except (EvalError, TypeError, KeyError):
        return False, None


def normalize(f: PureFn) -> PureFn:
    """Rewrite to a canonical shape; iterate the one-step rewriter to a fixpoint."""
    for _ in range(200):
        g = _norm(f)
        if g == f:
            return f
        f = g
    return f


def _norm(f: PureFn) -> PureFn:
    dom, cod = f.sig()
    if isinstance(dom, EmptyT):
        return FromEmpty(cod)
    if isinstance(cod, UnitT):
        return Identity(Unit) if isinstance(dom, UnitT) else ToUnit(dom)
    if isinstance(dom, UnitT) and not isinstance(f, Const):
        ok, v = _try_eval(f, ())
        if ok:
            return Const(v, cod)
    if isinstance(f, PairSym):
        a, b = _norm(f.first), _norm(f.second)
        if isinstance(a, Fst) and isinstance(b, Snd):
            return Identity(dom)
        return PairSym(a, b)
    if isinstance(f, ComposeSym):
        o, i = f.outer, f.inner
        if isinstance(o, Identity):
            return i
        if isinstance(i, Identity):
            return o
        if isinstance(o, ComposeSym):
            return ComposeSym(o.outer, ComposeSym(o.inner, i))
        head, rest = (i.outer, i.inner) if isinstance(i, ComposeSym) else (i, None)
        if isinstance(o, (Fst, Snd)) and isinstance(head, PairSym):
            picked = head.first if isinstance(o, Fst) else head.second
            return picked if rest is None else ComposeSym(picked, rest)
        if isinstance(head, Const) and rest is None:
            ok, v = _try_eval(o, head.value)
            if ok:
                return Const(v, cod)
        return ComposeSym(_norm(o), _norm(i))
    return f


def enumerate_type(t: ObjType):
    """All values of a finite type."""
    if isinstance(t, UnitT):
        return [()]
    if isinstance(t, EmptyT):
        return []
    if t == Bool:
        return [False, True]
    if isinstance(t, Prod):
        return [(a, b) for a in enumerate_type(t.left) for b in enumerate_type(t.right)]
    if isinstance(t, Sum):
        return [Inl(a) for a in enumerate_type(t.left)] + [Inr(b) for b in enumerate_type(t.right)]
    raise ValueError(f"type {t} is not finite")


def sample_type(t: ObjType, rng, ints=range(-20, 21)):
    if t == Int:
        return rng.choice(list(ints))
    if t == Bool:
        return rng.choice([False, True])
    if isinstance(t, UnitT):
        return ()
    if isinstance(t, Prod):
        return (sample_type(t.left, rng, ints), sample_type(t.right, rng, ints))
    if isinstance(t, Sum):
        if isinstance(t.right, EmptyT) or (not isinstance(t.left, EmptyT) and rng.random() < 0.5):
            return Inl(sample_type(t.left, rng, ints))
        return Inr(sample_type(t.right, rng, ints))
    raise ValueError(f"cannot sample type {t}")


def infer_fn(f: PureFn, subst: dict) -> tuple:
    """Signature of f, unifying the types that nested compositions and pairs share."""
    if isinstance(f, ComposeSym):
        d1, c1 = infer_fn(f.outer, subst)
        d2, c2 = infer_fn(f.inner, subst)
        unify(d1, c2, subst)
        return d2, c1
    if isinstance(f, PairSym):
        d1, c1 = infer_fn(f.first, subst)
        d2, c2 = infer_fn(f.second, subst)
        unify(d1, d2, subst)
        return d1, Prod(c1, c2)
    return f.sig()
