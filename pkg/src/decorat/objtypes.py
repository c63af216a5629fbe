"""Object types and a small unifier for type variables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import TypeMismatch


class ObjType:
    __slots__ = ()


@dataclass(frozen=True)
class UnitT(ObjType):
    def __str__(self):
        return "unit"


@dataclass(frozen=True)
class EmptyT(ObjType):
    def __str__(self):
        return "empty"


@dataclass(frozen=True)
class IntT(ObjType):
    def __str__(self):
        return "int"


@dataclass(frozen=True)
class BoolT(ObjType):
    def __str__(self):
        return "bool"


@dataclass(frozen=True)
class Prod(ObjType):
    left: ObjType
    right: ObjType

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Sum(ObjType):
    left: ObjType
    right: ObjType

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class ValOf(ObjType):
    """Type of the values stored at a location."""

    loc: str

    def __str__(self):
        return f"val({self.loc})"


@dataclass(frozen=True)
class EValOf(ObjType):
    """Type of the payload carried by an exception name."""

    exc: str

    def __str__(self):
        return f"eval({self.exc})"


@dataclass(frozen=True)
class TVar(ObjType):
    name: str

    def __str__(self):
        return f"'{self.name}"


@dataclass(frozen=True)
class TParam(ObjType):
    """A type parameter of a lemma: fixed while proving, generic when cited."""

    name: str

    def __str__(self):
        return self.name


Unit = UnitT()
Empty = EmptyT()
Int = IntT()
Bool = BoolT()
Two = Sum(Unit, Unit)

_fresh = itertools.count()


def fresh_tvar(hint: str = "t") -> TVar:
    return TVar(f"{hint}{next(_fresh)}")


@dataclass(frozen=True)
class TypeEnv:
    """Declared names plus the types their values resolve to."""

    locations: tuple = ()
    exceptions: tuple = ()
    val_type: ObjType = Int
    exc_type: ObjType = Unit

    def resolve(self, t: ObjType) -> ObjType:
        if isinstance(t, ValOf):
            return self.val_type
        if isinstance(t, EValOf):
            return self.exc_type
        if isinstance(t, Prod):
            return Prod(self.resolve(t.left), self.resolve(t.right))
        if isinstance(t, Sum):
            return Sum(self.resolve(t.left), self.resolve(t.right))
        return t


IMP_ENV = TypeEnv()


def resolve(t: ObjType, subst: dict) -> ObjType:
    """Apply a type-variable substitution, chasing chains."""
    if isinstance(t, TVar):
        seen = t
        while isinstance(seen, TVar) and seen in subst:
            seen = subst[seen]
        if isinstance(seen, TVar):
            return seen
        return resolve(seen, subst)
    if isinstance(t, Prod):
        return Prod(resolve(t.left, subst), resolve(t.right, subst))
    if isinstance(t, Sum):
        return Sum(resolve(t.left, subst), resolve(t.right, subst))
    return t


def occurs(v: TVar, t: ObjType) -> bool:
    if t == v:
        return True
    if isinstance(t, (Prod, Sum)):
        return occurs(v, t.left) or occurs(v, t.right)
    return False


def unify(a: ObjType, b: ObjType, subst: dict) -> dict:
    """Extend `subst` in place so that a and b agree, or raise TypeMismatch."""
    a = resolve(a, subst)
    b = resolve(b, subst)
    if a == b:
        return subst
    if isinstance(a, TVar):
        if occurs(a, b):
            raise TypeMismatch(f"cyclic type {a} = {b}")
        subst[a] = b
        return subst
    if isinstance(b, TVar):
        return unify(b, a, subst)
    if type(a) is type(b) and isinstance(a, (Prod, Sum)):
        unify(a.left, b.left, subst)
        unify(a.right, b.right, subst)
        return subst
    raise TypeMismatch(f"cannot match {a} with {b}")


def has_tvars(t: ObjType) -> bool:
    if isinstance(t, TVar):
        return True
    if isinstance(t, (Prod, Sum)):
        return has_tvars(t.left) or has_tvars(t.right)
    return False


def is_finite(t: ObjType) -> bool:
    if isinstance(t, (UnitT, EmptyT, BoolT)):
        return True
    if isinstance(t, (Prod, Sum)):
        return is_finite(t.left) and is_finite(t.right)
    return False
