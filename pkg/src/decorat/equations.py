"""Equation strengths and equations."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, TypeMismatch
from .terms import Term, show, typecheck


@dataclass(frozen=True)
class EqKind:
    """Strong or weak in each effect: state first, exceptions second."""

    state_strong: bool
    exc_strong: bool

    @property
    def code(self) -> str:
        return ("s" if self.state_strong else "w") + ("s" if self.exc_strong else "w")

    @property
    def token(self) -> str:
        return ("==" if self.state_strong else "~") + "." + ("==" if self.exc_strong else "~")

    def ge(self, other: "EqKind") -> bool:
        return (self.state_strong or not other.state_strong) and \
               (self.exc_strong or not other.exc_strong)

    def __str__(self):
        return self.token


SS = EqKind(True, True)
SW = EqKind(True, False)
WS = EqKind(False, True)
WW = EqKind(False, False)
KINDS = {"ss": SS, "sw": SW, "ws": WS, "ww": WW,
         "==.==": SS, "==.~": SW, "~.==": WS, "~.~": WW}


def kind_of(text: str) -> EqKind:
    try:
        return KINDS[text]
    except KeyError:
        raise ParseError(f"unknown equation kind {text!r}") from None


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    kind: EqKind

    def check(self, env=None):
        a = typecheck(self.lhs) if env is None else typecheck(self.lhs, env)
        b = typecheck(self.rhs) if env is None else typecheck(self.rhs, env)
        if a != b:
            raise TypeMismatch(f"sides of {self} have types {a[0]} -> {a[1]} and {b[0]} -> {b[1]}")
        return a

    def __str__(self):
        return f"{show(self.lhs)} {self.kind} {show(self.rhs)}"
