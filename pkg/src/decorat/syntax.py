"""Tokenizer and parser for the textual term syntax."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, TypeMismatch
from .objtypes import (Bool, Empty, Int, ObjType, Prod, Sum, TVar, Two, TypeEnv,
                       Unit, fresh_tvar, has_tvars, resolve, unify)
from .purefn import (ARITH, BOOLOPS, CMP, ArithOp, BoolOp, BoolToTwo, CmpOp,
                     ComposeSym, Const, FromEmpty, Fst, Identity, InjLeft,
                     InjRight, PairSym, PFVar, PureFn, Snd, ToUnit)
from .terms import (Comp, Copair, Def, Downcast, Lookup, Lpi, Meta, Pair, Pbl,
                    TPure, Tag, Term, Untag, Update, infer, map_types, throw,
                    try_catch, Decoration)
from .values import Inl, Inr, Sym

TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>(\#|//)[^\n]*)
  | (?P<str>"[^"]*")
  | (?P<kind>==\.==|==\.~|~\.==|~\.~)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>:=|<-|->|<=|>=|<>|&&|\|\||\.\.|[()\[\]{},;:=<>+\-*@?])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Tok(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - start + 1))
    return out


@dataclass
class Scope:
    """Names visible while parsing a term."""

    env: TypeEnv = field(default_factory=lambda: TypeEnv(locations=None, exceptions=None))
    terms: dict = field(default_factory=dict)   # name -> Def or Meta
    ints: dict = field(default_factory=dict)    # name -> Sym
    pfs: dict = field(default_factory=dict)     # name -> PFVar
    types: dict = field(default_factory=dict)   # name -> TParam


class Parser:
    def __init__(self, tokens, scope: Scope | None = None):
        self.toks = tokens
        self.i = 0
        self.scope = scope or Scope()

    # token helpers
    def peek(self, k=0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Tok:
        t = self.peek()
        self.i += 1
        return t

    def at(self, text) -> bool:
        t = self.peek()
        return t.text == text and t.kind != "str"

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text) -> Tok:
        t = self.peek()
        if not self.at(text):
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.next()

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            self.fail(f"expected a name, found {t.text or 'end of input'!r}")
        return self.next().text

    def fail(self, msg):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    # types
    def type_(self) -> ObjType:
        t = self.type_prod()
        if self.accept("+"):
            return Sum(t, self.type_())
        return t

    def type_prod(self) -> ObjType:
        t = self.type_atom()
        if self.accept("*"):
            return Prod(t, self.type_prod())
        return t

    def type_atom(self) -> ObjType:
        if self.accept("("):
            t = self.type_()
            self.expect(")")
            return t
        name = self.ident()
        base = {"unit": Unit, "empty": Empty, "int": Int, "bool": Bool, "two": Two}
        if name in base:
            return base[name]
        if name in self.scope.types:
            return self.scope.types[name]
        self.i -= 1
        self.fail(f"unknown type {name}")

    def arrow(self) -> tuple:
        d = self.type_()
        self.expect("->")
        return d, self.type_()

    # terms
    def term(self) -> Term:
        fs = [self.atom()]
        while self.accept("o"):
            fs.append(self.atom())
        t = fs[-1]
        for f in reversed(fs[:-1]):
            t = Comp(f, t)
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if self.accept("("):
            t = self.term()
            if self.accept(":"):
                d, c = self.arrow()
                t = _ascribe(t, d, c)
            self.expect(")")
            return t
        if tok.kind != "ident":
            self.fail(f"expected a term, found {tok.text or 'end of input'!r}")
        name = self.next().text
        short = self._short_pure(name)
        if short is not None:
            return TPure(short)
        if name == "tpure":
            self.expect("(")
            f = self.purefn()
            self.expect(")")
            return TPure(f)
        if name in ("pair", "copair", "lpi"):
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return {"pair": Pair, "copair": Copair, "lpi": Lpi}[name](a, b)
        if name in ("lookup", "update", "tag", "untag"):
            self.expect("(")
            arg = self.ident()
            self.expect(")")
            return {"lookup": Lookup, "update": Update, "tag": Tag, "untag": Untag}[name](arg)
        if name == "downcast":
            self.expect("(")
            a = self.term()
            self.expect(")")
            return Downcast(a)
        if name == "pbl":
            return Pbl()
        if name == "throw":
            self.expect("(")
            ty = self.type_()
            self.expect(",")
            e = self.ident()
            self.expect(")")
            return throw(ty, e)
        if name == "try":
            self.expect("(")
            body = self.term()
            self.expect(")")
            self.expect("catch")
            self.expect("(")
            e = self.ident()
            self.expect(")")
            self.expect("(")
            handler = self.term()
            self.expect(")")
            return try_catch(e, body, handler, fresh_tvar())
        if name in self.scope.terms:
            return self.scope.terms[name]
        if name in self.scope.pfs:
            return TPure(self.scope.pfs[name])
        self.i -= 1
        self.fail(f"unknown name {name}")

    def _short_pure(self, name):
        """Pure shorthands shared by terms and pure functions."""
        a, b = fresh_tvar(), fresh_tvar()
        if name == "id":
            return Identity(a)
        if name == "pi1":
            return Fst(a, b)
        if name == "pi2":
            return Snd(a, b)
        if name == "forget":
            return ToUnit(a)
        if name == "inl":
            return InjLeft(a, b)
        if name == "inr":
            return InjRight(a, b)
        if name == "ttrue":
            return InjLeft(Unit, Unit)
        if name == "ffalse":
            return InjRight(Unit, Unit)
        if name == "bool_to_two":
            return BoolToTwo()
        if name == "empty":
            if self.accept("("):
                ty = self.type_()
                self.expect(")")
                return FromEmpty(ty)
            return FromEmpty(a)
        if name == "constant":
            self.expect("(")
            v = self.value()
            self.expect(")")
            if isinstance(v, bool):
                return Const(v, Bool)
            if v == ():
                return Const(v, Unit)
            return Const(v, Int)
        return None

    def value(self):
        tok = self.peek()
        if self.accept("-"):
            return -int(self.expect_num())
        if tok.kind == "num":
            return int(self.next().text)
        if self.accept("("):
            self.expect(")")
            return ()
        name = self.ident()
        if name == "true":
            return True
        if name == "false":
            return False
        if name in self.scope.ints:
            return self.scope.ints[name]
        self.i -= 1
        self.fail(f"unknown constant {name}")

    def expect_num(self) -> str:
        t = self.peek()
        if t.kind != "num":
            self.fail("expected a number")
        return self.next().text

    def purefn(self) -> PureFn:
        tok = self.peek()
        if tok.text in ARITH and tok.kind == "sym":
            self.next()
            return ArithOp(tok.text)
        if tok.text in CMP and tok.kind == "sym":
            self.next()
            return CmpOp(tok.text)
        if tok.text in BOOLOPS:
            self.next()
            return BoolOp(tok.text)
        name = self.ident()
        short = self._short_pure(name)
        if short is not None:
            return short
        if name in ("compose", "pair"):
            self.expect("(")
            f = self.purefn()
            self.expect(",")
            g = self.purefn()
            self.expect(")")
            return ComposeSym(f, g) if name == "compose" else PairSym(f, g)
        if name == "tpure":
            self.expect("(")
            f = self.purefn()
            self.expect(")")
            return f
        if name in self.scope.pfs:
            return self.scope.pfs[name]
        self.i -= 1
        self.fail(f"unknown pure function {name}")


@dataclass(frozen=True)
class _Ascribed(Term):
    body: Term
    dom: ObjType
    cod: ObjType


def _ascribe(t, d, c):
    return _Ascribed(t, d, c)


def _strip_ascriptions(t: Term, env, subst) -> Term:
    if isinstance(t, _Ascribed):
        inner = _strip_ascriptions(t.body, env, subst)
        d, c = infer(inner, env, subst)
        unify(d, t.dom, subst)
        unify(c, t.cod, subst)
        return inner
    if isinstance(t, (Def, Meta)):
        return t
    kids = t.children()
    if kids:
        return t.with_children([_strip_ascriptions(k, env, subst) for k in kids])
    return t


def elaborate(terms, env: TypeEnv, same_type: bool = True, allow_tvars: bool = False):
    """Infer and fix all types of freshly parsed terms; optionally force equal signatures."""
    subst: dict = {}
    terms = [_strip_ascriptions(t, env, subst) for t in terms]
    sigs = [infer(t, env, subst) for t in terms]
    if same_type:
        for d, c in sigs[1:]:
            try:
                unify(d, sigs[0][0], subst)
                unify(c, sigs[0][1], subst)
            except TypeMismatch as exc:
                raise TypeMismatch(f"sides have different types: {exc}") from None
    out = [map_types(t, lambda ty: resolve(ty, subst)) for t in terms]
    if not allow_tvars:
        for t in out:
            _no_tvars(t)
    return out, subst


def _no_tvars(t: Term):
    bad = []

    def check(ty):
        if has_tvars(ty):
            bad.append(ty)
        return ty
    map_types(t, check)
    if bad:
        from .terms import show
        raise TypeMismatch(f"ambiguous type in {show(t)}; add an ascription (t : A -> B)")


def parse_term(text: str, scope: Scope | None = None, env: TypeEnv | None = None) -> Term:
    scope = scope or Scope()
    p = Parser(tokenize(text), scope)
    t = p.term()
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r}")
    [t], _ = elaborate([t], env or scope.env)
    return t


def parse_type(text: str) -> ObjType:
    p = Parser(tokenize(text))
    t = p.type_()
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r}")
    return t
