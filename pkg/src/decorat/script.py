"""Proof scripts: parsing `.dlp` files and replaying them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .equations import Equation, kind_of
from .errors import DecoratError, NotClosed, ParseError, TypeMismatch
from .imp import check_cmd, parse_cmd
from .objtypes import Prod, Sum, TParam, TVar, TypeEnv
from .proof import (Context, Conv, Refl, Rewrite, Split, Unfold, check_step,
                    describe, show_goal)
from .rules import FRESH, Schema
from .syntax import Parser, Scope, elaborate, tokenize
from .terms import Decoration, Def, Meta, TOP, canon, map_types
from .translate import d_cmd
from .values import Sym


@dataclass
class LemmaDecl:
    name: str
    statement: Equation
    steps: list
    step_lines: list
    line: int = 0


@dataclass
class Script:
    imports: list = field(default_factory=list)
    locations: tuple = ()
    exceptions: tuple = ()
    defs: dict = field(default_factory=dict)
    lemmas: list = field(default_factory=list)


@dataclass
class Verdict:
    accepted: bool
    lemmas: list = field(default_factory=list)
    transcript: list = field(default_factory=list)
    failed_lemma: str | None = None
    failed_step: int | None = None
    reason: str | None = None
    error: str | None = None
    flags: list = field(default_factory=list)

    def to_json(self):
        return {"status": "accepted" if self.accepted else "rejected",
                "lemmas": self.lemmas, "failed_lemma": self.failed_lemma,
                "failed_step": self.failed_step, "error": self.error,
                "reason": self.reason, "transcript": self.transcript}


class ScriptParser(Parser):
    def __init__(self, text: str):
        super().__init__(tokenize(text), Scope())
        self.script = Script()

    @property
    def env(self) -> TypeEnv:
        return TypeEnv(tuple(self.script.locations) + (FRESH,),
                       tuple(self.script.exceptions) + (FRESH,))

    def parse(self) -> Script:
        while self.peek().kind != "eof":
            word = self.ident()
            if word == "import":
                self.script.imports.append(self.ident())
                self.expect(";")
            elif word == "locations":
                self.script.locations += tuple(self._names())
            elif word == "exceptions":
                self.script.exceptions += tuple(self._names())
            elif word == "def":
                self._def()
            elif word == "lemma":
                self.script.lemmas.append(self._lemma())
            else:
                self.i -= 1
                self.fail(f"expected import, locations, exceptions, def or lemma, found {word!r}")
        return self.script

    def _names(self):
        out = []
        while not self.at(";"):
            out.append(self.ident())
        self.expect(";")
        return out

    def _scope(self):
        self.scope.env = self.env
        return self.scope

    def _def(self):
        name = self.ident()
        self.expect(":=")
        if self.at("imp") and self.peek(1).kind == "str":
            self.next()
            tok = self.next()
            try:
                cmd = parse_cmd(tok.text[1:-1])
                check_cmd(cmd, self.script.locations, self.script.exceptions)
            except ParseError as exc:
                raise ParseError(f"in IMP text of {name}: {exc}", tok.line, tok.col) from None
            body = d_cmd(cmd)
        else:
            self._scope()
            raw = self.term()
            [body], _ = elaborate([raw], self.env)
        self.expect(";")
        d = Def(name, canon(body))
        self.script.defs[name] = d
        self.scope.terms[name] = d

    def _lemma(self) -> LemmaDecl:
        line = self.peek().line
        name = self.ident()
        saved = (dict(self.scope.terms), dict(self.scope.ints), dict(self.scope.types))
        while self.accept("("):
            names = [self.ident()]
            while not self.at(":"):
                names.append(self.ident())
            self.expect(":")
            if self.accept("type"):
                for n in names:
                    self.scope.types[n] = TParam(n)
            elif self.accept("int"):
                for n in names:
                    self.scope.ints[n] = Sym(n)
            else:
                dom, cod = self.arrow()
                bound = TOP
                if self.accept("{"):
                    sd = int(self.expect_num())
                    self.expect(",")
                    ed = int(self.expect_num())
                    self.expect("}")
                    bound = Decoration(sd, ed)
                for n in names:
                    self.scope.terms[n] = Meta(n, dom, cod, bound)
            self.expect(")")
        self.expect(":")
        self._scope()
        lhs = self.term()
        k = self.peek()
        if k.kind != "kind":
            self.fail("expected an equation kind (==.==, ==.~, ~.==, ~.~)")
        self.next()
        rhs = self.term()
        [lhs, rhs], _ = elaborate([lhs, rhs], self.env)
        stmt = Equation(canon(lhs), canon(rhs), kind_of(k.text))
        self.expect("proof")
        steps, lines = [], []
        while not self.accept("qed"):
            lines.append(self.peek().line)
            steps.append(self._step())
            self.expect(";")
        self.scope.terms, self.scope.ints, self.scope.types = saved
        return LemmaDecl(name, stmt, steps, lines, line)

    def _step(self):
        word = self.ident()
        if word == "rewrite":
            back = self.accept("<-")
            src = self.ident()
            binds = []
            if self.accept("with"):
                binds.append(self._binding())
                while self.accept(","):
                    binds.append(self._binding())
            self.expect("at")
            side = self.ident()
            path, until = self._path()
            return Rewrite(src, side, tuple(path), back, tuple(binds), until)
        if word == "conv":
            k = self.next()
            if k.kind != "kind":
                self.i -= 1
                self.fail("expected an equation kind")
            return Conv(kind_of(k.text))
        if word == "unfold":
            name = self.ident()
            self.expect("at")
            side = self.ident()
            path, until = self._path()
            return Unfold(name, side, tuple(path))
        if word == "split":
            return Split(self.ident())
        if word == "refl":
            return Refl()
        self.i -= 1
        self.fail(f"unknown step {word!r}")

    def _binding(self):
        name = self.ident()
        self.expect(":=")
        depth, toks = 0, []
        while True:
            t = self.peek()
            if t.kind == "eof":
                self.fail("unterminated binding")
            if depth == 0 and (t.text in (",", ";") or (t.text == "at" and t.kind == "ident")):
                break
            depth += t.text in ("(", "[") and t.kind == "sym"
            depth -= t.text in (")", "]") and t.kind == "sym"
            toks.append(self.next().text)
        if not toks:
            self.fail(f"empty binding for {name}")
        return name, " ".join(toks)

    def _path(self):
        if not self.accept("["):
            return [0], None
        path, until = [], None
        if not self.at("]"):
            path.append(int(self.expect_num()))
            while True:
                if self.accept(".."):
                    until = int(self.expect_num())
                    break
                if not self.accept(","):
                    break
                path.append(int(self.expect_num()))
        self.expect("]")
        return path, until


def parse_script(text: str) -> Script:
    return ScriptParser(text).parse()


LEMMA_DIR = "lemmas"


def bundled_script(name: str) -> str:
    return resources.files("decorat").joinpath(LEMMA_DIR).joinpath(f"{name}.dlp").read_text(encoding="utf-8")


_IMPORTED: dict = {}


def _import(name: str) -> dict:
    """Accepted lemmas of a bundled library script, checked once."""
    if name not in _IMPORTED:
        v, lib = _check(parse_script(bundled_script(name)))
        if not v.accepted:
            raise DecoratError(f"bundled library {name} is rejected at "
                               f"{v.failed_lemma} step {v.failed_step}: {v.reason}")
        _IMPORTED[name] = lib
    return _IMPORTED[name]


def check_script(script: Script | str) -> Verdict:
    if isinstance(script, str):
        script = parse_script(script)
    return _check(script)[0]


def _check(script: Script):
    library: dict = {}
    for name in script.imports:
        library.update(_import(name))
    env = TypeEnv(tuple(script.locations) + (FRESH,), tuple(script.exceptions) + (FRESH,))
    scope = Scope(env=env, terms=dict(script.defs))
    verdict = Verdict(True)
    for lem in script.lemmas:
        ctx = Context(env, scope, library)
        goals = [lem.statement]
        n = 0
        try:
            for n, step in enumerate(lem.steps, 1):
                if not goals:
                    raise NotClosed("no goal left; the lemma is already proved")
                goal = goals.pop()
                res = check_step(goal, step, ctx)
                entry = {"lemma": lem.name, "step": n, "rule": res.rule,
                         "goal_before": show_goal(goal),
                         "goal_after": _after(res.goals)}
                if res.flag:
                    entry["flag"] = res.flag
                    verdict.flags.append((lem.name, n, res.flag))
                verdict.transcript.append(entry)
                goals.extend(reversed(res.goals))
            if goals:
                n = len(lem.steps) + 1
                raise NotClosed(f"{len(goals)} goal(s) left open at qed: {show_goal(goals[-1])}")
        except DecoratError as exc:
            verdict.accepted = False
            verdict.failed_lemma = lem.name
            verdict.failed_step = n
            verdict.error = type(exc).__name__
            verdict.reason = str(exc)
            return verdict, library
        library[lem.name] = as_schema(lem.name, lem.statement)
        verdict.lemmas.append(lem.name)
    return verdict, library


def as_schema(name: str, eq: Equation) -> Schema:
    """A proven lemma as a rewrite schema: its type parameters become variables."""
    def generic(t):
        if isinstance(t, TParam):
            return TVar(f"{name}.{t.name}")
        if isinstance(t, (Prod, Sum)):
            return type(t)(generic(t.left), generic(t.right))
        return t
    return Schema(name, eq.kind, map_types(eq.lhs, generic), map_types(eq.rhs, generic),
                  origin="lemma")


def _after(goals):
    if not goals:
        return None
    if len(goals) == 1:
        return show_goal(goals[0])
    return [show_goal(g) for g in goals]


def check_file(path) -> Verdict:
    return check_script(Path(path).read_text(encoding="utf-8"))


def lemma_library() -> dict:
    """Every bundled library lemma, keyed by name, as proven equations."""
    out = {}
    for name in LIBRARY_SCRIPTS:
        out.update(_import(name))
    return out


LIBRARY_SCRIPTS = ("state", "exceptions", "imp")
