"""IMP with exceptions: syntax, parser, evaluator and small-step interpreter."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .errors import ImpTypeError, ParseError, UnknownException, UnknownLocation
from .purefn import ARITH, BOOLOPS, CMP, PureFn
from .syntax import Parser, tokenize


class Exp:
    __slots__ = ()


@dataclass(frozen=True)
class IntConst(Exp):
    value: int


@dataclass(frozen=True)
class BoolConst(Exp):
    value: bool


@dataclass(frozen=True)
class Var(Exp):
    name: str


@dataclass(frozen=True)
class Unary(Exp):
    fn: PureFn
    arg: Exp


@dataclass(frozen=True)
class Binary(Exp):
    op: str
    left: Exp
    right: Exp


class Cmd:
    __slots__ = ()

    def __str__(self):
        return show_cmd(self)


@dataclass(frozen=True)
class Skip(Cmd):
    pass


@dataclass(frozen=True)
class Assign(Cmd):
    loc: str
    exp: Exp


@dataclass(frozen=True)
class Seq(Cmd):
    first: Cmd
    second: Cmd


@dataclass(frozen=True)
class If(Cmd):
    cond: Exp
    then: Cmd
    orelse: Cmd


@dataclass(frozen=True)
class While(Cmd):
    cond: Exp
    body: Cmd


@dataclass(frozen=True)
class Throw(Cmd):
    exc: str


@dataclass(frozen=True)
class TryCatch(Cmd):
    body: Cmd
    exc: str
    handler: Cmd


@dataclass(frozen=True)
class Program:
    locations: tuple
    exceptions: tuple
    body: Cmd


# typing

def exp_type(e: Exp) -> str:
    """'int' or 'bool'; raises ImpTypeError on a clash."""
    if isinstance(e, IntConst) or isinstance(e, Var):
        return "int"
    if isinstance(e, BoolConst):
        return "bool"
    if isinstance(e, Unary):
        return "bool" if str(e.fn.sig()[1]) == "bool" else "int"
    if isinstance(e, Binary):
        lt, rt = exp_type(e.left), exp_type(e.right)
        want = "bool" if e.op in BOOLOPS else "int"
        if lt != want or rt != want:
            raise ImpTypeError(f"operator {e.op} expects {want} operands")
        return "int" if e.op in ARITH else "bool"
    raise ImpTypeError(f"unknown expression {e!r}")


def check_cmd(c: Cmd, locations=None, exceptions=None):
    def loc(x):
        if locations is not None and x not in locations:
            raise UnknownLocation(f"undeclared location {x}")

    def exps(e):
        if isinstance(e, Var):
            loc(e.name)
        for k in (getattr(e, "arg", None), getattr(e, "left", None), getattr(e, "right", None)):
            if k is not None:
                exps(k)

    def go(c):
        if isinstance(c, Assign):
            loc(c.loc)
            exps(c.exp)
            if exp_type(c.exp) != "int":
                raise ImpTypeError(f"assignment to {c.loc} of a boolean")
        elif isinstance(c, Seq):
            go(c.first)
            go(c.second)
        elif isinstance(c, (If, While)):
            exps(c.cond)
            if exp_type(c.cond) != "bool":
                raise ImpTypeError("guard must be boolean")
            if isinstance(c, If):
                go(c.then)
                go(c.orelse)
            else:
                go(c.body)
        elif isinstance(c, (Throw, TryCatch)):
            if exceptions is not None and c.exc not in exceptions:
                raise UnknownException(f"undeclared exception {c.exc}")
            if isinstance(c, TryCatch):
                go(c.body)
                go(c.handler)
    go(c)


# parsing

class ImpParser(Parser):
    def program(self) -> Program:
        locs, excs = [], []
        self.expect("locations")
        while not self.at(";"):
            locs.append(self.ident())
        self.expect(";")
        if self.accept("exceptions"):
            while not self.at(";"):
                excs.append(self.ident())
            self.expect(";")
        body = self.cmd()
        self.end()
        check_cmd(body, locs, excs)
        return Program(tuple(locs), tuple(excs), body)

    def end(self):
        if self.peek().kind != "eof":
            self.fail(f"unexpected {self.peek().text!r}")

    def cmd(self) -> Cmd:
        c = self.simple()
        if self.accept(";"):
            if self.peek().kind == "eof" or self.at("}") or self.at("catch") \
                    or self.at("else") or self.at(")"):
                return c
            return Seq(c, self.cmd())
        return c

    def simple(self) -> Cmd:
        if self.accept("{"):
            c = self.cmd()
            self.expect("}")
            return c
        if self.accept("("):
            c = self.cmd()
            self.expect(")")
            return c
        if self.accept("skip"):
            return Skip()
        if self.accept("if"):
            b = self.bexp()
            self.expect("then")
            c1 = self.simple()
            self.expect("else")
            return If(b, c1, self.simple())
        if self.accept("while"):
            b = self.bexp()
            self.expect("do")
            return While(b, self.simple())
        if self.accept("throw"):
            return Throw(self.ident())
        if self.accept("try"):
            body = self.cmd()
            self.expect("catch")
            e = self.ident()
            self.expect("=>")
            return TryCatch(body, e, self.simple())
        x = self.ident()
        self.expect(":=")
        return Assign(x, self.aexp())

    # expressions, loosest first
    def bexp(self) -> Exp:
        e = self.conj()
        while self.accept("||"):
            e = Binary("||", e, self.conj())
        return e

    def conj(self) -> Exp:
        e = self.cmp()
        while self.accept("&&"):
            e = Binary("&&", e, self.cmp())
        return e

    def cmp(self) -> Exp:
        e = self.aexp()
        t = self.peek()
        if t.kind == "sym" and t.text in CMP:
            self.next()
            return Binary(t.text, e, self.aexp())
        return e

    def aexp(self) -> Exp:
        e = self.term_()
        while self.peek().text in ("+", "-") and self.peek().kind == "sym":
            op = self.next().text
            e = Binary(op, e, self.term_())
        return e

    def term_(self) -> Exp:
        e = self.factor()
        while self.at("*"):
            self.next()
            e = Binary("*", e, self.factor())
        return e

    def factor(self) -> Exp:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return IntConst(int(t.text))
        if self.accept("-"):
            n = self.peek()
            if n.kind != "num":
                self.fail("expected a number after '-'")
            self.next()
            return IntConst(-int(n.text))
        if self.accept("("):
            e = self.bexp()
            self.expect(")")
            return e
        name = self.ident()
        if name in ("true", "tt"):
            return BoolConst(True)
        if name in ("false", "ff"):
            return BoolConst(False)
        if name in ("if", "then", "else", "while", "do", "skip", "try", "catch", "throw"):
            self.i -= 1
            self.fail(f"keyword {name} where an expression was expected")
        return Var(name)


def _merge_arrow(toks):
    out = []
    for t in toks:
        if out and out[-1].text == "=" and t.text == ">" and out[-1].line == t.line \
                and out[-1].col + 1 == t.col:
            out[-1].text = "=>"
            continue
        out.append(t)
    return out


def parse_program(text: str) -> Program:
    return ImpParser(_merge_arrow(tokenize(text))).program()


def bundled_programs() -> dict:
    """name -> Program for every .imp file shipped with the package."""
    root = resources.files("decorat").joinpath("programs")
    files = sorted((f for f in root.iterdir() if f.name.endswith(".imp")), key=lambda f: f.name)
    return {f.name[:-4]: parse_program(f.read_text(encoding="utf-8")) for f in files}


def parse_cmd(text: str) -> Cmd:
    p = ImpParser(_merge_arrow(tokenize(text)))
    c = p.cmd()
    p.end()
    check_cmd(c)
    return c


def parse_exp(text: str) -> Exp:
    p = ImpParser(tokenize(text))
    e = p.bexp()
    p.end()
    exp_type(e)
    return e


# semantics

def eval_exp(e: Exp, store: dict):
    if isinstance(e, (IntConst, BoolConst)):
        return e.value
    if isinstance(e, Var):
        return store[e.name]
    if isinstance(e, Unary):
        return e.fn.eval(eval_exp(e.arg, store))
    if isinstance(e, Binary):
        a, b = eval_exp(e.left, store), eval_exp(e.right, store)
        if e.op in ARITH:
            return ARITH[e.op](a, b)
        if e.op in CMP:
            return CMP[e.op](a, b)
        return BOOLOPS[e.op](a, b)
    raise TypeError(f"unknown expression {e!r}")


def is_terminal(c: Cmd) -> bool:
    return isinstance(c, (Skip, Throw))


def step(store: dict, c: Cmd):
    """One small step; returns the next (store, cmd). Terminal configs are returned unchanged."""
    if is_terminal(c):
        return store, c
    if isinstance(c, Assign):
        s = dict(store)
        s[c.loc] = eval_exp(c.exp, store)
        return s, Skip()
    if isinstance(c, Seq):
        if isinstance(c.first, Skip):
            return store, c.second
        if isinstance(c.first, Throw):
            return store, c.first
        s, c1 = step(store, c.first)
        return s, Seq(c1, c.second)
    if isinstance(c, If):
        return store, (c.then if eval_exp(c.cond, store) else c.orelse)
    if isinstance(c, While):
        if eval_exp(c.cond, store):
            return store, Seq(c.body, c)
        return store, Skip()
    if isinstance(c, TryCatch):
        if isinstance(c.body, Skip):
            return store, Skip()
        if isinstance(c.body, Throw):
            return store, (c.handler if c.body.exc == c.exc else c.body)
        s, b = step(store, c.body)
        return s, TryCatch(b, c.exc, c.handler)
    raise TypeError(f"unknown command {c!r}")


@dataclass(frozen=True)
class Final:
    store: dict


@dataclass(frozen=True)
class Uncaught:
    exc: str
    store: dict


@dataclass(frozen=True)
class OutOfFuel:
    store: dict
    cmd: Cmd


def run(c: Cmd, store: dict, fuel: int = 10_000):
    for _ in range(fuel + 1):
        if isinstance(c, Skip):
            return Final(store)
        if isinstance(c, Throw):
            return Uncaught(c.exc, store)
        if fuel == 0:
            break
        store, c = step(store, c)
        fuel -= 1
    return OutOfFuel(store, c)


def trace(c: Cmd, store: dict, fuel: int = 10_000) -> list:
    out = [(store, c)]
    while not is_terminal(c) and fuel > 0:
        store, c = step(store, c)
        out.append((store, c))
        fuel -= 1
    return out


# printing

PREC = {"||": 1, "&&": 2}
for _op in CMP:
    PREC[_op] = 3
PREC.update({"+": 4, "-": 4, "*": 5})


def show_exp(e: Exp, ctx: int = 0) -> str:
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        return f"{e.fn}({show_exp(e.arg)})"
    p = PREC[e.op]
    s = f"{show_exp(e.left, p)} {e.op} {show_exp(e.right, p + 1)}"
    return f"({s})" if p < ctx or (ctx and p == 3 and ctx == 3) else s


def show_cmd(c: Cmd) -> str:
    if isinstance(c, Skip):
        return "skip"
    if isinstance(c, Assign):
        return f"{c.loc} := {show_exp(c.exp)}"
    if isinstance(c, Seq):
        return f"{_block(c.first)}; {show_cmd(c.second)}"
    if isinstance(c, If):
        return f"if {show_exp(c.cond)} then {_block(c.then)} else {_block(c.orelse)}"
    if isinstance(c, While):
        return f"while {show_exp(c.cond)} do {_block(c.body)}"
    if isinstance(c, Throw):
        return f"throw {c.exc}"
    if isinstance(c, TryCatch):
        return f"try {show_cmd(c.body)} catch {c.exc} => {_block(c.handler)}"
    raise TypeError(f"unknown command {c!r}")


def _block(c: Cmd) -> str:
    if isinstance(c, (Seq, TryCatch, If, While)):
        return "{ " + show_cmd(c) + " }"
    return show_cmd(c)


def to_json(x):
    """AST as plain JSON-able data."""
    if isinstance(x, Program):
        return {"locations": list(x.locations), "exceptions": list(x.exceptions),
                "body": to_json(x.body)}
    if isinstance(x, (Exp, Cmd)):
        d = {"node": type(x).__name__}
        for k, v in x.__dict__.items():
            d[k] = to_json(v) if isinstance(v, (Exp, Cmd)) else (str(v) if isinstance(v, PureFn) else v)
        return d
    return x
