"""Translation of IMP expressions and commands into decorated terms."""

from .imp import (Assign, Binary, BoolConst, Cmd, Exp, If, IntConst, Seq, Skip,
                  Throw, TryCatch, Unary, Var, While)
from .objtypes import Bool, Int, Unit
from .purefn import ARITH, CMP, ArithOp, BoolOp, CmpOp, Const
from .terms import Comp, Copair, Lookup, Lpi, Pair, Pbl, TPure, Term, Update, tid, throw, try_catch


def d_exp(e: Exp) -> Term:
    if isinstance(e, IntConst):
        return TPure(Const(e.value, Int))
    if isinstance(e, BoolConst):
        return TPure(Const(e.value, Bool))
    if isinstance(e, Var):
        return Lookup(e.name)
    if isinstance(e, Unary):
        return Comp(TPure(e.fn), d_exp(e.arg))
    if isinstance(e, Binary):
        op = ArithOp(e.op) if e.op in ARITH else CmpOp(e.op) if e.op in CMP else BoolOp(e.op)
        return Comp(TPure(op), Pair(d_exp(e.left), d_exp(e.right)))
    raise TypeError(f"unknown expression {e!r}")


def guard(b: Exp) -> Term:
    return Comp(Pbl(), d_exp(b))


def d_cmd(c: Cmd) -> Term:
    if isinstance(c, Skip):
        return tid(Unit)
    if isinstance(c, Assign):
        return Comp(Update(c.loc), d_exp(c.exp))
    if isinstance(c, Seq):
        return Comp(d_cmd(c.second), d_cmd(c.first))
    if isinstance(c, If):
        return Comp(Copair(d_cmd(c.then), d_cmd(c.orelse)), guard(c.cond))
    if isinstance(c, While):
        body = d_cmd(c.body)
        loop = Lpi(guard(c.cond), body)
        return Comp(Copair(Comp(loop, body), tid(Unit)), guard(c.cond))
    if isinstance(c, Throw):
        return throw(Unit, c.exc)
    if isinstance(c, TryCatch):
        return try_catch(c.exc, d_cmd(c.body), d_cmd(c.handler))
    raise TypeError(f"unknown command {c!r}")
