"""Finite denotational models and brute-force equality checks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .equations import EqKind
from .errors import EffectMismatch, SignatureMismatch, EvalError
from .imp import Cmd, Final, OutOfFuel, Uncaught, run
from .objtypes import Int, ObjType, Prod, Sum, Unit, is_finite
from .purefn import enumerate_type
from .terms import (Comp, Copair, Def, Downcast, Lookup, Lpi, Meta, Pair, Pbl,
                    TPure, Tag, Term, Untag, Update, infer_decoration, show,
                    typecheck)
from .translate import d_cmd
from .values import Inl, Inr, TT, FF, show as show_value, to_json


@dataclass(frozen=True)
class Exc:
    """An exceptional value: exception name plus payload."""

    name: str
    payload: object = ()

    def __str__(self):
        return f"raise {self.name}"


class _Divergent:
    def __repr__(self):
        return "DIVERGENT"

    __str__ = __repr__


DIVERGENT = _Divergent()


def is_ordinary(v) -> bool:
    return not isinstance(v, Exc) and v is not DIVERGENT


@dataclass
class FiniteModel:
    locations: tuple = ()
    carrier: tuple = (0, 1, 2, 3)
    exceptions: tuple = ()
    samples: int = 100
    seed: int = 0

    def __post_init__(self):
        self.index = {loc: i for i, loc in enumerate(self.locations)}

    def states(self) -> list:
        return list(itertools.product(self.carrier, repeat=len(self.locations)))

    def state_dict(self, s) -> dict:
        return dict(zip(self.locations, s))

    def inputs(self, t: ObjType) -> list:
        """Ordinary inputs: every value of a finite type, else carrier values plus seeded samples."""
        if is_finite(t):
            return enumerate_type(t)
        rng = random.Random(f"{self.seed}:{t}")
        out = []
        if t == Int:
            out = list(self.carrier)
        seen = set(out)
        tries = 0
        while len(out) < self.samples and tries < self.samples * 20:
            tries += 1
            v = self._sample(t, rng)
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out

    def _sample(self, t, rng):
        if t == Int:
            return rng.randint(-50, 50) if rng.random() < 0.5 else rng.choice(self.carrier)
        if is_finite(t):
            return rng.choice(enumerate_type(t))
        if isinstance(t, Prod):
            return (self._sample(t.left, rng), self._sample(t.right, rng))
        if isinstance(t, Sum):
            side = rng.random() < 0.5
            if side and enumerate_type_safe(t.left) != []:
                return Inl(self._sample(t.left, rng))
            return Inr(self._sample(t.right, rng))
        raise EvalError(f"cannot sample type {t}")

    def exceptional_inputs(self) -> list:
        return [Exc(e, ()) for e in self.exceptions]


def enumerate_type_safe(t):
    try:
        return enumerate_type(t)
    except ValueError:
        return None


def state_model(locations=("x", "y"), carrier=(0, 1, 2, 3), **kw) -> FiniteModel:
    return FiniteModel(tuple(locations), tuple(carrier), (), **kw)


def exception_model(exceptions=("e", "f"), **kw) -> FiniteModel:
    return FiniteModel((), (0, 1, 2, 3), tuple(exceptions), **kw)


def combined_model(locations=("x", "y"), exceptions=("e", "f"), carrier=(0, 1, 2, 3), **kw) -> FiniteModel:
    return FiniteModel(tuple(locations), tuple(carrier), tuple(exceptions), **kw)


class _Fuel:
    def __init__(self, n):
        self.n = n


def evaluate(t: Term, x, s: tuple, model: FiniteModel, fuel) -> tuple:
    """Run t on input x (ordinary or Exc) in state s; returns (output, state)."""
    if not isinstance(fuel, _Fuel):
        fuel = _Fuel(fuel)
    return _ev(t, x, s, model, fuel)


def _ev(t, x, s, m, fuel):
    if x is DIVERGENT:
        return x, s
    if isinstance(t, Comp):
        y, s = _ev(t.inner, x, s, m, fuel)
        return _ev(t.outer, y, s, m, fuel)
    if isinstance(t, Def):
        return _ev(t.body, x, s, m, fuel)
    if isinstance(x, Exc):
        if isinstance(t, Untag):
            return (x.payload, s) if x.name == t.exc else (x, s)
        if isinstance(t, Copair):
            return _ev(t.right, x, s, m, fuel)
        if isinstance(t, Pair):
            return _pair(t, x, s, m, fuel)
        if isinstance(t, Meta):
            raise EvalError(f"cannot evaluate term variable {t.name}")
        return x, s
    if isinstance(t, TPure):
        return t.fn.eval(x), s
    if isinstance(t, Pbl):
        return (TT if x else FF), s
    if isinstance(t, Lookup):
        return s[_loc(m, t.loc)], s
    if isinstance(t, Update):
        i = _loc(m, t.loc)
        return (), s[:i] + (x,) + s[i + 1:]
    if isinstance(t, Tag):
        return Exc(t.exc, x), s
    if isinstance(t, Untag):
        raise EvalError("untag applied to an ordinary value")
    if isinstance(t, Pair):
        return _pair(t, x, s, m, fuel)
    if isinstance(t, Copair):
        if isinstance(x, Inl):
            return _ev(t.left, x.value, s, m, fuel)
        return _ev(t.right, x.value, s, m, fuel)
    if isinstance(t, Downcast):
        return _ev(t.body, x, s, m, fuel)
    if isinstance(t, Lpi):
        while True:
            b, s = _ev(t.cond, (), s, m, fuel)
            if not is_ordinary(b) or b == FF:
                return (b if not is_ordinary(b) else ()), s
            y, s = _ev(t.body, (), s, m, fuel)
            if not is_ordinary(y):
                return y, s
            fuel.n -= 1
            if fuel.n < 0:
                return DIVERGENT, s
    if isinstance(t, Meta):
        raise EvalError(f"cannot evaluate term variable {t.name}")
    raise EvalError(f"unknown term {t!r}")


def _pair(t, x, s, m, fuel):
    a, s = _ev(t.first, x, s, m, fuel)
    if not is_ordinary(a):
        return a, s
    b, s = _ev(t.second, x, s, m, fuel)
    if not is_ordinary(b):
        return b, s
    return (a, b), s


def _loc(m, loc):
    try:
        return m.index[loc]
    except KeyError:
        raise EffectMismatch(f"location {loc} is not in the model") from None


@dataclass
class DenotedFn:
    """A term together with the model it is read in."""

    term: Term
    model: FiniteModel
    effect: str
    fuel: int = 10_000

    def __call__(self, x, s=()):
        out, s2 = evaluate(self.term, x, s, self.model, self.fuel)
        if out is DIVERGENT:
            return out, None
        return out, s2

    def table(self) -> dict:
        dom, _ = typecheck(self.term)
        xs = self.model.inputs(dom)
        if self.effect != "state":
            xs = xs + self.model.exceptional_inputs()
        return {(x, s): self(x, s) for x in xs for s in self.model.states()}


def denote(t: Term, model: FiniteModel, effect: str = "combined", fuel: int = 10_000) -> DenotedFn:
    d = infer_decoration(t)
    if effect == "state" and d.ed != 0:
        raise EffectMismatch(f"{show(t)} raises or catches exceptions; not a state-model term")
    if effect == "exception" and d.sd != 0:
        raise EffectMismatch(f"{show(t)} uses the state; not an exception-model term")
    if effect == "exception" and model.locations:
        raise EffectMismatch("the exception model has no locations")
    if effect not in ("state", "exception", "combined"):
        raise EffectMismatch(f"unknown effect {effect}")
    return DenotedFn(t, model, effect, fuel)


@dataclass
class Verdict:
    holds: bool
    checked: int = 0
    counterexample: dict | None = None

    def to_json(self):
        return {"holds": self.holds, "checked": self.checked,
                "counterexample": self.counterexample}


def _out(v):
    if isinstance(v, Exc):
        return {"raise": v.name}
    if v is DIVERGENT:
        return "divergent"
    return to_json(v)


def semantic_eq(t1: Term, t2: Term, kind: EqKind, model: FiniteModel,
                fuel: int = 10_000, inputs=None, states=None) -> Verdict:
    """Compare two terms at an equation kind on every (sampled) input and state.

    `states` replaces the exhaustive store enumeration, e.g. by sampled stores.
    """
    sig1, sig2 = typecheck(t1), typecheck(t2)
    if sig1 != sig2:
        raise SignatureMismatch(f"{sig1[0]} -> {sig1[1]} versus {sig2[0]} -> {sig2[1]}")
    xs = list(inputs) if inputs is not None else model.inputs(sig1[0])
    if kind.exc_strong:
        xs += model.exceptional_inputs()
    states = model.states() if states is None else list(states)
    n = 0
    for x in xs:
        for s in states:
            r1 = evaluate(t1, x, s, model, fuel)
            r2 = evaluate(t2, x, s, model, fuel)
            n += 1
            if not _same(r1, r2, kind.state_strong):
                return Verdict(False, n, {
                    "input": _out(x), "state": model.state_dict(s),
                    "lhs": {"value": _out(r1[0]), "state": model.state_dict(r1[1])},
                    "rhs": {"value": _out(r2[0]), "state": model.state_dict(r2[1])}})
    return Verdict(True, n)


def _same(r1, r2, strong_state):
    v1, s1 = r1
    v2, s2 = r2
    if v1 is DIVERGENT or v2 is DIVERGENT:
        return v1 is v2
    if v1 != v2:
        return False
    return s1 == s2 if strong_state else True


def sample_stores(locations, n: int, seed: int) -> list:
    rng = random.Random(seed)
    return [{loc: rng.randint(-20, 20) for loc in locations} for _ in range(n)]


def adequacy(c: Cmd, model: FiniteModel, fuel: int = 10_000, stores=None) -> Verdict:
    """Compare the small-step interpreter with the denotation of the translation."""
    t = d_cmd(c)
    if stores is None:
        stores = sample_stores(model.locations, model.samples, model.seed)
    for n, store in enumerate(stores, 1):
        op = run(c, dict(store), fuel)
        s = tuple(store[loc] for loc in model.locations)
        out, s2 = evaluate(t, (), s, model, fuel)
        ok = _agree(op, out, s2, model)
        if not ok:
            return Verdict(False, n, {"store": store, "run": outcome_json(op),
                                      "denotation": {"value": _out(out), "state": model.state_dict(s2)}})
    return Verdict(True, len(stores))


def _agree(op, out, s2, model):
    if isinstance(op, Final):
        return out == () and model.state_dict(s2) == op.store
    if isinstance(op, Uncaught):
        return isinstance(out, Exc) and out.name == op.exc and model.state_dict(s2) == op.store
    return out is DIVERGENT


def outcome_json(op) -> dict:
    if isinstance(op, Final):
        return {"outcome": "final", "store": op.store}
    if isinstance(op, Uncaught):
        return {"outcome": "uncaught", "exception": op.exc, "store": op.store}
    return {"outcome": "out_of_fuel", "store": op.store}
