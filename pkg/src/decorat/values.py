"""Runtime values of object types."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Inl:
    value: object

    def __str__(self):
        return f"inl({show(self.value)})"


@dataclass(frozen=True)
class Inr:
    value: object

    def __str__(self):
        return f"inr({show(self.value)})"


@dataclass(frozen=True)
class Sym:
    """An integer constant known only by name (a lemma parameter)."""

    name: str

    def __str__(self):
        return self.name


TT = Inl(())
FF = Inr(())


def show(v) -> str:
    if v == ():
        return "()"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return "(" + ", ".join(show(x) for x in v) + ")"
    return str(v)


def to_json(v):
    if v == ():
        return None
    if isinstance(v, tuple):
        return [to_json(x) for x in v]
    if isinstance(v, Inl):
        return {"inl": to_json(v.value)}
    if isinstance(v, Inr):
        return {"inr": to_json(v.value)}
    if isinstance(v, Sym):
        return v.name
    return v
