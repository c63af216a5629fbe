"""Error hierarchy shared by every module."""


class DecoratError(Exception):
    """Base class; `exit_code` is what the CLI returns for it."""

    exit_code = 4


class ParseError(DecoratError):
    exit_code = 2

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


class TypeMismatch(DecoratError):
    exit_code = 3


class UnknownLocation(TypeMismatch):
    pass


class UnknownException(TypeMismatch):
    pass


class ImpTypeError(TypeMismatch):
    """Ill-typed IMP expression (e.g. an integer guard)."""


class InvalidPath(DecoratError):
    exit_code = 3


class EvalError(DecoratError):
    """A pure function could not be evaluated (symbolic constant, empty input)."""


class SideConditionViolated(DecoratError):
    exit_code = 1


class BindingTypeMismatch(DecoratError):
    exit_code = 1


class ProofError(DecoratError):
    """A proof step was refused."""

    exit_code = 1


class KindTooWeak(ProofError):
    pass


class ImpureContext(ProofError):
    pass


class DecorationBoundViolated(ProofError):
    pass


class NotClosed(ProofError):
    pass


class NoMatch(ProofError):
    pass


class EffectMismatch(DecoratError):
    exit_code = 3


class SignatureMismatch(DecoratError):
    exit_code = 3
