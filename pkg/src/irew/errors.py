"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class IrewError(Exception):
    """Base class for library errors."""


class InputError(IrewError):
    """Malformed user input (maps to CLI exit code 2)."""


class TermSyntaxError(InputError):
    pass


class UnknownSymbol(InputError):
    pass


class ArityMismatch(InputError):
    pass


class UnboundBinder(InputError):
    pass


class FormatError(InputError):
    """A JSON document or TRS file does not follow its format."""


class InvalidPosition(IrewError):
    pass


class NoMatch(IrewError):
    pass


class SubstMismatch(IrewError):
    pass


class ReplayError(IrewError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class WrongKind(IrewError):
    pass


class NotValidated(IrewError):
    pass


class NotOmega(IrewError):
    pass


class NotProductive(IrewError):
    """Round-robin extraction would descend forever without emitting a step."""


class NotLeftLinear(IrewError):
    pass


class InvalidWitness(IrewError):
    pass


class ResourceExceeded(IrewError):
    pass
