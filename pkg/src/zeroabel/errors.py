"""Exception hierarchy.

Errors split into two families that the command line maps to different
exit codes: input/precondition problems (exit 1) and numerical failures
(exit 2).
"""

from __future__ import annotations


class ZeroAbelError(Exception):
    """Base class for every library error."""

    kind = "error"

    def to_json(self) -> dict:
        return {"type": self.kind, "message": str(self)}


class InputError(ZeroAbelError, ValueError):
    """Invalid input or violated precondition."""

    kind = "input_error"


class ParseError(InputError):
    """Polynomial or cycle text could not be parsed."""

    kind = "parse_error"

    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")

    def to_json(self) -> dict:
        out = super().to_json()
        out["position"] = self.position
        out["text"] = self.text
        return out


class NumericalError(ZeroAbelError, ArithmeticError):
    """A numerical kernel could not certify its result."""

    kind = "numerical_error"


class ConvergenceError(NumericalError):
    kind = "convergence_error"


class TrackingError(NumericalError):
    """Path continuation hit step-size underflow or a guard violation."""

    kind = "tracking_error"


class CapExceededError(NumericalError):
    """An enumeration exceeded its configured cap."""

    kind = "cap_exceeded"

    def __init__(self, what: str, cap: int):
        self.cap = cap
        super().__init__(f"{what} exceeded the cap of {cap} elements")

    def to_json(self) -> dict:
        out = super().to_json()
        out["cap"] = self.cap
        return out


class InconsistentEvidenceError(NumericalError):
    """Numerical vanishing evidence contradicts the exact structure."""

    kind = "inconsistent_evidence"
