"""Exception types shared across the package."""


class FinarithError(Exception):
    """Base class for all package errors."""


class DomainError(FinarithError):
    """An operation was queried with an argument outside the structure's domain.

    Distinct from a defined-domain pair that merely has no value (which is
    reported as None, not an exception).
    """


class ParseError(FinarithError):
    """Formula text does not conform to the grammar."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class EvalError(FinarithError):
    """Evaluation failed: unassigned variable, wrong arity, and the like."""


class WrongEvaluatorError(FinarithError):
    """A modal node reached the first-order evaluator; use the modal module."""


class AdmissibilityError(FinarithError):
    """Digit-string parameters (b, k) cannot host the ground model's squares."""

    def __init__(self, message, minimal_width=None):
        super().__init__(message)
        self.minimal_width = minimal_width
