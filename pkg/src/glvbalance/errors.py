"""Exception hierarchy shared by every module.

Validation failures subclass :class:`ValidationError` (itself a ``ValueError``)
so callers can catch input problems in one place; numerical failures during
integration subclass :class:`NumericalError`.
"""


class GlvError(Exception):
    """Base class for all package errors."""


class ParseError(GlvError, ValueError):
    """A file could not be parsed. ``line``/``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(GlvError, ValueError):
    """An input violates a structural invariant."""


class SelfLoop(ValidationError):
    def __init__(self, i):
        self.vertex = i
        super().__init__(f"SelfLoop: edge ({i}, {i}) is a self-loop")


class DuplicateVertex(ValidationError):
    def __init__(self, i, j):
        self.pair = (i, j)
        super().__init__(f"DuplicateVertex: vertices {i} and {j} coincide")


class NonPositiveWeight(ValidationError):
    def __init__(self, edge, weight):
        self.edge = edge
        self.weight = weight
        super().__init__(f"NonPositiveWeight: edge {edge} has weight {weight!r}")


class DuplicateEdge(ValidationError):
    def __init__(self, i, j):
        self.pair = (i, j)
        super().__init__(f"DuplicateEdge: edge ({i}, {j}) appears more than once")


class DimensionMismatch(ValidationError):
    def __init__(self, message):
        super().__init__(f"DimensionMismatch: {message}")


class NonPositiveState(ValidationError):
    def __init__(self, x):
        self.state = x
        super().__init__(f"NonPositiveState: state must be componentwise positive, got {x!r}")


class MissingVertex(ValidationError):
    def __init__(self, exponent):
        self.exponent = exponent
        super().__init__(f"MissingVertex: term exponent {exponent!r} is not a candidate vertex")


class NotASteadyState(ValidationError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"NotASteadyState: vector field residual {residual:.3e} at x*")


class NumericalError(GlvError, ArithmeticError):
    """Base class for failures of the numerical routines."""


class Overflow(NumericalError, OverflowError):
    """An exponent argument exceeded the overflow guard."""

    def __init__(self, value, limit):
        self.value = value
        self.limit = limit
        super().__init__(f"Overflow: exponent argument {value:.6g} exceeds {limit:g}")


class StepUnderflow(NumericalError):
    """The adaptive integrator could not accept a step above the minimum size."""

    def __init__(self, t, h, last_state=None):
        self.t = t
        self.h = h
        self.last_state = last_state
        super().__init__(f"StepUnderflow: step size {h:.3e} at t={t:.6g}")


class DegenerateIntersection(NumericalError):
    """The steady-state set and a compatibility class do not meet transversally."""


class Infeasible(GlvError):
    """A linear feasibility problem has no solution.

    ``certificate`` holds a Farkas vector when the solver produced one.
    """

    def __init__(self, message, certificate=None):
        self.certificate = certificate
        super().__init__(f"Infeasible: {message}")
