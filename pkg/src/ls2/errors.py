"""Exception hierarchy shared across the package.

Typing errors map to CLI exit code 1, step-limit errors to 2, property
failures to 3 and parse errors to 4.
"""

from __future__ import annotations


class LS2Error(Exception):
    """Base class for all errors raised by this package."""


# -- scalars ---------------------------------------------------------------

class ScalarError(LS2Error):
    pass


class MixedSemiring(ScalarError):
    """Arithmetic between scalars of two different semirings."""


class ScalarSyntaxError(ScalarError):
    """A scalar literal that the active semiring cannot parse."""


# -- syntax-level ----------------------------------------------------------

class BangOutsideFragment(LS2Error):
    """A !-construct appeared where only the !-free fragment is allowed."""


# -- type checking ---------------------------------------------------------

class TypeError_(LS2Error):
    """Base class of all typing failures (exit code 1)."""


class UnboundVariable(TypeError_):
    pass


class LinearVarUnused(TypeError_):
    """A linear variable was neither consumed nor absorbable by slack."""


class LinearVarReused(TypeError_):
    """A linear variable was demanded after an earlier premise consumed it."""


class BranchUsageMismatch(TypeError_):
    """Additive branches consumed different linear variables and neither
    side has the slack to absorb the difference."""


class TypeMismatch(TypeError_):
    pass


class AnnotationMismatch(TypeMismatch):
    """check() inferred a type different from the stated one."""


class EscapingTypeVariable(TypeError_):
    """Universal introduction over a type variable still free in the context."""


class NonEmptyLinearCtxUnderBang(TypeError_):
    """The body of !t consumed linear resources."""


class IllScopedTerm(TypeError_):
    """A raw de Bruijn index points outside every binder."""


# -- rewriting -------------------------------------------------------------

class StepLimitExceeded(LS2Error):
    """Normalisation did not finish within the step budget.

    Carries the partial trace and the last term reached so the caller can
    inspect how far reduction got.
    """

    def __init__(self, msg, term=None, trace=None):
        super().__init__(msg)
        self.term = term
        self.trace = trace


class ReplayError(LS2Error):
    """A recorded trace does not reproduce when re-applied."""


# -- encodings -------------------------------------------------------------

class DimMismatch(LS2Error):
    pass


class IllTyped(LS2Error):
    """A term handed to the vector reader was not of the expected shape."""


# -- linearity lab ---------------------------------------------------------

class NotIrreducible(LS2Error):
    pass


class OutsideFragment(LS2Error):
    """Term or proposition mentions ! where the linear fragment is required."""


class MultipleFreeVars(LS2Error):
    pass


class PreconditionViolated(LS2Error):
    def __init__(self, which: str):
        super().__init__(f"precondition violated: {which}")
        self.which = which


class IllTypedContext(LS2Error):
    pass


# -- parsing ---------------------------------------------------------------

class ParseError(LS2Error):
    """Syntax error with a source span and the tokens that were expected."""

    def __init__(self, msg, span=None, expected=()):
        super().__init__(msg)
        self.span = span
        self.expected = tuple(expected)

    def __str__(self):
        base = super().__str__()
        if self.span is not None:
            base = f"{self.span}: {base}"
        if self.expected:
            base += " (expected: " + ", ".join(sorted(self.expected)) + ")"
        return base
