"""Error taxonomy for the whole package.

Every domain violation raises a subclass of :class:`DiaglabError`, so callers
(and the CLI) can distinguish "your input is outside the defined domain" from
genuine bugs.  The names follow the operation contracts: an operation that
documents ``errors: FooBar`` raises ``FooBar`` from this module.
"""


class DiaglabError(Exception):
    """Base class for all domain errors raised by diaglab."""


class DivisionByZero(DiaglabError, ZeroDivisionError):
    """Division by an exact zero (scalar, series, or rational function)."""


class FieldMismatch(DiaglabError):
    """Two quadratic-extension elements with different discriminants."""


class OffsetMismatch(DiaglabError):
    """Series offsets do not differ by an integer (add/sub/Hadamard)."""


class CompositionDomain(DiaglabError):
    """Inner series of a composition has a nonzero constant term."""


class ReversionDomain(DiaglabError):
    """Series reversion needs offset 0, c0 = 0 and c1 != 0."""


class RootNotInField(DiaglabError):
    """A leading coefficient has no exact root in the coefficient field."""


class ExpLogDomain(DiaglabError):
    """exp needs constant term 0; log needs constant term 1 (offset 0)."""


class SchwarzianDomain(DiaglabError):
    """Schwarzian derivative of a series whose derivative is zero."""


class DiagonalDomain(DiaglabError):
    """Diagonal extraction requires den(0, ..., 0) != 0."""


class OrderMismatch(DiaglabError):
    """Operator has the wrong order for this operation (e.g. sym_square)."""


class NotFuchsianAtZero(DiaglabError):
    """x = 0 is an irregular singular point; no indicial data."""


class UnsupportedExponent(DiaglabError):
    """Indicial exponent outside the rationals (not representable here)."""


class FrobeniusObstruction(DiaglabError):
    """Integer exponent collision makes the power-series solution impossible."""


class NoMirrorMap(DiaglabError):
    """Operator's indicial exponents at 0 are not {0, 0}: no nome/log pair."""


class LogCase(DiaglabError):
    """Schwarz map requested where the logarithmic (nome) machinery applies."""


class NotFound(DiaglabError):
    """ODE guessing exhausted the (order, degree) search box."""


class BadParameters(DiaglabError):
    """Hypergeometric/Heun parameters violate their invariants."""


class DegenerateSingularities(DiaglabError):
    """Heun parameter a collides with 0 or 1 (singularities merge)."""


class NotFactorable(DiaglabError):
    """Heun operator does not satisfy the monic-factorization conditions."""


class NotApplicable(DiaglabError):
    """Structural reduction's applicability conditions fail."""


class BadSeed(DiaglabError):
    """Branch seed is not a root of the relation at leading order."""


class RamifiedBranch(DiaglabError):
    """Branch seed hits a multiple root; Newton iteration cannot proceed."""


class InsufficientData(DiaglabError):
    """Not enough series coefficients for a reliable verdict."""


class ExponentNotCleared(DiaglabError):
    """Raising both sides to the clearing power left fractional offsets."""


class DegeneratePullback(DiaglabError):
    """Pullback by a constant rational function."""


class ParseError(DiaglabError):
    """Syntax error in the expression DSL; carries the offending position."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else "%s (at position %d)" % (message, position))
        self.position = position
