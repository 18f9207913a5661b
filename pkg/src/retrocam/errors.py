"""Exception hierarchy shared across the package.

Everything raised on purpose derives from RetrocamError so callers can
distinguish our failures from genuine bugs.  InputError subclasses mark
problems with user-supplied data; NumericalError subclasses mark solver
or evaluation breakdowns on otherwise valid input.
"""

from __future__ import annotations


class RetrocamError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RetrocamError):
    """Invalid user input: bad scene files, bad expressions, bad arguments."""


class NumericalError(RetrocamError):
    """A numerical procedure failed on structurally valid input."""


# ---------------------------------------------------------------------------
# kinematics

class TimeOutOfDomain(InputError):
    """A worldline was evaluated outside its time domain [t_min, 0]."""


class NoEmissionInWindow(NumericalError):
    """No emission time inside [t_min, 0] produces a signal received at t=0."""


class NonFinite(NumericalError):
    """A position, distance, or solver iterate evaluated to nan or inf."""


class NoRealRoot(NumericalError):
    """The closed-form emission-time quadratic has no real root."""


class SuperluminalBoost(InputError):
    """Boost velocity at or above the signal speed."""


class SuperluminalWorldline(InputError):
    """A worldline exceeds the configured speed cap."""


# ---------------------------------------------------------------------------
# optics

class BehindPinhole(InputError):
    """Tried to project a point at or behind the pinhole plane."""


class DegenerateV(InputError):
    """Film point with V too close to zero to invert the projection."""


class XOutOfDomain(InputError):
    """A rail abscissa fell outside the rail's x domain."""


class RailBehindPinhole(InputError):
    """The rail curve dips behind the pinhole plane."""


class NotUniform(InputError):
    """Operation requires a uniformly moving worldline."""


# ---------------------------------------------------------------------------
# expressions and scenes

class ExpressionSyntaxError(InputError):
    """Malformed expression text.  Carries the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class ExpressionDomainError(NumericalError):
    """Expression evaluation hit a domain violation (division by zero, ...)."""


class UnknownIdentifier(InputError):
    """Unrecognized function name or a second free variable."""


class DerivativeUnsupported(InputError):
    """Symbolic derivative not available for this expression shape."""


class SchemaError(InputError):
    """Scene document violates the scene schema."""


class BadTolerance(InputError):
    """A tolerance or grid parameter is non-positive or malformed."""


class BetaOutOfRange(InputError):
    """A speed profile leaves the allowed subluminal range."""


class RailTooShort(InputError):
    """A train leaves the rail's x domain somewhere in the time window."""


class UnknownDemo(InputError):
    """Unknown built-in demo scene name."""


# ---------------------------------------------------------------------------
# regions and render

class RoleMismatch(InputError):
    """A region set with the wrong role was passed to an operation."""


class TimeOutsideInterval(InputError):
    """Requested exposure time lies outside the photographic interval."""


class NoRail(InputError):
    """Operation requires a scene with a rail."""


class NotABoxScene(InputError):
    """Scene does not contain the rod-frame layout this metric needs."""


class DegenerateSection(InputError):
    """Transverse section missing or with coincident endpoints."""


class EmptyWindow(InputError):
    """No film points fall inside the requested window."""
