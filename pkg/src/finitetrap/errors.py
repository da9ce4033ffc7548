"""Exception and warning types raised by finitetrap."""


class FiniteTrapError(Exception):
    """Base class for all numerical/usage errors in the package."""


class DomainError(FiniteTrapError, ValueError):
    """A level lies outside the range where the deformation function is valid."""


class TruncationError(FiniteTrapError, ValueError):
    """A Fock index or basis size exceeds the bound-state truncation."""


class BranchError(FiniteTrapError, ValueError):
    """sqrt(gamma)*eta has left the principal branch of tan/cos (>= pi/2)."""


class SingularDenominator(FiniteTrapError, ZeroDivisionError):
    """A ratio's denominator vanished relative to its numerator."""


class UsageError(FiniteTrapError, ValueError):
    """Inputs are mutually inconsistent (e.g. mismatched dimensions)."""


class CancellationWarning(RuntimeWarning):
    """An alternating sum lost most of its significant digits."""


class CoverageWarning(RuntimeWarning):
    """A phase-space grid or workspace is too small for the state."""


class ShallowTrapWarning(UserWarning):
    """The trap supports only its ground state (n_max == 0)."""
