"""Exception hierarchy shared by every sampler."""

from __future__ import annotations


class SamplingError(Exception):
    """Base class for all sampler failures."""


class InputError(SamplingError, ValueError):
    """Arguments violate a documented precondition (bad shape, range, length)."""


class CapacityError(SamplingError):
    """Problem too large for an enumeration meant for small inputs."""


class InvalidStateError(SamplingError):
    """A chain is asked to sit on a state with zero target density."""


class PreconditionError(SamplingError):
    """A mathematical hypothesis of the formula does not hold at this point."""


class DegeneracyError(SamplingError):
    """A Jacobian or rank condition degenerates where it must not."""


class OutOfDomainError(SamplingError):
    """A point lies outside the chart domain U."""


class InfeasibleError(SamplingError):
    """No feasible point exists for the requested constraints."""


class StructureError(SamplingError):
    """A transition kernel is reducible or periodic."""


class ConvergenceError(SamplingError):
    """An iterative method failed to reach its residual target."""


class NonReversibleChainError(SamplingError):
    """A chain offers no time reversal, so the serial test cannot be run."""
