"""Exception types shared across the package.

Validation of plain argument bounds raises ValueError; the classes here mark
conditions that arise during a computation and that callers may want to
handle (an insensitive operating point, a degenerate noise level, an
inadequate Fock cutoff, too little data for a spectral estimate).
"""


class TsuiError(Exception):
    """Base class for computation-level errors."""


class SlopeZeroError(TsuiError):
    """The mean signal does not respond to the interferometer phase.

    Raised when |d<X>/dphi| falls below threshold, i.e. the chosen operating
    point is insensitive and the phase variance would diverge.
    """


class DegenerateNoiseError(TsuiError):
    """The noise variance is numerically zero; a Fisher ratio is undefined."""


class TruncationInadequateError(TsuiError):
    """A truncated Fock-space computation lost too much norm to be trusted."""


class InsufficientDataError(TsuiError):
    """Too few samples for the requested spectral resolution bandwidth."""
