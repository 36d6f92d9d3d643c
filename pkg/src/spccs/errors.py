"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SpccsError(Exception):
    exit_code = 1


class TruncationError(SpccsError):
    """Truncated Fock space is too small for the requested tolerance."""

    exit_code = 4

    def __init__(self, message, *, mass=None, lam=None):
        super().__init__(message)
        self.mass = mass
        self.lam = lam


class DegenerateHeraldError(SpccsError):
    """The single-photon herald has (numerically) zero probability."""

    exit_code = 3


class IntegrationError(SpccsError):
    """Phase-space quadrature lost normalization."""

    exit_code = 5


class BracketError(SpccsError):
    """Golden-section search detected a non-unimodal bracket."""

    exit_code = 5
