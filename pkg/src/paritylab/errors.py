"""Exception hierarchy shared by all paritylab modules.

The CLI maps these onto process exit codes: configuration and domain
problems exit with 2, numerical-tolerance failures with 3, truncation
and phase-space-window problems with 4.
"""


class ParityLabError(Exception):
    """Base class for all errors raised by paritylab."""


class DomainError(ParityLabError, ValueError):
    """A parameter is outside its mathematical domain (eta, nbar, k, ...)."""


class DimensionError(DomainError):
    """A requested Fock-space dimension cannot hold the state."""


class RegimeError(DomainError):
    """An operation was requested outside its parameter regime."""


class SpecParseError(DomainError):
    """A state-spec string failed to parse.

    Carries the character position of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ConfigError(ParityLabError):
    """A run configuration is invalid (bad flags, config file, CFL, ...)."""


class ResolutionError(ConfigError):
    """A propagation kernel is narrower than the grid can resolve."""


class ToleranceError(ParityLabError):
    """A numerical self-consistency check failed its tolerance."""


class TruncationError(ParityLabError):
    """Population leaked past the Fock-space cap beyond tolerance."""


class WindowError(ParityLabError):
    """The phase-space window is too small for the requested operation."""
