"""Exception taxonomy shared by all stabmagic modules."""


class StabmagicError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(StabmagicError):
    """Operands act on different qubit counts or incompatible index sets."""


class InvalidGroupError(StabmagicError):
    """Generator set is dependent, anticommuting, non-Hermitian, or otherwise
    not a valid stabilizer group for the requested operation."""


class ResourceCapError(StabmagicError):
    """A dense object would exceed the configured memory cap."""


class ToleranceError(StabmagicError):
    """A threshold-based classification failed a consistency check (e.g. the
    preserved-Pauli set is not closed under multiplication)."""


class NoExactFormulaError(StabmagicError):
    """Requested scenario has no closed-form average."""


class SingularRegimeError(StabmagicError):
    """Closed form is singular at the requested dimension (Weingarten
    denominators vanish below dimension 4)."""


class ConfigError(StabmagicError):
    """Malformed or inconsistent experiment configuration."""
