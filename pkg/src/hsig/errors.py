"""Exception hierarchy shared across the package."""


class HsigError(Exception):
    """Base class for all package errors."""


class MalformedInput(HsigError):
    """Input text does not match the declared signature format."""


class NonMonotonicTime(MalformedInput):
    """Timestamps are not strictly increasing."""


class TooFewSamples(MalformedInput):
    """Fewer than two pen samples."""


class InvariantViolation(HsigError):
    """A domain object violates one of its stated invariants."""


class CorruptProfile(HsigError):
    """Profile container failed magic/version/checksum validation."""


class SchemaMismatch(CorruptProfile):
    """Profile payload does not match the expected schema version."""


class DegenerateGeometry(HsigError):
    """All trajectory points coincide; no shape to normalize."""


class NotDivisible(HsigError):
    """Sample count is not divisible by the section count."""


class EmptyPartition(HsigError):
    """Partition cell contains no samples."""


class LengthMismatch(HsigError):
    """Test signature length does not match the enrolled profile."""


class EmptyScoreList(HsigError):
    """FAR/FRR requested on an empty score list."""


class MixedConfigurations(HsigError):
    """Profiles with differing section counts cannot be averaged."""


class InsufficientSignatures(HsigError):
    """Dataset does not provide enough signatures for the protocol."""
