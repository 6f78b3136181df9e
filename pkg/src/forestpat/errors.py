"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI (and
callers that want to branch on failures) do not have to match messages.
"""


class ForestPatError(Exception):
    code = "ERROR"

    def __init__(self, message=None):
        super().__init__(message or self.code)


class InvalidPatternError(ForestPatError, ValueError):
    code = "INVALID_PATTERN"


class InvalidForestError(ForestPatError, ValueError):
    code = "INVALID_FOREST"


class UnknownLabelError(ForestPatError, KeyError):
    code = "UNKNOWN_LABEL"


class NoncontiguousLabelsError(ForestPatError, ValueError):
    code = "NONCONTIGUOUS_LABELS"


class EmptyLabelSetError(ForestPatError, ValueError):
    code = "EMPTY_LABEL_SET"


class CapExceededError(ForestPatError):
    """Raised when an exhaustive enumeration would exceed its size cap."""
    code = "CAP_EXCEEDED"


class UnsupportedSetError(ForestPatError):
    code = "UNSUPPORTED_SET"


class InsufficientSequenceError(ForestPatError, ValueError):
    code = "INSUFFICIENT_SEQUENCE"


class NotSpecialError(ForestPatError, ValueError):
    code = "NOT_SPECIAL"


class NoI2InstanceError(ForestPatError, ValueError):
    code = "NO_I2_INSTANCE"


class NoJ2InstanceError(ForestPatError, ValueError):
    code = "NO_J2_INSTANCE"


class PreconditionViolatedError(ForestPatError, ValueError):
    code = "PRECONDITION_VIOLATED"


class InvalidDiagramError(ForestPatError, ValueError):
    code = "INVALID_DIAGRAM"


class MissingClusterDataError(ForestPatError):
    code = "MISSING_CLUSTER_DATA"


class NotNiceError(ForestPatError, ValueError):
    code = "NOT_NICE"


class NotProperError(ForestPatError, ValueError):
    code = "NOT_PROPER"


class SizeMismatchError(ForestPatError, ValueError):
    code = "SIZE_MISMATCH"


class NotSubsetError(ForestPatError, ValueError):
    code = "NOT_SUBSET"


class UnsupportedPatternError(ForestPatError):
    code = "UNSUPPORTED_PATTERN"


class OddSizeError(ForestPatError, ValueError):
    code = "ODD_SIZE"


class UnknownCampaignError(ForestPatError):
    code = "UNKNOWN_CAMPAIGN"


class UsageError(ForestPatError, ValueError):
    code = "USAGE"
