"""Exception types shared across the package."""


class SingescapeError(Exception):
    """Base class for errors raised by this package."""


class RobotDescriptionError(SingescapeError):
    """Robot description text is malformed or violates the file schema."""


class NotSimpleSingularityError(SingescapeError):
    """The Jacobian does not have exactly one vanished singular value."""


class PartitionError(SingescapeError):
    """No usable invertible column block exists for the requested split."""
