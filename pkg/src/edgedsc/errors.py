"""Exception types shared across the package."""


class UsageError(ValueError):
    """Caller passed arguments that violate an operation's preconditions."""


class ConstructionError(ValueError):
    """A code could not be built from the supplied parity-check matrix."""


class UndecodableSyndrome(ArithmeticError):
    """The syndrome has no entry in the code's correction table."""

    def __init__(self, syndrome):
        super().__init__(f"syndrome {syndrome} is not correctable")
        self.syndrome = syndrome


class CapacityExceeded(UsageError):
    """More DG nodes requested than the code has systematic rows."""


class GroupEmptied(UsageError):
    """An FG leave would remove the last member of a group."""


class DecodeFailure(RuntimeError):
    """No usable tentative decode exists for one or more nodes."""

    def __init__(self, node_ids):
        node_ids = tuple(node_ids)
        super().__init__(f"no decodable pairing for node(s) {list(node_ids)}")
        self.node_ids = node_ids


class WireFormatError(ValueError):
    """A serialized payload is malformed or uses an unknown version."""
