"""Exception types shared across the package."""


class RlabError(Exception):
    """Base class for all package errors."""


class InputError(RlabError, ValueError):
    """Malformed input: bad file format, out-of-range vertex, invalid matrix."""


class InstanceTooLarge(RlabError):
    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class BallTooLarge(InstanceTooLarge):
    pass


class NotFoundWithin(RlabError):
    """Raised by universal_girth when no common walk length exists up to the cap."""

    def __init__(self, cap: int):
        super().__init__(f"no common retracting-free closed walk length <= {cap}")
        self.cap = cap


class HypothesisViolation(RlabError):
    """A theorem's hypothesis does not hold for the given instance."""


class NotRegular(HypothesisViolation):
    pass
