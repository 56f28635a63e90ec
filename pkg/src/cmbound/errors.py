"""Exception types shared across modules."""


class CapExceeded(Exception):
    """A computation would exceed a documented enumeration cap."""


class InadmissibleField(ValueError):
    """The number field falls outside the main theorem's hypotheses."""
