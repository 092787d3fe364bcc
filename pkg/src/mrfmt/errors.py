"""Exception types shared across the library."""


class SamplingStarvedError(RuntimeError):
    """Free-space rejection sampling exhausted its attempt budget."""


class QueryInCollisionError(ValueError):
    """An init or goal configuration is in collision."""


class RenderUnsupportedError(ValueError):
    """The scenario's space has no supported planar projection."""
