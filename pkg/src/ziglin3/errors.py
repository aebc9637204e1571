"""Typed errors raised by the pipeline stages."""


class Ziglin3Error(Exception):
    """Base class for all package errors."""


class CollisionError(Ziglin3Error):
    """A mutual distance hit zero (or the configured threshold).

    Attributes
    ----------
    pair : str
        Which distance vanished, e.g. "r2" or "P1-P3".
    value : float
        The offending distance.
    """

    def __init__(self, pair, value):
        self.pair = pair
        self.value = value
        super().__init__(f"collision: distance {pair} = {value!r}")


class PoleError(Ziglin3Error):
    """Evaluation requested at a pole of the orbit parametrization."""


class ClearanceError(Ziglin3Error):
    """A transport path runs too close to a singular point."""


class StepSizeError(Ziglin3Error):
    """Adaptive integration failed (step-size underflow or solver abort)."""


class NonFuchsianError(Ziglin3Error):
    """Pole of order >= 2 detected where a simple pole was required."""


class ChartError(Ziglin3Error):
    """Degenerate chart or frame; basepoint must be moved."""


class PipelineError(Ziglin3Error):
    """A certification stage failed; carries the stage name."""

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"stage '{stage}' failed: {message}")
