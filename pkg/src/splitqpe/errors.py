from typing import List


class SplitQPEError(ValueError):
    """
    Base class of every error raised by splitqpe.
    Subclasses ValueError so callers catching bad input keep working.
    """


class DenseCapError(SplitQPEError):
    pass


class NonHermitianError(SplitQPEError):
    pass


class CircuitError(SplitQPEError):
    pass


class MeasurementError(SplitQPEError):
    pass


class DegenerateStateError(SplitQPEError):
    pass


class DistributionError(SplitQPEError):
    pass


class ResourceModelError(SplitQPEError):
    pass


class ConfigError(SplitQPEError):
    pass


class AcceptanceError(SplitQPEError):
    def __init__(self, failed: List[str]):
        self.failed = list(failed)
        super().__init__(f"acceptance checks failed: {', '.join(self.failed)}")
