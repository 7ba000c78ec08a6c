from dataclasses import asdict, dataclass, fields
from typing import Dict, Union

from .errors import ResourceModelError

Number = Union[int, float]

METRICS = ("cx_count", "rz_count", "t_count", "cx_depth", "rz_depth", "t_depth")
COUNT_METRICS = ("cx_count", "rz_count", "t_count")
DEPTH_METRICS = ("cx_depth", "rz_depth", "t_depth")


@dataclass(frozen=True)
class CostVector:
    """
    Per-gate-class counts and depths of a circuit block.

    Counts and depths are additive under sequential composition,
    so `combine` is the serial product of two blocks.
    """
    cx_count: Number = 0
    rz_count: Number = 0
    t_count: Number = 0
    cx_depth: Number = 0
    rz_depth: Number = 0
    t_depth: Number = 0

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ResourceModelError(f"[CostVector] negative {f.name}: {getattr(self, f.name)}")

    def combine(self, other: "CostVector") -> "CostVector":
        return CostVector(**{m: getattr(self, m) + getattr(other, m) for m in METRICS})

    def scaled_by(self, factor: Number) -> "CostVector":
        if factor < 0:
            raise ResourceModelError("scale factor must be non-negative")
        return CostVector(**{m: getattr(self, m) * factor for m in METRICS})

    def with_t(self, t_eps: Number) -> "CostVector":
        """
        Fill the T entries of a rotation-only block from its Rz entries
        """
        return CostVector(self.cx_count, self.rz_count, self.rz_count * t_eps,
                          self.cx_depth, self.rz_depth, self.rz_depth * t_eps)

    def get(self, metric: str) -> Number:
        if metric not in METRICS:
            raise ResourceModelError(f"unknown metric {metric!r}, expected one of {METRICS}")
        return getattr(self, metric)

    def to_dict(self) -> Dict[str, Number]:
        return asdict(self)

    def __add__(self, other: "CostVector") -> "CostVector":
        return self.combine(other)

    def __mul__(self, factor: Number) -> "CostVector":
        return self.scaled_by(factor)

    __rmul__ = __mul__


ZERO = CostVector()


def total(*blocks: CostVector) -> CostVector:
    out = ZERO
    for block in blocks:
        out = out.combine(block)
    return out
