"""Random allocation of balls to boxes and coupon-collector waiting times."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import expand_seed
from .errors import DomainError


@dataclass(frozen=True)
class AllocationResult:
    N: int
    n: int
    occupancy: np.ndarray = field(repr=False)

    def __post_init__(self):
        if int(self.occupancy.sum()) != self.n:
            raise ValueError("occupancy does not sum to the number of balls")
        self.occupancy.flags.writeable = False


def allocate(n_balls: int, N_boxes: int, seed: int) -> AllocationResult:
    """Throw ``n_balls`` independently and uniformly into ``N_boxes`` boxes.

    The throws are the first ``n_balls`` of the stream that
    :func:`waiting_time` consumes for the same seed.
    """
    if N_boxes < 1:
        raise DomainError(f"N_boxes must be >= 1, got {N_boxes}")
    if n_balls < 0:
        raise DomainError(f"n_balls must be >= 0, got {n_balls}")
    occ = kernels.occupancy(int(n_balls), int(N_boxes), expand_seed(seed))
    return AllocationResult(int(N_boxes), int(n_balls), occ)


def overfull_underfull(result: AllocationResult, g: int) -> tuple[int, int]:
    """Boxes holding at least ``g + 1`` balls, and boxes holding at most ``g - 1``."""
    if g < 1:
        raise DomainError(f"g must be >= 1, got {g}")
    occ = result.occupancy
    return int(np.count_nonzero(occ >= g + 1)), int(np.count_nonzero(occ <= g - 1))


def waiting_times(N_boxes: int, g_max: int, seed: int) -> np.ndarray:
    """``[V_1, ..., V_gmax]`` measured on one shared stream of throws."""
    if N_boxes < 1:
        raise DomainError(f"N_boxes must be >= 1, got {N_boxes}")
    if g_max < 1:
        raise DomainError(f"g must be >= 1, got {g_max}")
    return kernels.waiting_times(int(N_boxes), int(g_max), expand_seed(seed))


def waiting_time(N_boxes: int, g: int, seed: int) -> int:
    """Number of throws until every box holds at least ``g`` balls."""
    return int(waiting_times(N_boxes, g, seed)[g - 1])
