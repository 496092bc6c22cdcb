"""Set predicates: B_h[g], Sidon, truncated additive basis, sigma/delta bounds."""

from __future__ import annotations

import numpy as np

from .core import IntegerSet, window_bounds
from .repcount import rep_counts, sigma_delta, underrepresented_count


def is_bhg(A: IntegerSet, h: int, g: int, engine: str = "convolution") -> bool:
    """True when every integer has at most ``g`` representations as an h-sum."""
    counts = rep_counts(A, h, engine).counts
    return counts.size == 0 or int(counts.max()) <= g


def is_sidon(A: IntegerSet, h: int = 2, engine: str = "convolution") -> bool:
    return is_bhg(A, h, 1, engine)


def is_truncated_basis(
    A: IntegerSet, alpha: float, h: int = 2, g: int = 1, engine: str = "convolution"
) -> bool:
    """True when each ``j`` in ``[ceil(alpha n), floor((h - alpha) n)]`` has ``>= g`` representations."""
    w = window_bounds(A.n, alpha, h)
    return underrepresented_count(rep_counts(A, h, engine), w, g) == 0


def max_sigma_delta(A: IntegerSet) -> tuple[int, int, int]:
    """``(max sigma, max delta, max over m of sigma[m] + delta[m])``.

    ``delta`` is treated as zero outside ``1..n``.
    """
    if len(A) == 0:
        return 0, 0, 0
    prof = sigma_delta(A)
    combined = prof.sigma.copy()
    combined[: prof.delta.size] += prof.delta
    return int(prof.sigma.max()), int(prof.delta.max()), int(combined.max())
