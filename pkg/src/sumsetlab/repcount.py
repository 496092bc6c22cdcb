"""Representation functions of integer sets."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from . import kernels
from .core import IntegerSet, Window
from .errors import ConfigurationError, DomainError

log = logging.getLogger(__name__)

ENGINES = ("naive", "convolution")
NAIVE_MAX_H = 5
ROUNDING_GUARD = 0.25


@dataclass(frozen=True)
class RepProfile:
    """``counts[j]`` is the number of multisets of size ``h`` from the set summing to ``j``."""

    h: int
    counts: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.counts.flags.writeable = False

    @property
    def max_sum(self) -> int:
        return self.counts.size - 1


@dataclass(frozen=True)
class SigmaDeltaProfile:
    """Ordered-pair sum counts ``sigma[m]`` (m in 0..2n) and positive-difference
    counts ``delta[m]`` (m in 1..n; ``delta[0]`` is held at 0)."""

    sigma: np.ndarray = field(repr=False)
    delta: np.ndarray = field(repr=False)


# ---------------------------------------------------------------------------
# convolution helpers


def _fft_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Integer convolution through a float FFT, or None if rounding is unsafe."""
    out_len = a.size + b.size - 1
    size = scipy.fft.next_fast_len(out_len, real=True)
    fa = scipy.fft.rfft(a.astype(np.float64), size)
    fb = fa if b is a else scipy.fft.rfft(b.astype(np.float64), size)
    raw = scipy.fft.irfft(fa * fb, size)[:out_len]
    rounded = np.rint(raw)
    if out_len and np.max(np.abs(raw - rounded)) >= ROUNDING_GUARD:
        return None
    return rounded.astype(np.int64)


def _exact_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ai = np.flatnonzero(a)
    bi = np.flatnonzero(b)
    return kernels.sparse_convolve(
        ai, a[ai].astype(np.int64), bi, b[bi].astype(np.int64), a.size + b.size - 1
    )


def int_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact convolution of nonnegative integer arrays."""
    out = _fft_convolve(a, b)
    if out is None:
        log.warning("FFT rounding residual above %.2f; using exact convolution", ROUNDING_GUARD)
        out = _exact_convolve(a, b)
    return out


def _dilate(ind: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros(k * (ind.size - 1) + 1, np.int64)
    out[::k] = ind
    return out


def _convolution_counts(A: IntegerSet, h: int) -> np.ndarray:
    ind = A.indicator()
    if h == 2:
        ordered = int_convolve(ind, ind)
        diag = _dilate(ind, 2)
        total = ordered + diag
        if np.any(total & 1):
            raise ArithmeticError("ordered pair counts inconsistent with diagonal")
        return total // 2
    # h == 3: Burnside over S_3, (x1^3 + 3 x1 x2 + 2 x3) / 6
    pair = int_convolve(ind, ind)
    ordered = int_convolve(pair, ind)
    mixed = int_convolve(_dilate(ind, 2), ind)
    triple = _dilate(ind, 3)
    total = ordered + 3 * mixed + 2 * triple
    if np.any(total % 6):
        raise ArithmeticError("ordered triple counts not divisible by 6")
    return total // 6


def rep_counts(A: IntegerSet, h: int = 2, engine: str = "convolution") -> RepProfile:
    """Count the nondecreasing h-tuples from ``A`` with each sum in ``0..h*n``."""
    if engine not in ENGINES:
        raise ConfigurationError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if h < 2:
        raise ConfigurationError(f"h must be >= 2, got {h}")
    out_len = h * A.n + 1
    if engine == "naive":
        if h > NAIVE_MAX_H:
            raise ConfigurationError(f"naive engine supports h <= {NAIVE_MAX_H}, got {h}")
        if h == 2:
            counts = kernels.pair_counts(A.members, out_len)
        else:
            counts = kernels.multiset_counts(A.members, h, out_len)
    else:
        if h not in (2, 3):
            raise ConfigurationError(f"convolution engine supports h in (2, 3), got {h}")
        counts = _convolution_counts(A, h)
    return RepProfile(h, np.ascontiguousarray(counts, dtype=np.int64))


def multiset_total(size: int, h: int) -> int:
    return math.comb(size + h - 1, h)


def sigma_delta(A: IntegerSet) -> SigmaDeltaProfile:
    ind = A.indicator()
    sigma = int_convolve(ind, ind)
    # delta[m] = sum_b ind[b + m] ind[b]: convolve with the reversed indicator
    corr = int_convolve(ind, ind[::-1])
    delta = corr[A.n:].copy()
    delta[0] = 0
    return SigmaDeltaProfile(sigma, delta)


def underrepresented_count(profile: RepProfile, w: Window, g: int) -> int:
    """Number of ``j`` in the window with at most ``g - 1`` representations."""
    if g < 1:
        raise DomainError(f"g must be >= 1, got {g}")
    if w.lo < 0 or w.hi > profile.max_sum:
        raise DomainError(f"window [{w.lo}, {w.hi}] exceeds profile range [0, {profile.max_sum}]")
    return int(np.count_nonzero(profile.counts[w.lo:w.hi + 1] < g))
