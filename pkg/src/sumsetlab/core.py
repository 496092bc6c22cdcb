"""Domain types, window arithmetic and random subset sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DomainError, UnsupportedCombinationError

SEED_SCALE = kernels.GAMMA


@dataclass(frozen=True)
class IntegerSet:
    """A finite subset of ``{0, 1, ..., n}`` stored as a sorted int64 array."""

    n: int
    members: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"n must be nonnegative, got {self.n}")
        arr = np.array(self.members, dtype=np.int64).ravel()
        if arr.size:
            if arr[0] < 0 or arr[-1] > self.n:
                raise DomainError(f"members must lie in [0, {self.n}]")
            if np.any(np.diff(arr) <= 0):
                raise DomainError("members must be strictly increasing")
        arr.flags.writeable = False
        object.__setattr__(self, "members", arr)

    @classmethod
    def from_iterable(cls, n: int, values: Iterable[int]) -> "IntegerSet":
        return cls(n, np.unique(np.fromiter(values, dtype=np.int64)))

    def __len__(self) -> int:
        return int(self.members.size)

    def __iter__(self):
        return iter(self.members.tolist())

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.members, x)
        return bool(i < self.members.size and self.members[i] == x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((self.n, self.members.tobytes()))

    def indicator(self) -> np.ndarray:
        ind = np.zeros(self.n + 1, np.int64)
        ind[self.members] = 1
        return ind

    def reflect(self) -> "IntegerSet":
        """The set ``{n - a : a in A}``."""
        return IntegerSet(self.n, (self.n - self.members)[::-1])


@dataclass(frozen=True)
class ThresholdSpec:
    n: int
    alpha: float
    h: int = 2
    g: int = 1
    A: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.h < 2:
            raise DomainError(f"h must be >= 2, got {self.h}")
        if self.g < 1:
            raise DomainError(f"g must be >= 1, got {self.g}")
        if not math.isfinite(self.A):
            raise DomainError(f"A must be finite, got {self.A}")
        if self.h != 2 and self.g != 1:
            raise UnsupportedCombinationError(
                f"no threshold is available for h={self.h}, g={self.g}; need h=2 or g=1"
            )


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError(f"empty window [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1


def window_bounds(n: int, alpha: float, h: int = 2) -> Window:
    """Integer target window ``[ceil(alpha n), floor((h - alpha) n)]``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if h < 2:
        raise DomainError(f"h must be >= 2, got {h}")
    # round away tiny float noise so that e.g. 0.3 * 10 gives 3, not 4
    lo = math.ceil(round(alpha * n, 9))
    hi = math.floor(round((h - alpha) * n, 9))
    return Window(lo, hi)


def expand_seed(seed: int) -> np.uint64:
    """Stream key for a user seed (one SplitMix64 step)."""
    return np.uint64(kernels.splitmix64(int(seed) & kernels.MASK64))


def derive_seed(master_seed: int, index: int) -> int:
    """Per-trial seed: SplitMix64 of ``master_seed XOR (index * GAMMA)``."""
    return kernels.splitmix64((int(master_seed) ^ (index * SEED_SCALE)) & kernels.MASK64)


def sample_set(n: int, p: float, seed: int) -> IntegerSet:
    """Include each of ``0..n`` independently with probability ``p``."""
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    members = kernels.bernoulli_members(int(n), float(p), expand_seed(seed))
    return IntegerSet(int(n), members)


def read_set(path) -> IntegerSet:
    """Parse the text format: a ``n=<value>`` header, then one integer per line."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise DomainError(f"{path}: first line must be 'n=<value>'")
    n = int(lines[0][2:])
    values = [int(ln) for ln in lines[1:]]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"{path}: members must be strictly ascending")
    return IntegerSet(n, np.array(values, dtype=np.int64))


def format_set(A: IntegerSet) -> str:
    return "".join([f"n={A.n}\n"] + [f"{a}\n" for a in A.members.tolist()])


def write_set(A: IntegerSet, path) -> None:
    Path(path).write_text(format_set(A))
