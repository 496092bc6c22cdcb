"""Closed-form and exact-numeric evaluators for the threshold theory.

All logarithms are natural. Binomial tail terms are evaluated in log space
(``log1p`` for the ``(1 - p^2)^m`` factor) so that nothing underflows at
``n ~ 2^22``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import ThresholdSpec, window_bounds
from .errors import DomainError, UnsupportedCombinationError

EULER_GAMMA = 0.5772156649015329


class LambdaMode(str, Enum):
    EXACT = "exact"
    PAPER = "paper"
    ASYMPTOTIC = "asymptotic"


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")


def _check_g(g: int) -> None:
    if g < 1:
        raise DomainError(f"g must be >= 1, got {g}")


# ---------------------------------------------------------------------------
# thresholds and limit laws


def basis_constant(alpha: float, h: int) -> float:
    """``K = h! (h-1)! / alpha^(h-1)`` for the truncated (alpha, h) basis threshold."""
    return math.factorial(h) * math.factorial(h - 1) / alpha ** (h - 1)


def _checked_root(radicand: float, n: int, power: int, h: int) -> float:
    if not radicand > 0.0:
        raise DomainError(f"threshold radicand is nonpositive ({radicand:.6g}); increase n or A")
    p = (radicand / n ** (power)) ** (1.0 / h)
    if not p < 1.0:
        raise DomainError(f"threshold probability {p:.6g} is not below 1; increase n or decrease A")
    return p


def threshold_p_basis(n: int, alpha: float, h: int, A: float) -> float:
    """Selection probability ``((K ln n - K ln ln n + A) / n^(h-1))^(1/h)``, g = 1."""
    K = basis_constant(alpha, h)
    L = math.log(n)
    return _checked_root(K * L - K * math.log(L) + A, n, h - 1, h)


def threshold_p_two_sums(n: int, alpha: float, g: int, A: float) -> float:
    """Selection probability ``sqrt(((2/a) ln n + (g-2)(2/a) ln ln n + A) / n)`` for h = 2."""
    L = math.log(n)
    c = 2.0 / alpha
    return _checked_root(c * L + (g - 2) * c * math.log(L) + A, n, 1, 2)


def threshold_p(spec: ThresholdSpec) -> float:
    if spec.h == 2:
        return threshold_p_two_sums(spec.n, spec.alpha, spec.g, spec.A)
    if spec.g == 1:
        return threshold_p_basis(spec.n, spec.alpha, spec.h, spec.A)
    raise UnsupportedCombinationError(f"no threshold for h={spec.h}, g={spec.g}")


def limit_probability_basis(alpha: float, h: int, A: float) -> float:
    K = basis_constant(alpha, h)
    return math.exp(-2.0 * alpha / (h - 1) * math.exp(-A / K))


def limit_probability_two_sums(alpha: float, g: int, A: float) -> float:
    return math.exp(-2.0 * alpha / math.factorial(g - 1) * math.exp(-A * alpha / 2.0))


def limit_probability(spec: ThresholdSpec) -> float:
    """Limit of P(truncated basis) when the offset converges to ``spec.A``."""
    if spec.h == 2:
        return limit_probability_two_sums(spec.alpha, spec.g, spec.A)
    if spec.g == 1:
        return limit_probability_basis(spec.alpha, spec.h, spec.A)
    raise UnsupportedCombinationError(f"no limit law for h={spec.h}, g={spec.g}")


# ---------------------------------------------------------------------------
# P(j underrepresented)


def _binom_cdf_small(m: np.ndarray, q: float, k: int) -> np.ndarray:
    """P(Binomial(m, q) <= k) for small k, summed term by term in log space."""
    m = np.asarray(m, dtype=np.float64)
    out = np.zeros_like(m)
    if k < 0:
        return out
    log_q = math.log(q)
    log_1mq = math.log1p(-q)
    log_falling = np.zeros_like(m)  # log m (m-1) ... (m-s+1)
    for s in range(k + 1):
        if s:
            with np.errstate(divide="ignore", invalid="ignore"):
                log_falling = log_falling + np.log(m - (s - 1))
        valid = m >= s
        term = log_falling - math.lgamma(s + 1) + s * log_q + (m - s) * log_1mq
        out += np.where(valid, np.exp(np.where(valid, term, -np.inf)), 0.0)
    return np.minimum(out, 1.0)


def _off_diagonal_pairs(j: np.ndarray, n: int) -> np.ndarray:
    # pairs {a, j-a} with max(0, j-n) <= a < j-a
    return (j + 1) // 2 - np.maximum(0, j - n)


def indicator_probs(js, n: int, p: float, g: int, mode: str = "exact") -> np.ndarray:
    """Vectorised :func:`indicator_prob` over an array of targets."""
    _check_p(p)
    _check_g(g)
    js = np.asarray(js, dtype=np.int64)
    if np.any(js < 0) or np.any(js > 2 * n):
        raise DomainError(f"targets must lie in [0, {2 * n}]")
    q = p * p
    mode = LambdaMode(mode)
    if mode is LambdaMode.PAPER:
        return _binom_cdf_small(js // 2, q, g - 1)
    if mode is not LambdaMode.EXACT:
        raise DomainError("indicator_prob supports modes 'exact' and 'paper'")
    m = _off_diagonal_pairs(js, n)
    no_diag = _binom_cdf_small(m, q, g - 1)
    with_diag = (1.0 - p) * no_diag + p * _binom_cdf_small(m, q, g - 2)
    return np.where(js % 2 == 0, with_diag, no_diag)


def indicator_prob(j: int, n: int, p: float, g: int, mode: str = "exact") -> float:
    """Probability that ``j`` has at most ``g - 1`` representations as a 2-sum.

    ``exact`` treats the off-diagonal pairs ``{a, j - a}`` inside ``[0, n]`` as
    independent successes of probability ``p^2`` and the diagonal pair
    ``{j/2, j/2}`` as one of probability ``p``. ``paper`` uses ``floor(j/2)``
    pairs of probability ``p^2`` and ignores the boundary.
    """
    return float(indicator_probs(np.array([j]), n, p, g, mode)[0])


# ---------------------------------------------------------------------------
# lambda = E(X)


def poisson_lambda(n: int, alpha: float, p: float, g: int, mode: str = "exact") -> float:
    """Expected number of underrepresented targets in the window (h = 2)."""
    _check_p(p)
    _check_g(g)
    mode = LambdaMode(mode)
    w = window_bounds(n, alpha, 2)
    if mode is LambdaMode.EXACT:
        js = np.arange(w.lo, w.hi + 1, dtype=np.int64)
        return float(np.sum(indicator_probs(js, n, p, g, "exact")))
    if mode is LambdaMode.PAPER:
        js = np.arange(w.lo, n + 1, dtype=np.int64)
        return float(2.0 * np.sum(indicator_probs(js, n, p, g, "paper")))
    x = alpha * n * p * p / 2.0
    if not n * p * p > 1.0:
        raise DomainError(f"asymptotic lambda needs n p^2 > 1, got {n * p * p:.4g}")
    log_val = (
        math.log(4.0) - 2.0 * math.log(p) - math.lgamma(g) + (g - 1) * math.log(x) - x
    )
    return math.exp(log_val)


def lower_bound_term(n: int, alpha: float, p: float, g: int) -> float:
    """``2 sum_j C(floor(j/2), g-1) p^(2g-2) (1-p^2)^(floor(j/2)-g+1)``, the last term only."""
    _check_p(p)
    _check_g(g)
    w = window_bounds(n, alpha, 2)
    m = (np.arange(w.lo, n + 1, dtype=np.int64) // 2).astype(np.float64)
    k = g - 1
    q = p * p
    with np.errstate(divide="ignore", invalid="ignore"):
        log_falling = np.zeros_like(m)
        for i in range(k):
            log_falling = log_falling + np.log(m - i)
        term = log_falling - math.lgamma(k + 1) + k * math.log(q) + (m - k) * math.log1p(-q)
    return float(2.0 * np.sum(np.where(m >= k, np.exp(term), 0.0)))


# ---------------------------------------------------------------------------
# Stein-Chen


def t1_component(n: int, alpha: float, p: float, g: int) -> float:
    """Exact ``P(I_lo = 1)`` at the window's lower edge, which dominates T1."""
    lo = window_bounds(n, alpha, 2).lo
    return indicator_prob(lo, n, p, g, "exact")


def stein_chen_bound(
    n: int, alpha: float, p: float, g: int, K_corr: float = 1.0, L_t1: float = 1.0
) -> float:
    """``L x^(g-1) e^(-x) + K lambda / (n p)`` with ``x = alpha n p^2 / 2``."""
    if not (K_corr > 0 and L_t1 > 0):
        raise DomainError("K_corr and L_t1 must be positive")
    lam = poisson_lambda(n, alpha, p, g, "exact")
    x = alpha * n * p * p / 2.0
    first = L_t1 * math.exp((g - 1) * math.log(x) - x) if g > 1 else L_t1 * math.exp(-x)
    return first + K_corr * lam / (n * p)


# ---------------------------------------------------------------------------
# balls in boxes


@dataclass(frozen=True)
class BallsBoxesFormulas:
    packing_threshold: float
    coverage_threshold: float
    mean_vg: float


def balls_boxes_formulas(N: int, g: int) -> BallsBoxesFormulas:
    """Packing threshold ``N^(g/(g+1))``, coverage threshold and Holst's mean waiting time."""
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    _check_g(g)
    L = math.log(N)
    LL = math.log(L)
    return BallsBoxesFormulas(
        packing_threshold=N ** (g / (g + 1)),
        coverage_threshold=N * (L + (g - 1) * LL),
        mean_vg=N * (L + (g - 1) * LL + EULER_GAMMA - math.lgamma(g)),
    )


def normalized_waiting_time(v, N: int, g: int):
    """``V/N - ln N - (g-1) ln ln N + ln (g-1)!``."""
    L = math.log(N)
    return np.asarray(v, dtype=np.float64) / N - L - (g - 1) * math.log(L) + math.lgamma(g)


def holst_cdf(u):
    """Gumbel limit ``exp(-e^(-u))`` of the normalised waiting time."""
    return np.exp(-np.exp(-np.asarray(u, dtype=np.float64)))


def bhg_threshold_size(n: int, h: int, g: int) -> float:
    """Expected-size threshold ``n^(g / (h (g+1)))`` for the B_h[g] property."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return float(n) ** (g / (h * (g + 1)))
