import numpy as np
import pytest
from hypothesis import given, strategies as st

from sumsetlab.core import (
    IntegerSet,
    ThresholdSpec,
    Window,
    derive_seed,
    format_set,
    read_set,
    sample_set,
    window_bounds,
)
from sumsetlab.errors import DomainError, UnsupportedCombinationError


@pytest.mark.parametrize(
    "n, alpha, h, expected",
    [(100, 0.25, 2, (25, 175)), (10, 0.33, 2, (4, 16)), (100, 0.5, 3, (50, 250)),
     (10**5, 0.3, 2, (30000, 170000))],
)
def test_window_bounds(n, alpha, h, expected):
    assert window_bounds(n, alpha, h) == Window(*expected)


@pytest.mark.parametrize("n, alpha", [(0, 0.5), (10, 0.0), (10, 1.0), (10, -0.2)])
def test_window_bounds_domain(n, alpha):
    with pytest.raises(DomainError):
        window_bounds(n, alpha, 2)


@given(st.integers(1, 10**6), st.integers(1, 99))
def test_window_symmetric_about_n(n, pct):
    alpha = pct / 100
    w = window_bounds(n, alpha, 2)
    if (n * pct) % 100 == 0:
        assert w.lo + w.hi == 2 * n
    assert w.lo <= n <= w.hi


def test_integer_set_invariants():
    with pytest.raises(DomainError):
        IntegerSet(5, [1, 1, 2])
    with pytest.raises(DomainError):
        IntegerSet(5, [3, 2])
    with pytest.raises(DomainError):
        IntegerSet(5, [0, 6])
    A = IntegerSet.from_iterable(10, [5, 1, 5, 3])
    assert list(A) == [1, 3, 5]
    assert 3 in A and 4 not in A
    with pytest.raises(ValueError):
        A.members[0] = 2
    assert list(A.reflect()) == [5, 7, 9]


def test_threshold_spec_validation():
    ThresholdSpec(100, 0.5, 2, 3, 1.0)
    ThresholdSpec(100, 0.5, 4, 1, 1.0)
    with pytest.raises(UnsupportedCombinationError):
        ThresholdSpec(100, 0.5, 3, 2)
    with pytest.raises(DomainError):
        ThresholdSpec(100, 1.5)


def test_sample_set_extremes():
    assert len(sample_set(5, 0.0, 123)) == 0
    assert list(sample_set(5, 1.0, 123)) == [0, 1, 2, 3, 4, 5]
    with pytest.raises(DomainError):
        sample_set(5, 1.5, 0)
    with pytest.raises(DomainError):
        sample_set(5, -0.1, 0)


@given(st.integers(0, 2000), st.floats(0, 1), st.integers(0, 2**64 - 1))
def test_sample_set_is_pure(n, p, seed):
    assert sample_set(n, p, seed) == sample_set(n, p, seed)


def test_sample_set_binomial_mean():
    n, p = 10**4, 0.1
    sizes = np.array([len(sample_set(n, p, s)) for s in range(1, 1001)])
    mean, var = (n + 1) * p, (n + 1) * p * (1 - p)
    se = np.sqrt(var / sizes.size)
    assert abs(sizes.mean() - mean) <= 3 * se
    # sample variance also consistent with Binomial(n+1, p)
    assert abs(sizes.var(ddof=1) / var - 1) < 0.15


def test_sample_set_uniform_positions():
    # a Bernoulli(p) set should hit each tenth of the range equally often
    hits = np.zeros(10)
    for s in range(200):
        A = sample_set(9999, 0.05, s)
        hits += np.bincount(A.members // 1000, minlength=10)
    expected = hits.sum() / 10
    chi2 = ((hits - expected) ** 2 / expected).sum()
    assert chi2 < 21.67  # chi-square 9 dof, 1% level


def test_derive_seed_distinct():
    seeds = {derive_seed(7, i) for i in range(10000)}
    assert len(seeds) == 10000
    assert all(0 <= s < 2**64 for s in seeds)


def test_set_text_round_trip(tmp_path):
    A = IntegerSet(20, [0, 3, 7, 20])
    path = tmp_path / "a.txt"
    path.write_text(format_set(A))
    assert path.read_text().splitlines()[0] == "n=20"
    assert read_set(path) == A
    path.write_text("n=5\n3\n2\n")
    with pytest.raises(DomainError):
        read_set(path)
    path.write_text("5\n3\n")
    with pytest.raises(DomainError):
        read_set(path)
