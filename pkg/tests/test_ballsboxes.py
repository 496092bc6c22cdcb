import math

import numpy as np
import pytest
from scipy import integrate, stats
from scipy.special import gammaincc

from sumsetlab import theory as T
from sumsetlab.ballsboxes import AllocationResult, allocate, overfull_underfull, waiting_time, waiting_times
from sumsetlab.errors import DomainError


def exact_mean_waiting_time(N, g):
    """E(V_g) = N * integral of P(T > t), T the Poissonised covering time."""
    f = lambda t: -math.expm1(N * math.log1p(-gammaincc(g, t)))
    mid = math.log(N) + (g - 1) * math.log(math.log(N) + 1)
    val, _ = integrate.quad(f, 0, 10 * mid + 50, points=[mid], limit=400)
    return N * val


def test_allocate_trivial():
    assert not allocate(0, 5, 1).occupancy.any()
    assert allocate(7, 1, 1).occupancy.tolist() == [7]
    with pytest.raises(DomainError):
        allocate(3, 0, 1)


def test_allocate_uniform():
    total = np.zeros(100)
    for seed in range(1, 501):
        res = allocate(10**4, 100, seed)
        assert res.occupancy.sum() == 10**4
        total += res.occupancy
    assert total.mean() / 500 == pytest.approx(100.0)
    assert stats.chisquare(total).pvalue > 0.01


def test_overfull_underfull():
    res = AllocationResult(3, 3, np.array([0, 1, 2]))
    assert overfull_underfull(res, 1) == (1, 1)
    res = AllocationResult(3, 9, np.array([3, 3, 3]))
    assert overfull_underfull(res, 3)[1] == 0


def test_packing_regimes():
    N, g = 10**5, 2
    thr = N ** (g / (g + 1))
    sparse = [overfull_underfull(allocate(round(thr / 10), N, s), g)[0] == 0 for s in range(200)]
    dense = [overfull_underfull(allocate(round(thr * 10), N, s), g)[0] == 0 for s in range(200)]
    assert np.mean(sparse) >= 0.9
    assert np.mean(dense) <= 0.1


def test_waiting_time_trivial():
    assert waiting_time(1, 1, 5) == 1
    assert waiting_time(1, 3, 5) == 3


@pytest.mark.parametrize("g", [1, 2, 3])
def test_waiting_time_mean_matches_exact_law(g):
    N, trials = 1000, 600
    v = np.array([waiting_time(N, g, s) for s in range(trials)], dtype=float)
    se = v.std(ddof=1) / math.sqrt(trials)
    assert abs(v.mean() - exact_mean_waiting_time(N, g)) <= 4 * se


def test_exact_mean_g1_is_harmonic():
    N = 500
    harmonic = N * sum(1 / k for k in range(1, N + 1))
    assert exact_mean_waiting_time(N, 1) == pytest.approx(harmonic, rel=1e-6)


def test_waiting_times_coupled_and_consistent():
    N = 200
    for seed in range(20):
        vs = waiting_times(N, 4, seed)
        assert np.all(np.diff(vs) > 0)
        for g in range(1, 5):
            vg = int(vs[g - 1])
            assert waiting_time(N, g, seed) == vg
            before = allocate(vg - 1, N, seed)
            at = allocate(vg, N, seed)
            assert overfull_underfull(before, g)[1] >= 1
            assert overfull_underfull(at, g)[1] == 0


def test_normalized_waiting_time_g1_gumbel():
    N, trials = 2000, 1500
    v = np.array([waiting_time(N, 1, s) for s in range(trials)])
    u = T.normalized_waiting_time(v, N, 1)
    ks = stats.kstest(u, T.holst_cdf).statistic
    assert ks < 0.05
