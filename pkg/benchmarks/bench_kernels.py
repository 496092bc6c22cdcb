"""Compare the numba kernels with their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Both paths are imported directly, so the SUMSETLAB_DISABLE_JIT flag does not
matter here. Every pair of outputs is checked for equality before timing.
"""

import argparse
import time

import numpy as np

from sumsetlab import kernels as K
from sumsetlab.core import IntegerSet, ThresholdSpec, expand_seed
from sumsetlab.repcount import rep_counts
from sumsetlab.theory import threshold_p


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    n = 2**20
    p = threshold_p(ThresholdSpec(n, 0.5, 2, 2, 0.0))
    key = expand_seed(1)
    members = K.bernoulli_members_nb(n, p, key)
    small = members[:400]
    cases = [
        ("bernoulli n=2^20", lambda f: f(n, p, key), K.bernoulli_members_nb, K.bernoulli_members_np),
        (f"pair counts |A|={members.size}", lambda f: f(members, 2 * n + 1), K.pair_counts_nb, K.pair_counts_np),
        ("triples |A|=400", lambda f: f(small, 3, 3 * n + 1), K.multiset_counts_nb, K.multiset_counts_np),
        ("occupancy 10^6 balls", lambda f: f(10**6, 10**5, key), K.occupancy_nb, K.occupancy_np),
        ("waiting times N=10^4 g=3", lambda f: f(10**4, 3, key), K.waiting_times_nb, K.waiting_times_np),
    ]
    print(f"{'kernel':<32}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call, nb, np_ in cases:
        assert np.array_equal(call(nb), call(np_)), name
        t_nb = best_of(lambda: call(nb), args.repeat)
        t_np = best_of(lambda: call(np_), args.repeat)
        print(f"{name:<32}{t_nb * 1e3:>12.2f}{t_np * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")

    A = IntegerSet(n, members)
    rep_counts(A, 2, "naive")
    t_conv = best_of(lambda: rep_counts(A, 2, "convolution"), args.repeat)
    t_naive = best_of(lambda: rep_counts(A, 2, "naive"), args.repeat)
    print(f"\nrep_counts h=2 at n=2^20: convolution {t_conv * 1e3:.1f} ms, naive {t_naive * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
