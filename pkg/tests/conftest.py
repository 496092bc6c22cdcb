import itertools
from collections import Counter

import numpy as np
import pytest

from sumsetlab.core import IntegerSet

_ACCEPTANCE_LINES: list[str] = []


def report(criterion: int, name: str, passed: bool, detail: str = "") -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion:>2}: {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# --- independent brute-force oracles ---------------------------------------


def brute_rep_counts(members, h, n):
    counts = np.zeros(h * n + 1, np.int64)
    for combo in itertools.combinations_with_replacement(sorted(members), h):
        counts[sum(combo)] += 1
    return counts


def brute_pair_reps(members):
    """Unordered pair counts a <= b via a quadratic loop."""
    c = Counter()
    ms = sorted(members)
    for i in range(len(ms)):
        for j in range(i, len(ms)):
            c[ms[i] + ms[j]] += 1
    return c


def brute_sigma_delta(members):
    sigma, delta = Counter(), Counter()
    for a in members:
        for b in members:
            sigma[a + b] += 1
            if a - b >= 1:
                delta[a - b] += 1
    return sigma, delta


def brute_is_bhg2(members, g):
    c = brute_pair_reps(members)
    return all(v <= g for v in c.values())


def all_subsets(n):
    """Every subset of {0..n} as an IntegerSet."""
    for mask in range(1 << (n + 1)):
        yield IntegerSet(n, [i for i in range(n + 1) if mask >> i & 1])


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
