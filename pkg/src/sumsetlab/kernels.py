"""Hot inner loops, each in two flavours.

``*_nb`` functions are numba-compiled loops; ``*_np`` functions are
vectorised numpy equivalents that produce bit-identical output. The public
names at the bottom of the module are bound to one or the other depending on
:data:`sumsetlab._jit.JIT_ENABLED`.

Random numbers come from a counter-based SplitMix64 stream: output ``i`` of
the stream keyed by ``key`` is ``mix64(key + (i + 1) * GAMMA)``. Because each
draw is a pure function of ``(key, i)`` the numpy path can generate a block of
draws at once and still agree with the sequential loop.
"""

import numpy as np

from ._jit import JIT_ENABLED, njit

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
INV_2_53 = 1.0 / 9007199254740992.0

_U_GAMMA = np.uint64(GAMMA)
_U_MIX1 = np.uint64(MIX1)
_U_MIX2 = np.uint64(MIX2)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_U1 = np.uint64(1)


def splitmix64(x: int) -> int:
    """One SplitMix64 step on a Python int (advance by GAMMA, then mix)."""
    z = (x + GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


# ---------------------------------------------------------------------------
# random stream


@njit
def _mix64_nb(z):
    z = (z ^ (z >> _U30)) * _U_MIX1
    z = (z ^ (z >> _U27)) * _U_MIX2
    return z ^ (z >> _U31)


@njit
def _uniform_nb(key, i):
    z = key + (np.uint64(i) + _U1) * _U_GAMMA
    return np.float64(_mix64_nb(z) >> _U11) * INV_2_53


def _mix64_np(z):
    z = (z ^ (z >> _U30)) * _U_MIX1
    z = (z ^ (z >> _U27)) * _U_MIX2
    return z ^ (z >> _U31)


def uniforms_np(key: int, start: int, count: int) -> np.ndarray:
    """Draws ``start .. start+count-1`` of the stream as doubles in [0, 1)."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(key) + idx * _U_GAMMA
    return (_mix64_np(z) >> _U11).astype(np.float64) * INV_2_53


@njit
def uniforms_nb(key, start, count):
    out = np.empty(count, np.float64)
    k = np.uint64(key)
    for i in range(count):
        out[i] = _uniform_nb(k, start + i)
    return out


# ---------------------------------------------------------------------------
# Bernoulli subsets of {0, ..., n}


@njit
def bernoulli_members_nb(n, p, key):
    k = np.uint64(key)
    buf = np.empty(n + 1, np.int64)
    m = 0
    for i in range(n + 1):
        if _uniform_nb(k, i) < p:
            buf[m] = i
            m += 1
    return buf[:m].copy()


def bernoulli_members_np(n: int, p: float, key: int) -> np.ndarray:
    u = uniforms_np(key, 0, n + 1)
    return np.flatnonzero(u < p).astype(np.int64)


# ---------------------------------------------------------------------------
# naive enumeration of nondecreasing h-tuples


@njit
def pair_counts_nb(members, out_len):
    counts = np.zeros(out_len, np.int64)
    m = members.size
    for i in range(m):
        a = members[i]
        for j in range(i, m):
            counts[a + members[j]] += 1
    return counts


@njit
def triple_counts_nb(members, out_len):
    counts = np.zeros(out_len, np.int64)
    m = members.size
    for i in range(m):
        for j in range(i, m):
            s = members[i] + members[j]
            for k in range(j, m):
                counts[s + members[k]] += 1
    return counts


@njit
def multiset_counts_nb(members, h, out_len):
    if h == 2:
        return pair_counts_nb(members, out_len)
    if h == 3:
        return triple_counts_nb(members, out_len)
    counts = np.zeros(out_len, np.int64)
    m = members.size
    if m == 0:
        return counts
    idx = np.zeros(h, np.int64)
    while True:
        s = 0
        for t in range(h):
            s += members[idx[t]]
        counts[s] += 1
        t = h - 1
        while t >= 0 and idx[t] == m - 1:
            t -= 1
        if t < 0:
            break
        v = idx[t] + 1
        for u in range(t, h):
            idx[u] = v
    return counts


_CHUNK = 1 << 22


def multiset_counts_np(members: np.ndarray, h: int, out_len: int) -> np.ndarray:
    """Enumerate every nondecreasing h-tuple of ``members`` and histogram its sum.

    The first h-1 coordinates are enumerated explicitly; the last coordinate is
    broadcast per group of prefixes that share a final index.
    """
    counts = np.zeros(out_len, np.int64)
    m = members.size
    if m == 0:
        return counts
    members = members.astype(np.int64)
    # prefix sums over nondecreasing (h-1)-tuples, tagged with their last index
    sums = np.zeros(1, np.int64)
    last = np.zeros(1, np.int64)
    for _ in range(h - 1):
        reps = m - last
        offs = np.repeat(np.cumsum(reps) - reps, reps)
        new_last = np.repeat(last, reps) + (np.arange(reps.sum()) - offs)
        sums = np.repeat(sums, reps) + members[new_last]
        last = new_last
    order = np.argsort(last, kind="stable")
    sums, last = sums[order], last[order]
    bounds = np.searchsorted(last, np.arange(m + 1))
    pending, size = [], 0
    for r in range(m):
        prefix = sums[bounds[r]:bounds[r + 1]]
        if prefix.size == 0:
            continue
        block = (prefix[:, None] + members[None, r:]).ravel()
        pending.append(block)
        size += block.size
        if size >= _CHUNK:
            counts += np.bincount(np.concatenate(pending), minlength=out_len)
            pending, size = [], 0
    if pending:
        counts += np.bincount(np.concatenate(pending), minlength=out_len)
    return counts


def pair_counts_np(members: np.ndarray, out_len: int) -> np.ndarray:
    return multiset_counts_np(members, 2, out_len)


# ---------------------------------------------------------------------------
# exact integer convolution over the nonzero support (schoolbook)


@njit
def sparse_convolve_nb(a_idx, a_val, b_idx, b_val, out_len):
    out = np.zeros(out_len, np.int64)
    for i in range(a_idx.size):
        ai = a_idx[i]
        av = a_val[i]
        for j in range(b_idx.size):
            out[ai + b_idx[j]] += av * b_val[j]
    return out


def sparse_convolve_np(a_idx, a_val, b_idx, b_val, out_len: int) -> np.ndarray:
    out = np.zeros(out_len, np.int64)
    for i in range(a_idx.size):
        np.add.at(out, a_idx[i] + b_idx, a_val[i] * b_val)
    return out


# ---------------------------------------------------------------------------
# balls in boxes


@njit
def occupancy_nb(n_balls, n_boxes, key):
    occ = np.zeros(n_boxes, np.int64)
    k = np.uint64(key)
    for i in range(n_balls):
        occ[np.int64(_uniform_nb(k, i) * n_boxes)] += 1
    return occ


def occupancy_np(n_balls: int, n_boxes: int, key: int) -> np.ndarray:
    boxes = (uniforms_np(key, 0, n_balls) * n_boxes).astype(np.int64)
    return np.bincount(boxes, minlength=n_boxes).astype(np.int64)


@njit
def waiting_times_nb(n_boxes, g_max, key):
    """V_1..V_gmax on one throw stream, O(1) work per throw."""
    occ = np.zeros(n_boxes, np.int64)
    # deficit[k] = number of boxes still holding fewer than k+1 balls
    deficit = np.full(g_max, n_boxes, np.int64)
    out = np.zeros(g_max, np.int64)
    k = np.uint64(key)
    t = 0
    while deficit[g_max - 1] > 0:
        b = np.int64(_uniform_nb(k, t) * n_boxes)
        t += 1
        c = occ[b]
        occ[b] = c + 1
        if c < g_max:
            deficit[c] -= 1
            if deficit[c] == 0:
                out[c] = t
    return out


def waiting_times_np(n_boxes: int, g_max: int, key: int) -> np.ndarray:
    # block size starts near the expected V_gmax and doubles until every box
    # has received g_max balls inside the block
    est = n_boxes * (np.log(n_boxes + 1.0) + g_max * np.log(np.log(n_boxes + 2.0) + 1.0) + 4.0)
    size = int(est) + 16
    while True:
        boxes = (uniforms_np(key, 0, size) * n_boxes).astype(np.int64)
        order = np.argsort(boxes, kind="stable")
        sorted_boxes = boxes[order]
        starts = np.searchsorted(sorted_boxes, np.arange(n_boxes))
        ends = np.searchsorted(sorted_boxes, np.arange(n_boxes), side="right")
        if np.all(ends - starts >= g_max):
            out = np.empty(g_max, np.int64)
            for c in range(g_max):
                # 0-based throw index of each box's (c+1)-th ball
                out[c] = order[starts + c].max() + 1
            return out
        size *= 2


if JIT_ENABLED:
    bernoulli_members = bernoulli_members_nb
    pair_counts = pair_counts_nb
    multiset_counts = multiset_counts_nb
    sparse_convolve = sparse_convolve_nb
    occupancy = occupancy_nb
    waiting_times = waiting_times_nb
else:
    bernoulli_members = bernoulli_members_np
    pair_counts = pair_counts_np
    multiset_counts = multiset_counts_np
    sparse_convolve = sparse_convolve_np
    occupancy = occupancy_np
    waiting_times = waiting_times_np
