"""Hot integer kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import time from ``PERFECTFORMS_KERNELS``
(``numba`` or ``numpy``). ``numba`` is the default when it can be imported.
Both backends return identical results; only speed differs.
"""

import os

import numpy as np

_requested = os.environ.get("PERFECTFORMS_KERNELS", "numba").strip().lower()

try:
    if _requested == "numpy":
        raise ImportError("numpy backend requested")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"

WORD = 64


def words_for(nbits):
    return max(1, (nbits + WORD - 1) // WORD)


def pack_bits(sets, nbits):
    """Pack Python-int bitsets into a ``(len(sets), W)`` uint64 array."""
    w = words_for(nbits)
    out = np.zeros((len(sets), w), dtype=np.uint64)
    mask = (1 << WORD) - 1
    for i, s in enumerate(sets):
        k = 0
        while s:
            out[i, k] = s & mask
            s >>= WORD
            k += 1
    return out


# -- adjacency test for the double description method ------------------------

def _adjacent_pairs_numpy(tight, pos, neg, min_common):
    if len(pos) == 0 or len(neg) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    out = []
    tneg = tight[neg]
    for p in pos:
        z = tight[p] & tneg
        cnt = np.bitwise_count(z).sum(axis=1)
        keep = np.nonzero(cnt >= min_common)[0]
        for k in keep:
            zz = z[k]
            inside = np.all((tight & zz) == zz, axis=1)
            if np.count_nonzero(inside) <= 2:
                out.append((p, neg[k]))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.asarray(out, dtype=np.int64)


if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _popcount64(v):
        v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
        v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
        v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (v * np.uint64(0x0101010101010101)) >> np.uint64(56)

    @njit(cache=True)
    def _adjacent_pairs_numba(tight, pos, neg, min_common):
        nrays, w = tight.shape
        cap = 1024
        out = np.empty((cap, 2), dtype=np.int64)
        m = 0
        z = np.empty(w, dtype=np.uint64)
        for a in range(pos.shape[0]):
            p = pos[a]
            for b in range(neg.shape[0]):
                q = neg[b]
                cnt = 0
                for k in range(w):
                    z[k] = tight[p, k] & tight[q, k]
                    cnt += _popcount64(z[k])
                if cnt < min_common:
                    continue
                hits = 0
                for r in range(nrays):
                    ok = True
                    for k in range(w):
                        if (tight[r, k] & z[k]) != z[k]:
                            ok = False
                            break
                    if ok:
                        hits += 1
                        if hits > 2:
                            break
                if hits <= 2:
                    if m == cap:
                        cap *= 2
                        grown = np.empty((cap, 2), dtype=np.int64)
                        grown[:m] = out[:m]
                        out = grown
                    out[m, 0] = p
                    out[m, 1] = q
                    m += 1
        return out[:m].copy()


def adjacent_pairs(tight, pos, neg, min_common, backend=None):
    """Adjacent (positive, negative) ray pairs by the combinatorial test.

    Two rays are adjacent when their common tight set has at least
    ``min_common`` members and no third ray is tight on all of it.
    ``tight`` holds one packed bitset per ray.
    """
    pos = np.asarray(pos, dtype=np.int64)
    neg = np.asarray(neg, dtype=np.int64)
    backend = backend or BACKEND
    if backend == "numba":
        if not NUMBA_AVAILABLE:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _adjacent_pairs_numba(tight, pos, neg, np.int64(min_common))
    return _adjacent_pairs_numpy(tight, pos, neg, min_common)
