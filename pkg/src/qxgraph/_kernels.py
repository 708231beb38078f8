"""Compiled per-frame relation loops used by the QXG builder.

Both loops run over every pair ``i < j`` of a frame in row-major order and
write the flat RA index of each pair into ``out``. They share the query
predicate :func:`_holds`, a direct port of
:func:`qxgraph.intervals.holds_endpoints`; only the way the predicate is asked
differs.
"""

import numba as nb
import numpy as np


@nb.njit(cache=True, inline="always")
def _cmp(x, y, eps):
    if abs(x - y) <= eps:
        return 0
    return -1 if x < y else 1


@nb.njit(cache=True)
def _inner(c_ll, c_hh):
    # (cmp(a.lo, b.lo), cmp(a.hi, b.hi)) for properly intersecting intervals
    if c_ll < 0:
        return 2 if c_hh < 0 else (12 if c_hh == 0 else 10)  # o fi di
    if c_ll == 0:
        return 4 if c_hh < 0 else (6 if c_hh == 0 else 11)  # s eq si
    return 3 if c_hh < 0 else (5 if c_hh == 0 else 9)  # d f oi


@nb.njit(cache=True)
def _holds(alo, ahi, r, blo, bhi, eps):
    c_hl = _cmp(ahi, blo, eps)
    if r == 0:
        return c_hl < 0
    if r == 1:
        return c_hl == 0
    if c_hl <= 0:
        return False
    c_lh = _cmp(alo, bhi, eps)
    if r == 7:
        return c_lh > 0
    if r == 8:
        return c_lh == 0
    if c_lh >= 0:
        return False
    return _inner(_cmp(alo, blo, eps), _cmp(ahi, bhi, eps)) == r


@nb.njit(cache=True)
def pair_offset(i, m):
    """Index of pair (i, i+1) in the row-major list of pairs of m objects."""
    return i * (2 * m - i - 1) // 2


@nb.njit(cache=True, nogil=True)
def acquire_rows(xlo, xhi, ylo, yhi, eps, row_start, row_stop, out):
    """Per-axis acquisition: ask Allen relations in order until "yes".

    Returns the number of queries asked.
    """
    m = xlo.shape[0]
    queries = 0
    p = pair_offset(row_start, m)
    for i in range(row_start, row_stop):
        for j in range(i + 1, m):
            rx = 0
            while True:
                queries += 1
                if _holds(xlo[i], xhi[i], rx, xlo[j], xhi[j], eps):
                    break
                rx += 1
            ry = 0
            while True:
                queries += 1
                if _holds(ylo[i], yhi[i], ry, ylo[j], yhi[j], eps):
                    break
                ry += 1
            out[p] = 13 * rx + ry
            p += 1
    return queries


@nb.njit(cache=True, nogil=True)
def bruteforce_rows(xlo, xhi, ylo, yhi, eps, row_start, row_stop, out):
    """Check every one of the 169 RA relations for every pair.

    Returns the number of relation checks (169 per pair).
    """
    m = xlo.shape[0]
    checks = 0
    p = pair_offset(row_start, m)
    for i in range(row_start, row_stop):
        for j in range(i + 1, m):
            for r in range(169):
                checks += 1
                if (_holds(xlo[i], xhi[i], r // 13, xlo[j], xhi[j], eps)
                        and _holds(ylo[i], yhi[i], r % 13, ylo[j], yhi[j], eps)):
                    out[p] = r
            p += 1
    return checks


def warmup():
    """Compile (or load from cache) both kernels."""
    a = np.array([0.0, 1.0])
    b = a + 2.0
    out = np.empty(1, dtype=np.int16)
    acquire_rows(a, b, a, b, 0.0, 0, 2, out)
    bruteforce_rows(a, b, a, b, 0.0, 0, 2, out)
