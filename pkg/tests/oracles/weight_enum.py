"""Enumerate transverse CY weight systems by a pointer-graph search.

Every variable of a quasi-smooth polynomial has a monomial z_i^a z_j of
degree d (j = i allowed). The search fixes the largest unplaced weight x
and either finds its partner among the placed weights or forces a new one,
d - a*x, among the smaller unplaced weights. Survivors are filtered with
an independent implementation of the subset criterion for quasi-smoothness.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from numba import njit


@njit(cache=True)
def _ok_ptr(x, placed, n, d, skip):
    if d % x == 0:
        return True
    for i in range(n):
        if i != skip and (d - placed[i]) % x == 0:
            return True
    return False


@njit
def _rec(d, placed, n, R, M, out, cnt):
    k = 5 - n
    if k == 0:
        if R != 0:
            return cnt
        for i in range(5):
            if not _ok_ptr(placed[i], placed, 5, d, i):
                return cnt
        if cnt < out.shape[0]:
            for i in range(5):
                out[cnt, i] = placed[i]
        return cnt + 1
    if k == 1:
        if R < 1 or R > M:
            return cnt
        placed[n] = R
        return _rec(d, placed, n + 1, 0, M, out, cnt)
    lo = (R + k - 1) // k
    hi = min(M, R - (k - 1))
    for x in range(lo, hi + 1):
        placed[n] = x
        if _ok_ptr(x, placed, n, d, -1):
            cnt = _rec(d, placed, n + 1, R - x, x, out, cnt)
        a = 2
        while True:
            y = d - a * x
            if y < 1:
                break
            if y <= x and y <= R - x - (k - 2):
                placed[n + 1] = y
                cnt = _rec(d, placed, n + 2, R - x - y, x, out, cnt)
            a += 1
    return cnt


@njit
def _pointer_candidates(d, cap):
    out = np.zeros((cap, 5), dtype=np.int64)
    placed = np.zeros(5, dtype=np.int64)
    cnt = _rec(d, placed, 0, d, d // 2, out, 0)
    return out, cnt


def quasismooth(w) -> bool:
    """Subset criterion, via dynamic programming on representable degrees."""
    d = sum(w)
    for r in range(1, 6):
        for I in itertools.combinations(range(5), r):
            rep = np.zeros(d + 1, dtype=bool)
            rep[0] = True
            for i in I:
                for r0 in range(w[i]):
                    rep[r0::w[i]] = np.logical_or.accumulate(rep[r0::w[i]])
            if rep[d]:
                continue
            partners = sum(1 for e in range(5) if e not in I and rep[d - w[e]])
            if partners < r:
                return False
    return True


def weight_systems_of_degree(d: int) -> list[tuple]:
    cap = 4096
    while True:
        out, cnt = _pointer_candidates(d, cap)
        if cnt <= cap:
            break
        cap = cnt
    found = {tuple(sorted(r)) for r in out[:cnt].tolist()}
    return sorted(w for w in found if math.gcd(*w) == 1 and quasismooth(w))


def weight_systems(max_degree: int, min_degree: int = 5) -> list[tuple]:
    out = []
    for d in range(min_degree, max_degree + 1):
        out.extend(weight_systems_of_degree(d))
    return out
