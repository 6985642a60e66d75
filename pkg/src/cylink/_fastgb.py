"""Compiled kernels for Buchberger over GF(p) on graded-homogeneous ideals.

When every generator is homogeneous for the order's grading, all
S-polynomials and remainders stay homogeneous, so monomials inside one
polynomial share a degree and the degree field can be dropped from the
key. What remains fits a signed 64-bit integer: five 12-bit slots, each
with a guard bit, laid out exactly like :mod:`cylink.algebra` keys.

Polynomials are pairs of arrays ``(keys, coefs)`` sorted by descending key.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .algebra import NVARS, MonomialOrder

SLOT = 12
SLOT_MASK = (1 << SLOT) - 1
GUARD = 1 << (SLOT - 1)
CAP = 1 << (SLOT - 2)
GUARDS = sum(GUARD << (SLOT * i) for i in range(NVARS))


class FastOverflow(OverflowError):
    pass


def shifts_for(order: MonomialOrder) -> np.ndarray:
    if order.kind == "degrevlex":
        return np.array([SLOT * i for i in range(NVARS)], dtype=np.int64)
    return np.array([SLOT * (NVARS - 1 - i) for i in range(NVARS)], dtype=np.int64)


def encode_many(exps: np.ndarray, order: MonomialOrder) -> np.ndarray:
    exps = np.asarray(exps, dtype=np.int64).reshape(-1, NVARS)
    if exps.size and exps.max() > CAP:
        raise FastOverflow("exponent exceeds fast-path cap")
    sh = shifts_for(order)
    vals = CAP - exps if order.kind == "degrevlex" else exps
    return (vals << sh).sum(axis=1).astype(np.int64)


def decode_many(keys: np.ndarray, order: MonomialOrder) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    sh = shifts_for(order)
    vals = (keys[:, None] >> sh[None, :]) & SLOT_MASK
    return CAP - vals if order.kind == "degrevlex" else vals


# --------------------------------------------------------------------------
# kernels


@njit(cache=True)
def _decode(k, shifts, reverse, out):
    for v in range(5):
        s = (k >> shifts[v]) & SLOT_MASK
        out[v] = (CAP - s) if reverse else s


@njit(cache=True)
def _inv(a, p):
    # extended Euclid; a nonzero mod p
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _find_divisor(k, lts, n, guards, reverse):
    if reverse:
        for j in range(n):
            if ((lts[j] | guards) - k) & guards == guards:
                return j
    else:
        for j in range(n):
            if ((k | guards) - lts[j]) & guards == guards:
                return j
    return -1


@njit(cache=True)
def reduce_full(fk, fc, pk, pc, starts, ends, lts, maxexp, n, p, guards, reverse,
                shifts, skip):
    """Normal form of (fk, fc) by pool elements 0..n-1 except ``skip``.

    Returns (keys, coefs, reductions, overflow_flag).
    """
    ak = fk.copy()
    ac = fc.copy()
    alen = len(ak)
    rk = np.empty(alen + 16, dtype=np.int64)
    rc = np.empty(alen + 16, dtype=np.int64)
    rlen = 0
    nred = 0
    ek = np.empty(5, dtype=np.int64)
    el = np.empty(5, dtype=np.int64)
    i = 0
    while i < alen:
        k = ak[i]
        c = ac[i] % p
        if c == 0:
            i += 1
            continue
        j = -1
        if reverse:
            for jj in range(n):
                if jj != skip and ((lts[jj] | guards) - k) & guards == guards:
                    j = jj
                    break
        else:
            for jj in range(n):
                if jj != skip and ((k | guards) - lts[jj]) & guards == guards:
                    j = jj
                    break
        if j < 0:
            if rlen == len(rk):
                nk = np.empty(2 * len(rk), dtype=np.int64)
                nc = np.empty(2 * len(rc), dtype=np.int64)
                nk[:rlen] = rk[:rlen]
                nc[:rlen] = rc[:rlen]
                rk, rc = nk, nc
            rk[rlen] = k
            rc[rlen] = c
            rlen += 1
            i += 1
            continue
        nred += 1
        # overflow guard: multiplier exponent + element max exponent <= CAP
        _decode(k, shifts, reverse, ek)
        _decode(lts[j], shifts, reverse, el)
        for v in range(5):
            if ek[v] - el[v] + maxexp[j, v] > CAP:
                return rk[:rlen], rc[:rlen], nred, True
        shift = k - lts[j]
        mul = p - c
        gs = starts[j] + 1
        ge = ends[j]
        # merge ak[i+1:] with mul * (pk[gs:ge] + shift)
        m = (alen - i - 1) + (ge - gs)
        bk = np.empty(m, dtype=np.int64)
        bc = np.empty(m, dtype=np.int64)
        x = i + 1
        y = gs
        t = 0
        while x < alen and y < ge:
            ky = pk[y] + shift
            kx = ak[x]
            if kx > ky:
                bk[t] = kx
                bc[t] = ac[x]
                x += 1
                t += 1
            elif kx < ky:
                bk[t] = ky
                bc[t] = (mul * pc[y]) % p
                y += 1
                t += 1
            else:
                v = (ac[x] + mul * pc[y]) % p
                if v != 0:
                    bk[t] = kx
                    bc[t] = v
                    t += 1
                x += 1
                y += 1
        while x < alen:
            bk[t] = ak[x]
            bc[t] = ac[x]
            x += 1
            t += 1
        while y < ge:
            bk[t] = pk[y] + shift
            bc[t] = (mul * pc[y]) % p
            y += 1
            t += 1
        ak = bk
        ac = bc
        alen = t
        i = 0
    return rk[:rlen], rc[:rlen], nred, False


@njit(cache=True)
def spoly(pk, pc, starts, ends, i, j, lcm, p):
    """S-polynomial of monic pool elements i and j at encoded lcm."""
    si = lcm - pk[starts[i]]
    sj = lcm - pk[starts[j]]
    x = starts[i] + 1
    xe = ends[i]
    y = starts[j] + 1
    ye = ends[j]
    m = (xe - x) + (ye - y)
    bk = np.empty(m, dtype=np.int64)
    bc = np.empty(m, dtype=np.int64)
    t = 0
    while x < xe and y < ye:
        kx = pk[x] + si
        ky = pk[y] + sj
        if kx > ky:
            bk[t] = kx
            bc[t] = pc[x]
            x += 1
            t += 1
        elif kx < ky:
            bk[t] = ky
            bc[t] = (p - pc[y]) % p
            y += 1
            t += 1
        else:
            v = (pc[x] - pc[y]) % p
            if v != 0:
                bk[t] = kx
                bc[t] = v
                t += 1
            x += 1
            y += 1
    while x < xe:
        bk[t] = pk[x] + si
        bc[t] = pc[x]
        x += 1
        t += 1
    while y < ye:
        bk[t] = pk[y] + sj
        bc[t] = (p - pc[y]) % p
        y += 1
        t += 1
    return bk[:t], bc[:t]


@njit(cache=True)
def make_monic(c, p):
    inv = _inv(c[0], p)
    out = np.empty_like(c)
    for t in range(len(c)):
        out[t] = (c[t] * inv) % p
    return out


@njit(cache=True)
def chain_keep(Ea, eh):
    """New-pair filter of the Gebauer-Moeller update.

    Returns a mask over the rows of ``Ea`` (leading exponents of the active
    basis) marking pairs (h, g) to install: not coprime, and no other pair
    has an lcm dividing theirs (ties go to the earliest row).
    """
    n = Ea.shape[0]
    M = np.empty((n, 5), dtype=np.int64)
    deg = np.empty(n, dtype=np.int64)
    coprime = np.zeros(n, dtype=np.bool_)
    for r in range(n):
        s = 0
        cp = True
        for v in range(5):
            q = Ea[r, v] - eh[v]
            if q < 0:
                q = 0
            M[r, v] = q
            s += q
            if Ea[r, v] > 0 and eh[v] > 0:
                cp = False
        deg[r] = s
        coprime[r] = cp
    order = np.argsort(deg, kind="mergesort")
    mins = np.empty((n, 5), dtype=np.int64)
    nm = 0
    keep = np.zeros(n, dtype=np.bool_)
    for idx in range(n):
        r = order[idx]
        red = False
        for a in range(nm):
            ok = True
            for v in range(5):
                if mins[a, v] > M[r, v]:
                    ok = False
                    break
            if ok:
                red = True
                break
        if not red:
            for v in range(5):
                mins[nm, v] = M[r, v]
            nm += 1
            if not coprime[r]:
                keep[r] = True
    return keep


@njit(cache=True)
def prune_old(PL, PI, PJ, E, eh):
    """Old pairs removed by lt(h): lt(h) | lcm and lcm != lcm(i,h), lcm(j,h)."""
    m = PL.shape[0]
    hit = np.zeros(m, dtype=np.bool_)
    for r in range(m):
        div = True
        for v in range(5):
            if eh[v] > PL[r, v]:
                div = False
                break
        if not div:
            continue
        same_i = True
        same_j = True
        i = PI[r]
        j = PJ[r]
        for v in range(5):
            li = E[i, v] if E[i, v] > eh[v] else eh[v]
            lj = E[j, v] if E[j, v] > eh[v] else eh[v]
            if li != PL[r, v]:
                same_i = False
            if lj != PL[r, v]:
                same_j = False
        if not same_i and not same_j:
            hit[r] = True
    return hit


# --------------------------------------------------------------------------
# pool


class Pool:
    """Append-only store of monic polynomials in flat arrays."""

    def __init__(self, order: MonomialOrder, p: int):
        self.order = order
        self.p = p
        self.reverse = order.kind == "degrevlex"
        self.shifts = shifts_for(order)
        self.pk = np.zeros(1024, dtype=np.int64)
        self.pc = np.zeros(1024, dtype=np.int64)
        self.size = 0
        self.starts = np.zeros(64, dtype=np.int64)
        self.ends = np.zeros(64, dtype=np.int64)
        self.lts = np.zeros(64, dtype=np.int64)
        self.maxexp = np.zeros((64, NVARS), dtype=np.int64)
        self.n = 0
        self.reductions = 0

    def add(self, keys: np.ndarray, coefs: np.ndarray) -> int:
        t = len(keys)
        while self.size + t > len(self.pk):
            self.pk = np.concatenate([self.pk, np.zeros_like(self.pk)])
            self.pc = np.concatenate([self.pc, np.zeros_like(self.pc)])
        if self.n == len(self.lts):
            self.starts = np.concatenate([self.starts, np.zeros_like(self.starts)])
            self.ends = np.concatenate([self.ends, np.zeros_like(self.ends)])
            self.lts = np.concatenate([self.lts, np.zeros_like(self.lts)])
            self.maxexp = np.concatenate([self.maxexp, np.zeros_like(self.maxexp)])
        self.pk[self.size:self.size + t] = keys
        self.pc[self.size:self.size + t] = coefs
        self.starts[self.n] = self.size
        self.ends[self.n] = self.size + t
        self.lts[self.n] = keys[0]
        self.maxexp[self.n] = decode_many(keys, self.order).max(axis=0)
        self.size += t
        self.n += 1
        return self.n - 1

    def element(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        s, e = self.starts[i], self.ends[i]
        return self.pk[s:e], self.pc[s:e]

    def reduce(self, keys, coefs, skip: int = -1):
        rk, rc, nred, overflow = reduce_full(
            keys, coefs, self.pk, self.pc, self.starts, self.ends, self.lts,
            self.maxexp, self.n, self.p, GUARDS, self.reverse, self.shifts, skip)
        self.reductions += nred
        if overflow:
            raise FastOverflow("exponent overflow during reduction")
        return rk, rc

    def spoly(self, i: int, j: int, lcm_key: int):
        return spoly(self.pk, self.pc, self.starts, self.ends, i, j, lcm_key, self.p)


# --------------------------------------------------------------------------
# whole-loop kernel
#
# State lives in flat arrays owned by :class:`FastState`. One call to
# ``run_chunk`` processes up to ``max_pairs`` critical pairs and returns a
# status code; Python grows arrays and checks budgets between calls.

DONE, CHUNK, GROW, OVERFLOW, INHOMOGENEOUS = 0, 1, 2, 3, 4

# meta slots
M_N, M_SIZE, M_NPAIRS, M_HEAP, M_RED, M_TOTAL, M_REDUCED, M_SKIPPED, M_ZERO, M_MAXQ = range(10)


@njit(cache=True)
def _pair_less(a, b, Pdeg, Pfk, PI, PJ):
    if Pdeg[a] != Pdeg[b]:
        return Pdeg[a] < Pdeg[b]
    if Pfk[a] != Pfk[b]:
        return Pfk[a] < Pfk[b]
    if PI[a] != PI[b]:
        return PI[a] < PI[b]
    return PJ[a] < PJ[b]


@njit(cache=True)
def _heap_push(heap, hlen, x, Pdeg, Pfk, PI, PJ):
    i = hlen
    heap[i] = x
    while i > 0:
        parent = (i - 1) // 2
        if _pair_less(heap[i], heap[parent], Pdeg, Pfk, PI, PJ):
            t = heap[i]
            heap[i] = heap[parent]
            heap[parent] = t
            i = parent
        else:
            break
    return hlen + 1


@njit(cache=True)
def _heap_pop(heap, hlen, Pdeg, Pfk, PI, PJ):
    top = heap[0]
    hlen -= 1
    heap[0] = heap[hlen]
    i = 0
    while True:
        a = 2 * i + 1
        b = a + 1
        m = i
        if a < hlen and _pair_less(heap[a], heap[m], Pdeg, Pfk, PI, PJ):
            m = a
        if b < hlen and _pair_less(heap[b], heap[m], Pdeg, Pfk, PI, PJ):
            m = b
        if m == i:
            break
        t = heap[i]
        heap[i] = heap[m]
        heap[m] = t
        i = m
    return top, hlen


@njit(cache=True)
def _encode_row(e, shifts, reverse):
    k = 0
    for v in range(5):
        s = (CAP - e[v]) if reverse else e[v]
        k |= s << shifts[v]
    return k


@njit(cache=True)
def _fits(rlen, pk, PI, heap, alive, meta):
    n = meta[M_N]
    return (meta[M_SIZE] + rlen <= len(pk) and n + 1 <= len(alive)
            and meta[M_NPAIRS] + n <= len(PI) and meta[M_HEAP] + n <= len(heap))


@njit(cache=True)
def _add(rk, rc, pk, pc, starts, ends, lts, E, maxexp, alive, meta, p, shifts, reverse,
         grading, check_h):
    """Make (rk, rc) monic and append it; returns its index or -1 if inhomogeneous."""
    n = meta[M_N]
    s = meta[M_SIZE]
    inv = _inv(rc[0], p)
    e = np.empty(5, dtype=np.int64)
    deg0 = -1
    for v in range(5):
        maxexp[n, v] = 0
    for t in range(len(rk)):
        pk[s + t] = rk[t]
        pc[s + t] = (rc[t] * inv) % p
        _decode(rk[t], shifts, reverse, e)
        dg = 0
        for v in range(5):
            if e[v] > maxexp[n, v]:
                maxexp[n, v] = e[v]
            dg += e[v] * grading[v]
        if check_h:
            if deg0 < 0:
                deg0 = dg
            elif dg != deg0:
                return -1
        if t == 0:
            for v in range(5):
                E[n, v] = e[v]
    starts[n] = s
    ends[n] = s + len(rk)
    lts[n] = rk[0]
    alive[n] = True
    meta[M_SIZE] = s + len(rk)
    meta[M_N] = n + 1
    return n


@njit(cache=True)
def _install(h, E, alive, PI, PJ, PL, Pdeg, Pfk, Pdead, heap, meta, grading, shifts, reverse):
    """Gebauer-Moeller update for new element ``h``."""
    eh = E[h]
    # drop queued pairs whose lcm lt(h) divides strictly
    hlen = meta[M_HEAP]
    for q in range(hlen):
        r = heap[q]
        if Pdead[r]:
            continue
        div = True
        for v in range(5):
            if eh[v] > PL[r, v]:
                div = False
                break
        if not div:
            continue
        i = PI[r]
        j = PJ[r]
        same_i = True
        same_j = True
        for v in range(5):
            li = E[i, v] if E[i, v] > eh[v] else eh[v]
            lj = E[j, v] if E[j, v] > eh[v] else eh[v]
            if li != PL[r, v]:
                same_i = False
            if lj != PL[r, v]:
                same_j = False
        if not same_i and not same_j:
            Pdead[r] = True
            meta[M_SKIPPED] += 1
    # new pairs with the live elements
    n = h
    idx = np.empty(n, dtype=np.int64)
    na = 0
    for g in range(n):
        if alive[g]:
            idx[na] = g
            na += 1
    if na:
        Ea = np.empty((na, 5), dtype=np.int64)
        for a in range(na):
            for v in range(5):
                Ea[a, v] = E[idx[a], v]
        keep = chain_keep(Ea, eh)
        lrow = np.empty(5, dtype=np.int64)
        for a in range(na):
            if not keep[a]:
                meta[M_SKIPPED] += 1
                continue
            g = idx[a]
            r = meta[M_NPAIRS]
            dg = 0
            for v in range(5):
                x = Ea[a, v] if Ea[a, v] > eh[v] else eh[v]
                PL[r, v] = x
                lrow[v] = x
                dg += x * grading[v]
            PI[r] = g
            PJ[r] = h
            Pdeg[r] = dg
            Pfk[r] = _encode_row(lrow, shifts, reverse)
            Pdead[r] = False
            meta[M_NPAIRS] = r + 1
            meta[M_HEAP] = _heap_push(heap, meta[M_HEAP], r, Pdeg, Pfk, PI, PJ)
            meta[M_TOTAL] += 1
    # elements whose leading term lt(h) divides leave the live set
    for g in range(n):
        if alive[g]:
            div = True
            for v in range(5):
                if eh[v] > E[g, v]:
                    div = False
                    break
            if div:
                alive[g] = False
    live = 0
    for q in range(meta[M_HEAP]):
        if not Pdead[heap[q]]:
            live += 1
    if live > meta[M_MAXQ]:
        meta[M_MAXQ] = live


@njit(cache=True)
def insert(rk, rc, pk, pc, starts, ends, lts, E, maxexp, alive, PI, PJ, PL, Pdeg, Pfk,
           Pdead, heap, meta, p, shifts, reverse, grading, check_h):
    """Reduce a generator, then add and install it. Returns a status code."""
    n = meta[M_N]
    fk, fc, nred, over = reduce_full(rk, rc, pk, pc, starts, ends, lts, maxexp, n, p,
                                     GUARDS, reverse, shifts, -1)
    meta[M_RED] += nred
    if over:
        return OVERFLOW, fk, fc
    if len(fk) == 0:
        return CHUNK, fk, fc
    if not _fits(len(fk), pk, PI, heap, alive, meta):
        return GROW, fk, fc
    h = _add(fk, fc, pk, pc, starts, ends, lts, E, maxexp, alive, meta, p, shifts, reverse,
             grading, check_h)
    if h < 0:
        return INHOMOGENEOUS, fk, fc
    _install(h, E, alive, PI, PJ, PL, Pdeg, Pfk, Pdead, heap, meta, grading, shifts, reverse)
    return CHUNK, fk[:0], fc[:0]


@njit(cache=True)
def install_pending(rk, rc, pk, pc, starts, ends, lts, E, maxexp, alive, PI, PJ, PL, Pdeg,
                    Pfk, Pdead, heap, meta, p, shifts, reverse, grading, check_h):
    """Add an already reduced polynomial (left over from a GROW return)."""
    h = _add(rk, rc, pk, pc, starts, ends, lts, E, maxexp, alive, meta, p, shifts, reverse,
             grading, check_h)
    if h < 0:
        return INHOMOGENEOUS
    _install(h, E, alive, PI, PJ, PL, Pdeg, Pfk, Pdead, heap, meta, grading, shifts, reverse)
    return CHUNK


@njit(cache=True)
def run_chunk(pk, pc, starts, ends, lts, E, maxexp, alive, PI, PJ, PL, Pdeg, Pfk, Pdead,
              heap, meta, p, shifts, reverse, grading, check_h, max_pairs):
    """Process up to ``max_pairs`` pairs. Returns (status, pending keys, coefs)."""
    empty_k = np.empty(0, dtype=np.int64)
    done = 0
    lcm = np.empty(5, dtype=np.int64)
    while meta[M_HEAP] > 0:
        if done >= max_pairs:
            return CHUNK, empty_k, empty_k
        r, hl = _heap_pop(heap, meta[M_HEAP], Pdeg, Pfk, PI, PJ)
        meta[M_HEAP] = hl
        if Pdead[r]:
            continue
        Pdead[r] = True
        done += 1
        meta[M_REDUCED] += 1
        i = PI[r]
        j = PJ[r]
        # exponent cap for both multiples
        for v in range(5):
            lcm[v] = PL[r, v]
        for g in (i, j):
            for v in range(5):
                if maxexp[g, v] + lcm[v] - E[g, v] > CAP:
                    return OVERFLOW, empty_k, empty_k
        lk = _encode_row(lcm, shifts, reverse)
        sk, sc = spoly(pk, pc, starts, ends, i, j, lk, p)
        if len(sk) == 0:
            meta[M_ZERO] += 1
            continue
        n = meta[M_N]
        fk, fc, nred, over = reduce_full(sk, sc, pk, pc, starts, ends, lts, maxexp, n, p,
                                         GUARDS, reverse, shifts, -1)
        meta[M_RED] += nred
        if over:
            return OVERFLOW, empty_k, empty_k
        if len(fk) == 0:
            meta[M_ZERO] += 1
            continue
        if not _fits(len(fk), pk, PI, heap, alive, meta):
            return GROW, fk, fc
        h = _add(fk, fc, pk, pc, starts, ends, lts, E, maxexp, alive, meta, p, shifts,
                 reverse, grading, check_h)
        if h < 0:
            return INHOMOGENEOUS, fk, fc
        _install(h, E, alive, PI, PJ, PL, Pdeg, Pfk, Pdead, heap, meta, grading, shifts,
                 reverse)
    return DONE, empty_k, empty_k


class FastState:
    """Growable arrays for :func:`run_chunk`."""

    def __init__(self, order: MonomialOrder, p: int, check_homogeneous: bool):
        self.order = order
        self.p = p
        self.reverse = order.kind == "degrevlex"
        self.shifts = shifts_for(order)
        if order.kind == "lex":
            self.grading = np.zeros(NVARS, dtype=np.int64)
        else:
            self.grading = np.asarray(order.weights, dtype=np.int64)
        self.check_h = bool(check_homogeneous) and order.kind != "lex"
        self.pk = np.zeros(4096, dtype=np.int64)
        self.pc = np.zeros(4096, dtype=np.int64)
        self.starts = np.zeros(64, dtype=np.int64)
        self.ends = np.zeros(64, dtype=np.int64)
        self.lts = np.zeros(64, dtype=np.int64)
        self.E = np.zeros((64, NVARS), dtype=np.int64)
        self.maxexp = np.zeros((64, NVARS), dtype=np.int64)
        self.alive = np.zeros(64, dtype=np.bool_)
        self.PI = np.zeros(1024, dtype=np.int64)
        self.PJ = np.zeros(1024, dtype=np.int64)
        self.PL = np.zeros((1024, NVARS), dtype=np.int64)
        self.Pdeg = np.zeros(1024, dtype=np.int64)
        self.Pfk = np.zeros(1024, dtype=np.int64)
        self.Pdead = np.zeros(1024, dtype=np.bool_)
        self.heap = np.zeros(1024, dtype=np.int64)
        self.meta = np.zeros(10, dtype=np.int64)

    @staticmethod
    def _grow(a: np.ndarray, need: int) -> np.ndarray:
        size = len(a)
        if need <= size:
            return a
        while size < need:
            size *= 2
        out = np.zeros((size,) + a.shape[1:], dtype=a.dtype)
        out[:len(a)] = a
        return out

    def ensure(self, extra_terms: int) -> None:
        m = self.meta
        n = int(m[M_N])
        self.pk = self._grow(self.pk, int(m[M_SIZE]) + extra_terms)
        self.pc = self._grow(self.pc, len(self.pk))
        for name in ("starts", "ends", "lts", "E", "maxexp", "alive"):
            setattr(self, name, self._grow(getattr(self, name), n + 2))
        for name in ("PI", "PJ", "PL", "Pdeg", "Pfk", "Pdead"):
            setattr(self, name, self._grow(getattr(self, name), int(m[M_NPAIRS]) + n + 2))
        self.heap = self._grow(self.heap, int(m[M_HEAP]) + n + 2)

    def _args(self):
        return (self.pk, self.pc, self.starts, self.ends, self.lts, self.E, self.maxexp,
                self.alive, self.PI, self.PJ, self.PL, self.Pdeg, self.Pfk, self.Pdead,
                self.heap, self.meta)

    def _tail(self):
        return (self.p, self.shifts, self.reverse, self.grading, self.check_h)

    def insert(self, keys: np.ndarray, coefs: np.ndarray) -> int:
        while True:
            code, fk, fc = insert(keys, coefs, *self._args(), *self._tail())
            if code != GROW:
                return code
            self.ensure(len(fk))
            return install_pending(fk, fc, *self._args(), *self._tail())

    def run(self, max_pairs: int) -> int:
        code, fk, fc = run_chunk(*self._args(), *self._tail(), max_pairs)
        if code == GROW:
            self.ensure(len(fk))
            code = install_pending(fk, fc, *self._args(), *self._tail())
        return code

    @property
    def n(self) -> int:
        return int(self.meta[M_N])

    def live_indices(self) -> list[int]:
        return np.flatnonzero(self.alive[:self.n]).tolist()

    def element(self, i: int):
        s, e = self.starts[i], self.ends[i]
        return self.pk[s:e], self.pc[s:e]
