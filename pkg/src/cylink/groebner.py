"""Buchberger's algorithm, normal forms and standard monomials.

The engine works on bare ``{encoded_monomial: coeff}`` dicts; the public
functions accept and return :class:`~cylink.algebra.Polynomial` values.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _fastgb
from .algebra import (
    EXP_CAP,
    FIELD_BITS,
    NVARS,
    AlgebraError,
    CoefficientField,
    MonomialOrder,
    Polynomial,
    weighted_degree,
)



class GroebnerError(AlgebraError):
    pass


class NotZeroDimensional(GroebnerError):
    pass


@dataclass
class GroebnerStats:
    pairs_total: int = 0
    pairs_reduced: int = 0
    pairs_skipped: int = 0
    reductions: int = 0
    zero_reductions: int = 0
    max_queue: int = 0
    basis_size: int = 0
    elapsed: float = 0.0


class GroebnerTimeout(GroebnerError):
    """Raised when a :class:`Budget` cap is hit; carries partial statistics."""

    def __init__(self, reason: str, stats: GroebnerStats):
        super().__init__(f"groebner budget exceeded: {reason}")
        self.reason = reason
        self.stats = stats


@dataclass(frozen=True)
class Budget:
    max_seconds: float | None = None
    max_pairs: int | None = None
    max_reductions: int | None = None
    max_queue: int | None = None


@dataclass(frozen=True)
class Ideal:
    generators: tuple

    def __init__(self, generators: Iterable[Polynomial]):
        gens = tuple(generators)
        if not gens:
            raise GroebnerError("ideal needs at least one generator")
        f0 = gens[0]
        for g in gens[1:]:
            f0._check(g)
        object.__setattr__(self, "generators", gens)

    @property
    def field(self) -> CoefficientField:
        return self.generators[0].field

    @property
    def order(self) -> MonomialOrder:
        return self.generators[0].order


@dataclass
class GroebnerBasis:
    elements: list
    order: MonomialOrder
    field: CoefficientField
    stats: GroebnerStats = field(default_factory=GroebnerStats)

    @property
    def length(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def leading_terms(self) -> list[tuple]:
        return [g.leading_monomial() for g in self.elements]

    def to_json(self) -> dict:
        return {
            "order": self.order.to_json(),
            "field": self.field.to_json(),
            "length": self.length,
            "elements": [g.to_json() for g in self.elements],
        }

    @classmethod
    def from_json(cls, obj) -> "GroebnerBasis":
        order = MonomialOrder.from_json(obj["order"])
        elems = [Polynomial.from_json(e, order) for e in obj["elements"]]
        return cls(elems, order, CoefficientField.from_json(obj["field"]))


# --------------------------------------------------------------------------
# dict-level kernels


class _Reducer:
    """Full reduction against a growing list of monic polynomials.

    Divisor lookups are memoised per monomial: ``_cache[m] = (j, n)`` means
    basis element ``j`` divides ``m`` (or ``j == -1``: none of the first ``n``
    elements does). New elements are only appended, so a memoised miss only
    needs the tail rescanned.
    """

    def __init__(self, order: MonomialOrder, p: int | None):
        self.order = order
        self.p = p
        self.polys: list[dict] = []
        self.lts: list[int] = []
        self._cache: dict = {}
        self.reductions = 0

    def add(self, d: dict, lt: int) -> int:
        self.polys.append(d)
        self.lts.append(lt)
        return len(self.polys) - 1

    def divisor(self, k: int) -> int:
        lts = self.lts
        n = len(lts)
        ent = self._cache.get(k)
        if ent is None:
            start = 0
        else:
            j, start = ent
            if j >= 0:
                return j
            if start == n:
                return -1
        g = self.order._guards
        if self.order._reverse:
            for j in range(start, n):
                if ((lts[j] | g) - k) & g == g:
                    self._cache[k] = (j, n)
                    return j
        else:
            for j in range(start, n):
                if ((k | g) - lts[j]) & g == g:
                    self._cache[k] = (j, n)
                    return j
        self._cache[k] = (-1, n)
        return -1

    def reduce(self, d: dict, full: bool = True) -> dict:
        """Normal form of ``d``; returned dict has no zero coefficients."""
        p = self.p
        work = dict(d)
        heap = [-k for k in work]
        heapq.heapify(heap)
        rem = {}
        polys, lts = self.polys, self.lts
        pop, push = heapq.heappop, heapq.heappush
        divisor = self.divisor
        nred = 0
        while heap:
            k = -pop(heap)
            c = work.pop(k, 0)
            if p:
                # coefficients accumulate unreduced; reduce once on pop
                c %= p
            if not c:
                continue
            j = divisor(k)
            if j < 0:
                rem[k] = c
                if not full:
                    for kk, cc in work.items():
                        if p:
                            cc %= p
                        if cc:
                            rem[kk] = cc
                    break
                continue
            nred += 1
            shift = k - lts[j]
            get = work.get
            if p:
                c = p - c
            else:
                c = -c
            for kg, cg in polys[j].items():
                kk = kg + shift
                v = get(kk)
                if v is None:
                    work[kk] = c * cg
                    push(heap, -kk)
                else:
                    work[kk] = v + c * cg
            # the leading term itself was re-inserted with value c*1 and is
            # discarded here
            work.pop(k, None)
        self.reductions += nred
        return rem


def _monic(d: dict, p: int | None) -> tuple[dict, int]:
    lt = max(d)
    lc = d[lt]
    if lc != 1:
        if p:
            inv = pow(lc, -1, p)
            d = {k: c * inv % p for k, c in d.items()}
        else:
            d = {k: c / lc for k, c in d.items()}
    return d, lt


def _spoly(f: dict, lf: int, g: dict, lg: int, lcm: int, p: int | None) -> dict:
    # both monic
    sf = lcm - lf
    sg = lcm - lg
    out = {k + sf: c for k, c in f.items()}
    for k, c in g.items():
        kk = k + sg
        v = out.get(kk, 0) - c
        if p:
            v %= p
        out[kk] = v
    return {k: c for k, c in out.items() if c}


# --------------------------------------------------------------------------
# engines
#
# Both engines keep an append-only list of monic polynomials and expose the
# same small interface to the driver. Polynomials are opaque to the driver.


class _DictEngine:
    def __init__(self, order: MonomialOrder, p: int | None):
        self.order = order
        self.p = p
        self.red = _Reducer(order, p)

    @property
    def reductions(self) -> int:
        return self.red.reductions

    def load(self, f: Polynomial):
        return dict(f._d) if f._d else None

    def reduce(self, d):
        r = self.red.reduce(d)
        return r or None

    def add(self, d) -> tuple[int, tuple]:
        d, lt = _monic(d, self.p)
        return self.red.add(d, lt), self.order.decode(lt)

    def spoly(self, i: int, j: int, lcm: Sequence[int]):
        red = self.red
        s = _spoly(red.polys[i], red.lts[i], red.polys[j], red.lts[j],
                   self.order.encode(lcm), self.p)
        return s or None

    def degrees(self, d, w) -> set:
        return {weighted_degree(self.order.decode(k), w) for k in d}

    def interreduce(self, idx: list[int]) -> list[dict]:
        return _interreduce([self.red.polys[g] for g in idx],
                            [self.red.lts[g] for g in idx], self.order, self.p)


def _fast_load(f: Polynomial, order: MonomialOrder, p: int):
    exps = np.array([order.decode(k) for k in f._d], dtype=np.int64)
    keys = _fastgb.encode_many(exps, order)
    coefs = np.array([int(c) % p for c in f._d.values()], dtype=np.int64)
    idx = np.argsort(-keys, kind="stable")
    return keys[idx], coefs[idx]


def _fast_interreduce(elements: list, order: MonomialOrder, p: int,
                      tails: bool = True) -> tuple[list[dict], int]:
    """Reduced basis from monic (keys, coefs) pairs forming a Groebner basis.

    With ``tails=False`` the result is only minimal: non-leading terms are
    left as they are.
    """
    lts = np.array([int(k[0]) for k, _ in elements], dtype=np.int64)
    E = _fastgb.decode_many(lts, order)
    # minimal basis, smallest leading term first
    div = (E[:, None, :] <= E[None, :, :]).all(axis=2)  # div[a, b]: a | b
    np.fill_diagonal(div, False)
    ordr = sorted(range(len(elements)), key=lambda a: int(lts[a]))
    keep = [a for a in ordr if not div[:, a].any()]
    fresh = _fastgb.Pool(order, p)
    for a in keep:
        fresh.add(*elements[a])
    out = []
    for t in range(len(keep)):
        keys, coefs = fresh.element(t)
        if tails:
            tk, tc = fresh.reduce(keys[1:].copy(), coefs[1:].copy(), skip=t)
        else:
            tk, tc = keys[1:], coefs[1:]
        allk = np.concatenate([keys[:1], tk])
        out.append(dict(zip(_full_keys(_fastgb.decode_many(allk, order), order),
                            np.concatenate([coefs[:1], tc]).tolist())))
    out.sort(key=max)
    return out, fresh.reductions


def _full_keys(exps: np.ndarray, order: MonomialOrder) -> list[int]:
    """Vectorised :meth:`MonomialOrder.encode` for validated exponent rows."""
    exps = np.asarray(exps, dtype=np.int64)
    vals = (EXP_CAP - exps if order._reverse else exps).astype(np.uint64)
    lo = np.zeros(len(exps), dtype=np.uint64)
    hi = np.zeros(len(exps), dtype=np.int64)
    for v, sh in enumerate(order._shifts):
        if sh >= 64:
            hi += vals[:, v].astype(np.int64) << (sh - 64)
        else:
            lo |= vals[:, v] << np.uint64(sh)
    if order._graded:
        hi += (exps @ np.asarray(order.weights, dtype=np.int64)) << (FIELD_BITS * NVARS - 64)
    return [(h << 64) | l for h, l in zip(hi.tolist(), lo.tolist())]


def _fast_eligible(gens: list[Polynomial], order: MonomialOrder, p: int | None) -> bool:
    if not p or p >= 1 << 31:
        return False
    for f in gens:
        if not f._d:
            continue
        if any(m > _fastgb.CAP for m in f.max_exponents()):
            return False
        if order.kind != "lex":
            w = order.weights
            if len({weighted_degree(order.decode(k), w) for k in f._d}) > 1:
                return False
    return True


# --------------------------------------------------------------------------
# Buchberger


def _as_ideal(I) -> Ideal:
    return I if isinstance(I, Ideal) else Ideal(I)


def buchberger(I, order: MonomialOrder | None = None, budget: Budget | None = None,
               homogeneity: Sequence[int] | None = None,
               engine: str = "auto", reduce_basis: bool = True) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` (an :class:`Ideal` or list of polys).

    Pairs are processed smallest-lcm first with the Gebauer-Moeller
    installation of Buchberger's coprime and chain criteria. If
    ``homogeneity`` (a weight vector) is given, every new basis element is
    asserted to be weighted homogeneous.

    ``engine`` is ``"auto"``, ``"dict"`` or ``"fast"``. The compiled engine
    handles prime fields when every generator is homogeneous for the order's
    grading and exponents stay small; ``auto`` falls back to the dict engine
    otherwise, including on exponent overflow mid-run.

    ``reduce_basis=False`` lets the compiled engine stop at a minimal basis,
    which is enough when only leading terms matter.
    """
    I = _as_ideal(I)
    order = order or I.order
    gens = [f if f.order == order else f.with_order(order) for f in I.generators]
    p = I.field.modulus
    if engine not in ("auto", "dict", "fast"):
        raise GroebnerError(f"unknown engine {engine!r}")
    use_fast = engine == "fast" or (engine == "auto" and _fast_eligible(gens, order, p))
    if use_fast:
        if not _fast_eligible(gens, order, p):
            raise GroebnerError("input not eligible for the compiled engine")
        try:
            return _run_fast(gens, order, I.field, budget, homogeneity, reduce_basis)
        except _fastgb.FastOverflow:
            if engine == "fast":
                raise
    return _run(gens, order, I.field, budget, homogeneity, _DictEngine(order, p))


def _run(gens: list[Polynomial], order: MonomialOrder, fld: CoefficientField,
         budget: Budget | None, homogeneity, eng) -> GroebnerBasis:
    budget = budget or Budget()
    stats = GroebnerStats()
    t0 = time.perf_counter()
    deadline = t0 + budget.max_seconds if budget.max_seconds else None

    queue: list = []  # heap of (order key of lcm, i, j)
    pair_set: set = set()  # live (i, j) pairs in queue

    def check_budget():
        stats.elapsed = time.perf_counter() - t0
        stats.reductions = eng.reductions
        if deadline is not None and time.perf_counter() > deadline:
            raise GroebnerTimeout("wall time", stats)
        if budget.max_pairs is not None and stats.pairs_total > budget.max_pairs:
            raise GroebnerTimeout("pair count", stats)
        if budget.max_reductions is not None and eng.reductions > budget.max_reductions:
            raise GroebnerTimeout("reduction count", stats)
        if budget.max_queue is not None and len(pair_set) > budget.max_queue:
            raise GroebnerTimeout("pair queue size", stats)

    encode = order.encode
    # leading exponents by basis index, grown by doubling
    E = np.zeros((64, NVARS), dtype=np.int64)
    active = np.zeros(0, dtype=np.int64)  # indices forming the current G
    # live pair table mirrored for pruning; may hold stale rows
    PL = np.zeros((0, NVARS), dtype=np.int64)
    PI = np.zeros(0, dtype=np.int64)
    PJ = np.zeros(0, dtype=np.int64)

    def install(poly):
        """Append ``poly`` and run the Gebauer-Moeller update."""
        nonlocal E, active, PL, PI, PJ
        if homogeneity is not None:
            degs = eng.degrees(poly, homogeneity)
            if len(degs) > 1:
                raise GroebnerError(f"weighted homogeneity lost: degrees {sorted(degs)}")
        h, lead = eng.add(poly)
        if h >= len(E):
            E = np.concatenate([E, np.zeros_like(E)])
        eh = np.array(lead, dtype=np.int64)
        E[h] = eh
        if len(PL):
            hit = _fastgb.prune_old(PL, PI, PJ, E, eh)
            if hit.any():
                for i, j in zip(PI[hit].tolist(), PJ[hit].tolist()):
                    if (i, j) in pair_set:
                        pair_set.discard((i, j))
                        stats.pairs_skipped += 1
                PL, PI, PJ = PL[~hit], PI[~hit], PJ[~hit]
        if len(active):
            Ea = E[active]
            keep = _fastgb.chain_keep(Ea, eh)
            stats.pairs_skipped += len(active) - int(keep.sum())
            if keep.any():
                gs = active[keep]
                Ls = np.maximum(Ea[keep], eh)
                for g, lrow in zip(gs.tolist(), Ls.tolist()):
                    heapq.heappush(queue, (encode(lrow), g, h))
                    pair_set.add((g, h))
                stats.pairs_total += len(gs)
                PL = np.concatenate([PL, Ls])
                PI = np.concatenate([PI, gs])
                PJ = np.concatenate([PJ, np.full(len(gs), h, dtype=np.int64)])
        if len(PL) > 2 * len(pair_set) + 64:
            live = np.array([(i, j) in pair_set for i, j in zip(PI.tolist(), PJ.tolist())],
                            dtype=bool)
            PL, PI, PJ = PL[live], PI[live], PJ[live]
        stats.max_queue = max(stats.max_queue, len(pair_set))
        if len(active):
            active = active[~(eh <= E[active]).all(axis=1)]
        active = np.append(active, h)

    # seed with the reduced generators, smallest leading term first
    seeds = sorted((f for f in gens if f._d), key=lambda f: f.leading_key())
    for f in seeds:
        r = eng.reduce(eng.load(f))
        if r is not None:
            install(r)

    while queue:
        check_budget()
        _, i, j = heapq.heappop(queue)
        if (i, j) not in pair_set:
            continue
        pair_set.discard((i, j))
        stats.pairs_reduced += 1
        lcm = np.maximum(E[i], E[j]).tolist()
        s = eng.spoly(i, j, lcm)
        r = eng.reduce(s) if s is not None else None
        if r is None:
            stats.zero_reductions += 1
            continue
        install(r)

    basis = eng.interreduce(active.tolist())
    stats.reductions = eng.reductions
    stats.basis_size = len(basis)
    stats.elapsed = time.perf_counter() - t0
    w = gens[0].weights
    elems = [Polynomial(fld, order, d, w) for d in basis]
    return GroebnerBasis(elems, order, fld, stats)


_CHUNK = 256


def _run_fast(gens: list[Polynomial], order: MonomialOrder, fld: CoefficientField,
              budget: Budget | None, homogeneity, tails: bool = True) -> GroebnerBasis:
    budget = budget or Budget()
    stats = GroebnerStats()
    t0 = time.perf_counter()
    deadline = t0 + budget.max_seconds if budget.max_seconds else None
    p = fld.modulus
    if homogeneity is not None and order.kind != "lex" \
            and tuple(homogeneity) != tuple(order.weights):
        # the kernel checks the order's grading only
        return _run(gens, order, fld, budget, homogeneity, _DictEngine(order, p))
    st = _fastgb.FastState(order, p, homogeneity is not None)
    m = st.meta

    def sync():
        stats.pairs_total = int(m[_fastgb.M_TOTAL])
        stats.pairs_reduced = int(m[_fastgb.M_REDUCED])
        stats.pairs_skipped = int(m[_fastgb.M_SKIPPED])
        stats.reductions = int(m[_fastgb.M_RED])
        stats.zero_reductions = int(m[_fastgb.M_ZERO])
        stats.max_queue = int(m[_fastgb.M_MAXQ])
        stats.elapsed = time.perf_counter() - t0

    def check(code):
        if code == _fastgb.OVERFLOW:
            raise _fastgb.FastOverflow("exponent overflow in compiled engine")
        if code == _fastgb.INHOMOGENEOUS:
            raise GroebnerError("weighted homogeneity lost")
        sync()
        if deadline is not None and time.perf_counter() > deadline:
            raise GroebnerTimeout("wall time", stats)
        if budget.max_pairs is not None and stats.pairs_total > budget.max_pairs:
            raise GroebnerTimeout("pair count", stats)
        if budget.max_reductions is not None and stats.reductions > budget.max_reductions:
            raise GroebnerTimeout("reduction count", stats)
        if budget.max_queue is not None and stats.max_queue > budget.max_queue:
            raise GroebnerTimeout("pair queue size", stats)

    seeds = sorted((f for f in gens if f._d), key=lambda f: f.leading_key())
    for f in seeds:
        st.ensure(len(f._d))
        check(st.insert(*_fast_load(f, order, p)))
    # small chunks first so tight budgets trip early
    chunk = 16
    while True:
        code = st.run(chunk)
        check(code)
        if code == _fastgb.DONE:
            break
        chunk = min(chunk * 2, _CHUNK)

    basis, extra = _fast_interreduce([st.element(i) for i in st.live_indices()], order, p,
                                      tails)
    sync()
    stats.reductions += extra
    stats.basis_size = len(basis)
    w = gens[0].weights
    elems = [Polynomial(fld, order, d, w) for d in basis]
    return GroebnerBasis(elems, order, fld, stats)


def _interreduce(polys: list[dict], lts: list[int], order: MonomialOrder,
                 p: int | None) -> list[dict]:
    divides = order.divides
    # minimal basis: drop elements whose leading term another one divides
    idx = sorted(range(len(polys)), key=lambda i: lts[i])
    keep: list[int] = []
    for i in idx:
        if not any(divides(lts[j], lts[i]) for j in keep):
            keep.append(i)
    # a leading term never divides its own tail, so one shared reducer works
    red = _Reducer(order, p)
    for i in keep:
        red.add(polys[i], lts[i])
    out = []
    for a in keep:
        lt = lts[a]
        tail = dict(polys[a])
        c = tail.pop(lt)
        r = red.reduce(tail) if tail else {}
        r[lt] = c
        r, _ = _monic(r, p)
        out.append(r)
    out.sort(key=max)
    return out


# --------------------------------------------------------------------------
# public helpers


def _basis_dicts(G, order: MonomialOrder) -> tuple[list[dict], list[int]]:
    polys = G.elements if isinstance(G, GroebnerBasis) else list(G)
    ds, lts = [], []
    for g in polys:
        if g.order != order:
            g = g.with_order(order)
        if g._d:
            d, lt = _monic(dict(g._d), g.field.modulus)
            ds.append(d)
            lts.append(lt)
    return ds, lts


def normal_form(f: Polynomial, G, order: MonomialOrder | None = None) -> Polynomial:
    """Remainder of ``f`` on division by ``G`` (first divisor in list order)."""
    order = order or f.order
    red = _Reducer(order, f.field.modulus)
    # divisors are tried in ascending leading-term order
    for d, lt in sorted(zip(*_basis_dicts(G, order)), key=lambda t: t[1]):
        red.add(d, lt)
    src = f.with_order(order)
    return Polynomial(f.field, order, red.reduce(src._d), f.weights)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    p = f.field.modulus
    df, lf = _monic(dict(f._d), p)
    dg, lg = _monic(dict(g._d), p)
    return Polynomial(f.field, f.order, _spoly(df, lf, dg, lg, f.order.lcm(lf, lg), p),
                      f.weights)


def _leading_exponents(G) -> list[tuple]:
    if isinstance(G, GroebnerBasis):
        return G.leading_terms
    out = []
    for g in G:
        out.append(g.leading_monomial() if isinstance(g, Polynomial) else tuple(g))
    return out


def _minimal_monomials(monos: Iterable[tuple]) -> list[tuple]:
    ms = sorted(set(tuple(int(a) for a in m) for m in monos))
    if not ms:
        return []
    A = np.array(ms, dtype=np.int64)
    div = (A[:, None, :] <= A[None, :, :]).all(axis=2)  # div[a, b]: a | b
    np.fill_diagonal(div, False)
    return [ms[b] for b in np.flatnonzero(~div.any(axis=0))]


def is_zero_dimensional(G) -> bool:
    """Each variable has a pure power among the leading terms."""
    lts = _leading_exponents(G)
    seen = set()
    for m in lts:
        nz = [i for i, a in enumerate(m) if a]
        if len(nz) == 1:
            seen.add(nz[0])
        elif not nz:
            return True  # unit ideal: empty quotient
    return len(seen) == NVARS


def krull_dimension(G) -> int:
    """Largest variable set S with no leading term supported inside S."""
    lts = _leading_exponents(G)
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in lts]
    if any(not s for s in supports):
        return -1  # unit ideal; quotient ring is zero
    for size in range(NVARS, -1, -1):
        for S in itertools.combinations(range(NVARS), size):
            S = frozenset(S)
            if not any(s <= S for s in supports):
                return size
    return 0


@dataclass
class StandardMonomialSet:
    monomials: np.ndarray  # (n, 5) int64
    graded_counts: dict

    @property
    def total(self) -> int:
        return len(self.monomials)

    def __len__(self):
        return len(self.monomials)


def standard_monomials(G, w: Sequence[int]) -> StandardMonomialSet:
    """Enumerate monomials outside the leading-term ideal.

    Depth-first over z1..z4 with the candidate divisors filtered by the
    fixed prefix; the z5 range at each leaf is read off directly.
    """
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("quotient is infinite-dimensional")
    lts = np.array(_minimal_monomials(_leading_exponents(G)), dtype=np.int64).reshape(-1, NVARS)
    w = np.asarray(w, dtype=np.int64)
    if (lts.sum(axis=1) == 0).any():
        out = np.zeros((0, NVARS), dtype=np.int64)
        return StandardMonomialSet(out, {})
    chunks: list[np.ndarray] = []
    prefix = [0] * NVARS

    def walk(depth: int, cand: np.ndarray):
        # cand: leading terms whose first `depth` exponents are <= prefix
        if depth == NVARS - 1:
            # every candidate already divides the prefix on z1..z4
            top = int(cand[:, depth].min())
            if top <= 0:
                return
            block = np.zeros((top, NVARS), dtype=np.int64)
            block[:, :depth] = prefix[:depth]
            block[:, depth] = np.arange(top)
            chunks.append(block)
            return
        col = cand[:, depth]
        a = 0
        while True:
            # leading terms dividing the current partial monomial (rest zero)
            sub = cand[col <= a]
            if sub.size and (sub[:, depth + 1:] == 0).all(axis=1).any():
                break
            prefix[depth] = a
            walk(depth + 1, sub)
            a += 1
        prefix[depth] = 0

    walk(0, lts)
    monos = np.concatenate(chunks) if chunks else np.zeros((0, NVARS), dtype=np.int64)
    degs = monos @ w
    vals, counts = np.unique(degs, return_counts=True)
    return StandardMonomialSet(monos, {int(v): int(c) for v, c in zip(vals, counts)})


def graded_dimension(G, w: Sequence[int], ell: int, sms: StandardMonomialSet | None = None) -> int:
    if sms is None:
        sms = standard_monomials(G, w)
    return sms.graded_counts.get(int(ell), 0)
