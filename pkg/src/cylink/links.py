"""Weight systems, degree-d monomial bases and smooth member selection."""

from __future__ import annotations

import itertools
import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .algebra import (
    DEFAULT_PRIME,
    GF,
    NVARS,
    QQ,
    AlgebraError,
    CoefficientField,
    MonomialOrder,
    Polynomial,
    partial_derivative,
)
from .groebner import Budget, buchberger, krull_dimension

logger = logging.getLogger(__name__)

SCREEN_PRIMES = (101, 251, 1993, 1997)
RESAMPLE_POOL = (1, 5)  # inclusive
RETRY_CAP = 25


class WeightSystemError(ValueError):
    pass


class NoSmoothMember(RuntimeError):
    def __init__(self, ws, screening):
        super().__init__(f"no smooth member found for {ws.w} after "
                         f"{screening['resamples']} resamples")
        self.ws = ws
        self.screening = screening


class DegenerateReduction(ArithmeticError):
    """A Jacobian generator vanishes identically modulo the screening prime."""


@dataclass(frozen=True)
class WeightSystem:
    w: tuple
    d: int

    @property
    def key(self) -> tuple:
        """Canonical (sorted) form used for dataset joins."""
        return tuple(sorted(self.w))

    def order(self, kind: str = "degrevlex") -> MonomialOrder:
        return MonomialOrder(kind, self.w)

    def permute(self, sigma: Sequence[int]) -> "WeightSystem":
        return WeightSystem(tuple(self.w[s] for s in sigma), self.d)

    def __str__(self):
        return str(self.w)


def validate_weight_system(w: Sequence[int]) -> WeightSystem:
    w = tuple(int(x) for x in w)
    if len(w) != NVARS:
        raise WeightSystemError(f"need {NVARS} weights, got {len(w)}")
    if min(w) < 1:
        raise WeightSystemError(f"weights must be positive: {w}")
    ws = WeightSystem(w, sum(w))
    if not monomial_basis(ws):
        raise WeightSystemError(f"no monomials of degree {ws.d} for {w}")
    return ws


def _as_ws(ws) -> WeightSystem:
    return ws if isinstance(ws, WeightSystem) else validate_weight_system(ws)


def monomial_basis(ws) -> list[tuple]:
    """All exponent vectors of weighted degree d, descending lexicographic."""
    w = ws.w if isinstance(ws, WeightSystem) else tuple(ws)
    d = ws.d if isinstance(ws, WeightSystem) else sum(w)
    out: list[tuple] = []
    prefix = [0] * NVARS

    def rec(i: int, rem: int):
        if i == NVARS - 1:
            if rem % w[i] == 0:
                prefix[i] = rem // w[i]
                out.append(tuple(prefix))
            return
        for a in range(rem // w[i], -1, -1):
            prefix[i] = a
            rec(i + 1, rem - a * w[i])

    rec(0, d)
    return out


def milnor_product(w: Sequence[int]) -> Fraction:
    d = sum(w)
    out = Fraction(1)
    for x in w:
        out *= Fraction(d, x) - 1
    return out


def _reachable(ws: Sequence[int], d: int) -> int:
    """Bitset of the sums <= d of nonnegative multiples of ``ws``."""
    mask = (1 << (d + 1)) - 1
    reach = 1
    for w in ws:
        step = w
        while step <= d:
            reach = (reach | (reach << step)) & mask
            step *= 2
    return reach


def admits_quasismooth(w: Sequence[int]) -> bool:
    """Combinatorial test that a generic degree-d member is quasi-smooth.

    For every nonempty variable subset I there must be a degree-d monomial
    in the variables of I alone, or at least |I| monomials ``z_I^a * z_e``
    with pairwise distinct e outside I.
    """
    w = tuple(int(x) for x in w)
    d = sum(w)
    for r in range(1, NVARS + 1):
        for I in itertools.combinations(range(NVARS), r):
            reach = _reachable([w[i] for i in I], d)
            if reach >> d & 1:
                continue
            outside = sum(1 for e in range(NVARS)
                          if e not in I and reach >> (d - w[e]) & 1)
            if outside < len(I):
                return False
    return True


def candidate_weight_systems(max_degree: int, max_mu: int | None = None,
                             reduced: bool = True) -> list[tuple]:
    """Sorted weight tuples up to ``max_degree`` passing the cheap filters.

    Filters: integral Milnor number, optional cap on it, coprime weights
    when ``reduced``, and the quasi-smoothness criterion of
    :func:`admits_quasismooth`.
    """
    out = []
    for d in range(5, max_degree + 1):
        for w in _partitions5(d):
            if reduced and math.gcd(*w) != 1:
                continue
            num = math.prod(d - x for x in w)
            den = math.prod(w)
            if num % den:
                continue
            if max_mu is not None and num // den > max_mu:
                continue
            if admits_quasismooth(w):
                out.append(w)
    return out


def _partitions5(d: int):
    # non-decreasing 5-tuples summing to d
    for a in range(1, d // 5 + 1):
        for b in range(a, (d - a) // 4 + 1):
            for c in range(b, (d - a - b) // 3 + 1):
                for e in range(c, (d - a - b - c) // 2 + 1):
                    f = d - a - b - c - e
                    if f >= e:
                        yield (a, b, c, e, f)


# --------------------------------------------------------------------------
# polynomials


def build_polynomial(ws, coefficients, field: CoefficientField | None = None,
                     order: MonomialOrder | None = None) -> Polynomial:
    """CY polynomial from ``coefficients``.

    ``coefficients`` is either a sequence aligned with :func:`monomial_basis`
    (all entries nonzero) or a mapping ``exponent tuple -> coefficient`` for
    sparse members; absent monomials are simply omitted.
    """
    ws = _as_ws(ws)
    field = field or QQ
    order = order or ws.order()
    basis = monomial_basis(ws)
    if isinstance(coefficients, Mapping):
        terms = []
        allowed = set(basis)
        for mono, c in coefficients.items():
            mono = tuple(mono)
            if mono not in allowed:
                raise WeightSystemError(f"{mono} is not of degree {ws.d}")
            if c:
                terms.append((c, mono))
        if not terms:
            raise WeightSystemError("no nonzero coefficients")
    else:
        coefficients = list(coefficients)
        if len(coefficients) != len(basis):
            raise WeightSystemError(
                f"{len(coefficients)} coefficients for a {len(basis)}-term basis")
        if any(c == 0 for c in coefficients):
            raise WeightSystemError("coefficients must be nonzero")
        terms = list(zip(coefficients, basis))
    return Polynomial.from_terms(terms, field, order, ws.w)


def jacobian(f: Polynomial) -> list[Polynomial]:
    return [partial_derivative(f, i) for i in range(1, NVARS + 1)]


def singular_locus_dimension(f: Polynomial, ws, p: int, budget: Budget | None = None) -> int:
    """Krull dimension of K[z]/(f, df/dz_i) with coefficients reduced mod p."""
    ws = _as_ws(ws)
    fld = GF(p)
    gens = []
    for g in [f] + jacobian(f):
        if g.is_zero():
            continue
        if g.field.kind == "qq" and any(c.denominator % p == 0 for c in g._d.values()):
            raise DegenerateReduction(f"denominator divisible by {p}")
        gp = g.with_field(fld) if g.field.kind == "qq" else g
        if gp.is_zero():
            raise DegenerateReduction(f"a generator vanishes modulo {p}")
        gens.append(gp.with_order(ws.order()))
    G = buchberger(gens, budget=budget, reduce_basis=False)
    return krull_dimension(G)


@dataclass
class CandidateHypersurface:
    ws: WeightSystem
    basis: list
    coefficients: list
    screening: dict = field(default_factory=dict)

    def polynomial(self, field: CoefficientField | None = None,
                   order: MonomialOrder | None = None) -> Polynomial:
        coeffs = {m: c for m, c in zip(self.basis, self.coefficients) if c}
        return build_polynomial(self.ws, coeffs, field or QQ, order)

    def to_json(self) -> dict:
        f = self.polynomial()
        obj = f.to_json(self.ws.d)
        obj["screening"] = self.screening
        return obj

    @classmethod
    def from_json(cls, obj) -> "CandidateHypersurface":
        ws = validate_weight_system(obj["weights"])
        basis = monomial_basis(ws)
        coeffs = {tuple(t["e"]): int(Fraction(t["c"])) for t in obj["terms"]}
        return cls(ws, basis, [coeffs.get(m, 0) for m in basis], obj.get("screening", {}))


def screen(f: Polynomial, ws, primes: Sequence[int] = SCREEN_PRIMES,
           budget: Budget | None = None) -> tuple[bool, list]:
    """Try each prime in turn; accept at the first with dimension 0."""
    tried = []
    for p in primes:
        try:
            dim = singular_locus_dimension(f, ws, p, budget)
        except DegenerateReduction:
            tried.append({"p": p, "dim": None})
            continue
        tried.append({"p": p, "dim": dim})
        if dim == 0:
            return True, tried
    return False, tried


def sample_smooth_polynomial(ws, rng_seed: int = 0, *, pool: tuple = RESAMPLE_POOL,
                             primes: Sequence[int] = SCREEN_PRIMES,
                             retry_cap: int = RETRY_CAP, start_all_ones: bool = True,
                             budget: Budget | None = None) -> CandidateHypersurface:
    """All-ones first, then uniform resamples from ``pool`` until smooth."""
    ws = _as_ws(ws)
    basis = monomial_basis(ws)
    rng = np.random.default_rng(rng_seed)
    lo, hi = pool
    history = []
    coeffs = [1] * len(basis) if start_all_ones else \
        rng.integers(lo, hi + 1, size=len(basis)).tolist()
    resamples = 0
    while True:
        f = build_polynomial(ws, coeffs)
        ok, tried = screen(f, ws, primes, budget)
        history.append(tried)
        if ok:
            rec = {
                "prime": tried[-1]["p"],
                "dimension": 0,
                "tried": tried,
                "resamples": resamples,
                "seed": rng_seed,
            }
            return CandidateHypersurface(ws, basis, list(coeffs), rec)
        if resamples >= retry_cap:
            raise NoSmoothMember(ws, {"resamples": resamples, "history": history})
        resamples += 1
        coeffs = rng.integers(lo, hi + 1, size=len(basis)).tolist()
        logger.debug("resampling %s (attempt %d)", ws.w, resamples)
