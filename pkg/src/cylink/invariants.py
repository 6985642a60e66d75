"""Hodge numbers, Steenbrink signature and the CN invariant of a link.

Everything is read off the standard monomials of the Jacobian ideal, so a
single Groebner computation serves all invariants of one polynomial.
"""

from __future__ import annotations

import itertools
import logging
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_PRIME, GF, QQ, CoefficientField, MonomialOrder, Polynomial
from .groebner import (
    Budget,
    GroebnerBasis,
    GroebnerError,
    GroebnerTimeout,
    StandardMonomialSet,
    buchberger,
    standard_monomials,
)
from .links import (
    SCREEN_PRIMES,
    NoSmoothMember,
    WeightSystem,
    _as_ws,
    jacobian,
    sample_smooth_polynomial,
)

logger = logging.getLogger(__name__)

CAMPAIGN_POOL = (1, 99)  # integers strictly inside (0, 100)
CHECK_PRIME = 1000003  # second prime for confirming basis lengths

INVARIANT_COLUMNS = (
    "w1", "w2", "w3", "w4", "w5", "d", "gb_length", "mu", "mu_plus", "mu_zero",
    "mu_minus", "h30", "h21", "b3", "nu", "status", "elapsed_gb_ms", "elapsed_inv_ms",
)


class InvariantError(GroebnerError):
    pass


class HodgeWarning(UserWarning):
    """h30 differs from 1; every CY link computed so far has h30 = 1."""


@dataclass(frozen=True)
class HodgePair:
    h30: int
    h21: int

    @property
    def b3(self) -> int:
        return 2 * (self.h30 + self.h21)


@dataclass(frozen=True)
class SignatureTriple:
    mu_plus: int
    mu_zero: int
    mu_minus: int

    @property
    def mu(self) -> int:
        return self.mu_plus + self.mu_zero + self.mu_minus


@dataclass(frozen=True)
class CNInvariant:
    nu: int
    raw: int  # value before reduction mod 48


@dataclass
class LinkInvariants:
    ws: WeightSystem
    hodge: HodgePair
    signature: SignatureTriple
    cn: CNInvariant
    gb_length: int
    elapsed: dict = field(default_factory=dict)

    @property
    def mu(self) -> int:
        return self.signature.mu

    def to_row(self, status: str = "ok") -> dict:
        w = self.ws.w
        return {
            "w1": w[0], "w2": w[1], "w3": w[2], "w4": w[3], "w5": w[4],
            "d": self.ws.d, "gb_length": self.gb_length, "mu": self.mu,
            "mu_plus": self.signature.mu_plus, "mu_zero": self.signature.mu_zero,
            "mu_minus": self.signature.mu_minus, "h30": self.hodge.h30,
            "h21": self.hodge.h21, "b3": self.hodge.b3, "nu": self.cn.nu,
            "status": status,
            "elapsed_gb_ms": round(1000 * self.elapsed.get("gb", 0.0), 3),
            "elapsed_inv_ms": round(1000 * self.elapsed.get("inv", 0.0), 3),
        }


# --------------------------------------------------------------------------
# scalar invariants


def milnor_number(ws) -> int:
    """Product of (d/w_i - 1), exact; must be an integer."""
    ws = _as_ws(ws)
    mu = Fraction(1)
    for w in ws.w:
        mu *= Fraction(ws.d, w) - 1
    if mu.denominator != 1:
        raise InvariantError(f"Milnor product {mu} is not integral for {ws.w}")
    return int(mu)


def l_value(alpha: Sequence[int], ws) -> Fraction:
    ws = _as_ws(ws)
    return Fraction(sum((a + 1) * w for a, w in zip(alpha, ws.w)), ws.d)


def hodge_degrees(ws) -> tuple[int, int]:
    """Weighted degrees carrying h30 and h21, checked in both forms."""
    ws = _as_ws(ws)
    s = sum(ws.w)
    l30, l21 = 4 * ws.d - s, 3 * ws.d - s
    if (l30, l21) != (3 * ws.d, 2 * ws.d):
        raise InvariantError(f"{ws.w} violates d = sum(w)")
    return l30, l21


# --------------------------------------------------------------------------
# Milnor algebra


def _field_poly(f: Polynomial, fld: CoefficientField | None) -> Polynomial:
    fld = fld or GF(DEFAULT_PRIME)
    if f.field == fld:
        return f
    if f.field.kind == "gf" and fld.kind == "gf":
        # re-reduce via the integer representatives
        return Polynomial.from_terms([(int(c), m) for c, m in f.terms], fld, f.order,
                                     f.weights)
    return f.with_field(fld)


def milnor_basis(f: Polynomial, ws, field: CoefficientField | None = None,
                 order: MonomialOrder | None = None,
                 budget: Budget | None = None) -> tuple[GroebnerBasis, StandardMonomialSet]:
    """Groebner basis of the Jacobian ideal and its standard monomials.

    Computed over ``field`` (default GF(32003)) in ``order`` (default the
    weighted degrevlex order of ``ws``).
    """
    ws = _as_ws(ws)
    order = order or ws.order()
    g = _field_poly(f, field).with_order(order)
    gens = [h for h in jacobian(g) if not h.is_zero()]
    if not gens:
        raise InvariantError("Jacobian ideal is zero")
    G = buchberger(gens, budget=budget)
    return G, standard_monomials(G, ws.w)


def sasakian_hodge(f: Polynomial, ws, sms: StandardMonomialSet | None = None,
                   **kw) -> HodgePair:
    ws = _as_ws(ws)
    if sms is None:
        _, sms = milnor_basis(f, ws, **kw)
    l30, l21 = hodge_degrees(ws)
    pair = HodgePair(sms.graded_counts.get(l30, 0), sms.graded_counts.get(l21, 0))
    if pair.h30 != 1:
        warnings.warn(f"h30 = {pair.h30} for {ws.w}", HodgeWarning, stacklevel=2)
    return pair


def classify_signature(monomials: np.ndarray, ws) -> SignatureTriple:
    """Steenbrink counts for a set of exponent rows, in exact integers.

    With n = sum((a_i + 1) w_i) we have l = n/d, so l is an integer iff d | n
    and floor(l) = n // d.
    """
    ws = _as_ws(ws)
    monos = np.asarray(monomials, dtype=np.int64).reshape(-1, 5)
    num = (monos + 1) @ np.asarray(ws.w, dtype=np.int64)
    integral = num % ws.d == 0
    odd = (num // ws.d) % 2 == 1
    mu0 = int(integral.sum())
    mu_minus = int((~integral & odd).sum())
    mu_plus = int((~integral & ~odd).sum())
    return SignatureTriple(mu_plus, mu0, mu_minus)


def steenbrink_signature(f: Polynomial, ws, sms: StandardMonomialSet | None = None,
                         **kw) -> SignatureTriple:
    ws = _as_ws(ws)
    if sms is None:
        _, sms = milnor_basis(f, ws, **kw)
    return classify_signature(sms.monomials, ws)


def cn_from_signature(sig: SignatureTriple, mu: int) -> CNInvariant:
    raw = mu - 3 * (sig.mu_plus - sig.mu_minus) + 1
    return CNInvariant(raw % 48, raw)


def cn_invariant(f: Polynomial, ws, sms: StandardMonomialSet | None = None,
                 **kw) -> CNInvariant:
    ws = _as_ws(ws)
    sig = steenbrink_signature(f, ws, sms, **kw)
    return cn_from_signature(sig, milnor_number(ws))


def compute_invariants(f: Polynomial, ws, field: CoefficientField | None = None,
                       order: MonomialOrder | None = None,
                       budget: Budget | None = None) -> LinkInvariants:
    """All invariants from one Groebner computation, with consistency checks."""
    ws = _as_ws(ws)
    t0 = time.perf_counter()
    G, sms = milnor_basis(f, ws, field, order, budget)
    t1 = time.perf_counter()
    mu = milnor_number(ws)
    if sms.total != mu:
        raise InvariantError(
            f"{ws.w}: {sms.total} standard monomials but Milnor number {mu}")
    hodge = sasakian_hodge(f, ws, sms)
    sig = classify_signature(sms.monomials, ws)
    cn = cn_from_signature(sig, mu)
    t2 = time.perf_counter()
    return LinkInvariants(ws, hodge, sig, cn, G.length, {"gb": t1 - t0, "inv": t2 - t1})


# --------------------------------------------------------------------------
# weak R-equivalence campaign


@dataclass
class CampaignCell:
    permutation: tuple
    weights: tuple
    index: int
    seed: int
    status: str  # ok | timeout | no_smooth
    coefficients: list | None = None
    resamples: int = 0
    h30: int | None = None
    h21: int | None = None
    nu: int | None = None
    gb_length: int | None = None


@dataclass
class EquivalenceReport:
    base: tuple
    cells: list
    invariants_agree: bool
    lengths_constant_within: bool
    lengths_vary_across: bool
    distinct_invariants: list
    lengths_by_permutation: dict
    resamples: int
    failures: int

    def to_json(self) -> dict:
        out = asdict(self)
        out["lengths_by_permutation"] = {
            ",".join(map(str, k)): v for k, v in self.lengths_by_permutation.items()}
        return out


def _campaign_job(args) -> CampaignCell:
    sigma, w, idx, seed, pool, start_all_ones, primes, budget = args
    ws = WeightSystem(tuple(w), sum(w))
    try:
        cand = sample_smooth_polynomial(ws, seed, pool=pool, primes=primes,
                                        start_all_ones=start_all_ones, budget=budget)
    except NoSmoothMember as e:
        return CampaignCell(sigma, ws.w, idx, seed, "no_smooth",
                            resamples=e.screening["resamples"])
    except GroebnerTimeout:
        return CampaignCell(sigma, ws.w, idx, seed, "timeout")
    cell = CampaignCell(sigma, ws.w, idx, seed, "ok", list(cand.coefficients),
                        cand.screening["resamples"])
    try:
        inv = compute_invariants(cand.polynomial(), ws, budget=budget)
    except GroebnerTimeout:
        cell.status = "timeout"
        return cell
    cell.h30, cell.h21, cell.nu = inv.hodge.h30, inv.hodge.h21, inv.cn.nu
    try:
        cell.gb_length = confirmed_gb_length(cand.polynomial(), ws, inv.gb_length, budget)
    except GroebnerTimeout:
        cell.status = "timeout"
    return cell


def confirmed_gb_length(f: Polynomial, ws, length: int, budget: Budget | None = None) -> int:
    """Reduced basis length over QQ, given its value ``length`` at the default prime.

    A reduction can be unlucky for a particular prime and shorten the basis.
    The length is rechecked at a second prime; on disagreement the rational
    computation decides.
    """
    other = milnor_basis(f, ws, GF(CHECK_PRIME), budget=budget)[0].length
    if other == length:
        return length
    logger.info("basis length %d at p=%d but %d at p=%d for %s; using QQ",
                length, DEFAULT_PRIME, other, CHECK_PRIME, ws.w)
    return milnor_basis(f, ws, QQ, budget=budget)[0].length


def campaign_permutations(n: int, rng: np.random.Generator) -> list[tuple]:
    """Identity first, then distinct random permutations of five slots."""
    perms = [tuple(range(5))]
    everything = list(itertools.permutations(range(5)))
    if n > len(everything):
        raise InvariantError(f"only {len(everything)} permutations exist")
    while len(perms) < n:
        p = everything[int(rng.integers(len(everything)))]
        if p not in perms:
            perms.append(p)
    return perms[:n]


def weak_r_equivalence_campaign(ws, n_permutations: int = 10, n_polys_per_perm: int = 50,
                                coeff_range: tuple = CAMPAIGN_POOL, rng_seed: int = 0,
                                *, all_ones: bool = False,
                                primes: Sequence[int] = SCREEN_PRIMES,
                                budget: Budget | None = None,
                                workers: int = 1) -> EquivalenceReport:
    """Sample smooth members of permuted weight systems and compare invariants.

    ``coeff_range`` is an inclusive integer interval. With ``all_ones`` the
    first member of each permutation is the all-ones polynomial.
    """
    ws = _as_ws(ws)
    rng = np.random.default_rng(rng_seed)
    perms = campaign_permutations(n_permutations, rng)
    seeds = rng.integers(0, 2**31, size=(len(perms), n_polys_per_perm)).tolist()
    jobs = []
    for a, sigma in enumerate(perms):
        w = ws.permute(sigma).w
        for b in range(n_polys_per_perm):
            jobs.append((sigma, w, b, seeds[a][b], tuple(coeff_range),
                         all_ones and b == 0, tuple(primes), budget))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            cells = list(ex.map(_campaign_job, jobs))
    else:
        cells = [_campaign_job(j) for j in jobs]
    ok = [c for c in cells if c.status == "ok"]
    distinct = sorted({(c.h30, c.h21, c.nu) for c in ok})
    lengths: dict = {}
    for c in ok:
        lengths.setdefault(c.permutation, set()).add(c.gb_length)
    lengths = {k: sorted(v) for k, v in lengths.items()}
    within = all(len(v) == 1 for v in lengths.values())
    across = len({v[0] for v in lengths.values() if len(v) == 1}) > 1
    return EquivalenceReport(
        base=ws.w, cells=cells, invariants_agree=len(distinct) <= 1,
        lengths_constant_within=within, lengths_vary_across=across,
        distinct_invariants=[list(t) for t in distinct], lengths_by_permutation=lengths,
        resamples=sum(c.resamples for c in cells),
        failures=len(cells) - len(ok))
