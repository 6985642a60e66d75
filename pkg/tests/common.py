"""Fixed weight systems and polynomials shared by several test modules."""
from fractions import Fraction
import itertools
import math

import numpy as np

from cylink.algebra import QQ, Polynomial

QUINTIC = (1, 1, 1, 1, 1)
GOLDEN_A = (22, 29, 49, 50, 75)
GOLDEN_B = (31, 35, 36, 42, 108)
GOLDEN_A_BASIS = {
    (8, 0, 1, 0, 0), (4, 3, 0, 1, 0), (1, 7, 0, 0, 0), (1, 1, 1, 1, 1),
    (0, 1, 4, 0, 0), (0, 0, 0, 3, 1), (0, 0, 0, 0, 3),
}
GOLDEN_B_TERMS = [
    (7, 1, 0, 0, 0), (2, 2, 1, 2, 0), (1, 1, 4, 1, 0), (1, 1, 1, 1, 1),
    (0, 6, 0, 1, 0), (0, 0, 7, 0, 0), (0, 0, 4, 0, 1), (0, 0, 1, 0, 2),
    (0, 0, 0, 6, 0),
]


def fermat(field=QQ):
    """z1^5 + ... + z5^5 in plain degrevlex."""
    return Polynomial.from_terms([(1, tuple(5 * np.eye(5, dtype=int)[i])) for i in range(5)],
                                 field)


def sparse_member(ws, rng, extra: int = 3, prime: int = 32003, tries: int = 50):
    """A smooth member with one pointer monomial per variable plus a few extras.

    Sparse supports keep rational Groebner computations small.
    """
    from cylink.links import build_polynomial, monomial_basis, screen

    basis = monomial_basis(ws)
    for _ in range(tries):
        chosen = {}
        for i in range(5):
            opts = [m for m in basis if m[i] >= 2 and sum(m) - m[i] <= 1]
            if not opts:
                break
            chosen[opts[rng.integers(len(opts))]] = int(rng.integers(1, 6))
        for k in rng.choice(len(basis), size=min(extra, len(basis)), replace=False):
            chosen[basis[k]] = int(rng.integers(1, 6))
        f = build_polynomial(ws, chosen)
        if screen(f, ws, (prime,))[0]:
            return f
    raise RuntimeError(f"no sparse smooth member for {ws.w}")


def fermat_oracle():
    """Invariants of the Fermat quintic from its monomial Milnor basis {0..3}^5."""
    basis = list(itertools.product(range(4), repeat=5))
    by_degree = {}
    plus = zero = minus = 0
    for m in basis:
        by_degree[sum(m)] = by_degree.get(sum(m), 0) + 1
        lv = Fraction(sum(a + 1 for a in m), 5)
        if lv.denominator == 1:
            zero += 1
        elif math.floor(lv) % 2 == 0:
            plus += 1
        else:
            minus += 1
    mu = len(basis)
    return {"h30": by_degree[15], "h21": by_degree[10], "mu": mu,
            "sig": (plus, zero, minus), "nu": (mu - 3 * (plus - minus) + 1) % 48}


ACCEPTANCE_LINES: list = []


def report(tag: str, ok, detail: str) -> None:
    """Record one acceptance line; ``ok`` is True, False or None (not evaluable)."""
    word = {True: "PASS", False: "FAIL", None: "NOT EVALUABLE"}[ok]
    line = f"{tag:<4} {word:<13} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
