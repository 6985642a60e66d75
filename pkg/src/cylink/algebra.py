"""Exact polynomial arithmetic in five variables.

Monomials are packed into a single Python integer whose natural integer
ordering *is* the monomial order. Packing makes three operations cheap:

* comparison: plain ``<`` on ints,
* multiplication: ``a + b - order.offset``,
* divisibility: one subtraction against a guard-bit mask.

Each exponent occupies a ``FIELD_BITS`` wide slot whose top bit is a guard.
Orders that need "smaller exponent is bigger" (reverse lexicographic tie
breaks) store the complement ``EXP_CAP - e`` instead of ``e``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

NVARS = 5
FIELD_BITS = 16
GUARD = 1 << (FIELD_BITS - 1)
EXP_CAP = 1 << (FIELD_BITS - 2)
_SLOT_MASK = (1 << FIELD_BITS) - 1

ExponentVector = tuple  # 5-tuple of non-negative ints


class AlgebraError(ValueError):
    pass


def weighted_degree(mono: Sequence[int], w: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(mono, w))


def check_exponents(mono: Sequence[int]) -> ExponentVector:
    mono = tuple(int(a) for a in mono)
    if len(mono) != NVARS:
        raise AlgebraError(f"exponent vector must have {NVARS} entries, got {mono}")
    for a in mono:
        if a < 0:
            raise AlgebraError(f"negative exponent in {mono}")
        if a > EXP_CAP:
            raise OverflowError(f"exponent {a} exceeds cap {EXP_CAP}")
    return mono


# --------------------------------------------------------------------------
# coefficient fields


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class CoefficientField:
    """Either GF(p) (``kind='gf'``) or the rationals (``kind='qq'``)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "gf":
            if self.p is None or not is_prime(self.p):
                raise AlgebraError(f"prime field needs a prime modulus, got {self.p}")
        elif self.kind == "qq":
            if self.p is not None:
                raise AlgebraError("rational field takes no modulus")
        else:
            raise AlgebraError(f"unknown field kind {self.kind!r}")

    @property
    def modulus(self) -> int | None:
        return self.p if self.kind == "gf" else None

    def __call__(self, c) -> int | Fraction:
        if self.kind == "gf":
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            return int(c) % self.p
        return Fraction(c)

    def inv(self, c):
        if self.kind == "gf":
            return pow(c, -1, self.p)
        return 1 / c

    def encode(self, c) -> str:
        if self.kind == "gf":
            return str(c)
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

    def decode(self, s: str):
        return self(Fraction(s))

    def to_json(self) -> dict:
        return {"kind": "gf", "p": self.p} if self.kind == "gf" else {"kind": "qq"}

    @classmethod
    def from_json(cls, obj: Mapping) -> "CoefficientField":
        return cls(obj["kind"], obj.get("p"))

    def __str__(self):
        return f"GF({self.p})" if self.kind == "gf" else "QQ"


def GF(p: int) -> CoefficientField:
    return CoefficientField("gf", p)


QQ = CoefficientField("qq")
DEFAULT_PRIME = 32003


# --------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """``kind`` in {degrevlex, deglex, lex}; ``grading`` None means standard."""

    kind: str = "degrevlex"
    grading: tuple | None = None

    # derived packing data, filled in __post_init__
    _shifts: tuple = field(default=(), init=False, repr=False, compare=False)
    _reverse: bool = field(default=False, init=False, repr=False, compare=False)
    _offset: int = field(default=0, init=False, repr=False, compare=False)
    _guards: int = field(default=0, init=False, repr=False, compare=False)
    _graded: bool = field(default=True, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("degrevlex", "deglex", "lex"):
            raise AlgebraError(f"unknown monomial order {self.kind!r}")
        if self.grading is not None:
            g = tuple(int(x) for x in self.grading)
            if len(g) != NVARS or min(g) < 1:
                raise AlgebraError(f"grading must be {NVARS} positive ints")
            object.__setattr__(self, "grading", g)
        reverse = self.kind == "degrevlex"
        # slot position per variable; higher slot = more significant
        if reverse:
            # z5 decides first among equal degree: smaller e5 wins
            shifts = tuple(FIELD_BITS * i for i in range(NVARS))
        else:
            shifts = tuple(FIELD_BITS * (NVARS - 1 - i) for i in range(NVARS))
        object.__setattr__(self, "_shifts", shifts)
        object.__setattr__(self, "_reverse", reverse)
        object.__setattr__(self, "_graded", self.kind != "lex")
        object.__setattr__(
            self, "_offset", sum(EXP_CAP << s for s in shifts) if reverse else 0
        )
        object.__setattr__(self, "_guards", sum(GUARD << s for s in shifts))

    @property
    def weights(self) -> tuple:
        return self.grading if self.grading is not None else (1,) * NVARS

    @property
    def offset(self) -> int:
        """Subtract from ``encode(a) + encode(b)`` to get ``encode(a + b)``."""
        return self._offset

    def encode(self, mono: Sequence[int]) -> int:
        mono = check_exponents(mono)
        key = 0
        if self._reverse:
            for a, s in zip(mono, self._shifts):
                key |= (EXP_CAP - a) << s
        else:
            for a, s in zip(mono, self._shifts):
                key |= a << s
        if self._graded:
            key |= weighted_degree(mono, self.weights) << (FIELD_BITS * NVARS)
        return key

    def decode(self, key: int) -> ExponentVector:
        if self._reverse:
            return tuple(EXP_CAP - ((key >> s) & _SLOT_MASK) for s in self._shifts)
        return tuple((key >> s) & _SLOT_MASK for s in self._shifts)

    def divides(self, a: int, b: int) -> bool:
        """True iff monomial ``a`` divides monomial ``b`` (both encoded)."""
        g = self._guards
        if self._reverse:
            return ((a | g) - b) & g == g
        return ((b | g) - a) & g == g

    def quotient(self, b: int, a: int) -> int:
        """Encoded ``b / a``; caller guarantees divisibility."""
        return b - a + self._offset

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode(tuple(max(x, y) for x, y in zip(ea, eb)))

    def coprime(self, a: int, b: int) -> bool:
        ea, eb = self.decode(a), self.decode(b)
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))

    def to_json(self) -> dict:
        return {"kind": self.kind, "grading": list(self.grading) if self.grading else None}

    @classmethod
    def from_json(cls, obj: Mapping) -> "MonomialOrder":
        g = obj.get("grading")
        return cls(obj["kind"], tuple(g) if g else None)

    def __str__(self):
        return self.kind if self.grading is None else f"{self.kind}{list(self.grading)}"


DEGREVLEX = MonomialOrder("degrevlex")


# --------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class Term:
    coeff: object
    mono: ExponentVector


class Polynomial:
    """Immutable sparse polynomial in z1..z5.

    ``_d`` maps encoded monomials to nonzero coefficients. ``weights`` is
    optional grading metadata used for weighted-degree queries.
    """

    __slots__ = ("field", "order", "weights", "_d", "_terms")

    def __init__(self, field: CoefficientField, order: MonomialOrder,
                 data: Mapping[int, object] | None = None, weights=None):
        self.field = field
        self.order = order
        self.weights = tuple(weights) if weights is not None else None
        self._d = {k: c for k, c in (data or {}).items() if c}
        self._terms = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Iterable, field: CoefficientField = None,
                   order: MonomialOrder = DEGREVLEX, weights=None) -> "Polynomial":
        """Build from ``(coeff, exponents)`` pairs; repeated monomials add up."""
        field = field or GF(DEFAULT_PRIME)
        d: dict = {}
        for c, mono in terms:
            k = order.encode(mono)
            d[k] = field(d.get(k, 0) + field(c))
        return cls(field, order, d, weights)

    @classmethod
    def monomial(cls, mono, coeff=1, field=None, order=DEGREVLEX, weights=None):
        return cls.from_terms([(coeff, mono)], field, order, weights)

    @classmethod
    def variable(cls, i: int, field=None, order=DEGREVLEX, weights=None):
        """z_i for i in 1..5."""
        e = [0] * NVARS
        e[i - 1] = 1
        return cls.monomial(e, 1, field, order, weights)

    @classmethod
    def constant(cls, c, field=None, order=DEGREVLEX, weights=None):
        return cls.monomial((0,) * NVARS, c, field, order, weights)

    def _new(self, d) -> "Polynomial":
        return Polynomial(self.field, self.order, d, self.weights)

    def with_order(self, order: MonomialOrder) -> "Polynomial":
        if order == self.order:
            return self
        d = {order.encode(self.order.decode(k)): c for k, c in self._d.items()}
        return Polynomial(self.field, order, d, self.weights)

    def with_field(self, field: CoefficientField) -> "Polynomial":
        if field == self.field:
            return self
        if self.field.kind == "gf" and field.kind == "qq":
            raise AlgebraError("cannot lift prime-field coefficients to QQ")
        return Polynomial(field, self.order, {k: field(c) for k, c in self._d.items()},
                          self.weights)

    # inspection -------------------------------------------------------------

    @property
    def terms(self) -> list[Term]:
        if self._terms is None:
            dec = self.order.decode
            self._terms = [Term(self._d[k], dec(k)) for k in sorted(self._d, reverse=True)]
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._d

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def leading_key(self) -> int:
        if not self._d:
            raise AlgebraError("zero polynomial has no leading term")
        return max(self._d)

    def leading_monomial(self) -> ExponentVector:
        return self.order.decode(self.leading_key())

    def leading_coefficient(self):
        return self._d[self.leading_key()]

    def coefficient(self, mono) -> object:
        return self._d.get(self.order.encode(mono), self.field(0))

    def max_exponents(self) -> ExponentVector:
        return tuple(max(col) for col in zip(*(self.order.decode(k) for k in self._d)))

    def monomials(self) -> list[ExponentVector]:
        return [t.mono for t in self.terms]

    def weighted_degrees(self, w=None) -> list[int]:
        w = w or self.weights
        if w is None:
            raise AlgebraError("no weights attached")
        return [weighted_degree(m, w) for m in self.monomials()]

    def monic(self) -> "Polynomial":
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        inv = self.field.inv(lc)
        p = self.field.modulus
        if p:
            return self._new({k: c * inv % p for k, c in self._d.items()})
        return self._new({k: c * inv for k, c in self._d.items()})

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.field != self.field:
            raise AlgebraError(f"field mismatch: {self.field} vs {other.field}")
        if other.order != self.order:
            raise AlgebraError(f"order mismatch: {self.order} vs {other.order}")

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.field, self.order, self.weights)
        self._check(other)
        return other

    def _add(self, other: "Polynomial", sign: int) -> "Polynomial":
        other = self._coerce(other)
        d = dict(self._d)
        p = self.field.modulus
        for k, c in other._d.items():
            v = d.get(k, 0) + sign * c
            if p:
                v %= p
            if v:
                d[k] = v
            else:
                d.pop(k, None)
        return self._new(d)

    def __add__(self, other):
        return self._add(other, 1)

    def __sub__(self, other):
        return self._add(other, -1)

    __radd__ = __add__

    def __rsub__(self, other):
        return (-self)._add(other, 1)

    def __neg__(self):
        p = self.field.modulus
        return self._new({k: (-c % p if p else -c) for k, c in self._d.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if self._d and other._d:
            ma, mb = self.max_exponents(), other.max_exponents()
            if max(x + y for x, y in zip(ma, mb)) > EXP_CAP:
                raise OverflowError("exponent overflow in product")
        p = self.field.modulus
        off = self.order.offset
        d: dict = {}
        for ka, ca in self._d.items():
            for kb, cb in other._d.items():
                k = ka + kb - off
                d[k] = d.get(k, 0) + ca * cb
        if p:
            d = {k: v % p for k, v in d.items()}
        return self._new(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative power")
        result = Polynomial.constant(1, self.field, self.order, self.weights)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.field, self.order)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.field == other.field and self.order == other.order
                and self._d == other._d)

    def __hash__(self):
        return hash((self.field, self.order, frozenset(self._d.items())))

    def __repr__(self):
        return f"Polynomial({self}, {self.field})"

    def __str__(self):
        if not self._d:
            return "0"
        parts = []
        for t in self.terms:
            mono = "*".join(
                f"z{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(t.mono) if a
            )
            c = self.field.encode(t.coeff)
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    # calculus -------------------------------------------------------------

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to z_i, i in 1..5."""
        return partial_derivative(self, i)

    # serialization --------------------------------------------------------

    def to_json(self, degree: int | None = None) -> dict:
        obj = {
            "weights": list(self.weights) if self.weights else None,
            "degree": degree,
            "field": self.field.to_json(),
            "terms": [{"c": self.field.encode(t.coeff), "e": list(t.mono)} for t in self.terms],
        }
        if degree is None and self.weights and self._d:
            degs = set(self.weighted_degrees())
            if len(degs) == 1:
                obj["degree"] = degs.pop()
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: Mapping, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        fld = CoefficientField.from_json(obj["field"])
        w = obj.get("weights")
        return cls.from_terms(((fld.decode(t["c"]), t["e"]) for t in obj["terms"]),
                              fld, order, tuple(w) if w else None)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise AlgebraError(f"unknown op {op!r}")


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    if not 1 <= i <= NVARS:
        raise AlgebraError(f"variable index must be in 1..{NVARS}")
    order = f.order
    p = f.field.modulus
    d = {}
    for k, c in f._d.items():
        e = list(order.decode(k))
        a = e[i - 1]
        if a == 0:
            continue
        v = c * a
        if p:
            v %= p
        if not v:
            continue
        e[i - 1] = a - 1
        d[order.encode(e)] = v
    return Polynomial(f.field, order, d, f.weights)


def is_weighted_homogeneous(f: Polynomial, w: Sequence[int], d: int) -> bool:
    if f.is_zero():
        raise AlgebraError("zero polynomial has no degree")
    return all(weighted_degree(m, w) == d for m in f.monomials())
