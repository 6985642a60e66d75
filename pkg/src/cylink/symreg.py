"""Genetic-programming symbolic regression over {+, -, *, /}.

Trees are nested tuples: ``(op, left, right)`` for operators, ``("w", i)``
for the variable w_i (0-based, inputs sorted ascending) and ``("c", x)`` for
constants. Division is protected: x/0 evaluates to 1 and flags the sample.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

OPS = ("+", "-", "*", "/")
NVARS = 5
CONST_RANGE = (-20.0, 20.0)


class ExpressionError(ValueError):
    pass


# --------------------------------------------------------------------------
# trees


def _size(node) -> int:
    if node[0] in OPS:
        return 1 + _size(node[1]) + _size(node[2])
    return 1


def _depth(node) -> int:
    if node[0] in OPS:
        return 1 + max(_depth(node[1]), _depth(node[2]))
    return 1


def _check(node):
    if not isinstance(node, tuple) or not node:
        raise ExpressionError(f"malformed node {node!r}")
    if node[0] in OPS:
        if len(node) != 3:
            raise ExpressionError(f"operator {node[0]} needs two operands")
        _check(node[1])
        _check(node[2])
    elif node[0] == "w":
        if len(node) != 2 or not 0 <= node[1] < NVARS:
            raise ExpressionError(f"bad variable {node!r}")
    elif node[0] == "c":
        if len(node) != 2 or not math.isfinite(node[1]):
            raise ExpressionError(f"bad constant {node!r}")
    else:
        raise ExpressionError(f"unknown node {node[0]!r}")


@dataclass(frozen=True)
class Expression:
    root: tuple

    def __post_init__(self):
        _check(self.root)

    @property
    def size(self) -> int:
        return _size(self.root)

    @property
    def depth(self) -> int:
        return _depth(self.root)

    def evaluate(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Values and protected-division flags for rows of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        flags = np.zeros(len(X), dtype=bool)
        with np.errstate(all="ignore"):
            vals = _eval(self.root, X, flags)
        return np.broadcast_to(vals, (len(X),)).astype(float), flags

    def __call__(self, w) -> float:
        return eval_expression(self, w)

    def to_prefix(self) -> str:
        return _prefix(self.root)

    def to_infix(self, digits: int = 4) -> str:
        return _infix(self.root, digits)

    def to_json(self) -> dict:
        return _tree_json(self.root)

    @classmethod
    def from_json(cls, obj) -> "Expression":
        return cls(_tree_from_json(obj))

    @classmethod
    def parse(cls, text: str) -> "Expression":
        return cls(parse_prefix(text))

    def __str__(self):
        return self.to_infix()


def _eval(node, X, flags):
    op = node[0]
    if op == "w":
        return X[:, node[1]]
    if op == "c":
        return np.full(len(X), float(node[1]))
    a = _eval(node[1], X, flags)
    b = _eval(node[2], X, flags)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    zero = b == 0
    if zero.any():
        flags |= zero
        return np.where(zero, 1.0, a / np.where(zero, 1.0, b))
    return a / b


def eval_expression(e: Expression, w: Sequence[float], with_flag: bool = False):
    """Value of ``e`` at one input vector; optionally with the division flag."""
    vals, flags = e.evaluate(np.asarray(w, dtype=float).reshape(1, -1))
    return (float(vals[0]), bool(flags[0])) if with_flag else float(vals[0])


# --------------------------------------------------------------------------
# serialisation


def _prefix(node) -> str:
    if node[0] == "w":
        return f"w{node[1]}"
    if node[0] == "c":
        return repr(float(node[1]))
    return f"({node[0]} {_prefix(node[1])} {_prefix(node[2])})"


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_prefix(text: str) -> tuple:
    toks = _TOKEN.findall(text)
    pos = 0

    def atom(t):
        if re.fullmatch(r"w\d", t):
            return ("w", int(t[1:]))
        try:
            return ("c", float(t))
        except ValueError:
            raise ExpressionError(f"bad token {t!r}") from None

    def rec():
        nonlocal pos
        if pos >= len(toks):
            raise ExpressionError("unexpected end of expression")
        t = toks[pos]
        pos += 1
        if t != "(":
            if t == ")":
                raise ExpressionError("unexpected ')'")
            return atom(t)
        op = toks[pos] if pos < len(toks) else None
        if op not in OPS:
            raise ExpressionError(f"expected operator, got {op!r}")
        pos += 1
        a = rec()
        b = rec()
        if pos >= len(toks) or toks[pos] != ")":
            raise ExpressionError("expected ')'")
        pos += 1
        return (op, a, b)

    node = rec()
    if pos != len(toks):
        raise ExpressionError("trailing tokens")
    return node


def _infix(node, digits: int) -> str:
    if node[0] == "w":
        return f"w{node[1]}"
    if node[0] == "c":
        return f"{node[1]:.{digits}g}"
    return f"({_infix(node[1], digits)} {node[0]} {_infix(node[2], digits)})"


def _tree_json(node) -> dict:
    if node[0] == "w":
        return {"var": node[1]}
    if node[0] == "c":
        return {"const": float(node[1])}
    return {"op": node[0], "args": [_tree_json(node[1]), _tree_json(node[2])]}


def _tree_from_json(obj) -> tuple:
    if "var" in obj:
        return ("w", int(obj["var"]))
    if "const" in obj:
        return ("c", float(obj["const"]))
    a, b = obj["args"]
    return (obj["op"], _tree_from_json(a), _tree_from_json(b))


# --------------------------------------------------------------------------
# the published h21 fit


def _w(i):
    return ("w", i)


def _c(x):
    return ("c", x)


def _mul(*xs):
    out = xs[0]
    for x in xs[1:]:
        out = ("*", out, x)
    return out


def _add(*xs):
    out = xs[0]
    for x in xs[1:]:
        out = ("+", out, x)
    return out


def paper_formula_expression() -> Expression:
    """Tree of the published h21 fit, in the operation order of
    :func:`paper_formula_h21` so both evaluate bit-identically."""
    den = _mul(_w(0), _w(1), _w(2), _w(3))
    first = ("/", _mul(_c(14.91), _w(1),
                       _add(_mul(_w(0), _w(4)), _mul(_w(3), _add(_w(0), _w(3))))), den)
    second = ("/", _mul(_c(10.02), _w(2), _w(3), _add(_w(0), _w(4), _c(0.77))), den)
    return Expression(("+", first, second))


def paper_formula_h21(w: Sequence[float]) -> float:
    """Published symbolic fit of h21; weights are sorted ascending first."""
    if len(w) != NVARS:
        raise ExpressionError(f"need {NVARS} weights")
    if min(w) <= 0:
        raise ExpressionError("weights must be positive")
    w0, w1, w2, w3, w4 = (float(x) for x in sorted(w))
    den = w0 * w1 * w2 * w3
    return (14.91 * w1 * (w0 * w4 + w3 * (w0 + w3)) / den
            + 10.02 * w2 * w3 * (w0 + w4 + 0.77) / den)


# --------------------------------------------------------------------------
# evolution


@dataclass(frozen=True)
class GPConfig:
    population: int = 1000
    generations: int = 40
    tournament: int = 7
    p_crossover: float = 0.7
    p_subtree_mutation: float = 0.1
    p_point_mutation: float = 0.1
    p_constant_mutation: float = 0.05
    parsimony: float = 0.001  # per node, times the baseline MAE
    flag_penalty: float = 1.0  # per flagged fraction, times the baseline MAE
    max_depth: int = 10
    init_depth: tuple = (2, 6)
    validation: float = 0.1
    const_sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for name in ("p_crossover", "p_subtree_mutation", "p_point_mutation",
                     "p_constant_mutation", "validation"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.population < 2 or self.tournament < 1:
            raise ValueError("population >= 2 and tournament >= 1 required")


@dataclass
class ScoredExpression:
    expr: Expression
    size: int
    train_mae: float
    val_mae: float
    fitness: float
    flagged: float
    pareto: bool = False

    def to_json(self) -> dict:
        return {"prefix": self.expr.to_prefix(), "infix": self.expr.to_infix(),
                "tree": self.expr.to_json(), "size": self.size, "train_mae": self.train_mae,
                "val_mae": self.val_mae, "fitness": self.fitness, "flagged": self.flagged,
                "pareto": self.pareto}


class _GP:
    def __init__(self, cfg: GPConfig, nvars: int):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.nvars = nvars

    def terminal(self):
        if self.rng.random() < 0.6:
            return ("w", int(self.rng.integers(self.nvars)))
        lo, hi = CONST_RANGE
        x = self.rng.uniform(lo, hi)
        # half integers, half two-decimal reals
        return ("c", float(np.round(x) if self.rng.random() < 0.5 else np.round(x, 2)))

    def tree(self, depth: int, full: bool):
        if depth <= 1 or (not full and self.rng.random() < 0.3):
            return self.terminal()
        op = OPS[int(self.rng.integers(4))]
        return (op, self.tree(depth - 1, full), self.tree(depth - 1, full))

    def ramped(self, n: int) -> list:
        lo, hi = self.cfg.init_depth
        depths = list(range(lo, hi + 1))
        out = []
        for k in range(n):
            d = depths[k % len(depths)]
            out.append(self.tree(d, full=bool(k % 2)))
        return out

    # subtree addressing by preorder index
    def _nodes(self, node, path=()):
        yield path, node
        if node[0] in OPS:
            yield from self._nodes(node[1], path + (1,))
            yield from self._nodes(node[2], path + (2,))

    @staticmethod
    def _replace(node, path, new):
        if not path:
            return new
        i = path[0]
        parts = list(node)
        parts[i] = _GP._replace(node[i], path[1:], new)
        return tuple(parts)

    def pick(self, node):
        nodes = list(self._nodes(node))
        return nodes[int(self.rng.integers(len(nodes)))]

    def crossover(self, a, b):
        pa, _ = self.pick(a)
        _, sb = self.pick(b)
        child = self._replace(a, pa, sb)
        return child if _depth(child) <= self.cfg.max_depth else a

    def subtree_mutation(self, a):
        pa, _ = self.pick(a)
        child = self._replace(a, pa, self.tree(int(self.rng.integers(1, 4)), full=False))
        return child if _depth(child) <= self.cfg.max_depth else a

    def point_mutation(self, a):
        pa, node = self.pick(a)
        if node[0] in OPS:
            new = (OPS[int(self.rng.integers(4))], node[1], node[2])
        else:
            new = self.terminal()
        return self._replace(a, pa, new)

    def constant_mutation(self, a):
        consts = [(p, n) for p, n in self._nodes(a) if n[0] == "c"]
        if not consts:
            return self.point_mutation(a)
        p, n = consts[int(self.rng.integers(len(consts)))]
        if self.rng.random() < 0.5:
            # snapping lets short decimals be hit exactly after a random walk
            x = float(np.round(n[1], int(self.rng.integers(3))))
        else:
            x = float(n[1] + self.rng.normal(0, self.cfg.const_sigma))
        return self._replace(a, p, ("c", x))


def _score(root, X, y):
    vals, flags = Expression(root).evaluate(X)
    err = np.abs(vals - y)
    mae = float(err.mean()) if np.isfinite(err).all() else math.inf
    return mae, float(flags.mean())


def _pareto(items: list) -> None:
    best = math.inf
    for s in sorted(items, key=lambda s: (s.size, s.train_mae)):
        if s.train_mae < best:
            s.pareto = True
            best = s.train_mae


def evolve(data, cfg: GPConfig = GPConfig(), y=None, top: int = 20) -> list[ScoredExpression]:
    """Seeded GP search; returns the best ``top`` distinct expressions by fitness.

    ``data`` is a list of ``(x, y)`` pairs or an array with targets in ``y``.
    A ``cfg.validation`` share of the rows is held out and reported as
    ``val_mae``. Fitness is train MAE plus parsimony and division-flag
    penalties, both scaled by the MAE of the best constant predictor.
    """
    if y is None:
        data = list(data)
        X = np.array([d[0] for d in data], dtype=float)
        y = np.array([d[1] for d in data], dtype=float)
    else:
        X = np.asarray(data, dtype=float)
        y = np.asarray(y, dtype=float)
    if len(y) == 0:
        raise ValueError("empty dataset")
    X = X.reshape(len(y), -1)
    gp = _GP(cfg, X.shape[1])
    perm = gp.rng.permutation(len(y))
    n_val = int(round(cfg.validation * len(y))) if len(y) > 1 else 0
    vi, ti = perm[:n_val], perm[n_val:]
    Xt, yt = X[ti], y[ti]
    scale = float(np.mean(np.abs(yt - np.median(yt)))) or 1.0
    cache: dict = {}

    def fitness(root):
        hit = cache.get(root)
        if hit is None:
            mae, flagged = _score(root, Xt, yt)
            fit = mae + scale * (cfg.parsimony * _size(root) + cfg.flag_penalty * flagged)
            hit = (fit, mae, flagged)
            cache[root] = hit
        return hit

    pop = gp.ramped(cfg.population)
    fits = [fitness(t) for t in pop]
    for _gen in range(cfg.generations):
        elite_fit = min(range(len(pop)), key=lambda i: (fits[i][0], _size(pop[i])))
        elite_raw = min(range(len(pop)), key=lambda i: (fits[i][1], _size(pop[i])))
        new = [pop[elite_fit], pop[elite_raw]]

        def select():
            idx = gp.rng.integers(len(pop), size=cfg.tournament)
            return pop[min(idx.tolist(), key=lambda i: (fits[i][0], i))]

        while len(new) < cfg.population:
            r = gp.rng.random()
            a = select()
            if r < cfg.p_crossover:
                child = gp.crossover(a, select())
            elif r < cfg.p_crossover + cfg.p_subtree_mutation:
                child = gp.subtree_mutation(a)
            elif r < cfg.p_crossover + cfg.p_subtree_mutation + cfg.p_point_mutation:
                child = gp.point_mutation(a)
            elif r < (cfg.p_crossover + cfg.p_subtree_mutation + cfg.p_point_mutation
                      + cfg.p_constant_mutation):
                child = gp.constant_mutation(a)
            else:
                child = a
            new.append(child)
        pop = new
        fits = [fitness(t) for t in pop]

    seen = {}
    for t in pop:
        if t not in seen:
            seen[t] = fitness(t)
    ranked = sorted(seen, key=lambda t: (seen[t][0], _size(t), _prefix(t)))[:top]
    out = []
    for t in ranked:
        fit, mae, flagged = seen[t]
        val = _score(t, X[vi], y[vi])[0] if n_val else math.nan
        out.append(ScoredExpression(Expression(t), _size(t), mae, val, fit, flagged))
    _pareto(out)
    return out


def pareto_front(ranked: list[ScoredExpression]) -> list[ScoredExpression]:
    return sorted((s for s in ranked if s.pareto), key=lambda s: s.size)


def dumps(ranked: list[ScoredExpression]) -> str:
    return json.dumps([s.to_json() for s in ranked], indent=2)
