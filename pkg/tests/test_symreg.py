import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cylink.symreg import (
    Expression, ExpressionError, GPConfig, dumps, eval_expression, evolve,
    paper_formula_expression, paper_formula_h21, pareto_front, parse_prefix,
)

W0 = ("w", 0)
W1 = ("w", 1)

trees = st.recursive(
    st.one_of(st.builds(lambda i: ("w", i), st.integers(0, 4)),
              st.builds(lambda c: ("c", c), st.floats(-20, 20, allow_nan=False))),
    lambda kids: st.tuples(st.sampled_from("+-*/"), kids, kids),
    max_leaves=12,
)


def test_evaluation_examples():
    assert eval_expression(Expression(("+", W0, W1)), (2, 3, 0, 0, 0)) == 5
    assert eval_expression(Expression(("c", 7.0)), (9, 9, 9, 9, 9)) == 7
    val, flag = eval_expression(Expression(("/", W0, W1)), (1, 0, 0, 0, 0), with_flag=True)
    assert (val, flag) == (1.0, True)
    val, flag = eval_expression(Expression(("/", W0, W1)), (1, 4, 0, 0, 0), with_flag=True)
    assert (val, flag) == (0.25, False)


def test_malformed_trees_rejected():
    for bad in [("w", 5), ("^", W0, W1), ("+", W0), ("c", float("inf")), ()]:
        with pytest.raises(ExpressionError):
            Expression(bad)
    for text in ["(+ w0)", "(% w0 w1)", "w0 w1", "(+ w0 w1", "foo"]:
        with pytest.raises(ExpressionError):
            parse_prefix(text)


@given(trees)
def test_serialisation_roundtrips(root):
    e = Expression(root)
    assert Expression.parse(e.to_prefix()) == e
    assert Expression.from_json(json.loads(json.dumps(e.to_json()))) == e


@given(trees, st.lists(st.floats(-5, 5), min_size=5, max_size=5))
def test_evaluation_is_pure_and_vectorised(root, w):
    e = Expression(root)
    a = eval_expression(e, w, with_flag=True)
    b = eval_expression(e, w, with_flag=True)
    assert a == b or (np.isnan(a[0]) and np.isnan(b[0]))
    vals, flags = e.evaluate(np.array([w, w]))
    assert flags[0] == a[1]
    assert vals[0] == a[0] or (np.isnan(vals[0]) and np.isnan(a[0]))


def test_size_and_depth():
    e = Expression(("*", ("+", W0, ("c", 1.0)), W1))
    assert e.size == 5 and e.depth == 3
    assert e.to_infix() == "((w0 + 1) * w1)"


def test_published_formula_values():
    assert paper_formula_h21((1, 1, 1, 1, 1)) == pytest.approx(72.4854, abs=1e-9)
    assert paper_formula_h21((1, 1, 1, 1, 2)) == pytest.approx(97.4154, abs=1e-9)
    # inputs are sorted before use
    assert paper_formula_h21((2, 1, 1, 1, 1)) == paper_formula_h21((1, 1, 1, 1, 2))
    with pytest.raises(ExpressionError):
        paper_formula_h21((0, 1, 1, 1, 1))
    with pytest.raises(ExpressionError):
        paper_formula_h21((1, 1, 1, 1))


def test_published_formula_tree_is_exact_transcription():
    e = paper_formula_expression()
    rng = np.random.default_rng(0)
    W = np.sort(rng.integers(1, 200, size=(1000, 5)), axis=1)
    vals, flags = e.evaluate(W)
    assert not flags.any()
    assert np.array_equal(vals, [paper_formula_h21(w) for w in W])


def test_published_formula_on_remaining_systems():
    hard = [(1, 1, 8, 19, 28), (1, 1, 9, 21, 32), (1, 1, 11, 26, 39), (1, 1, 12, 28, 42),
            (1, 6, 34, 81, 122), (1, 6, 40, 93, 140)]
    assert [round(paper_formula_h21(w)) for w in hard] == [338, 377, 447, 476, 243, 272]


# ---------------------------------------------------------------- evolution


def grid(n=60, seed=0):
    return np.random.default_rng(seed).integers(1, 20, size=(n, 5)).astype(float)


SMALL = GPConfig(population=200, generations=15, seed=3)


def test_finds_exact_sum():
    X = grid()
    ranked = evolve(X, SMALL, y=X[:, 0] + X[:, 1])
    best = min(ranked, key=lambda s: s.train_mae)
    assert best.train_mae < 1e-6 and best.val_mae < 1e-6
    Xn = grid(30, seed=9)
    vals, _ = best.expr.evaluate(Xn)
    assert np.abs(vals - (Xn[:, 0] + Xn[:, 1])).max() < 1e-6


def test_finds_constant():
    X = grid()
    ranked = evolve(X, GPConfig(population=100, generations=10, seed=1), y=np.full(len(X), 3.0))
    assert ranked[0].train_mae < 1e-12


def test_parsimony_shrinks_winner():
    X = grid()
    y = X[:, 0] * X[:, 1] + X[:, 2] / (X[:, 3] + 1.0)
    loose = evolve(X, GPConfig(population=200, generations=10, parsimony=0.0, seed=2), y=y)
    tight = evolve(X, GPConfig(population=200, generations=10, parsimony=1.0, seed=2), y=y)
    assert tight[0].size < loose[0].size


def test_seeded_determinism_and_output():
    X = grid()
    y = 2 * X[:, 0] - X[:, 4]
    a = evolve(X, SMALL, y=y)
    b = evolve(list(zip(X, y)), SMALL)
    assert dumps(a) == dumps(b)
    front = pareto_front(a)
    assert front and all(s.pareto for s in front)
    assert [s.size for s in front] == sorted(s.size for s in front)


def test_elitism_never_loses_best_raw_error():
    X = grid()
    y = X[:, 0] * X[:, 2] - X[:, 1]
    cfg0 = GPConfig(population=150, generations=0, seed=4)
    cfg = GPConfig(population=150, generations=8, seed=4)
    start = min(s.train_mae for s in evolve(X, cfg0, y=y, top=150))
    end = min(s.train_mae for s in evolve(X, cfg, y=y, top=150))
    assert end <= start


def test_config_validation():
    with pytest.raises(ValueError):
        GPConfig(p_crossover=1.5)
    with pytest.raises(ValueError):
        GPConfig(max_depth=0)
    with pytest.raises(ValueError):
        evolve(np.zeros((0, 5)), SMALL, y=np.zeros(0))
