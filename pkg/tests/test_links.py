import csv
import itertools
from fractions import Fraction

import pytest

from cylink.algebra import GF, QQ, Polynomial
from cylink.links import (
    RESAMPLE_POOL, SCREEN_PRIMES, CandidateHypersurface, DegenerateReduction, NoSmoothMember,
    WeightSystem, WeightSystemError, admits_quasismooth, build_polynomial,
    candidate_weight_systems, jacobian, milnor_product, monomial_basis, sample_smooth_polynomial,
    screen, singular_locus_dimension, validate_weight_system,
)

from common import GOLDEN_A, GOLDEN_A_BASIS, fermat
from oracles.weight_enum import quasismooth, weight_systems


def brute_basis(w):
    d = sum(w)
    ranges = [range(d // x + 1) for x in w]
    return sorted((m for m in itertools.product(*ranges)
                   if sum(a * x for a, x in zip(m, w)) == d), reverse=True)


def test_validation():
    ws = validate_weight_system([1, 1, 1, 1, 2])
    assert ws == WeightSystem((1, 1, 1, 1, 2), 6)
    with pytest.raises(WeightSystemError):
        validate_weight_system((1, 1, 1, 1))
    with pytest.raises(WeightSystemError):
        validate_weight_system((0, 1, 1, 1, 1))


def test_permutation_and_key():
    ws = validate_weight_system((75, 22, 49, 29, 50))
    assert ws.key == GOLDEN_A
    assert ws.permute((1, 3, 2, 4, 0)).w == GOLDEN_A
    assert ws.order().grading == ws.w


def test_golden_basis():
    assert set(monomial_basis(GOLDEN_A)) == GOLDEN_A_BASIS
    # the monomial z1^4 z2^3 z3 is one short of the degree
    assert sum(a * x for a, x in zip((4, 3, 1, 0, 0), GOLDEN_A)) == 224


@pytest.mark.parametrize("w", [(1, 1, 1, 1, 1), (1, 1, 1, 1, 2), (1, 1, 2, 2, 2),
                               (1, 2, 3, 3, 3), (3, 4, 4, 4, 5), (22, 29, 49, 50, 75)])
def test_basis_matches_brute_force(w):
    basis = monomial_basis(w)
    assert basis == brute_basis(w)
    if w == (1, 1, 1, 1, 1):
        assert len(basis) == 126


def test_milnor_product():
    assert milnor_product((1, 1, 1, 1, 1)) == 1024
    assert milnor_product(GOLDEN_A) == 1568
    assert milnor_product((1, 1, 12, 28, 42)) == 82668
    assert milnor_product((1, 1, 1, 1, 3)) == 1728
    assert milnor_product((1, 2, 2, 2, 2)) == Fraction(2401, 2)


def test_quasismooth_criterion_matches_oracle():
    for d in range(5, 41):
        for w in itertools.combinations_with_replacement(range(1, d), 5):
            if sum(w) == d:
                assert admits_quasismooth(w) == quasismooth(w), w


def test_candidate_systems_match_pointer_enumeration():
    assert candidate_weight_systems(60) == weight_systems(60)


def test_candidate_systems_match_frozen_classification(data_dir):
    with open(data_dir / "weight_systems_7555.csv") as fh:
        frozen = [tuple(map(int, r)) for r in list(csv.reader(fh))[1:]]
    assert len(frozen) == 7555
    upto = [w for w in frozen if sum(w) <= 120]
    assert candidate_weight_systems(120) == upto
    assert len(upto) == 2946


def test_candidate_filters():
    got = candidate_weight_systems(30, max_mu=500)
    assert all(milnor_product(w) <= 500 for w in got)
    assert (2, 2, 2, 2, 2) not in candidate_weight_systems(10)
    assert (2, 2, 2, 2, 2) in candidate_weight_systems(10, reduced=False)


# ---------------------------------------------------------------- polynomials


def test_build_polynomial_forms():
    ws = validate_weight_system(GOLDEN_A)
    basis = monomial_basis(ws)
    dense = build_polynomial(ws, [1] * len(basis))
    sparse = build_polynomial(ws, {m: 1 for m in basis})
    assert dense == sparse
    assert dense.order == ws.order() and dense.field == QQ
    with pytest.raises(WeightSystemError):
        build_polynomial(ws, {(1, 0, 0, 0, 0): 1})
    with pytest.raises(WeightSystemError):
        build_polynomial(ws, {basis[0]: 0})


def test_singular_locus():
    ws = validate_weight_system((1, 1, 1, 1, 1))
    assert singular_locus_dimension(fermat(), ws, 101) == 0
    # dropping z5^5 leaves the point (0:0:0:0:1) singular
    cone = fermat() - Polynomial.monomial((0, 0, 0, 0, 5), 1, QQ)
    assert singular_locus_dimension(cone, ws, 101) == 1


def test_degenerate_reduction_moves_to_next_prime():
    ws = validate_weight_system((1, 1, 1, 1, 1))
    f = fermat() + Polynomial.monomial((5, 0, 0, 0, 0), 100, QQ)  # 101 z1^5
    with pytest.raises(DegenerateReduction):
        singular_locus_dimension(f, ws, 101)
    ok, tried = screen(f, ws)
    assert ok
    assert tried == [{"p": 101, "dim": None}, {"p": 251, "dim": 0}]


def test_rational_denominator_divisible_by_prime():
    ws = validate_weight_system((1, 1, 1, 1, 1))
    f = fermat() + Polynomial.monomial((1, 1, 1, 1, 1), Fraction(1, 101), QQ)
    with pytest.raises(DegenerateReduction):
        singular_locus_dimension(f, ws, 101)


def test_sampling_is_seeded_and_screened():
    a = sample_smooth_polynomial((1, 1, 1, 2, 5), rng_seed=4, start_all_ones=False)
    b = sample_smooth_polynomial((1, 1, 1, 2, 5), rng_seed=4, start_all_ones=False)
    assert a.coefficients == b.coefficients
    lo, hi = RESAMPLE_POOL
    assert all(lo <= c <= hi for c in a.coefficients)
    assert a.screening["dimension"] == 0
    assert a.screening["prime"] in SCREEN_PRIMES
    f = a.polynomial(GF(a.screening["prime"]))
    assert singular_locus_dimension(f, a.ws, a.screening["prime"]) == 0


def test_all_ones_first():
    c = sample_smooth_polynomial(GOLDEN_A, rng_seed=0)
    assert c.coefficients == [1] * 7 and c.screening["resamples"] == 0


def test_resampling_after_singular_all_ones():
    # the all-ones member for these weights is singular
    with pytest.raises(NoSmoothMember) as info:
        sample_smooth_polynomial((2, 2, 3, 3, 4), pool=(1, 1), retry_cap=2)
    assert info.value.screening["resamples"] == 2
    c = sample_smooth_polynomial((2, 2, 3, 3, 4), rng_seed=0)
    assert c.screening["resamples"] >= 1


def test_candidate_json_roundtrip():
    c = sample_smooth_polynomial((1, 1, 1, 1, 2), rng_seed=2, start_all_ones=False)
    back = CandidateHypersurface.from_json(c.to_json())
    assert back.coefficients == c.coefficients
    assert back.polynomial() == c.polynomial()
    assert back.screening == c.screening


def test_jacobian_generators_are_homogeneous():
    ws = validate_weight_system(GOLDEN_A)
    f = build_polynomial(ws, {m: 1 for m in GOLDEN_A_BASIS})
    for i, g in enumerate(jacobian(f)):
        assert set(g.weighted_degrees(ws.w)) == {ws.d - ws.w[i]}
