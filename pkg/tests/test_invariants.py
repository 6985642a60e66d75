import itertools
import json
from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cylink.algebra import GF
from cylink.groebner import StandardMonomialSet
from cylink.invariants import (
    HodgePair, HodgeWarning, InvariantError, SignatureTriple, campaign_permutations,
    classify_signature, cn_from_signature, cn_invariant, compute_invariants,
    confirmed_gb_length, hodge_degrees, l_value, milnor_basis, milnor_number, sasakian_hodge,
    steenbrink_signature, weak_r_equivalence_campaign,
)
from cylink.links import build_polynomial, validate_weight_system

from common import GOLDEN_A, fermat_oracle, sparse_member


def test_fermat_oracle_values():
    assert fermat_oracle() == {"h30": 1, "h21": 101, "mu": 1024, "sig": (580, 204, 240), "nu": 5}


def test_fermat_pipeline_matches_oracle(quintic):
    ws, f = quintic
    ref = fermat_oracle()
    G, sms = milnor_basis(f, ws)
    assert sorted(map(tuple, sms.monomials.tolist())) == list(itertools.product(range(4), repeat=5))
    inv = compute_invariants(f, ws)
    assert (inv.hodge.h30, inv.hodge.h21) == (ref["h30"], ref["h21"])
    assert inv.mu == ref["mu"] == milnor_number(ws)
    assert (inv.signature.mu_plus, inv.signature.mu_zero, inv.signature.mu_minus) == ref["sig"]
    assert inv.cn.nu == ref["nu"]
    assert inv.hodge.b3 == 204


def test_milnor_number():
    assert milnor_number((1, 1, 1, 1, 1)) == 1024
    assert milnor_number(GOLDEN_A) == 1568
    assert milnor_number((1, 1, 12, 28, 42)) == 82668
    with pytest.raises(InvariantError):
        milnor_number((1, 2, 2, 2, 2))


def test_l_value():
    assert l_value((0,) * 5, (1,) * 5) == 1
    assert l_value((3,) * 5, (1,) * 5) == 4
    assert l_value((1, 2, 0, 0, 1), GOLDEN_A) == Fraction(76, 45)


def test_hodge_degrees():
    assert hodge_degrees((1,) * 5) == (15, 10)
    assert hodge_degrees(GOLDEN_A) == (675, 450)


@given(st.lists(st.tuples(*[st.integers(0, 30)] * 5), min_size=1, max_size=40),
       st.sampled_from([(1, 1, 1, 1, 1), GOLDEN_A, (31, 35, 36, 42, 108), (1, 1, 2, 2, 6)]))
def test_signature_classification_matches_rationals(monos, w):
    sig = classify_signature(np.array(monos), w)
    plus = zero = minus = 0
    for m in monos:
        lv = l_value(m, w)
        if lv.denominator == 1:
            zero += 1
        elif math.floor(lv) % 2 == 0:
            plus += 1
        else:
            minus += 1
    assert (sig.mu_plus, sig.mu_zero, sig.mu_minus) == (plus, zero, minus)
    assert sig.mu == len(monos)


def test_cn_reduction():
    cn = cn_from_signature(SignatureTriple(1178, 6, 584), 1768)
    assert cn.raw == -13 and cn.nu == 35
    assert cn_from_signature(SignatureTriple(580, 204, 240), 1024).nu == 5


def test_golden_a(golden_a):
    ws, f = golden_a
    inv = compute_invariants(f, ws)
    assert inv.hodge == HodgePair(1, 2)
    assert inv.cn.nu == 27
    assert inv.mu == 1568
    assert inv.gb_length > 0
    row = inv.to_row()
    assert row["b3"] == 6 and row["status"] == "ok"


def test_golden_b(golden_b):
    ws, f = golden_b
    assert cn_invariant(f, ws).nu == 35


def test_entry_points_agree():
    ws = validate_weight_system((1, 1, 1, 2, 5))
    f = sparse_member(ws, np.random.default_rng(5))
    G, sms = milnor_basis(f, ws)
    inv = compute_invariants(f, ws)
    assert sasakian_hodge(f, ws) == sasakian_hodge(f, ws, sms) == inv.hodge
    assert steenbrink_signature(f, ws) == inv.signature
    assert cn_invariant(f, ws) == inv.cn
    assert inv.gb_length == G.length


def test_h30_warning():
    ws = validate_weight_system((1,) * 5)
    fake = StandardMonomialSet(np.zeros((1, 5), dtype=np.int64), {0: 1, 10: 3})
    with pytest.warns(HodgeWarning):
        pair = sasakian_hodge(None, ws, fake)
    assert pair == HodgePair(0, 3)


def test_invariants_do_not_depend_on_member():
    ws = validate_weight_system((3, 4, 4, 4, 5))
    seen = set()
    for seed in range(4):
        f = sparse_member(ws, np.random.default_rng(seed))
        inv = compute_invariants(f, ws)
        seen.add((inv.hodge, inv.signature, inv.cn))
    assert len(seen) == 1


def test_permutations():
    perms = campaign_permutations(10, np.random.default_rng(0))
    assert perms[0] == (0, 1, 2, 3, 4)
    assert len(set(perms)) == 10
    assert all(sorted(p) == list(range(5)) for p in perms)
    with pytest.raises(InvariantError):
        campaign_permutations(121, np.random.default_rng(0))


def test_small_campaign():
    rep = weak_r_equivalence_campaign(GOLDEN_A, n_permutations=3, n_polys_per_perm=3,
                                      rng_seed=1)
    assert rep.failures == 0
    assert rep.invariants_agree and rep.distinct_invariants == [[1, 2, 27]]
    assert rep.lengths_constant_within
    assert len(rep.cells) == 9
    assert all(1 <= c <= 99 for cell in rep.cells for c in cell.coefficients)
    json.dumps(rep.to_json())
    again = weak_r_equivalence_campaign(GOLDEN_A, n_permutations=3, n_polys_per_perm=3,
                                        rng_seed=1)
    assert [c.coefficients for c in again.cells] == [c.coefficients for c in rep.cells]


def test_unlucky_prime_length_is_corrected():
    # this member's reduced basis loses one element modulo 32003 only
    ws = validate_weight_system((50, 22, 75, 29, 49))
    f = build_polynomial(ws, [71, 1, 48, 54, 44, 99, 55])
    short = milnor_basis(f, ws, GF(32003))[0].length
    assert short == 142
    assert confirmed_gb_length(f, ws, short) == 143
    assert confirmed_gb_length(f, ws, 143) == 143
