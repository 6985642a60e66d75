"""Walk through two hand-checkable links and the Fermat quintic.

Run with ``python demos/golden_examples.py``; takes a few seconds.
"""
from cylink.invariants import compute_invariants, milnor_number
from cylink.links import build_polynomial, monomial_basis, singular_locus_dimension
from cylink.links import validate_weight_system

# %% the degree-225 system and its seven basis monomials
ws = validate_weight_system((22, 29, 49, 50, 75))
basis = monomial_basis(ws)
for m in basis:
    print(m)

# %% all-ones member: smooth away from the origin, then its invariants
f = build_polynomial(ws, [1] * len(basis))
print("singular locus dimension mod 101:", singular_locus_dimension(f, ws, 101))
inv = compute_invariants(f, ws)
print("h30, h21 =", inv.hodge.h30, inv.hodge.h21, "  nu =", inv.cn.nu,
      "  mu =", inv.mu, "=", milnor_number(ws))

# %% a nine-term member of (31,35,36,42,108)
ws = validate_weight_system((31, 35, 36, 42, 108))
terms = [(7, 1, 0, 0, 0), (2, 2, 1, 2, 0), (1, 1, 4, 1, 0), (1, 1, 1, 1, 1), (0, 6, 0, 1, 0),
         (0, 0, 7, 0, 0), (0, 0, 4, 0, 1), (0, 0, 1, 0, 2), (0, 0, 0, 6, 0)]
inv = compute_invariants(build_polynomial(ws, {m: 1 for m in terms}), ws)
print("signature", (inv.signature.mu_plus, inv.signature.mu_zero, inv.signature.mu_minus),
      " nu =", inv.cn.nu)

# %% the quintic: 1024 standard monomials, 101 of them at degree 10
ws = validate_weight_system((1, 1, 1, 1, 1))
f = build_polynomial(ws, {tuple(5 if i == j else 0 for j in range(5)): 1 for i in range(5)})
inv = compute_invariants(f, ws)
print("quintic:", inv.hodge, inv.cn)
