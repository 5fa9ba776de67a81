"""The kappa function and the distance d_n^2 for zeta.

Run with ``python demos/kappa_and_distance.py``.
"""
# %%
from nblab.arith import character
from nblab.bd import bd_distance, build_gram, distance_from_gram
from nblab.kappa import kappa_build, kappa_eval, kappa_sup

K = kappa_build(character(1), 2)
print("kappa at 0.5, 1.5, 10.25:", [round(kappa_eval(K, x).real, 6) for x in (0.5, 1.5, 10.25)])
print("sup |kappa| on (0, 100]:", kappa_sup(K, 100.0))

# %% d_1^2 on (0, 1) has the closed form 1 - (1 - gamma)^2 / (log 2pi - gamma - 1)
print("d_1^2 =", bd_distance(K, 1).d2)

# %% One Gram build gives every smaller n through its leading blocks
g = build_gram(K, 12)
for n in (1, 2, 4, 8, 12):
    r = distance_from_gram(g.leading(n))
    print(f"n={n:>2}  d2={r.d2:.6f}  cond={r.cond_estimate:.1f}")

# %% Same quantity with the dilates integrated over the whole half line
print("half line d_1^2 =", bd_distance(K, 1, support="half_line").d2)
