"""Reproducing kernel growth and minimum-norm interpolation.

Run with ``python demos/kernel_and_extremal.py``.
"""
# %%
import numpy as np

from nblab.extremal import asymptotic_table, compare_mollifier, solve_problem2, zero_nodes
from nblab.ortho import kernel_scan

# %% K_n(u, u) against its log n leading term; convergence is slow
for n, k, ratio in kernel_scan(2, 1.0, [10**3, 10**4, 10**5, 10**6]):
    print(f"n={n:>8}  K={k.real:10.4f}  ratio={ratio:.4f}")

# %% d^2 log n approaches sum 1/(1/p^2 + t_j^2)
tab = asymptotic_table(2, [0.0, 5.0], [10**3, 10**4, 10**5])
for n, d2, dl, ratio in tab.rows:
    print(f"n={n:>7}  d2={d2:.6f}  d2*log n={dl:.5f}  ratio={ratio:.4f}")
print("extrapolated ratio:", round(tab.extrapolated_ratio, 4))

# %% The interpolant equals 1 at the nodes
sol = solve_problem2(2, 50, [0.0, 5.0])
print("values at nodes:", np.round(sol([0.0, 5.0]), 12))

# %% Mollifier and extremal polynomial at the first zeros of zeta
cmp = compare_mollifier(200, zero_nodes(1, 3), np.linspace(0, 40, 81))
print("correlation of |1 - zeta V_n| with |B_n|:", round(cmp.correlation, 3))
