"""Dirichlet characters and L-values.

Run with ``python demos/characters_and_l_values.py``.
"""
# %%
import numpy as np

from nblab.arith import characters_mod, character
from nblab.lfun import euler_factor, l_eval_with_bound, zeta_eval, l_eval

# %% The four characters mod 5, printed on 1..5
for chi in characters_mod(5):
    vals = ", ".join(f"{complex(chi(k)):+.3f}" for k in range(1, 6))
    print(f"index {chi.index}: principal={chi.is_principal} real={chi.is_real}  [{vals}]")

# %% L(2, chi_4) is Catalan's constant
val, bound = l_eval_with_bound(character(4, 1), 2.0)
print(f"L(2, chi_4) = {val.real:.15f} (bound {bound:.1e})")

# %% A principal character only removes Euler factors from zeta
s = np.array([0.5 + 14.1347j, 0.75 + 3j, 2.0])
print(np.abs(l_eval(character(6, 0), s) - zeta_eval(s) * euler_factor(6, s)))
