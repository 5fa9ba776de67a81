"""Time domain against frequency domain for a short coefficient vector.

The frequency integral is cut at |t| <= T, so the two sides differ by
roughly 1/T; doubling T shows the gap shrinking.

Run with ``python demos/plancherel.py``.
"""
# %%
from nblab.arith import character
from nblab.bd import plancherel_check

b = [0.5, -0.25]
for T in (125.0, 250.0, 500.0):
    r = plancherel_check(character(1), 2, b, T)
    print(f"T={T:>5.0f}  time={r.time_value:.6f}  freq={r.freq_value:.6f}  gap*T={r.discrepancy * T:.3f}")
