"""Walk through the reduced two-qubit states as the field leaks out.

Run with ``python3 demos/state_dynamics.py``.
"""
import numpy as np

from catcorr import SystemParams, cavity_state, reservoir_state
from catcorr.statedyn import amplitudes_at, mirror_time

params = SystemParams(nbar=100, p=0.2)

# Photon number is shared between cavity and reservoir amplitudes
for gt in (0.0, 0.5, 2.0, 10.0):
    amp = amplitudes_at(params, gt)
    print(f"gamma t = {gt:5.1f}  alpha_t^2 = {amp.alpha_t_sq:9.4f}  "
          f"abar_t^2 = {amp.abar_t_sq:9.4f}  sum = {amp.alpha_t_sq + amp.abar_t_sq:.4f}")

# Matrix elements of the cavity state.  For a strong field they
# settle onto 1/4 populations with (2p-1)/4 coherences for a while
print()
print(" gamma t     d11      d22      d44      o14      o23")
for gt in (0.0, 0.01, 0.1, 1.0, 3.0, 6.0, 12.0):
    rho = cavity_state(params, gt)
    print(f"{gt:8.2f} {rho.d11:8.4f} {rho.d22:8.4f} {rho.d44:8.4f} {rho.o14:8.4f} {rho.o23:8.4f}")

# The reservoir pair at t equals the cavity pair at the mirror time t'
t = 1.3
res = np.array(reservoir_state(params, t).as_tuple())
cav = np.array(cavity_state(params, mirror_time(params, t)).as_tuple())
print(f"\nmirror time of {t} is {mirror_time(params, t):.6f}; max element diff {np.abs(res - cav).max():.1e}")

# Full matrix, eigenvalues from a generic solver for comparison
rho = cavity_state(params, 0.0).to_matrix()
print("\ninitial cavity state:")
print(np.array2string(rho, precision=4, suppress_small=True))
print("eigenvalues:", np.round(np.linalg.eigvalsh(rho), 12))
