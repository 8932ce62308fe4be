"""Sudden change times and the decoherence-free plateau.

Run with ``python3 demos/transitions.py``.
"""
import numpy as np

from catcorr import SystemParams, sweep
from catcorr.transitions import (
    detect_dfs_window,
    dfs_duration,
    sudden_transition_time_cavities,
    sudden_transition_time_reservoirs,
)

for nbar in (1, 5, 10, 100):
    params = SystemParams(nbar, 0.2)
    tc = sudden_transition_time_cavities(params)
    tr = sudden_transition_time_reservoirs(params)
    if tc is None:
        print(f"nbar = {nbar:3}: no sudden change")
        continue
    print(f"nbar = {nbar:3}: gamma t_c = {tc:.6g}, gamma t_r = {tr:.6g}, "
          f"exp(-t_c) + exp(-t_r) = {np.exp(-tc) + np.exp(-tr):.15f}")

# The same times found numerically from where sigma_x overtakes sigma_z
params = SystemParams(100, 0.2)
grid = sweep.time_grid(50, sweep.CROSSING_GRID_POINTS, "log-dense-start")
print(f"\ndetected crossings: cavities {sweep.detect_crossing(params, 'cavities', grid):.10f}, "
      f"reservoirs {sweep.detect_crossing(params, 'reservoirs', grid):.10f}")

# How long the cavity pair sits near its fixed point
traj = sweep.trajectory(params, "cavities", np.linspace(0, 15, 2000))
start, end = detect_dfs_window(traj, params)
print(f"plateau [{start:.4f}, {end:.4f}] lasts {end - start:.4f}; ln(nbar - 1) = {dfs_duration(params):.4f}")

# Everything at once, as the command line tool reports it
print()
for key, value in sweep.run_transitions(params).items():
    print(f"{key:>24}: {value}")
