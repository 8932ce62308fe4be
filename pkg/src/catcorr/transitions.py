"""Characteristic times of the correlation dynamics.

Closed forms for the sudden-transition times of both partitions and the
lifetime of the metastable decoherence-free window, plus detectors that find
the same features directly on trajectories.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .statedyn import SystemParams, TwoQubitXState

DFS_EPS = 1e-2
CROSSING_NOISE_FLOOR = 1e-12


@dataclass
class TransitionReport:
    t_c_analytic: Optional[float] = None
    t_r_analytic: Optional[float] = None
    dfs_duration_analytic: Optional[float] = None
    t_c_detected: Optional[float] = None
    t_r_detected: Optional[float] = None
    dfs_window_detected: Optional[tuple[float, float]] = None
    complementarity_residual: Optional[float] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["dfs_window_detected"] is not None:
            d["dfs_window_detected"] = list(d["dfs_window_detected"])
        return d


def _coherence_log(params: SystemParams) -> float:
    """``ln|2p-1|``; the sign of the coherence does not enter the times."""
    c = abs(params.coherence)
    if c == 0.0:
        raise ValueError("p = 1/2: coherences vanish and the transition time is undefined")
    return math.log(c)


def sudden_transition_time_cavities(params: SystemParams) -> Optional[float]:
    """Time at which the optimal cavity measurement switches from sigma_z to sigma_x.

    ``t_c = -ln[1 + ln|2p-1| / (4 nbar)] / gamma``; None when the bracket is
    not positive (no transition).
    """
    bracket = 1.0 + _coherence_log(params) / (4.0 * params.nbar)
    if bracket <= 0.0:
        return None
    return -math.log(bracket) / params.gamma


def sudden_transition_time_reservoirs(params: SystemParams) -> Optional[float]:
    """Time at which the optimal reservoir measurement switches from sigma_x to sigma_z.

    ``t_r = -ln[ln(1/|2p-1|) / (4 nbar)] / gamma``; None when the argument
    reaches 1 (same condition as for the cavities) and ``inf`` when ``|2p-1| = 1``.
    """
    arg = -_coherence_log(params) / (4.0 * params.nbar)
    if arg >= 1.0:
        return None
    if arg == 0.0:
        return math.inf
    return -math.log(arg) / params.gamma


def complementarity_residual(params: SystemParams) -> Optional[float]:
    """``exp(-γ t_c) + exp(-γ t_r) - 1``, or None if either time is absent."""
    if params.coherence == 0.0:
        return None
    tc = sudden_transition_time_cavities(params)
    tr = sudden_transition_time_reservoirs(params)
    if tc is None or tr is None:
        return None
    return math.exp(-params.gamma * tc) + math.exp(-params.gamma * tr) - 1.0


def dfs_duration(params: SystemParams) -> Optional[float]:
    """Approximate lifetime ``ln(nbar - 1)/gamma`` of the DFS; None for ``nbar <= 2``."""
    if params.nbar <= 2.0:
        return None
    return math.log(params.nbar - 1.0) / params.gamma


def distance_to_dfs(rho: TwoQubitXState, p: float) -> float:
    """Max-norm distance between ``rho`` and the DFS fixed point."""
    fixed = TwoQubitXState.dfs_fixed_point(p)
    return max(abs(a - b) for a, b in zip(rho.as_tuple(), fixed.as_tuple()))


def detect_dfs_window(
    trajectory: Sequence[tuple[float, TwoQubitXState]],
    params: SystemParams,
    eps: float = DFS_EPS,
) -> Optional[tuple[float, float]]:
    """Longest contiguous run of samples within ``eps`` of the DFS fixed point."""
    if len(trajectory) == 0:
        raise ValueError("empty trajectory")
    if eps <= 0:
        raise ValueError("eps must be positive")
    best = None
    start = None
    prev_t = None
    for t, rho in trajectory:
        if distance_to_dfs(rho, params.p) < eps:
            if start is None:
                start = t
            prev_t = t
        elif start is not None:
            if best is None or prev_t - start > best[1] - best[0]:
                best = (start, prev_t)
            start = None
    if start is not None and (best is None or prev_t - start > best[1] - best[0]):
        best = (start, prev_t)
    return best


def detect_branch_crossing(
    curve: Sequence[tuple[float, float, float]],
    evaluator: Optional[Callable[[float], float]] = None,
    gamma: float = 1.0,
    noise_floor: float = CROSSING_NOISE_FLOOR,
) -> Optional[float]:
    """First time where ``C_X - C_Z`` changes sign along ``curve``.

    ``curve`` holds ``(t, C_Z, C_X)`` samples.  Differences below
    ``noise_floor`` are treated as zero so that roundoff once both
    correlations have decayed does not register as a crossing.  With an
    ``evaluator`` (``t -> C_X - C_Z``) the bracketing interval is refined by
    root finding to below ``1e-9 / gamma``; otherwise the root is linearly
    interpolated.
    """
    if len(curve) < 2:
        raise ValueError("curve needs at least two points")
    last_t = last_d = None
    for t, cz, cx in curve:
        d = cx - cz
        if abs(d) <= noise_floor:
            continue
        if last_d is not None and (d > 0) != (last_d > 0):
            if evaluator is None:
                return last_t + (t - last_t) * last_d / (last_d - d)
            return brentq(evaluator, last_t, t, xtol=1e-12 / gamma, rtol=4 * np.finfo(float).eps)
        last_t, last_d = t, d
    return None
