"""Exact reduced states of two damped entangled-coherent-state cavities.

Each cavity mode is written in its time-dependent even/odd cat basis, which
turns both cavities (and both reservoirs) into effective qubits.  The reduced
two-mode states are X states with real coherences, so only six numbers are
stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Tolerance for trace and block-positivity checks on constructed states.
POSITIVITY_EPS = 1e-12


class InvalidStateError(ValueError):
    """Raised when an X state violates trace or positivity beyond tolerance."""


def one_minus_exp(x: float) -> float:
    """Return ``1 - exp(-x)`` without cancellation for small ``x``."""
    return -math.expm1(-x)


@dataclass(frozen=True)
class SystemParams:
    """Physical scenario: mean photon number, mixing probability, decay rate."""

    nbar: float
    p: float
    gamma: float = 1.0

    def __post_init__(self):
        if not (self.nbar > 0 and math.isfinite(self.nbar)):
            raise ValueError(f"nbar must be a positive finite number, got {self.nbar!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be a positive finite number, got {self.gamma!r}")

    @property
    def coherence(self) -> float:
        """Signed coherence weight ``2p - 1``."""
        return 2.0 * self.p - 1.0

    @property
    def alpha(self) -> float:
        """Initial coherent amplitude, taken real and positive."""
        return math.sqrt(self.nbar)


@dataclass(frozen=True)
class AmplitudePair:
    """Squared cavity amplitude and squared collective reservoir amplitude."""

    alpha_t_sq: float
    abar_t_sq: float


@dataclass(frozen=True)
class TwoQubitXState:
    """Real X-shaped two-qubit density matrix in the basis ++, +-, -+, --.

    Only the diagonal (``d11`` .. ``d44``) and the anti-diagonal coherences
    ``o14`` and ``o23`` can be nonzero.  Construction validates trace and
    positivity of both 2x2 blocks.
    """

    d11: float
    d22: float
    d33: float
    d44: float
    o14: float = 0.0
    o23: float = 0.0

    def __post_init__(self):
        tr = self.d11 + self.d22 + self.d33 + self.d44
        if abs(tr - 1.0) > POSITIVITY_EPS:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        if min(self.d11, self.d22, self.d33, self.d44) < -POSITIVITY_EPS:
            raise InvalidStateError("negative population")
        if self.d11 * self.d44 < self.o14 ** 2 - POSITIVITY_EPS:
            raise InvalidStateError("outer block (1,4) is not positive semidefinite")
        if self.d22 * self.d33 < self.o23 ** 2 - POSITIVITY_EPS:
            raise InvalidStateError("inner block (2,3) is not positive semidefinite")

    def to_matrix(self) -> np.ndarray:
        """Dense 4x4 real symmetric matrix."""
        m = np.diag([self.d11, self.d22, self.d33, self.d44])
        m[0, 3] = m[3, 0] = self.o14
        m[1, 2] = m[2, 1] = self.o23
        return m

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.d11, self.d22, self.d33, self.d44, self.o14, self.o23)

    @classmethod
    def maximally_mixed(cls) -> "TwoQubitXState":
        return cls(0.25, 0.25, 0.25, 0.25)

    @classmethod
    def dfs_fixed_point(cls, p: float) -> "TwoQubitXState":
        """Metastable fixed point: flat populations, coherences ``(2p-1)/4``."""
        c = (2.0 * p - 1.0) / 4.0
        return cls(0.25, 0.25, 0.25, 0.25, c, c)


def overlap_factors(x_sq: float) -> tuple[float, float, float, float]:
    """Squared cat normalisations ``(g+^2, g-^2, f+^2, f-^2)`` at amplitude ``x``.

    ``g±² = 2(1 ± e^{-2x²})`` and ``f±² = 2(1 ± e^{-4x²})``, taken directly
    from ``x_sq = x²``.
    """
    if x_sq < 0:
        raise ValueError(f"x_sq must be non-negative, got {x_sq!r}")
    g_plus = 2.0 * (1.0 + math.exp(-2.0 * x_sq))
    g_minus = 2.0 * one_minus_exp(2.0 * x_sq)
    f_plus = 2.0 * (1.0 + math.exp(-4.0 * x_sq))
    f_minus = 2.0 * one_minus_exp(4.0 * x_sq)
    return g_plus, g_minus, f_plus, f_minus


def amplitudes_at(params: SystemParams, t: float) -> AmplitudePair:
    """Split the photon number between cavity and reservoir at time ``t``."""
    if not t >= 0:
        raise ValueError(f"t must be non-negative, got {t!r}")
    gt = params.gamma * t
    return AmplitudePair(params.nbar * math.exp(-gt), params.nbar * one_minus_exp(gt))


def xstate_from_amplitudes(params: SystemParams, own_sq: float, other_sq: float) -> TwoQubitXState:
    """Reduced state of one partition given its own and the traced-out amplitude.

    For the cavities ``own_sq`` is the cavity amplitude squared and
    ``other_sq`` the reservoir one; the reservoir state is the same expression
    with the two swapped.
    """
    gp, gm, _, _ = overlap_factors(own_sq)
    _, _, fp, fm = overlap_factors(other_sq)
    norm = 16.0 * overlap_factors(params.nbar)[2]
    c = params.coherence
    r11 = gp * gp * fp
    r44 = gm * gm * fp
    r22 = gp * gm * fm
    return TwoQubitXState(
        d11=r11 / norm,
        d22=r22 / norm,
        d33=r22 / norm,
        d44=r44 / norm,
        o14=c * gp * gm * fp / norm,
        o23=c * r22 / norm,
    )


def cavity_state(params: SystemParams, t: float) -> TwoQubitXState:
    """Reduced state of the two cavities at time ``t``."""
    amp = amplitudes_at(params, t)
    return xstate_from_amplitudes(params, amp.alpha_t_sq, amp.abar_t_sq)


def reservoir_state(params: SystemParams, t: float) -> TwoQubitXState:
    """Reduced state of the two reservoirs at time ``t``."""
    amp = amplitudes_at(params, t)
    return xstate_from_amplitudes(params, amp.abar_t_sq, amp.alpha_t_sq)


def mirror_time(params: SystemParams, t: float) -> float:
    """Time ``t'`` with ``exp(-γt') = 1 - exp(-γt)``; requires ``t > 0``.

    The reservoir state at ``t`` equals the cavity state at ``t'``.
    """
    if not t > 0:
        raise ValueError("mirror time is only defined for t > 0")
    return -math.log(one_minus_exp(params.gamma * t)) / params.gamma
