"""Entropies and correlation measures for two-qubit X states, in bits.

Classical correlation uses a projective measurement on the second qubit.
The analytic route compares the sigma_z and sigma_x measurements in closed
form; :func:`classical_correlation_bruteforce` sweeps the Bloch sphere with
generic dense-matrix algebra and serves as an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .statedyn import TwoQubitXState


EIGEN_FLOOR = 1e-12
ZERO_FLOOR = 1e-10
TIE_TOL = 1e-12
MIN_OUTCOME_PROB = 1e-14

BRANCH_Z = "Z"
BRANCH_X = "X"
BRANCH_AMBIGUOUS = "ambiguous"

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class MeasurementDirection:
    """Bloch direction of a two-outcome projective measurement.

    ``theta = 0`` is sigma_z; ``theta = pi/2, phi = 0`` is sigma_x.
    """

    theta: float
    phi: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


SIGMA_Z = MeasurementDirection(0.0, 0.0)
SIGMA_X = MeasurementDirection(math.pi / 2, 0.0)


@dataclass(frozen=True)
class CorrelationRecord:
    t: float
    mutual_info: float
    classical: float
    discord: float
    branch: str


@dataclass(frozen=True)
class Outcome:
    """One measurement outcome; ``state`` is None when ``probability`` is 0."""

    probability: float
    state: Optional[np.ndarray]


def entropy(eigenvalues: Iterable[float]) -> float:
    """Shannon/von Neumann entropy in bits of a spectrum, with ``0 log 0 = 0``."""
    lam = np.asarray(list(eigenvalues), dtype=float)
    if np.any(lam < -EIGEN_FLOOR):
        raise ValueError(f"eigenvalue below -{EIGEN_FLOOR}: {lam.min()!r}")
    if abs(lam.sum() - 1.0) > ZERO_FLOOR:
        raise ValueError(f"eigenvalues sum to {lam.sum()!r}, expected 1")
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def binary_entropy(x: float) -> float:
    """Entropy in bits of the distribution ``(x, 1 - x)``."""
    if x < -EIGEN_FLOOR or x > 1.0 + EIGEN_FLOOR:
        raise ValueError(f"probability {x!r} outside [0, 1]")
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -(x * math.log2(x) + (1.0 - x) * math.log2(1.0 - x))


def xstate_eigenvalues(rho: TwoQubitXState) -> tuple[float, float, float, float]:
    """Closed-form spectrum from the outer (1,4) and inner (2,3) blocks."""
    out_mean = 0.5 * (rho.d11 + rho.d44)
    out_rad = math.hypot(0.5 * (rho.d11 - rho.d44), rho.o14)
    in_mean = 0.5 * (rho.d22 + rho.d33)
    in_rad = math.hypot(0.5 * (rho.d22 - rho.d33), rho.o23)
    return (out_mean + out_rad, out_mean - out_rad, in_mean + in_rad, in_mean - in_rad)


def marginals(rho: TwoQubitXState) -> tuple[np.ndarray, np.ndarray]:
    """Reduced states of the first (a) and second (b) qubit; both diagonal."""
    rho_a = np.diag([rho.d11 + rho.d22, rho.d33 + rho.d44])
    rho_b = np.diag([rho.d11 + rho.d33, rho.d22 + rho.d44])
    return rho_a, rho_b


def mutual_information(rho: TwoQubitXState) -> float:
    rho_a, rho_b = marginals(rho)
    value = entropy(np.diag(rho_a)) + entropy(np.diag(rho_b)) - entropy(xstate_eigenvalues(rho))
    if value < -ZERO_FLOOR:
        raise ValueError(f"negative mutual information {value!r}")
    return max(value, 0.0)


def _projectors(direction: MeasurementDirection) -> tuple[np.ndarray, np.ndarray]:
    n_sigma = np.tensordot(direction.vector, _PAULI, axes=1)
    eye = np.eye(2)
    return 0.5 * (eye + n_sigma), 0.5 * (eye - n_sigma)


def measure_and_condition(
    rho: TwoQubitXState, direction: MeasurementDirection, on: str = "b"
) -> tuple[Outcome, Outcome]:
    """Measure ``+-(n.sigma)`` on one qubit and return the other's conditional states."""
    m = rho.to_matrix().astype(complex).reshape(2, 2, 2, 2)  # a, b, a', b'
    outcomes = []
    for proj in _projectors(direction):
        if on == "b":
            # Tr_b[(I x P) rho (I x P)] = Tr_b[(I x P) rho]
            cond = np.einsum("ikjl,lk->ij", m, proj)
        elif on == "a":
            cond = np.einsum("kilj,lk->ij", m, proj)
        else:
            raise ValueError("on must be 'a' or 'b'")
        prob = float(np.real(np.trace(cond)))
        if prob < MIN_OUTCOME_PROB:
            outcomes.append(Outcome(0.0, None))
        else:
            outcomes.append(Outcome(prob, cond / prob))
    return outcomes[0], outcomes[1]


def conditional_entropy(rho: TwoQubitXState, direction: MeasurementDirection, on: str = "b") -> float:
    """Average entropy of the unmeasured qubit after measuring ``direction``."""
    total = 0.0
    for out in measure_and_condition(rho, direction, on=on):
        if out.state is None:
            continue
        total += out.probability * entropy(np.linalg.eigvalsh(out.state))
    return total


def _conditional_entropy_z(rho: TwoQubitXState) -> float:
    total = 0.0
    for upper, lower in ((rho.d11, rho.d33), (rho.d22, rho.d44)):
        prob = upper + lower
        if prob >= MIN_OUTCOME_PROB:
            total += prob * binary_entropy(min(max(upper / prob, 0.0), 1.0))
    return total


def _conditional_entropy_x(rho: TwoQubitXState) -> float:
    # Both outcomes have probability 1/2 and the same spectrum.
    z = rho.d11 + rho.d22 - rho.d33 - rho.d44
    radius = min(math.hypot(z, 2.0 * (rho.o14 + rho.o23)), 1.0)
    return binary_entropy(0.5 * (1.0 + radius))


def classical_correlation_z(rho: TwoQubitXState) -> float:
    return binary_entropy(rho.d11 + rho.d22) - _conditional_entropy_z(rho)


def classical_correlation_x(rho: TwoQubitXState) -> float:
    return binary_entropy(rho.d11 + rho.d22) - _conditional_entropy_x(rho)


def classical_correlation_analytic(rho: TwoQubitXState) -> tuple[float, str]:
    """Classical correlation as the better of the sigma_z and sigma_x measurements.

    Returns the value in bits and the winning branch tag (``"Z"``, ``"X"``, or
    ``"ambiguous"`` for a tie within 1e-12).
    """
    cz = classical_correlation_z(rho)
    cx = classical_correlation_x(rho)
    if abs(cz - cx) <= TIE_TOL:
        branch = BRANCH_AMBIGUOUS
    elif cz > cx:
        branch = BRANCH_Z
    else:
        branch = BRANCH_X
    return max(cz, cx, 0.0), branch


def textbook_branch_conditions(rho: TwoQubitXState) -> tuple[bool, bool]:
    """Sufficient conditions for sigma_z and for sigma_x optimality.

    sigma_z: ``(|o23| + |o14|)^2 <= (d11 - d22)(d44 - d33)``;
    sigma_x: ``|sqrt(d11 d44) - sqrt(d22 d33)| <= |o23| + |o14|``.
    """
    coh = abs(rho.o23) + abs(rho.o14)
    z_ok = coh ** 2 <= (rho.d11 - rho.d22) * (rho.d44 - rho.d33)
    x_ok = abs(math.sqrt(rho.d11 * rho.d44) - math.sqrt(rho.d22 * rho.d33)) <= coh
    return z_ok, x_ok


def _batch_conditional_entropy(m: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Conditional entropy of qubit a for many Bloch vectors ``dirs`` (k, 3) on b."""
    n_sigma = np.einsum("kj,jab->kab", dirs, _PAULI)
    eye = np.eye(2)[None]
    total = np.zeros(len(dirs))
    for sign in (1.0, -1.0):
        proj = 0.5 * (eye + sign * n_sigma)
        # unnormalised conditional state Tr_b[(I x P) rho]
        cond = np.einsum("ikjl,nlk->nij", m, proj)
        prob = np.real(cond[:, 0, 0] + cond[:, 1, 1])
        live = prob > MIN_OUTCOME_PROB
        safe = np.where(live, prob, 1.0)
        radius = np.sqrt(np.real(cond[:, 0, 0] - cond[:, 1, 1]) ** 2 + 4 * np.abs(cond[:, 0, 1]) ** 2) / safe
        lam = np.clip(0.5 * (1.0 + radius), 0.5, 1.0)
        mu = 1.0 - lam
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -lam * np.log2(lam) - np.where(mu > 0, mu * np.log2(mu), 0.0)
        total += np.where(live, prob * h, 0.0)
    return total


def _bloch(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def classical_correlation_bruteforce(
    rho: TwoQubitXState,
    coarse_grid: int = 32,
    refinement_iters: int = 24,
    n_starts: int = 4,
) -> tuple[float, MeasurementDirection]:
    """Maximise classical correlation over all projective measurements on b.

    A ``(2 coarse_grid + 1) x coarse_grid`` scan of the hemisphere
    ``theta in [0, pi]``, ``phi in [0, pi)`` (antipodal directions give the same
    projector pair) is followed by a shrinking 5x5 pattern search around each
    of the ``n_starts`` best grid points.  The step halves every iteration;
    refinement runs at least ``refinement_iters`` times and until the step is
    below 1e-7 rad.
    """
    if coarse_grid < 32:
        raise ValueError("coarse_grid must be at least 32")
    m = rho.to_matrix().astype(complex).reshape(2, 2, 2, 2)  # a, b, a', b'
    rho_a, _ = marginals(rho)
    s_a = entropy(np.diag(rho_a))

    thetas = np.linspace(0.0, math.pi, 2 * coarse_grid + 1)
    phis = np.linspace(0.0, math.pi, coarse_grid, endpoint=False)
    tt, pp = (a.ravel() for a in np.meshgrid(thetas, phis, indexing="ij"))
    h = _batch_conditional_entropy(m, _bloch(tt, pp))

    idx = np.argsort(h, kind="stable")[:n_starts]
    cur_t, cur_p, cur_h = tt[idx], pp[idx], h[idx]
    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    dt, dp = np.meshgrid(offsets, offsets, indexing="ij")
    dt, dp = dt.ravel(), dp.ravel()
    step_t = thetas[1] - thetas[0]
    step_p = phis[1] - phis[0]
    it = 0
    while it < refinement_iters or max(step_t, step_p) > 1e-7:
        ct = cur_t[:, None] + dt[None] * step_t
        cp = cur_p[:, None] + dp[None] * step_p
        cand = _batch_conditional_entropy(m, _bloch(ct.ravel(), cp.ravel())).reshape(ct.shape)
        k = np.argmin(cand, axis=1)
        rows = np.arange(len(k))
        better = cand[rows, k] < cur_h
        cur_t = np.where(better, ct[rows, k], cur_t)
        cur_p = np.where(better, cp[rows, k], cur_p)
        cur_h = np.where(better, cand[rows, k], cur_h)
        step_t *= 0.5
        step_p *= 0.5
        it += 1
    best = int(np.argmin(cur_h))
    return float(s_a - cur_h[best]), _canonical_direction(cur_t[best], cur_p[best])


def _canonical_direction(theta: float, phi: float) -> MeasurementDirection:
    v = _bloch(np.array(theta), np.array(phi))
    if v[2] < 0 or (v[2] == 0 and v[1] < 0):
        v = -v
    theta = math.acos(max(-1.0, min(1.0, float(v[2]))))
    phi = math.atan2(float(v[1]), float(v[0])) % (2 * math.pi)
    return MeasurementDirection(theta, phi)


def discord(rho: TwoQubitXState) -> float:
    return correlations(rho).discord


def correlations(rho: TwoQubitXState, t: float = float("nan")) -> CorrelationRecord:
    """Mutual information, classical correlation, and discord, with ``I = C + D``."""
    mi = mutual_information(rho)
    cc, branch = classical_correlation_analytic(rho)
    if cc > mi + ZERO_FLOOR:
        raise ValueError(f"classical correlation {cc!r} exceeds mutual information {mi!r}")
    cc = min(cc, mi)
    return CorrelationRecord(t=t, mutual_info=mi, classical=cc, discord=mi - cc, branch=branch)
