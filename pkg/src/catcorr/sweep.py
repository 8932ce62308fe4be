"""Time sweeps, figure presets, transition reports and the randomized validator.

Everything here is deterministic: identical inputs give byte-identical output.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import quantinfo, statedyn, transitions
from .statedyn import SystemParams

CSV_COLUMNS = (
    "gamma_t",
    "I_cc", "C_cc", "D_cc", "branch_cc",
    "I_rr", "C_rr", "D_rr", "branch_rr",
)
ELEMENT_NAMES = ("d11", "d22", "d33", "d44", "o14", "o23")
PARTITIONS = ("cavities", "reservoirs")
_SUFFIX = {"cavities": "cc", "reservoirs": "rr"}
_STATE_FN = {"cavities": "cavity_state", "reservoirs": "reservoir_state"}

LOG_GRID_START = 1e-6
INFINITY_GAMMA_T = 50.0
CROSSING_GRID_POINTS = 500


@dataclass
class SweepConfig:
    params: SystemParams
    t_max_gamma: float = 15.0
    n_points: int = 1500
    grid_kind: str = "linear"
    partitions: tuple[str, ...] = PARTITIONS
    output_format: str = "csv"

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2")
        if not self.t_max_gamma > 0:
            raise ValueError("t_max_gamma must be positive")
        if self.grid_kind not in ("linear", "log-dense-start"):
            raise ValueError(f"unknown grid kind {self.grid_kind!r}")
        bad = set(self.partitions) - set(PARTITIONS)
        if bad or not self.partitions:
            raise ValueError(f"partitions must be a non-empty subset of {PARTITIONS}")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def time_grid(t_max_gamma: float, n_points: int, kind: str = "linear") -> np.ndarray:
    """Grid of dimensionless times ``gamma * t``.

    The ``log-dense-start`` grid holds ``n_points`` log-spaced values from
    1e-6 plus an explicit leading zero.
    """
    if kind == "linear":
        return np.linspace(0.0, t_max_gamma, n_points)
    if kind == "log-dense-start":
        return np.concatenate([[0.0], np.geomspace(LOG_GRID_START, t_max_gamma, n_points)])
    raise ValueError(f"unknown grid kind {kind!r}")


def partition_state(params: SystemParams, partition: str, t: float):
    return getattr(statedyn, _STATE_FN[partition])(params, t)


def run_sweep(config: SweepConfig) -> list[dict]:
    """One row per grid point with I, C, D and the branch tag per partition."""
    params = config.params
    rows = []
    for gt in time_grid(config.t_max_gamma, config.n_points, config.grid_kind):
        t = float(gt) / params.gamma
        row: dict = {"gamma_t": float(gt)}
        for part in PARTITIONS:
            sfx = _SUFFIX[part]
            if part in config.partitions:
                rec = quantinfo.correlations(partition_state(params, part, t), t)
                row.update({
                    f"I_{sfx}": rec.mutual_info,
                    f"C_{sfx}": rec.classical,
                    f"D_{sfx}": rec.discord,
                    f"branch_{sfx}": rec.branch,
                })
            else:
                row.update({f"{k}_{sfx}": None for k in ("I", "C", "D", "branch")})
        rows.append(row)
    return rows


def element_rows(params: SystemParams, gamma_ts: Sequence[float]) -> list[dict]:
    """Matrix elements of both partitions on a grid of ``gamma * t`` values."""
    rows = []
    for gt in gamma_ts:
        t = float(gt) / params.gamma
        row = {"gamma_t": float(gt)}
        for part in PARTITIONS:
            values = partition_state(params, part, t).as_tuple()
            row.update({f"{_SUFFIX[part]}_{n}": v for n, v in zip(ELEMENT_NAMES, values)})
        rows.append(row)
    return rows


# -- serialization ---------------------------------------------------------

def _fmt(value):
    if value is None:
        return None
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(f"{value:.12g}")
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    return value


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        out = []
        for col in columns:
            v = row[col]
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.12g}")
            else:
                out.append(str(v))
        writer.writerow(out)
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(_fmt(obj), indent=2, sort_keys=False) + "\n"


def render_rows(rows: Sequence[dict], fmt: str, columns: Sequence[str] = CSV_COLUMNS) -> str:
    if fmt == "csv":
        return rows_to_csv(rows, columns)
    return to_json([{c: row[c] for c in columns} for row in rows])


# -- transitions -----------------------------------------------------------

def _crossing_evaluator(params: SystemParams, partition: str):
    def diff(t: float) -> float:
        rho = partition_state(params, partition, t)
        return quantinfo.classical_correlation_x(rho) - quantinfo.classical_correlation_z(rho)
    return diff


def detect_crossing(params: SystemParams, partition: str, gamma_ts: Sequence[float]) -> Optional[float]:
    curve = []
    for gt in gamma_ts:
        t = float(gt) / params.gamma
        rho = partition_state(params, partition, t)
        curve.append((t, quantinfo.classical_correlation_z(rho), quantinfo.classical_correlation_x(rho)))
    return transitions.detect_branch_crossing(
        curve, _crossing_evaluator(params, partition), gamma=params.gamma
    )


def trajectory(params: SystemParams, partition: str, gamma_ts: Sequence[float]):
    return [(float(gt) / params.gamma, partition_state(params, partition, float(gt) / params.gamma))
            for gt in gamma_ts]


def run_transitions(params: SystemParams) -> dict:
    """Analytic and trajectory-detected characteristic times as a JSON-ready dict."""
    report = transitions.TransitionReport()
    note = None
    if params.coherence == 0.0:
        note = "p = 1/2: coherences vanish, so no measurement-branch transition is defined"
    else:
        report.t_c_analytic = transitions.sudden_transition_time_cavities(params)
        report.t_r_analytic = transitions.sudden_transition_time_reservoirs(params)
        report.complementarity_residual = transitions.complementarity_residual(params)
        if report.t_c_analytic is None:
            note = "4*nbar <= -ln|2p-1|: no sudden transition for these parameters"
    report.dfs_duration_analytic = transitions.dfs_duration(params)

    # the sign change only brackets the root; refinement is done by root finding
    log_grid = time_grid(INFINITY_GAMMA_T, CROSSING_GRID_POINTS, "log-dense-start")
    if params.coherence != 0.0:
        report.t_c_detected = detect_crossing(params, "cavities", log_grid)
        report.t_r_detected = detect_crossing(params, "reservoirs", log_grid)
    dfs_grid = np.union1d(time_grid(INFINITY_GAMMA_T, 4000, "log-dense-start"),
                          time_grid(INFINITY_GAMMA_T, 5001, "linear"))
    report.dfs_window_detected = transitions.detect_dfs_window(
        trajectory(params, "cavities", dfs_grid), params
    )
    out = {"params": {"nbar": params.nbar, "p": params.p, "gamma": params.gamma}}
    out.update(report.to_dict())
    out["note"] = note
    return out


# -- figure presets --------------------------------------------------------

FIGURE_P = 0.2
FIG2_WINDOWS = {"early": (0.0, 0.1), "late": (2.0, 15.0)}
FIG2_NBAR = 100.0
# fig1 runs to gamma*t = 30: at 15 the reservoirs still trail the initial
# cavity mutual information by up to 1e-3 bits for nbar = 100.
FIG_GRIDS = {
    "fig1": ((1, 3, 10, 100), 30.0, 3001),
    "fig3": ((1, 100), 15.0, 1501),
}


def figure_outputs(name: str, fmt: str = "csv") -> dict[str, str]:
    """Rendered data files for one figure preset, keyed by file name."""
    ext = fmt
    files: dict[str, str] = {}
    if name in ("fig1", "fig3"):
        nbars, t_max, n_points = FIG_GRIDS[name]
        for nbar in nbars:
            cfg = SweepConfig(SystemParams(nbar, FIGURE_P), t_max, n_points, "linear")
            files[f"{name}_nbar{nbar}.{ext}"] = render_rows(run_sweep(cfg), fmt)
    elif name == "fig2":
        params = SystemParams(FIG2_NBAR, FIGURE_P)
        columns = ["gamma_t"] + [f"{s}_{n}" for s in ("cc", "rr") for n in ELEMENT_NAMES]
        for label, (lo, hi) in FIG2_WINDOWS.items():
            rows = element_rows(params, np.linspace(lo, hi, 1000))
            files[f"fig2_{label}.{ext}"] = render_rows(rows, fmt, columns)
    elif name == "fig4":
        params = SystemParams(100, FIGURE_P)
        cfg = SweepConfig(params, 15.0, 1500, "log-dense-start")
        files[f"fig4_nbar100.{ext}"] = render_rows(run_sweep(cfg), fmt)
        files["fig4_transitions.json"] = to_json(run_transitions(params))
    else:
        raise ValueError(f"unknown figure preset {name!r}")
    return files


# -- randomized validation -------------------------------------------------

VALIDATION_CHECKS = (
    "trace",
    "positivity",
    "photon_conservation",
    "symmetry",
    "mirror_time",
    "eigenvalues",
    "correlation_identity",
    "oracle_equivalence",
    "complementarity",
)


@dataclass
class ValidationReport:
    seed: int
    n_cases: int
    counts: dict = field(default_factory=lambda: {c: {"passed": 0, "failed": 0} for c in VALIDATION_CHECKS})
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, case: dict, check: str, passed: bool, detail=None):
        self.counts[check]["passed" if passed else "failed"] += 1
        if not passed:
            self.failures.append({**case, "check": check, "detail": detail})

    def to_dict(self) -> dict:
        failed_cases = sorted({f["case"] for f in self.failures})
        return {
            "seed": self.seed,
            "n_cases": self.n_cases,
            "passed_cases": self.n_cases - len(failed_cases),
            "failed_cases": len(failed_cases),
            "status": "pass" if self.ok else "fail",
            "checks": self.counts,
            "failures": self.failures,
        }


def _check_state(rep, case, partition, params, t):
    tag = dict(case, partition=partition)
    try:
        rho = partition_state(params, partition, t)
    except statedyn.InvalidStateError as exc:
        rep.record(tag, "positivity", False, str(exc))
        return None
    m = rho.to_matrix()
    rep.record(tag, "trace", abs(np.trace(m) - 1.0) <= 1e-12, float(np.trace(m) - 1.0))
    eps = statedyn.POSITIVITY_EPS
    pos = rho.d11 * rho.d44 >= rho.o14 ** 2 - eps and rho.d22 * rho.d33 >= rho.o23 ** 2 - eps
    rep.record(tag, "positivity", pos)
    c = params.coherence
    sym = rho.d22 == rho.d33 and all(
        o == 0.0 or (o > 0) == (c > 0) for o in (rho.o14, rho.o23)
    )
    rep.record(tag, "symmetry", sym, list(rho.as_tuple()))
    closed = np.sort(quantinfo.xstate_eigenvalues(rho))
    generic = np.linalg.eigvalsh(m)
    err = float(np.max(np.abs(closed - generic)))
    rep.record(tag, "eigenvalues", err <= 1e-12, err)
    try:
        rec = quantinfo.correlations(rho, t)
        ok = (abs(rec.mutual_info - rec.classical - rec.discord) <= 1e-12
              and -1e-10 <= rec.discord <= rec.mutual_info + 1e-10
              and -1e-10 <= rec.classical <= rec.mutual_info + 1e-10)
        rep.record(tag, "correlation_identity", ok,
                   [rec.mutual_info, rec.classical, rec.discord])
    except ValueError as exc:
        rep.record(tag, "correlation_identity", False, str(exc))
    return rho


def run_validate(seed: int, n_cases: int, oracle_grid: int = 32) -> ValidationReport:
    """Check the invariants of every module on ``n_cases`` seeded random draws."""
    if n_cases < 1:
        raise ValueError("n_cases must be at least 1")
    rng = np.random.default_rng(seed)
    rep = ValidationReport(seed, n_cases)
    for i in range(n_cases):
        nbar = float(rng.uniform(0.1, 200.0))
        p = float(rng.uniform(0.0, 1.0))
        gamma = float(rng.uniform(0.1, 10.0))
        gt = float(rng.uniform(0.0, 15.0))
        params = SystemParams(nbar, p, gamma)
        t = gt / gamma
        case = {"case": i, "nbar": nbar, "p": p, "gamma": gamma, "gamma_t": gt}

        amp = statedyn.amplitudes_at(params, t)
        resid = amp.alpha_t_sq + amp.abar_t_sq - nbar
        rep.record(case, "photon_conservation", abs(resid) <= 4 * np.finfo(float).eps * nbar, resid)

        rho_c = _check_state(rep, case, "cavities", params, t)
        rho_r = _check_state(rep, case, "reservoirs", params, t)

        if gt > 0 and rho_r is not None:
            try:
                mirrored = statedyn.cavity_state(params, statedyn.mirror_time(params, t))
                err = max(abs(a - b) for a, b in zip(rho_r.as_tuple(), mirrored.as_tuple()))
                rep.record(case, "mirror_time", err <= 1e-12, err)
            except statedyn.InvalidStateError as exc:
                rep.record(case, "mirror_time", False, str(exc))

        for partition, rho in (("cavities", rho_c), ("reservoirs", rho_r)):
            if rho is None:
                continue
            analytic, _ = quantinfo.classical_correlation_analytic(rho)
            oracle, _ = quantinfo.classical_correlation_bruteforce(rho, oracle_grid)
            rep.record(dict(case, partition=partition), "oracle_equivalence",
                       abs(oracle - analytic) <= 1e-6, {"analytic": analytic, "oracle": oracle})

        if params.coherence != 0.0:
            resid = transitions.complementarity_residual(params)
            if resid is not None:
                rep.record(case, "complementarity", abs(resid) <= 1e-12, resid)
    return rep
