"""End-to-end evaluation of thermal-state geometric phases for the spin model.

Single parameter points and parameter families share one code path: a family
is integrated in lock-step through the batched RK4 core, after which each
point's phases are assembled with the generic engine operations over the
frozen t = 0 eigenbasis.  Batch composition does not affect any individual
point's arithmetic, so sweeps are deterministic under any chunking.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import (
    Ensemble,
    PropagatorTrace,
    diagonal_phase_argument,
    integrate_sampled_family,
    offdiagonal_trace,
    shift_ensembles,
)
from .errors import UndefinedPhase
from .linalg import PhaseFactor, phase_functional
from .model import (
    ModelParams,
    eigenbasis_matrix,
    eigensystem,
    period_tau,
    rotating_frame,
    thermal_weights,
)

SWEEP_AXES = ("beta", "omega", "muB", "V")


def model_traces(
    params_list: Sequence[ModelParams],
    steps: int,
    t_final: float | Sequence[float] | None = None,
) -> list[PropagatorTrace]:
    """Integrate the model for a family of parameter points in lock-step.

    ``t_final`` may be a scalar, one value per point, or None for each
    point's own rotating-frame period tau.  The dynamical-phase reference
    basis is the t = 0 eigenbasis of each point.
    """
    n_pts = len(params_list)
    if t_final is None:
        finals = np.array([period_tau(p) for p in params_list])
    else:
        finals = np.broadcast_to(np.asarray(t_final, dtype=float), (n_pts,)).astype(float)
        if np.any(finals <= 0.0):
            raise ValueError("t_final must be positive")
    bases = np.stack([eigenbasis_matrix(eigensystem(p, 0.0)) for p in params_list])
    dts = finals / steps
    # Half-step sample times per point, shape (B, 2*steps+1).
    times = 0.5 * dts[:, np.newaxis] * np.arange(2 * steps + 1)[np.newaxis, :]
    omegas = np.array([p.omega for p in params_list])
    couplings = np.array([p.muB for p in params_list])
    splittings = np.array([p.V for p in params_list])
    phase = np.exp(-1j * omegas[:, np.newaxis] * times)
    h_samples = np.zeros(times.shape + (2, 2), dtype=complex)
    h_samples[..., 0, 0] = 0.5 * splittings[:, np.newaxis]
    h_samples[..., 1, 1] = -0.5 * splittings[:, np.newaxis]
    h_samples[..., 0, 1] = couplings[:, np.newaxis] * phase
    h_samples[..., 1, 0] = couplings[:, np.newaxis] * np.conj(phase)
    return integrate_sampled_family(h_samples, dts, bases)


def model_trace(
    params: ModelParams, steps: int, t_final: float | None = None
) -> PropagatorTrace:
    """Single-point convenience wrapper around :func:`model_traces`."""
    return model_traces([params], steps, t_final)[0]


def thermal_ensemble(params: ModelParams) -> Ensemble:
    """Thermal state over the t = 0 eigenbasis."""
    w = thermal_weights(params)
    basis = eigenbasis_matrix(eigensystem(params, 0.0))
    return Ensemble(basis=basis, weights=np.array([w.lambda1, w.lambda2]))


@dataclass(frozen=True)
class PhasePoint:
    """All phase quantities of one parameter point at one final time.

    ``diag``/``offdiag`` are None when the corresponding interference
    amplitude vanished (undefined phase); the raw arguments are always
    recorded.
    """

    params: ModelParams
    t_final: float
    tau: float
    omega_eff: float
    lambda1: float
    lambda2: float
    delta1: float
    delta2: float
    diag_raw: complex
    offdiag_raw: complex
    diag: PhaseFactor | None
    offdiag: PhaseFactor | None

    @property
    def undefined(self) -> tuple[str, ...]:
        names = []
        if self.diag is None:
            names.append("diagonal")
        if self.offdiag is None:
            names.append("off-diagonal")
        return tuple(names)


def _assemble_point(params: ModelParams, trace: PropagatorTrace) -> PhasePoint:
    tau = period_tau(params)
    _, omega_eff = rotating_frame(params)
    w = thermal_weights(params)
    ensemble = Ensemble(basis=trace.basis, weights=np.array([w.lambda1, w.lambda2]))
    # Equal weights (beta = 0) are admitted here: the off-diagonal trace has a
    # well-defined equal-weight limit even though shifted companions of a
    # degenerate ensemble are conceptually ill-defined.
    companions = shift_ensembles(ensemble, require_distinct=False)

    diag_raw = diagonal_phase_argument(trace, ensemble)
    offdiag_raw = offdiagonal_trace(trace, companions, 2)
    try:
        diag = phase_functional(diag_raw)
    except UndefinedPhase:
        diag = None
    try:
        offdiag = phase_functional(offdiag_raw)
    except UndefinedPhase:
        offdiag = None

    return PhasePoint(
        params=params,
        t_final=trace.t_final,
        tau=tau,
        omega_eff=omega_eff,
        lambda1=w.lambda1,
        lambda2=w.lambda2,
        delta1=float(trace.delta[-1, 0]),
        delta2=float(trace.delta[-1, 1]),
        diag_raw=diag_raw,
        offdiag_raw=offdiag_raw,
        diag=diag,
        offdiag=offdiag,
    )


def phase_points(
    params_list: Sequence[ModelParams],
    steps: int = 8192,
    t_final: float | None = None,
) -> list[PhasePoint]:
    """Evaluate the diagonal and off-diagonal phases for a parameter family."""
    traces = model_traces(params_list, steps, t_final)
    return [_assemble_point(p, tr) for p, tr in zip(params_list, traces)]


def phase_point(
    params: ModelParams, steps: int = 8192, t_final: float | None = None
) -> PhasePoint:
    """Evaluate one parameter point; see :class:`PhasePoint`."""
    return phase_points([params], steps, t_final)[0]


@dataclass(frozen=True)
class SweepSpec:
    """One-axis parameter sweep over a strictly increasing grid."""

    axis: str
    start: float
    stop: float
    points: int
    fixed: ModelParams
    steps: int = 8192
    t_final: float | None = None

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.start < self.stop:
            raise ValueError("start must be < stop")
        if self.points < 2:
            raise ValueError("points must be >= 2")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def params_at(self, value: float) -> ModelParams:
        fields = {
            "V": self.fixed.V,
            "muB": self.fixed.muB,
            "omega": self.fixed.omega,
            "beta": self.fixed.beta,
        }
        fields[self.axis] = float(value)
        return ModelParams(**fields)


@dataclass(frozen=True)
class SweepRow:
    """One sweep output row; phase fields are None when undefined."""

    axis_value: float
    lambda1: float
    delta1: float
    diag_arg_re: float
    diag_arg_im: float
    diag_phase: float | None
    offdiag_arg_re: float
    offdiag_arg_im: float
    offdiag_phase: float | None


def _row_from_point(value: float, point: PhasePoint) -> SweepRow:
    return SweepRow(
        axis_value=float(value),
        lambda1=point.lambda1,
        delta1=point.delta1,
        diag_arg_re=point.diag_raw.real,
        diag_arg_im=point.diag_raw.imag,
        diag_phase=None if point.diag is None else point.diag.arg,
        offdiag_arg_re=point.offdiag_raw.real,
        offdiag_arg_im=point.offdiag_raw.imag,
        offdiag_phase=None if point.offdiag is None else point.offdiag.arg,
    )


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """Evaluate a sweep, optionally fanning chunks out over worker threads.

    Rows are returned in axis order regardless of scheduling; each point's
    arithmetic is independent of chunk boundaries, so every degree of
    parallelism produces identical values.
    """
    values = spec.grid()
    params = [spec.params_at(v) for v in values]
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    if jobs == 1 or len(params) < 2 * jobs:
        points = phase_points(params, spec.steps, spec.t_final)
    else:
        chunks = np.array_split(np.arange(len(params)), jobs)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(phase_points, [params[i] for i in idx], spec.steps, spec.t_final)
                for idx in chunks
                if len(idx)
            ]
            points = [pt for fut in futures for pt in fut.result()]
    return [_row_from_point(v, pt) for v, pt in zip(values, points)]
