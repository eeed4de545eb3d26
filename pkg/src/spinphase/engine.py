"""Definitional machinery for mixed-state geometric phases of unitary paths.

The operations here are oracle-grade and model-agnostic: a classical RK4
integrator for i dU/dt = H(t) U with periodic re-unitarization, running
dynamical phases by Simpson quadrature, the parallel-transported evolution,
and the diagonal and off-diagonal mixed-state phase functionals for any
N-level unitary evolution over a fixed orthonormal reference basis.

Time-dependent generators are supplied as callables mapping a 1-D array of
times to a stacked array of Hermitian matrices, shape (len(times), N, N).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .errors import DegenerateWeights, UnitarityLoss
from .linalg import PhaseFactor, phase_functional, polar_project

#: Steps between polar re-unitarizations of the running propagator.
PROJECTION_INTERVAL = 64
#: Unitarity drift at a projection checkpoint beyond which integration aborts.
DRIFT_LIMIT = 1e-6
#: Minimum pairwise weight separation for shifted-companion construction.
WEIGHT_GAP = 1e-9


@dataclass(frozen=True)
class PropagatorTrace:
    """Sampled propagator of one unitary evolution.

    Attributes
    ----------
    grid : ndarray, shape (M+1,)
        Strictly increasing sample times starting at 0.
    U : ndarray, shape (M+1, N, N)
        Propagator at each grid time; U[0] is the identity.
    delta : ndarray, shape (M+1, N)
        Running dynamical phase of each reference-basis state,
        delta_k(t) = -int_0^t <psi_k| U^dag H U |psi_k> dt'.
    basis : ndarray, shape (N, N)
        Orthonormal reference basis (columns) the phases refer to.
    """

    grid: np.ndarray
    U: np.ndarray
    delta: np.ndarray
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.U.shape[-1]

    @property
    def t_final(self) -> float:
        return float(self.grid[-1])


@dataclass(frozen=True)
class Ensemble:
    """Ordered orthonormal basis with a normalized weight list."""

    basis: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "weights", weights)
        n = basis.shape[0]
        if basis.shape != (n, n) or weights.shape != (n,):
            raise ValueError("basis must be square with one weight per column")
        gram = basis.conj().T @ basis
        if np.linalg.norm(gram - np.eye(n)) > 1e-10:
            raise ValueError("ensemble basis is not orthonormal")
        if np.any(weights <= 0.0):
            raise ValueError("ensemble weights must be positive")
        if abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ValueError("ensemble weights must sum to 1")

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])


def _rk4_family(h_samples: np.ndarray, dt: np.ndarray) -> np.ndarray:
    """Lock-step RK4 for a family of evolutions.

    ``h_samples`` holds the generators at the half-step grid t_0, t_0+dt/2,
    t_1, ... with shape (B, 2*steps+1, N, N); ``dt`` is the per-family step.
    Returns the propagators on the full grid, shape (B, steps+1, N, N).

    Raises
    ------
    UnitarityLoss
        If the drift found at a re-unitarization checkpoint exceeds 1e-6.
    """
    b, m2, n, _ = h_samples.shape
    steps = (m2 - 1) // 2
    eye = np.eye(n, dtype=complex)
    u = np.broadcast_to(eye, (b, n, n)).copy()
    out = np.empty((b, steps + 1, n, n), dtype=complex)
    out[:, 0] = u
    # Fold -i into the step so the stage updates stay plain matmuls.
    step = (-1j * np.asarray(dt, dtype=float)).reshape(b, 1, 1)
    for i in range(steps):
        h0 = h_samples[:, 2 * i]
        hm = h_samples[:, 2 * i + 1]
        h1 = h_samples[:, 2 * i + 2]
        k1 = h0 @ u
        k2 = hm @ (u + (0.5 * step) * k1)
        k3 = hm @ (u + (0.5 * step) * k2)
        k4 = h1 @ (u + step * k3)
        u = u + (step / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if (i + 1) % PROJECTION_INTERVAL == 0:
            u = _check_and_project(u, eye)
        out[:, i + 1] = u
    _check_drift(u, eye)
    return out


def _drift(u: np.ndarray, eye: np.ndarray) -> float:
    # A diverged integration overflows here; inf still trips the limit.
    with np.errstate(over="ignore", invalid="ignore"):
        gram = np.einsum("...ji,...jk->...ik", u.conj(), u)
        d = float(np.max(np.linalg.norm(gram - eye, axis=(-2, -1))))
    return d if np.isfinite(d) else np.inf


def _check_drift(u: np.ndarray, eye: np.ndarray) -> None:
    d = _drift(u, eye)
    if d > DRIFT_LIMIT:
        raise UnitarityLoss(
            f"unitarity drift {d:.3e} > {DRIFT_LIMIT:.0e}; increase steps"
        )


def _check_and_project(u: np.ndarray, eye: np.ndarray) -> np.ndarray:
    _check_drift(u, eye)
    return polar_project(u)


def _delta_integrand(
    u_grid: np.ndarray, h_grid: np.ndarray, basis: np.ndarray
) -> np.ndarray:
    """-<psi_k| U^dag H U |psi_k> at every grid point; shape (..., M+1, N)."""
    hu = h_grid @ u_grid
    # <psi_k|U^dag H U|psi_k> = sum_ij conj((U B)_ik) (H U B)_ik
    ub = u_grid @ basis
    hub = hu @ basis
    return -np.real(np.einsum("...ik,...ik->...k", ub.conj(), hub))


def _running_delta(integrand: np.ndarray, dt: float) -> np.ndarray:
    """Cumulative Simpson integral of the per-state integrand along axis 0."""
    return cumulative_simpson(integrand, dx=dt, axis=0, initial=0.0)


def integrate_propagator(
    h_of_t: Callable[[np.ndarray], np.ndarray],
    t_final: float,
    steps: int,
    basis: np.ndarray | None = None,
) -> PropagatorTrace:
    """Integrate i dU/dt = H(t) U from the identity over [0, t_final].

    Classical fixed-step RK4 with polar re-unitarization every 64 steps;
    running dynamical phases are accumulated by cumulative Simpson
    quadrature on the same grid.

    Parameters
    ----------
    h_of_t
        Callable mapping a 1-D time array to stacked Hermitian generators
        of shape (len(times), N, N).
    t_final
        Final time, > 0.
    steps
        Number of RK4 steps, >= 2.
    basis
        Orthonormal reference basis (columns) for the dynamical phases;
        defaults to the computational basis.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if not t_final > 0.0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    dt = t_final / steps
    times = 0.5 * dt * np.arange(2 * steps + 1)
    h_samples = np.asarray(h_of_t(times), dtype=complex)
    n = h_samples.shape[-1]
    if basis is None:
        basis = np.eye(n, dtype=complex)
    basis = np.asarray(basis, dtype=complex)
    u_grid = _rk4_family(h_samples[np.newaxis], np.array([dt]))[0]
    integrand = _delta_integrand(u_grid, h_samples[::2], basis)
    delta = _running_delta(integrand, dt)
    grid = dt * np.arange(steps + 1)
    return PropagatorTrace(grid=grid, U=u_grid, delta=delta, basis=basis)


def integrate_sampled_family(
    h_samples: np.ndarray,
    dt: np.ndarray,
    bases: np.ndarray | None = None,
) -> list[PropagatorTrace]:
    """Batched variant of :func:`integrate_propagator` over pre-sampled generators.

    ``h_samples`` has shape (B, 2*steps+1, N, N) on each family's half-step
    grid, ``dt`` the per-family step sizes, and ``bases`` optional reference
    bases of shape (B, N, N).  The batch advances in lock-step through one
    RK4 loop; each member's arithmetic is independent of the others, so the
    results match member-by-member integration bit for bit.
    """
    h_samples = np.asarray(h_samples, dtype=complex)
    dt = np.asarray(dt, dtype=float)
    b, _, n, _ = h_samples.shape
    if bases is None:
        bases = np.broadcast_to(np.eye(n, dtype=complex), (b, n, n))
    u_grids = _rk4_family(h_samples, dt)
    steps = u_grids.shape[1] - 1
    traces = []
    for j in range(b):
        integrand = _delta_integrand(u_grids[j], h_samples[j, ::2], bases[j])
        delta = _running_delta(integrand, float(dt[j]))
        grid = float(dt[j]) * np.arange(steps + 1)
        traces.append(
            PropagatorTrace(grid=grid, U=u_grids[j], delta=delta, basis=np.asarray(bases[j]))
        )
    return traces


def dynamical_phase(
    trace: PropagatorTrace,
    h_of_t: Callable[[np.ndarray], np.ndarray],
    k: int,
) -> float:
    """Dynamical phase delta_k(T) = -int_0^T <psi_k|U^dag H U|psi_k> dt.

    Composite Simpson on the trace grid.  The integrand is real because
    U^dag dU/dt = -i U^dag H U with Hermitian H.
    """
    if not 0 <= k < trace.dim:
        raise IndexError(f"basis index {k} out of range for dimension {trace.dim}")
    h_grid = np.asarray(h_of_t(trace.grid), dtype=complex)
    integrand = _delta_integrand(trace.U, h_grid, trace.basis)
    dt = float(trace.grid[1] - trace.grid[0])
    return float(simpson(integrand[:, k], dx=dt))


def parallel_transported(trace: PropagatorTrace) -> PropagatorTrace:
    """Parallel-transported evolution U_par = U sum_k e^{-i delta_k} P_k.

    The returned trace carries zero running phases: along U_par no dynamical
    phase accrues in any reference-basis direction.
    """
    phases = np.exp(-1j * trace.delta)  # (M+1, N)
    # U_par = U B diag(e^{-i delta}) B^dag, applied per grid point.
    b = trace.basis
    corrected = trace.U @ ((b * phases[:, np.newaxis, :]) @ b.conj().T)
    return PropagatorTrace(
        grid=trace.grid,
        U=corrected,
        delta=np.zeros_like(trace.delta),
        basis=trace.basis,
    )


def parallel_transport_residual(trace: PropagatorTrace) -> float:
    """Max interior residual |<psi_k| U^dag dU/dt |psi_k>| of a transported trace.

    The derivative uses the five-point (fourth-order) central stencil; the
    three-point stencil's h^2 truncation would dominate the residual at the
    step counts this check runs at.
    """
    u = trace.U
    dt = float(trace.grid[1] - trace.grid[0])
    du = (-u[4:] + 8.0 * u[3:-1] - 8.0 * u[1:-3] + u[:-4]) / (12.0 * dt)
    inner = np.einsum("mji,mjk->mik", u[2:-2].conj(), du)
    per_state = np.einsum("ja,mjk,ka->ma", trace.basis.conj(), inner, trace.basis)
    return float(np.max(np.abs(per_state)))


def _require_shared_basis(trace: PropagatorTrace, ensembles: Sequence[Ensemble]):
    for e in ensembles:
        if np.linalg.norm(e.basis - trace.basis) > 1e-10:
            raise ValueError("ensemble basis differs from the trace reference basis")


def diagonal_phase_argument(trace: PropagatorTrace, ensemble: Ensemble) -> complex:
    """Raw interference amplitude sum_k lambda_k <psi_k|U(T)|psi_k> e^{-i delta_k}."""
    _require_shared_basis(trace, [ensemble])
    b = ensemble.basis
    elements = np.einsum("ja,jk,ka->a", b.conj(), trace.U[-1], b)
    return complex(np.sum(ensemble.weights * elements * np.exp(-1j * trace.delta[-1])))


def diagonal_mixed_phase(trace: PropagatorTrace, ensemble: Ensemble) -> PhaseFactor:
    """Mixed-state geometric phase of the surviving-basis interference sum.

    gamma = Phi[sum_k lambda_k <psi_k|U(T)|psi_k> e^{-i delta_k(T)}]; the raw
    argument is retained on the returned factor for sensitivity analysis.

    Raises
    ------
    UndefinedPhase
        If the interference amplitude (the visibility) vanishes.
    """
    return phase_functional(diagonal_phase_argument(trace, ensemble))


def shift_operator(basis: np.ndarray) -> np.ndarray:
    """Cyclic shift W = sum_k |psi_{k+1 mod N}><psi_k| over the given basis."""
    basis = np.asarray(basis, dtype=complex)
    # column k of the rolled matrix is |psi_{k+1 mod N}>
    return np.roll(basis, -1, axis=1) @ basis.conj().T


def shift_ensembles(ensemble: Ensemble, *, require_distinct: bool = True) -> list[Ensemble]:
    """The N mutually non-interfering companions rho_n = W^{n-1} rho (W^dag)^{n-1}.

    Conjugation by the cyclic shift permutes the weights against the fixed
    basis: companion n carries weights rolled by n-1 positions.

    Raises
    ------
    DegenerateWeights
        If any two weights are closer than 1e-9 (with ``require_distinct``).
        The companion construction presumes a non-degenerate spectrum; the
        equal-weight limit remains evaluable by building ensembles directly.
    """
    w = ensemble.weights
    if require_distinct:
        gaps = np.abs(w[:, np.newaxis] - w[np.newaxis, :])
        off_diag = gaps[~np.eye(len(w), dtype=bool)]
        if off_diag.size and float(off_diag.min()) <= WEIGHT_GAP:
            raise DegenerateWeights(
                f"minimum weight gap {float(off_diag.min()):.3e} <= {WEIGHT_GAP:.0e}"
            )
    return [
        Ensemble(basis=ensemble.basis, weights=np.roll(w, n))
        for n in range(ensemble.dim)
    ]


def offdiagonal_trace(
    trace: PropagatorTrace,
    ensembles: Sequence[Ensemble],
    l: int | None = None,
) -> complex:
    """Raw cyclic-product trace Tr prod_a U_par(T) rho_a^{1/l}.

    ``ensembles`` lists the l density operators entering the product, all
    sharing the trace's reference basis; rho^{1/l} is formed state-wise as
    sum_k lambda_k^{1/l} |psi_k><psi_k|.
    """
    if l is None:
        l = len(ensembles)
    if l != len(ensembles):
        raise ValueError(f"l = {l} does not match {len(ensembles)} ensembles")
    if l < 1:
        raise ValueError("need at least one ensemble")
    _require_shared_basis(trace, ensembles)
    u_par = parallel_transported(trace).U[-1]
    product = np.eye(trace.dim, dtype=complex)
    for e in ensembles:
        root = (e.basis * e.weights ** (1.0 / l)) @ e.basis.conj().T
        product = product @ u_par @ root
    return complex(np.trace(product))


def offdiagonal_mixed_phase(
    trace: PropagatorTrace,
    ensembles: Sequence[Ensemble],
    l: int | None = None,
) -> PhaseFactor:
    """Off-diagonal mixed-state phase gamma^(l) = Phi[Tr prod_a U_par(T) rho_a^{1/l}].

    Raises
    ------
    UndefinedPhase
        If the trace of the product vanishes.
    """
    return phase_functional(offdiagonal_trace(trace, ensembles, l))


def offdiag_trace_expansion(
    trace: PropagatorTrace,
    ensembles: Sequence[Ensemble],
    l: int | None = None,
) -> complex:
    """Scalar expansion of the off-diagonal trace over matrix elements.

    Independent cross-check route for :func:`offdiagonal_mixed_phase`: the
    trace of the cyclic product written out as nested sums of propagator
    matrix elements and weight roots in the shared basis.
    """
    if l is None:
        l = len(ensembles)
    if l != len(ensembles):
        raise ValueError(f"l = {l} does not match {len(ensembles)} ensembles")
    _require_shared_basis(trace, ensembles)
    b = trace.basis
    n = trace.dim
    m_par = (b.conj().T @ trace.U[-1] @ b) * np.exp(-1j * trace.delta[-1])[np.newaxis, :]
    roots = [e.weights ** (1.0 / l) for e in ensembles]
    total = 0.0 + 0.0j
    for path in itertools.product(range(n), repeat=l):
        term = 1.0 + 0.0j
        for a in range(l):
            nxt = path[(a + 1) % l]
            term *= m_par[path[a], nxt] * roots[a][nxt]
        total += term
    return complex(total)
