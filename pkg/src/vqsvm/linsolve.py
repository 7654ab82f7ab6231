"""Variational linear solver over a Pauli-string expansion, plus the exact
dense oracle it is checked against.

Given F as an expansion and a right-hand side y, the solver descends on the
fidelity cost 1 - |<out~|out>|^2 between the normalized image of a trial
state and the normalized y. The cost is blind to the solution's scale and
phase, so after descent the scale s minimizing ||s F psi - y|| is folded
back in: s = <F psi, y> / ||F psi||^2, which also makes <Fx, y> >= 0 and
||Fx|| = ||y|| |<out~|out>| at the optimum.

Trial states come in two flavors: "circuit" (angles of a universal circuit,
up to 3 qubits) and "direct" (raw amplitudes, renormalized after every
step). Direct mode is what larger registers use; for real symmetric systems
it restricts to real amplitudes by default, halving the search space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import PARAM_COUNTS, prepare_states
from .pauli import PauliExpansion, apply_expansion, reconstruct
from .statevector import RawVector, StateVector, normalize
from .varprep import COST_CHANGE_TOL, GdSchedule, TrainingTrace

DEGENERATE_TOL = 1e-14


class DegenerateTrialError(ValueError):
    """F maps the trial state to (numerically) zero."""


class SingularMatrixError(ValueError):
    """Elimination hit a zero pivot; carries the failing pivot index."""

    def __init__(self, pivot_index: int):
        super().__init__(f"matrix is singular at pivot {pivot_index}")
        self.pivot_index = pivot_index


@dataclass(frozen=True, eq=False)
class LinearProblem:
    """Expansion of the (padded) matrix plus the (padded) right-hand side."""

    expansion: PauliExpansion
    rhs: RawVector
    y_norm: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.expansion.n_qubits != self.rhs.n_qubits:
            raise ValueError(
                f"qubit counts differ: expansion {self.expansion.n_qubits} vs rhs {self.rhs.n_qubits}")
        nrm = self.rhs.norm()
        if nrm == 0.0:
            raise ValueError("right-hand side must not be the zero vector")
        if self.y_norm is None:
            object.__setattr__(self, "y_norm", nrm)
        elif abs(self.y_norm - nrm) > 1e-9 * max(1.0, nrm):
            raise ValueError(f"stored y_norm {self.y_norm} does not match rhs norm {nrm}")

    @property
    def n_qubits(self) -> int:
        return self.rhs.n_qubits


@dataclass(frozen=True, eq=False)
class TrialState:
    """Starting point of the descent: circuit angles or raw amplitudes.

    Fields left as None are drawn from the solver's seed.
    """

    mode: str
    params: np.ndarray | None = None
    amps: np.ndarray | None = None
    real_only: bool = True

    def __post_init__(self):
        if self.mode not in ("circuit", "direct"):
            raise ValueError(f"unknown trial mode {self.mode!r}")

    @classmethod
    def circuit_mode(cls, params=None) -> "TrialState":
        return cls("circuit", params=None if params is None else np.asarray(params, dtype=np.float64))

    @classmethod
    def direct_mode(cls, amps=None, real_only: bool = True) -> "TrialState":
        return cls("direct", amps=None if amps is None else np.asarray(amps, dtype=np.complex128),
                   real_only=real_only)


@dataclass
class LinearSolution:
    """Recovered solution x of F x ~ y with its quality figures."""

    x: np.ndarray
    final_cost: float
    residual: float
    trace: TrainingTrace

    def to_dict(self, n_qubits: int, mode: str) -> dict:
        x = np.asarray(self.x)
        if np.abs(x.imag).max(initial=0.0) < 1e-12:
            x_out = [float(v) for v in x.real]
        else:
            x_out = [[float(v.real), float(v.imag)] for v in x]
        return {
            "n_qubits": n_qubits,
            "mode": mode,
            "x": x_out,
            "residual": float(self.residual),
            "final_cost": float(self.final_cost),
            "steps": int(self.trace.steps[-1]) if self.trace.steps else 0,
            "converged": bool(self.trace.converged),
        }


def forward(problem: LinearProblem, trial: StateVector) -> tuple[StateVector, float]:
    """Image of the trial under F, normalized, with its norm c = ||F trial||."""
    if problem.n_qubits != trial.n_qubits:
        raise ValueError(f"qubit counts differ: problem {problem.n_qubits} vs trial {trial.n_qubits}")
    image = apply_expansion(problem.expansion, trial)
    nrm = image.norm()
    if nrm < DEGENERATE_TOL:
        raise DegenerateTrialError(f"F maps the trial to norm {nrm:.2e}, below {DEGENERATE_TOL}")
    state, c = normalize(image)
    return state, c


def gaussian_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense elimination with partial pivoting; any square size.

    Raises SingularMatrixError naming the pivot index when the best pivot
    magnitude drops to 1e-12 or below.
    """
    a = np.array(a, dtype=np.complex128)
    b = np.array(b, dtype=np.complex128)
    d = a.shape[0]
    if a.shape != (d, d) or b.shape != (d,):
        raise ValueError(f"incompatible shapes {a.shape} and {b.shape}")
    for k in range(d):
        pivot_row = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[pivot_row, k]) <= 1e-12:
            raise SingularMatrixError(k)
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            b[[k, pivot_row]] = b[[pivot_row, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= factors[:, None] * a[k, k:]
        b[k + 1:] -= factors * b[k]
    x = np.zeros(d, dtype=np.complex128)
    for k in range(d - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def _direction_cost(m: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    w = m @ x
    wn = np.linalg.norm(w)
    yn = np.linalg.norm(y)
    if wn == 0.0 or yn == 0.0:
        return 1.0
    return max(0.0, 1.0 - abs(np.vdot(w, y)) ** 2 / (wn**2 * yn**2))


def solve_exact(m: np.ndarray, rhs: RawVector | np.ndarray) -> LinearSolution:
    """Classical oracle: eliminate, then report the same quality figures."""
    y = rhs.amps if isinstance(rhs, RawVector) else np.asarray(rhs, dtype=np.complex128)
    m = np.asarray(m, dtype=np.complex128)
    x = gaussian_solve(m, y)
    residual = float(np.linalg.norm(m @ x - y) / np.linalg.norm(y))
    cost = _direction_cost(m, x, y)
    trace = TrainingTrace(final_params=x.copy(), final_cost=cost, converged=True)
    return LinearSolution(x=x, final_cost=cost, residual=residual, trace=trace)


def solve_variational(problem: LinearProblem, trial0: TrialState,
                      sched: GdSchedule, seed: int = 0) -> LinearSolution:
    """Steepest descent on the fidelity cost, then scale recovery.

    The expansion is densified once up front; every cost evaluation inside
    the loop is then a single matrix-vector product, numerically identical
    to applying the expansion term by term.
    """
    n = problem.n_qubits
    dim = 1 << n
    fd = reconstruct(problem.expansion)
    y = problem.rhs.amps
    b = y / problem.y_norm
    rng = np.random.default_rng(seed)

    if trial0.mode == "circuit":
        if n not in PARAM_COUNTS:
            raise ValueError(f"circuit trials exist for 1-3 qubits, not {n}")
        psi, trace = _descend_circuit(fd, b, trial0, sched, n, rng)
    else:
        psi, trace = _descend_direct(fd, b, trial0, sched, dim, rng)

    w = fd @ psi
    wn = np.linalg.norm(w)
    if wn < DEGENERATE_TOL:
        raise DegenerateTrialError(f"F maps the final trial to norm {wn:.2e}")
    scale = np.vdot(w, y) / wn**2
    x = scale * psi
    residual = float(np.linalg.norm(fd @ x - y) / problem.y_norm)
    return LinearSolution(x=x, final_cost=trace.final_cost, residual=residual, trace=trace)


def _cost_of_images(w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cost rows for a batch of images w of shape (B, dim)."""
    overlaps = np.conj(w) @ b
    norms_sq = np.einsum("bi,bi->b", np.conj(w), w).real
    return np.maximum(0.0, 1.0 - np.abs(overlaps) ** 2 / np.maximum(norms_sq, 1e-300))


def _descend_direct(fd, b, trial0, sched, dim, rng):
    real_only = trial0.real_only
    if trial0.amps is not None:
        psi = np.asarray(trial0.amps, dtype=np.complex128)
        if psi.shape != (dim,):
            raise ValueError(f"trial amplitudes have shape {psi.shape}, expected ({dim},)")
        if real_only:
            psi = psi.real.astype(np.complex128)
    elif real_only:
        psi = rng.normal(size=dim).astype(np.complex128)
    else:
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        raise ValueError("initial trial amplitudes are the zero vector")
    psi = psi / nrm

    # Closed-form central differences: perturbing component i changes the
    # image w = F psi by +-h times column i of F, so every perturbed cost is
    # an O(dim) expression in precomputed column quantities. The numbers are
    # exactly the two-sided difference quotient a naive loop would produce.
    g = fd.conj().T @ b               # (F^dag b)_i
    col_sq = np.einsum("ij,ij->j", np.conj(fd), fd).real
    h = sched.fd_step

    def cost_scalar(w):
        wn2 = np.vdot(w, w).real
        return max(0.0, 1.0 - abs(np.vdot(w, b)) ** 2 / max(wn2, 1e-300))

    def fd_gradient(psi, w, alpha, wn2):
        # alpha = <b|w>; perturbation +-h e_i shifts alpha by +-h conj(g_i)
        # and ||w||^2 by +-2h Re(hvec_i) + h^2 col_sq_i.
        hvec = fd.conj().T @ w
        num_p = np.abs(alpha + h * np.conj(g)) ** 2
        num_m = np.abs(alpha - h * np.conj(g)) ** 2
        den_p = wn2 + 2.0 * h * hvec.real + h * h * col_sq
        den_m = wn2 - 2.0 * h * hvec.real + h * h * col_sq
        grad = ((1.0 - num_p / den_p) - (1.0 - num_m / den_m)) / (2.0 * h)
        if real_only:
            return grad
        num_pi = np.abs(alpha + 1j * h * np.conj(g)) ** 2
        num_mi = np.abs(alpha - 1j * h * np.conj(g)) ** 2
        den_pi = wn2 + 2.0 * h * hvec.imag + h * h * col_sq
        den_mi = wn2 - 2.0 * h * hvec.imag + h * h * col_sq
        grad_im = ((1.0 - num_pi / den_pi) - (1.0 - num_mi / den_mi)) / (2.0 * h)
        return grad + 1j * grad_im

    trace = TrainingTrace()
    prev_cost = None
    w = fd @ psi
    cost = cost_scalar(w)
    for t in range(sched.max_steps + 1):
        trace.record(t, cost)
        if cost <= sched.cost_tolerance:
            trace.converged = True
            break
        if prev_cost is not None and abs(prev_cost - cost) < COST_CHANGE_TOL:
            break
        if t == sched.max_steps:
            break
        alpha = np.vdot(b, w)
        wn2 = np.vdot(w, w).real
        grad = fd_gradient(psi, w, alpha, wn2)
        psi = psi - sched.eta(t) * grad
        nrm = np.linalg.norm(psi)
        if nrm == 0.0:
            raise DegenerateTrialError("descent drove the trial to the zero vector")
        psi = psi / nrm
        if real_only:
            psi = psi.real.astype(np.complex128)
            psi = psi / np.linalg.norm(psi)
        prev_cost = cost
        w = fd @ psi
        cost = cost_scalar(w)
    trace.final_params = psi.copy()
    trace.final_cost = trace.costs[-1]
    return psi, trace


def _descend_circuit(fd, b, trial0, sched, n, rng):
    p_count = PARAM_COUNTS[n]
    if trial0.params is not None:
        theta = np.asarray(trial0.params, dtype=np.float64)
        if theta.shape != (p_count,):
            raise ValueError(f"trial params have shape {theta.shape}, expected ({p_count},)")
        theta = theta.copy()
    else:
        theta = rng.uniform(0.0, 2.0 * np.pi, p_count)
    h = sched.fd_step

    def costs_of(thetas):
        states = prepare_states(n, thetas)
        return _cost_of_images(states @ fd.T, b)

    trace = TrainingTrace()
    prev_cost = None
    cost = float(costs_of(theta[None, :])[0])
    for t in range(sched.max_steps + 1):
        trace.record(t, cost)
        if cost <= sched.cost_tolerance:
            trace.converged = True
            break
        if prev_cost is not None and abs(prev_cost - cost) < COST_CHANGE_TOL:
            break
        if t == sched.max_steps:
            break
        batch = np.tile(theta, (2 * p_count + 1, 1))
        for i in range(p_count):
            batch[1 + 2 * i, i] += h
            batch[2 + 2 * i, i] -= h
        batch_costs = costs_of(batch)
        grad = (batch_costs[1::2] - batch_costs[2::2]) / (2.0 * h)
        theta = theta - sched.eta(t) * grad
        prev_cost = cost
        cost = float(costs_of(theta[None, :])[0])
    trace.final_params = theta
    trace.final_cost = trace.costs[-1]
    psi = prepare_states(n, theta[None, :])[0]
    return psi, trace
