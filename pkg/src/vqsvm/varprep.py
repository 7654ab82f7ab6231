"""Variational state preparation: train circuit angles so U(theta)|0...0>
matches a target state, and compose two trainings into a unitary mapping one
prescribed state to another.

The objective is the fidelity cost 1 - |<candidate|target>|^2, zero exactly
when the states agree up to a global phase. Training is plain steepest
descent with the exponentially decaying rate eta_t = xi1 * exp(-xi2 * t) and
central finite-difference gradients over the angles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import PARAM_COUNTS, CircuitParams, prepare_states, unitary
from .statevector import StateVector

COST_CHANGE_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """A variational run that must converge did not; carries the achieved costs."""

    def __init__(self, message: str, costs: tuple[float, ...] = ()):
        super().__init__(message)
        self.costs = costs


@dataclass(frozen=True)
class GdSchedule:
    """Steepest-descent schedule: eta_t = xi1 * exp(-xi2 * t)."""

    xi1: float = 0.005
    xi2: float = 0.005
    max_steps: int = 50_000
    cost_tolerance: float = 1e-9
    fd_step: float = 1e-5

    def __post_init__(self):
        if self.xi1 < 0.0:
            raise ValueError("xi1 must be nonnegative")
        if self.xi2 < 0.0:
            raise ValueError("xi2 must be nonnegative")
        if self.max_steps < 0:
            raise ValueError("max_steps must be nonnegative")
        if self.cost_tolerance < 0.0:
            raise ValueError("cost_tolerance must be nonnegative")
        if self.fd_step <= 0.0:
            raise ValueError("fd_step must be positive")

    def eta(self, t: int) -> float:
        return self.xi1 * np.exp(-self.xi2 * t)


@dataclass
class TrainingTrace:
    """Per-step cost record of one descent run."""

    steps: list[int] = field(default_factory=list)
    costs: list[float] = field(default_factory=list)
    final_params: np.ndarray | None = None
    final_cost: float = np.nan
    converged: bool = False

    def record(self, t: int, cost: float) -> None:
        self.steps.append(t)
        self.costs.append(cost)


def fidelity_cost(candidate: StateVector, target: StateVector) -> float:
    """1 - |<candidate|target>|^2, in [0, 1]; 0 iff equal up to global phase."""
    if candidate.n_qubits != target.n_qubits:
        raise ValueError(f"qubit counts differ: {candidate.n_qubits} vs {target.n_qubits}")
    overlap = np.vdot(candidate.amps, target.amps)
    return max(0.0, 1.0 - abs(overlap) ** 2)


def _fd_batch(theta: np.ndarray, h: float) -> np.ndarray:
    """Rows [theta, theta + h e_0, theta - h e_0, theta + h e_1, ...]."""
    p = len(theta)
    batch = np.tile(theta, (2 * p + 1, 1))
    for i in range(p):
        batch[1 + 2 * i, i] += h
        batch[2 + 2 * i, i] -= h
    return batch


def train_state_prep(target: StateVector, init: CircuitParams | None,
                     sched: GdSchedule, seed: int = 0) -> tuple[CircuitParams, TrainingTrace]:
    """Minimize the fidelity cost of U(theta)|0...0> against the target.

    `init` of None draws the starting angles uniformly from [0, 2*pi) with
    the given seed. Descent stops when the cost reaches
    sched.cost_tolerance, when the step-over-step cost change drops below
    1e-12, or after sched.max_steps updates; non-convergence is reported on
    the trace, never raised.
    """
    n = target.n_qubits
    if n not in PARAM_COUNTS:
        raise ValueError(f"state preparation circuits exist for 1-3 qubits, not {n}")
    if init is not None and init.n_qubits != n:
        raise ValueError(f"initial params are for {init.n_qubits} qubits, target has {n}")
    rng = np.random.default_rng(seed)
    theta = init.theta.copy() if init is not None else rng.uniform(0.0, 2.0 * np.pi, PARAM_COUNTS[n])
    tconj = target.amps  # overlap row below conjugates the candidate side

    def costs_of(thetas: np.ndarray) -> np.ndarray:
        states = prepare_states(n, thetas)
        overlaps = np.conj(states) @ tconj
        return np.maximum(0.0, 1.0 - np.abs(overlaps) ** 2)

    trace = TrainingTrace()
    h = sched.fd_step
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
        batch_costs = costs_of(_fd_batch(theta, h))
        grad = (batch_costs[1::2] - batch_costs[2::2]) / (2.0 * h)
        theta = theta - sched.eta(t) * grad
        prev_cost = cost
        cost = float(costs_of(theta[None, :])[0])
    trace.final_params = theta
    trace.final_cost = trace.costs[-1]
    return CircuitParams(n, theta), trace


def qfpga_compose(psi_initial: StateVector, psi_final: StateVector,
                  sched: GdSchedule, seed: int = 0) -> np.ndarray:
    """Unitary mapping psi_initial to psi_final, built from two trainings.

    Trains U_ini on psi_initial and U_fin on psi_final, then returns
    U_fin @ U_ini^dagger, which carries U_ini|0...0> = psi_initial onto
    U_fin|0...0> = psi_final. The product is unitary regardless of how far
    either training got; if either run misses its cost tolerance a
    ConvergenceError carrying both achieved costs is raised.
    """
    if psi_initial.n_qubits != psi_final.n_qubits:
        raise ValueError(
            f"qubit counts differ: {psi_initial.n_qubits} vs {psi_final.n_qubits}")
    params_ini, trace_ini = train_state_prep(psi_initial, None, sched, seed)
    params_fin, trace_fin = train_state_prep(psi_final, None, sched, seed + 1)
    if not (trace_ini.converged and trace_fin.converged):
        raise ConvergenceError(
            "state preparations finished at costs "
            f"{trace_ini.final_cost:.3e} and {trace_fin.final_cost:.3e} "
            f"(tolerance {sched.cost_tolerance:.1e})",
            costs=(trace_ini.final_cost, trace_fin.final_cost))
    return unitary(params_fin) @ unitary(params_ini).conj().T


def trace_csv_text(trace: TrainingTrace) -> str:
    rows = ["step,cost"]
    rows.extend(f"{t},{c:.17g}" for t, c in zip(trace.steps, trace.costs))
    return "\n".join(rows) + "\n"


def write_trace_csv(trace: TrainingTrace, path) -> None:
    """Cost trace as 'step,cost' CSV, one row per descent step."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(trace_csv_text(trace))
