"""Soft-margin least-squares SVM over the linear kernel.

Training solves the bordered (M+1) x (M+1) system

    [ 0   1 ... 1 ] [omega0]   [ 0 ]
    [ 1             ] [alpha1]   [y_1]
    [ :   K + I/g   ] [  :   ] = [ : ]
    [ 1             ] [alphaM]   [y_M]

with K_ij = x_i . x_j, either by dense elimination or by the variational
solver after padding to a power-of-two register. The hyperplane is
omega = sum_j alpha_j x_j with bias omega0, and classification is the sign
of omega . x + omega0 (exact zero counts as +1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linsolve import (LinearProblem, LinearSolution, TrialState, solve_exact,
                       solve_variational)
from .pauli import expand
from .statevector import pad_to_power_of_two
from .varprep import GdSchedule


@dataclass(frozen=True, eq=False)
class Dataset:
    """M points in R^D with labels in {+1, -1}."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if points.ndim != 2:
            raise ValueError(f"points must be a 2-D array, got shape {points.shape}")
        if labels.shape != (points.shape[0],):
            raise ValueError(f"{points.shape[0]} points but {labels.shape} labels")
        if points.shape[0] < 1:
            raise ValueError("dataset needs at least one point")
        if not np.all(np.isin(labels, (-1, 1))):
            raise ValueError("labels must be +1 or -1")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "labels", labels)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def n_features(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True, eq=False)
class SvmProblem:
    """Kernel matrix and the bordered system it induces."""

    kernel: np.ndarray
    gamma: float
    f: np.ndarray
    rhs: np.ndarray


@dataclass(frozen=True, eq=False)
class SvmModel:
    """Trained hyperplane: bias, point weights, and normal."""

    omega0: float
    alpha: np.ndarray
    omega: np.ndarray

    def to_dict(self, gamma: float) -> dict:
        return {
            "omega0": float(self.omega0),
            "alpha": [float(a) for a in self.alpha],
            "omega": [float(w) for w in self.omega],
            "gamma": float(gamma),
            "n_points": len(self.alpha),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SvmModel":
        return cls(float(d["omega0"]), np.asarray(d["alpha"], dtype=np.float64),
                   np.asarray(d["omega"], dtype=np.float64))


@dataclass(frozen=True)
class KktReport:
    """Stationarity residuals of the trained model.

    omega_residual:   ||omega - sum_j beta_j y_j x_j|| with beta_j = alpha_j y_j
    alpha_sum:        |sum_j alpha_j|
    slack_residual:   max_j |xi_j - beta_j / gamma| with xi_j recovered as beta_j / gamma
    margin_residual:  max_j |(omega . x_j + omega0) y_j - (1 - xi_j)|
    """

    omega_residual: float
    alpha_sum: float
    slack_residual: float
    margin_residual: float

    def max_residual(self) -> float:
        return max(self.omega_residual, self.alpha_sum, self.slack_residual,
                   self.margin_residual)


def build_problem(d: Dataset, gamma: float) -> SvmProblem:
    """Kernel K_ij = x_i . x_j and the bordered system with ridge I/gamma."""
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    k = d.points @ d.points.T
    m = d.n_points
    f = np.zeros((m + 1, m + 1), dtype=np.float64)
    f[0, 1:] = 1.0
    f[1:, 0] = 1.0
    f[1:, 1:] = k + np.eye(m) / gamma
    rhs = np.concatenate(([0.0], d.labels.astype(np.float64)))
    return SvmProblem(kernel=k, gamma=gamma, f=f, rhs=rhs)


def _unpack(d: Dataset, x: np.ndarray) -> SvmModel:
    omega0 = float(x[0].real)
    alpha = np.asarray(x[1:d.n_points + 1].real, dtype=np.float64)
    omega = alpha @ d.points
    return SvmModel(omega0=omega0, alpha=alpha, omega=omega)


def train(d: Dataset, gamma: float, method: str = "exact",
          sched: GdSchedule | None = None, seed: int = 0,
          trial: TrialState | None = None) -> tuple[SvmModel, LinearSolution]:
    """Solve the bordered system and unpack the hyperplane.

    method="exact" eliminates the (M+1)-dimensional system directly;
    method="variational" pads it to the next power of two, expands the
    padded matrix over Pauli strings, and descends with the given schedule
    (real direct-mode trial by default). Padded components of the solution
    are discarded.
    """
    problem = build_problem(d, gamma)
    if method == "exact":
        solution = solve_exact(problem.f, problem.rhs)
        return _unpack(d, solution.x), solution
    if method != "variational":
        raise ValueError(f"unknown method {method!r}")
    if sched is None:
        sched = GdSchedule(xi1=0.001, xi2=0.0005, max_steps=100_000, cost_tolerance=1e-12)
    f_padded, rhs_padded = pad_to_power_of_two(problem.f, problem.rhs)
    lp = LinearProblem(expand(f_padded), rhs_padded)
    solution = solve_variational(lp, trial if trial is not None else TrialState.direct_mode(),
                                 sched, seed)
    return _unpack(d, solution.x), solution


def classify(m: SvmModel, x) -> int:
    """Sign of omega . x + omega0; an exact zero counts as +1."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != m.omega.shape:
        raise ValueError(f"input shape {x.shape} does not match feature count {m.omega.shape}")
    return 1 if float(m.omega @ x + m.omega0) >= 0.0 else -1


def accuracy(m: SvmModel, d: Dataset) -> float:
    """Fraction of points whose classification matches their label."""
    scores = d.points @ m.omega + m.omega0
    predicted = np.where(scores >= 0.0, 1, -1)
    return float(np.mean(predicted == d.labels))


def kkt_check(d: Dataset, gamma: float, m: SvmModel) -> KktReport:
    """Stationarity residuals; all four vanish at the exact solution."""
    if len(m.alpha) != d.n_points:
        raise ValueError(f"model has {len(m.alpha)} weights for {d.n_points} points")
    y = d.labels.astype(np.float64)
    beta = m.alpha * y
    omega_res = float(np.linalg.norm(m.omega - (beta * y) @ d.points))
    alpha_sum = float(abs(np.sum(beta * y)))
    xi = beta / gamma
    slack_res = float(np.max(np.abs(xi - beta / gamma), initial=0.0))
    margins = (d.points @ m.omega + m.omega0) * y
    margin_res = float(np.max(np.abs(margins - (1.0 - xi)), initial=0.0))
    return KktReport(omega_residual=omega_res, alpha_sum=alpha_sum,
                     slack_residual=slack_res, margin_residual=margin_res)


def hyperplane_line_2d(m: SvmModel, x_range: tuple[float, float]) -> tuple[tuple[float, float], tuple[float, float]]:
    """Endpoints of omega . x + omega0 = 0 over a 2-D window.

    For a near-vertical hyperplane the window bounds are reused as the
    vertical extent.
    """
    if m.omega.shape != (2,):
        raise ValueError("hyperplane endpoints are only defined for 2-D models")
    wx, wy = float(m.omega[0]), float(m.omega[1])
    if wx == 0.0 and wy == 0.0:
        raise ValueError("zero normal has no hyperplane")
    lo, hi = float(x_range[0]), float(x_range[1])
    if abs(wy) >= abs(wx):
        return ((lo, -(m.omega0 + wx * lo) / wy), (hi, -(m.omega0 + wx * hi) / wy))
    # Steep or vertical: parameterize by the second coordinate instead.
    return ((-(m.omega0 + wy * lo) / wx, lo), (-(m.omega0 + wy * hi) / wx, hi))


def normal_angle_degrees(a: SvmModel, b: SvmModel) -> float:
    """Unsigned angle between two hyperplane normals, in [0, 90] degrees."""
    na, nb = np.linalg.norm(a.omega), np.linalg.norm(b.omega)
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero normal has no direction")
    cosang = abs(float(a.omega @ b.omega)) / (na * nb)
    return float(np.degrees(np.arccos(min(1.0, cosang))))
