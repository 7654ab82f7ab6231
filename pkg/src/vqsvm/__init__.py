"""Statevector toolkit: Pauli-string matrix expansion, variational state
preparation on universal circuits, a variational linear solver, and a
least-squares SVM trained through it."""

from .circuits import CircuitParams, apply_circuit, entangler, pauli_exponential, u1, u2, u3
from .data import ClusterSpec, generate
from .linsolve import (LinearProblem, LinearSolution, TrialState, forward, solve_exact,
                       solve_variational)
from .pauli import PauliExpansion, PauliString, apply_expansion, apply_pauli, expand, reconstruct
from .statevector import RawVector, StateVector, inner_product, normalize, pad_to_power_of_two
from .svm import Dataset, SvmModel, build_problem, classify, kkt_check, train
from .varprep import GdSchedule, TrainingTrace, fidelity_cost, qfpga_compose, train_state_prep

__all__ = [
    "CircuitParams", "ClusterSpec", "Dataset", "GdSchedule", "LinearProblem",
    "LinearSolution", "PauliExpansion", "PauliString", "RawVector", "StateVector",
    "SvmModel", "TrainingTrace", "TrialState", "apply_circuit", "apply_expansion",
    "apply_pauli", "build_problem", "classify", "entangler", "expand", "fidelity_cost",
    "forward", "generate", "inner_product", "kkt_check", "normalize",
    "pad_to_power_of_two", "pauli_exponential", "qfpga_compose", "reconstruct",
    "solve_exact", "solve_variational", "train", "train_state_prep", "u1", "u2", "u3",
]
__version__ = "0.1.0"
