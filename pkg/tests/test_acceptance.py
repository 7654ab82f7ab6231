"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
complete. Criterion 5 pins the slow-decay schedule constants 0.005/0.005
for the state generator; that integrated learning budget is too small for
randomly initialized angle descent (see notes in the repository's review
ledger), so the criterion is exercised faithfully and reported honestly.
"""

import time

import numpy as np
import pytest
from oracles import random_matrix, random_state

from vqsvm.circuits import PARAM_COUNTS, entangler, u1, u2, u3
from vqsvm.data import ClusterSpec, generate
from vqsvm.linsolve import LinearProblem, TrialState, solve_exact, solve_variational
from vqsvm.pauli import PauliString, coefficient_via_circuit, expand, reconstruct, to_matrix
from vqsvm.statevector import RawVector, StateVector, normalize
from vqsvm.svm import Dataset, accuracy, kkt_check, normal_angle_degrees, train
from vqsvm.varprep import GdSchedule, fidelity_cost, qfpga_compose, train_state_prep

FREE_SCHEDULE = GdSchedule(xi1=0.05, xi2=0.0005, max_steps=20_000, cost_tolerance=1e-6)


def report(number: int, name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number:02d} {name}: {'PASS' if ok else 'FAIL'} ({detail})")


def desk_clusters(seed: int, m: int = 7, radius: float = 0.6, sigma: float = 0.12) -> Dataset:
    """Small, well separated clusters whose bordered system stays well
    conditioned next to the unit ridge."""
    rng = np.random.default_rng(1000 + seed)
    ang = rng.uniform(0.0, 2.0 * np.pi)
    center = radius * np.array([np.cos(ang), np.sin(ang)])
    n_red = (m + 1) // 2
    red = center + sigma * rng.normal(size=(n_red, 2))
    blue = -center + sigma * rng.normal(size=(m - n_red, 2))
    return Dataset(points=np.vstack([red, blue]),
                   labels=np.array([1] * n_red + [-1] * (m - n_red)))


def spread_clusters(seed: int, m: int = 7) -> Dataset:
    """Wider clusters pushed apart along the center line; always separable."""
    spec = ClusterSpec(r=3.0, theta_seed=seed, point_seed=seed + 1000,
                       n_red=(m + 1) // 2, n_blue=m // 2)
    d = generate(spec)
    direction = d.points[d.labels == 1].mean(axis=0) - d.points[d.labels == -1].mean(axis=0)
    direction /= np.linalg.norm(direction)
    return Dataset(points=d.points + d.labels[:, None] * direction * 4.0, labels=d.labels)


def test_c01_expansion_round_trip():
    start = time.time()
    rng = np.random.default_rng(101)
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(100):
            m = random_matrix(1 << n, rng)
            worst = max(worst, np.abs(reconstruct(expand(m)) - m).max())
    elapsed = time.time() - start
    ok = worst < 1e-12 and elapsed < 5.0
    report(1, "expansion round trip", ok, f"max error {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_c02_pauli_orthogonality():
    worst = 0.0
    for n in (1, 2):
        mats = [to_matrix(PauliString.from_index(n, j)) for j in range(4**n)]
        for j, a in enumerate(mats):
            for k, b in enumerate(mats):
                want = float(1 << n) if j == k else 0.0
                worst = max(worst, abs(np.trace(a @ b) - want))
    ok = worst < 1e-12
    report(2, "pauli orthogonality", ok, f"max deviation {worst:.2e}")
    assert ok


def test_c03_circuit_coefficient_evaluation():
    rng = np.random.default_rng(103)
    worst = 0.0
    for n in (1, 2):
        for _ in range(20):
            m = random_matrix(1 << n, rng)
            e = expand(m)
            for j in range(4**n):
                p = PauliString.from_index(n, j)
                worst = max(worst, abs(coefficient_via_circuit(m, p) - e.coefficient(p.word)))
    ok = worst < 1e-10
    report(3, "column-circuit coefficients", ok, f"max discrepancy {worst:.2e}")
    assert ok


def test_c04_universal_circuit_properties():
    rng = np.random.default_rng(104)
    builders = {1: u1, 2: u2, 3: u3}
    worst = 0.0
    rejects = True
    for n, build in builders.items():
        count = PARAM_COUNTS[n]
        for bad in (count - 1, count + 1):
            try:
                build(np.zeros(bad))
                rejects = False
            except ValueError:
                pass
        for _ in range(100):
            m = build(rng.uniform(0.0, 2.0 * np.pi, count))
            worst = max(worst, np.abs(m.conj().T @ m - np.eye(1 << n)).max())
    ug_err = np.abs(entangler() - np.diag([1.0, -1j, -1j, 1.0])).max()
    ok = rejects and worst < 1e-12 and ug_err < 1e-12
    report(4, "universal circuits", ok,
           f"unitarity {worst:.2e}, entangler {ug_err:.2e}, counts {PARAM_COUNTS}")
    assert ok


def test_c05_state_generator_with_pinned_constants():
    # Constants fixed to the slow-decay pair 0.005/0.005; eta integrates to
    # a unit budget, which stalls random-start angle descent (analysis in
    # the review ledger). The criterion runs faithfully regardless.
    start = time.time()
    sched = GdSchedule(xi1=0.005, xi2=0.005, max_steps=50_000, cost_tolerance=1e-3)
    reached: dict[int, int] = {}
    bounded = True
    for n in (2, 3):
        hits = 0
        for seed in range(10):
            rng = np.random.default_rng(500 + 10 * n + seed)
            target = random_state(n, rng)
            _, trace = train_state_prep(target, None, sched, seed)
            bounded = bounded and all(0.0 <= c <= 1.0 for c in trace.costs)
            hits += trace.final_cost < 1e-3
        reached[n] = hits
    elapsed = time.time() - start
    ok = reached[2] >= 8 and reached[3] >= 7 and bounded and elapsed < 600.0
    report(5, "state generator at 0.005/0.005", ok,
           f"n=2: {reached[2]}/10, n=3: {reached[3]}/10, traces in [0,1]: {bounded}, "
           f"{elapsed:.0f}s")
    assert ok, (
        "unreachable with the pinned constants: eta_t = 0.005*exp(-0.005 t) integrates "
        "to ~1, an order of magnitude below what random-start angle descent needs "
        "(0.005/0.0005 converges; see the review ledger for the full analysis)")


def test_c06_exact_classifier_oracle():
    two_point = Dataset(points=[[1.0, 0.0], [-1.0, 0.0]], labels=[1, -1])
    model, _ = train(two_point, 1.0, "exact")
    worked = (abs(model.omega0) < 1e-12
              and np.abs(model.alpha - np.array([1 / 3, -1 / 3])).max() < 1e-12)
    worst_kkt = 0.0
    worst_alpha_sum = 0.0
    separable = True
    for seed in range(20):
        d = spread_clusters(seed)
        m, _ = train(d, 1e3, "exact")
        separable = separable and accuracy(m, d) == 1.0
        worst_kkt = max(worst_kkt, kkt_check(d, 1e3, m).max_residual())
        worst_alpha_sum = max(worst_alpha_sum, abs(m.alpha.sum()))
    ok = worked and worst_kkt < 1e-8 and worst_alpha_sum < 1e-9 and separable
    report(6, "exact classifier", ok,
           f"two-point exact, kkt {worst_kkt:.2e}, sum(alpha) {worst_alpha_sum:.2e}, "
           f"separable {separable}")
    assert ok


def test_c07_variational_classifier_desk_scale():
    start = time.time()
    sched = GdSchedule(xi1=0.001, xi2=0.0005, max_steps=100_000, cost_tolerance=1e-12)
    hits = 0
    angles = []
    for seed in range(10):
        d = desk_clusters(seed)
        exact, _ = train(d, 1.0, "exact")
        assert accuracy(exact, d) == 1.0, "desk clusters must be separable"
        variational, _ = train(d, 1.0, "variational", sched=sched, seed=seed)
        angle = normal_angle_degrees(exact, variational)
        angles.append(angle)
        hits += (accuracy(variational, d) == accuracy(exact, d)) and angle < 5.0
    elapsed = time.time() - start
    ok = hits >= 8 and elapsed < 120.0
    report(7, "variational classifier, 7 points", ok,
           f"{hits}/10 within 5 deg (max {max(angles):.2f}), {elapsed:.0f}s")
    assert ok


def test_c08_full_scale_classifier_comparison():
    start = time.time()
    spec = ClusterSpec(r=2.0, theta_seed=41, point_seed=541, n_red=31, n_blue=32)
    d = generate(spec)
    sched = GdSchedule(xi1=0.001, xi2=0.0005, max_steps=100_000, cost_tolerance=1e-12)
    exact, _ = train(d, 1.0, "exact")
    variational, solution = train(d, 1.0, "variational", sched=sched, seed=1)
    angle = normal_angle_degrees(exact, variational)
    acc_gap = abs(accuracy(exact, d) - accuracy(variational, d))
    costs = solution.trace.costs
    decile = max(1, len(costs) // 10)
    decreasing = (costs[-1] < costs[0]
                  and costs[-1] < 0.6 * costs[0]
                  and np.mean(costs[-decile:]) <= np.mean(costs[:decile]))
    elapsed = time.time() - start
    ok = angle < 5.0 and acc_gap <= 0.05 and decreasing and elapsed < 900.0
    report(8, "63-point classifier comparison", ok,
           f"angle {angle:.3f} deg, accuracy gap {acc_gap:.4f}, "
           f"cost {costs[0]:.3f}->{costs[-1]:.3f}, {elapsed:.0f}s")
    assert ok


def test_c09_state_to_state_composition():
    worst_fid = 1.0
    worst_unit = 0.0
    for seed in range(10):
        rng = np.random.default_rng(900 + seed)
        initial, final = random_state(2, rng), random_state(2, rng)
        u = qfpga_compose(initial, final, FREE_SCHEDULE, seed=seed)
        fid = abs(np.vdot(final.amps, u @ initial.amps)) ** 2
        worst_fid = min(worst_fid, fid)
        worst_unit = max(worst_unit, np.abs(u.conj().T @ u - np.eye(4)).max())
    ok = worst_fid > 0.995 and worst_unit < 1e-12
    report(9, "state-to-state composition", ok,
           f"min fidelity {worst_fid:.6f}, unitarity {worst_unit:.2e}")
    assert ok


def test_c10_linear_solver_consistency():
    rng = np.random.default_rng(110)
    worst_exact = 0.0
    worst_cost = 0.0
    hits = 0
    for seed in range(10):
        m = random_matrix(4, rng) + 3.0 * np.eye(4)
        y = rng.normal(size=4) + 1j * rng.normal(size=4)
        exact = solve_exact(m, RawVector.of(y))
        worst_exact = max(worst_exact, exact.residual)
        problem = LinearProblem(expand(m), RawVector.of(y))
        direction, _ = normalize(RawVector.of(exact.x))
        image = problem_image(problem, direction)
        target, _ = normalize(problem.rhs)
        worst_cost = max(worst_cost, fidelity_cost(image, target))
        solution = solve_variational(problem, TrialState.direct_mode(real_only=False),
                                     FREE_SCHEDULE, seed=seed)
        hits += solution.residual < 1e-2
    ok = worst_exact < 1e-9 and worst_cost < 1e-12 and hits >= 8
    report(10, "linear solver consistency", ok,
           f"exact residual {worst_exact:.2e}, cost at solution {worst_cost:.2e}, "
           f"variational {hits}/10")
    assert ok


def problem_image(problem: LinearProblem, direction: StateVector) -> StateVector:
    from vqsvm.linsolve import forward

    image, _ = forward(problem, direction)
    return image
