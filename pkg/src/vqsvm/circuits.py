"""Parameterized universal circuits for one, two and three qubits.

Building blocks:

    R(theta, phi)  = exp[-i theta (X cos phi + Y sin phi) / 2]
    R_z(phi_z)     = exp[-i Z phi_z / 2]
    u1(t, p, pz)   = R(t, p) R_z(pz)                       (3 angles)
    entangler      = e^{-i pi/4} exp[(i pi/4) Z (x) Z] = diag(1, -i, -i, 1)

The two-qubit circuit interleaves three entangler layers with single-qubit
rotations (15 angles); the three-qubit circuit alternates two-qubit blocks
on qubits (1, 2) tensored with one-qubit blocks on qubit 3 and exponentials
of commuting three-qubit Pauli strings (82 angles). Products apply
right-to-left: the rightmost factor hits the state first.

`unitary` builds the dense matrix of a parameter vector; `prepare_states`
evolves |0...0> for a whole batch of parameter vectors at once without
forming any full unitary, which is what the gradient loops use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import PauliString, to_matrix
from .statevector import StateVector

PARAM_COUNTS = {1: 3, 2: 15, 3: 82}

# Flat layout of the 82 three-qubit angles, factors listed left to right:
# two-qubit block (15), one-qubit block (3), first ZZ-type exponential (3),
# two-qubit (15), one-qubit (3), X-type exponential (4), two-qubit (15),
# one-qubit (3), second ZZ-type exponential (3), two-qubit (15), one-qubit (3).
_U3_SLICES = {
    "a2": slice(0, 15), "a1": slice(15, 18), "exp_a": slice(18, 21),
    "b2": slice(21, 36), "b1": slice(36, 39), "exp_c": slice(39, 43),
    "c2": slice(43, 58), "c1": slice(58, 61), "exp_b": slice(61, 64),
    "d2": slice(64, 79), "d1": slice(79, 82),
}
_ZZ_WORDS = ("XXZ", "YYZ", "ZZZ")
_XX_WORDS = ("XXX", "YYX", "ZZX", "IIX")


@dataclass(frozen=True, eq=False)
class CircuitParams:
    """Angle vector of a universal circuit; length 3, 15 or 82 for n = 1, 2, 3."""

    n_qubits: int
    theta: np.ndarray

    def __post_init__(self):
        if self.n_qubits not in PARAM_COUNTS:
            raise ValueError(f"universal circuits exist for 1-3 qubits, not {self.n_qubits}")
        theta = np.asarray(self.theta, dtype=np.float64)
        object.__setattr__(self, "theta", theta)
        want = PARAM_COUNTS[self.n_qubits]
        if theta.shape != (want,):
            raise ValueError(f"{self.n_qubits}-qubit circuit takes {want} angles, got shape {theta.shape}")

    @classmethod
    def zeros(cls, n_qubits: int) -> "CircuitParams":
        return cls(n_qubits, np.zeros(PARAM_COUNTS[n_qubits]))

    @classmethod
    def random(cls, n_qubits: int, rng: np.random.Generator) -> "CircuitParams":
        return cls(n_qubits, rng.uniform(0.0, 2.0 * np.pi, PARAM_COUNTS[n_qubits]))


def rotation(theta: float, phi: float) -> np.ndarray:
    """R(theta, phi) = exp[-i theta (X cos phi + Y sin phi) / 2]."""
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    return np.array([[c, -1j * np.exp(-1j * phi) * s],
                     [-1j * np.exp(1j * phi) * s, c]], dtype=np.complex128)


def rotation_z(phi_z: float) -> np.ndarray:
    """R_z(phi_z) = diag(e^{-i phi_z/2}, e^{i phi_z/2})."""
    return np.array([[np.exp(-1j * phi_z / 2), 0.0],
                     [0.0, np.exp(1j * phi_z / 2)]], dtype=np.complex128)


def u1(params: Sequence[float]) -> np.ndarray:
    """One-qubit universal circuit R(theta, phi) R_z(phi_z), in closed form."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (3,):
        raise ValueError(f"u1 takes 3 angles, got shape {params.shape}")
    theta, phi, phi_z = params
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    return np.array(
        [[np.exp(-1j * phi_z / 2) * c, -1j * np.exp(1j * (phi_z / 2 - phi)) * s],
         [-1j * np.exp(-1j * (phi_z / 2 - phi)) * s, np.exp(1j * phi_z / 2) * c]],
        dtype=np.complex128)


def entangler() -> np.ndarray:
    """Two-qubit entangling gate diag(1, -i, -i, 1)."""
    return np.diag([1.0, -1j, -1j, 1.0]).astype(np.complex128)


def u2(params: Sequence[float]) -> np.ndarray:
    """Two-qubit universal circuit: three entangler layers between rotations.

    Angle order: (theta_a, phi_a, phi_za), (theta_b, phi_b, phi_zb),
    theta_e, theta_f, theta_g, (theta_c, phi_c, phi_zc), (theta_d, phi_d, phi_zd).
    """
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (15,):
        raise ValueError(f"u2 takes 15 angles, got shape {params.shape}")
    theta_e, theta_f, theta_g = params[6:9]
    ug = entangler()
    m = np.kron(u1(params[0:3]), u1(params[3:6])) @ ug
    m = m @ np.kron(rotation(theta_e, 0.0), rotation(1.5 * np.pi, 0.0)) @ ug
    m = m @ np.kron(rotation(theta_f, 0.5 * np.pi), rotation(1.5 * np.pi, theta_g)) @ ug
    return m @ np.kron(u1(params[9:12]), u1(params[12:15]))


def _commute(a: PauliString, b: PauliString) -> bool:
    clashes = sum(1 for x, y in zip(a.word, b.word) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 0


def pauli_exponential(terms: Sequence[tuple[PauliString, float]],
                      n_qubits: int | None = None) -> np.ndarray:
    """exp[i sum_k theta_k P_k] for mutually commuting strings.

    Each string squares to the identity, so the exponential factorizes
    exactly into products of cos(theta) I + i sin(theta) P. Non-commuting
    terms are rejected.
    """
    if not terms:
        if n_qubits is None:
            raise ValueError("empty term list needs an explicit n_qubits")
        return np.eye(1 << n_qubits, dtype=np.complex128)
    n = terms[0][0].n_qubits
    if n_qubits is not None and n_qubits != n:
        raise ValueError(f"terms act on {n} qubits, n_qubits says {n_qubits}")
    for p, _ in terms:
        if p.n_qubits != n:
            raise ValueError("all strings must act on the same number of qubits")
    for i, (a, _) in enumerate(terms):
        for b, _ in terms[i + 1:]:
            if not _commute(a, b):
                raise ValueError(f"strings {a.word!r} and {b.word!r} do not commute")
    dim = 1 << n
    out = np.eye(dim, dtype=np.complex128)
    for p, theta in terms:
        out = (np.cos(theta) * out + 1j * np.sin(theta) * (to_matrix(p) @ out))
    return out


def u3(params: Sequence[float]) -> np.ndarray:
    """Three-qubit universal circuit: four (two-qubit x one-qubit) block layers
    separated by three commuting-Pauli exponentials; 82 angles total."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (82,):
        raise ValueError(f"u3 takes 82 angles, got shape {params.shape}")
    s = _U3_SLICES
    exp_a = pauli_exponential([(PauliString.from_word(w), t)
                               for w, t in zip(_ZZ_WORDS, params[s["exp_a"]])])
    exp_c = pauli_exponential([(PauliString.from_word(w), t)
                               for w, t in zip(_XX_WORDS, params[s["exp_c"]])])
    exp_b = pauli_exponential([(PauliString.from_word(w), t)
                               for w, t in zip(_ZZ_WORDS, params[s["exp_b"]])])
    m = np.kron(u2(params[s["a2"]]), u1(params[s["a1"]])) @ exp_a
    m = m @ np.kron(u2(params[s["b2"]]), u1(params[s["b1"]])) @ exp_c
    m = m @ np.kron(u2(params[s["c2"]]), u1(params[s["c1"]])) @ exp_b
    return m @ np.kron(u2(params[s["d2"]]), u1(params[s["d1"]]))


def unitary(c: CircuitParams) -> np.ndarray:
    """Dense matrix of the parameter vector."""
    build = {1: u1, 2: u2, 3: u3}[c.n_qubits]
    return build(c.theta)


def apply_circuit(c: CircuitParams, v: StateVector) -> StateVector:
    """U(theta) |v>; the norm is preserved."""
    if c.n_qubits != v.n_qubits:
        raise ValueError(f"qubit counts differ: circuit {c.n_qubits} vs state {v.n_qubits}")
    return StateVector(v.n_qubits, unitary(c) @ v.amps)


# ---------------------------------------------------------------------------
# Batched |0...0> evolution. Gradient loops evaluate the circuit at a few
# hundred nearby parameter vectors per step; doing them in one sweep of
# vectorized gate applications is what keeps training fast. Every row of
# prepare_states(n, thetas) equals unitary(CircuitParams(n, row)) @ |0...0>.
# ---------------------------------------------------------------------------

def _u1_batch(p: np.ndarray) -> np.ndarray:
    """(B, 3) angles -> (B, 2, 2) one-qubit circuit matrices."""
    theta, phi, phi_z = p[:, 0], p[:, 1], p[:, 2]
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    g = np.empty((len(p), 2, 2), dtype=np.complex128)
    g[:, 0, 0] = np.exp(-1j * phi_z / 2) * c
    g[:, 0, 1] = -1j * np.exp(1j * (phi_z / 2 - phi)) * s
    g[:, 1, 0] = -1j * np.exp(-1j * (phi_z / 2 - phi)) * s
    g[:, 1, 1] = np.exp(1j * phi_z / 2) * c
    return g


def _rotation_batch(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    g = np.empty((len(theta), 2, 2), dtype=np.complex128)
    g[:, 0, 0] = c
    g[:, 0, 1] = -1j * np.exp(-1j * phi) * s
    g[:, 1, 0] = -1j * np.exp(1j * phi) * s
    g[:, 1, 1] = c
    return g


def _apply_1q(states: np.ndarray, gates: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Per-row 2x2 gate on one qubit of a (B, 2**n) batch."""
    b = states.shape[0]
    left = 1 << (qubit - 1)
    right = 1 << (n - qubit)
    st = states.reshape(b, left, 2, right)
    return np.einsum("bxy,bayr->baxr", gates, st).reshape(b, 1 << n)


def _entangler_diag(qa: int, qb: int, n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    bits_a = (idx >> (n - qa)) & 1
    bits_b = (idx >> (n - qb)) & 1
    return np.where(bits_a == bits_b, 1.0, -1j).astype(np.complex128)


def _apply_u2_block(states: np.ndarray, p: np.ndarray, qa: int, qb: int, n: int) -> np.ndarray:
    """Two-qubit universal block on qubits (qa, qb); p has shape (B, 15)."""
    b = states.shape[0]
    ug = _entangler_diag(qa, qb, n)
    three_half_pi = np.full(b, 1.5 * np.pi)
    states = _apply_1q(states, _u1_batch(p[:, 9:12]), qa, n)
    states = _apply_1q(states, _u1_batch(p[:, 12:15]), qb, n)
    states = states * ug
    states = _apply_1q(states, _rotation_batch(p[:, 7], np.full(b, 0.5 * np.pi)), qa, n)
    states = _apply_1q(states, _rotation_batch(three_half_pi, p[:, 8]), qb, n)
    states = states * ug
    states = _apply_1q(states, _rotation_batch(p[:, 6], np.zeros(b)), qa, n)
    states = _apply_1q(states, _rotation_batch(three_half_pi, np.zeros(b)), qb, n)
    states = states * ug
    states = _apply_1q(states, _u1_batch(p[:, 0:3]), qa, n)
    return _apply_1q(states, _u1_batch(p[:, 3:6]), qb, n)


def _apply_exponential(states: np.ndarray, words: tuple[str, ...], thetas: np.ndarray) -> np.ndarray:
    """exp[i sum theta_k P_k] on a batch; thetas has shape (B, len(words))."""
    dim = states.shape[1]
    src = np.arange(dim)
    for k, word in enumerate(words):
        from .pauli import _phases  # private on purpose; shared bit kernels
        flip, phases = _phases(PauliString.from_word(word))
        flipped = (phases * states)[:, src ^ flip]
        t = thetas[:, k][:, None]
        states = np.cos(t) * states + 1j * np.sin(t) * flipped
    return states


def prepare_states(n_qubits: int, thetas: np.ndarray) -> np.ndarray:
    """Evolve |0...0> under every parameter row; returns (B, 2**n) amplitudes."""
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.ndim != 2 or thetas.shape[1] != PARAM_COUNTS.get(n_qubits, -1):
        raise ValueError(
            f"expected shape (B, {PARAM_COUNTS.get(n_qubits)}) for {n_qubits} qubits, "
            f"got {thetas.shape}")
    b = thetas.shape[0]
    if n_qubits == 1:
        g = _u1_batch(thetas)
        return g[:, :, 0].copy()
    states = np.zeros((b, 1 << n_qubits), dtype=np.complex128)
    states[:, 0] = 1.0
    if n_qubits == 2:
        return _apply_u2_block(states, thetas, 1, 2, 2)
    s = _U3_SLICES
    states = _apply_u2_block(states, thetas[:, s["d2"]], 1, 2, 3)
    states = _apply_1q(states, _u1_batch(thetas[:, s["d1"]]), 3, 3)
    states = _apply_exponential(states, _ZZ_WORDS, thetas[:, s["exp_b"]])
    states = _apply_u2_block(states, thetas[:, s["c2"]], 1, 2, 3)
    states = _apply_1q(states, _u1_batch(thetas[:, s["c1"]]), 3, 3)
    states = _apply_exponential(states, _XX_WORDS, thetas[:, s["exp_c"]])
    states = _apply_u2_block(states, thetas[:, s["b2"]], 1, 2, 3)
    states = _apply_1q(states, _u1_batch(thetas[:, s["b1"]]), 3, 3)
    states = _apply_exponential(states, _ZZ_WORDS, thetas[:, s["exp_a"]])
    states = _apply_u2_block(states, thetas[:, s["a2"]], 1, 2, 3)
    return _apply_1q(states, _u1_batch(thetas[:, s["a1"]]), 3, 3)


# ---------------------------------------------------------------------------
# Parameter files: header "N <n_qubits>", then one angle per line in the
# fixed layout order.
# ---------------------------------------------------------------------------

def write_params(c: CircuitParams, path) -> None:
    rows = [f"N {c.n_qubits}"]
    rows.extend(f"{t:.17g}" for t in c.theta)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def read_params(path) -> CircuitParams:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "N":
        raise ValueError(f"{path}: line 1: expected header 'N <n_qubits>', got {lines[0]!r}")
    n = int(header[1])
    try:
        theta = np.array([float(t) for t in lines[1:]], dtype=np.float64)
    except ValueError:
        raise ValueError(f"{path}: malformed angle value") from None
    return CircuitParams(n, theta)
