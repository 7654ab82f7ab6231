"""Pauli strings, their O(2**n) application, and matrix expansion over them.

A Pauli string is an n-fold tensor product over {I, X, Y, Z}; factor 1 acts
on qubit 1, the most significant bit of the basis index. Acting with a
string on a basis state flips the bits under X and Y and multiplies by a
phase (-1 per set bit under Z and Y, i per Y factor), which is what the
fast application below exploits: the dense 2**n x 2**n matrix is never
materialized.

The 4**n strings are orthogonal under the trace inner product,
Tr[P_j P_k] = 2**n delta_jk, so any square matrix m expands as
m = sum_j c_j P_j with c_j = Tr[P_j m] / 2**n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import RawVector, StateLike, StateVector, normalize

LETTERS = "IXYZ"

# Expansion terms at or below this magnitude are dropped; sits well under
# every tolerance asserted elsewhere in the package.
ZERO_COEFF_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class PauliString:
    """Word over {I,X,Y,Z} plus its base-4 index (I=0, X=1, Y=2, Z=3).

    The first letter is the most significant base-4 digit, matching the
    MSB-first basis convention.
    """

    n_qubits: int
    word: str
    index: int

    def __post_init__(self):
        if len(self.word) != self.n_qubits:
            raise ValueError(f"word {self.word!r} has length {len(self.word)}, expected {self.n_qubits}")
        if any(ch not in LETTERS for ch in self.word):
            raise ValueError(f"word {self.word!r} contains letters outside I, X, Y, Z")
        if self.index != _encode(self.word):
            raise ValueError(f"index {self.index} does not encode word {self.word!r}")

    @classmethod
    def from_word(cls, word: str) -> "PauliString":
        return cls(len(word), word, _encode(word))

    @classmethod
    def from_index(cls, n_qubits: int, index: int) -> "PauliString":
        if not 0 <= index < 4**n_qubits:
            raise ValueError(f"index {index} out of range for {n_qubits} qubits")
        digits = []
        rest = index
        for _ in range(n_qubits):
            digits.append(LETTERS[rest % 4])
            rest //= 4
        return cls(n_qubits, "".join(reversed(digits)), index)

    def __str__(self) -> str:
        return self.word


def _encode(word: str) -> int:
    idx = 0
    for ch in word:
        idx = idx * 4 + LETTERS.index(ch)
    return idx


def _masks(p: PauliString) -> tuple[int, int, int]:
    """(x-flip mask, y|z phase mask, number of Y factors) for a string."""
    flip = 0
    phase_mask = 0
    n_y = 0
    n = p.n_qubits
    for k, ch in enumerate(p.word):
        bit = 1 << (n - 1 - k)
        if ch in "XY":
            flip |= bit
        if ch in "YZ":
            phase_mask |= bit
        if ch == "Y":
            n_y += 1
    return flip, phase_mask, n_y


def _phases(p: PauliString) -> tuple[int, np.ndarray]:
    """(flip mask, per-source-index phase vector) so that P|q> = phase[q] |q^flip>."""
    flip, phase_mask, n_y = _masks(p)
    dim = 1 << p.n_qubits
    idx = np.arange(dim)
    parity = np.bitwise_count(idx & phase_mask) & 1
    phases = np.where(parity, -1.0, 1.0) * (1j**n_y)
    return flip, phases.astype(np.complex128)


def apply_pauli(p: PauliString, v: StateLike) -> StateLike:
    """Apply the string to a vector in O(2**n) via bit flips and sign flips.

    Returns the same vector type it was given (an isometry, so unit norm
    survives).
    """
    if p.n_qubits != v.n_qubits:
        raise ValueError(f"qubit counts differ: string {p.n_qubits} vs vector {v.n_qubits}")
    flip, phases = _phases(p)
    out = (phases * v.amps)[np.arange(v.dim) ^ flip]
    return type(v)(v.n_qubits, out)


def to_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of a single string."""
    flip, phases = _phases(p)
    dim = 1 << p.n_qubits
    m = np.zeros((dim, dim), dtype=np.complex128)
    src = np.arange(dim)
    m[src ^ flip, src] = phases
    return m


@dataclass(frozen=True, eq=False)
class PauliExpansion:
    """Sparse sum c_j P_j; zero coefficients are never stored."""

    n_qubits: int
    terms: tuple[tuple[PauliString, complex], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((p, complex(c)) for p, c in self.terms))
        seen = set()
        for p, _ in self.terms:
            if p.n_qubits != self.n_qubits:
                raise ValueError(f"term {p.word!r} has {p.n_qubits} qubits, expected {self.n_qubits}")
            if p.index in seen:
                raise ValueError(f"duplicate term {p.word!r}")
            seen.add(p.index)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, word: str) -> complex:
        for p, c in self.terms:
            if p.word == word:
                return c
        return 0j


@dataclass(frozen=True)
class NotMask:
    """Product of X gates flipping exactly the set bits of `target`.

    Applied to |0...0> it produces |target>; applied to |p> it produces
    |p XOR target|.
    """

    n_qubits: int
    target: int

    def __post_init__(self):
        if not 0 <= self.target < (1 << self.n_qubits):
            raise ValueError(f"target {self.target} out of range for {self.n_qubits} qubits")

    def apply(self, v: StateLike) -> StateLike:
        if v.n_qubits != self.n_qubits:
            raise ValueError(f"qubit counts differ: mask {self.n_qubits} vs vector {v.n_qubits}")
        return type(v)(v.n_qubits, v.amps[np.arange(v.dim) ^ self.target])

    def to_pauli_string(self) -> PauliString:
        n = self.n_qubits
        word = "".join("X" if self.target >> (n - 1 - k) & 1 else "I" for k in range(n))
        return PauliString.from_word(word)


def expand(m: np.ndarray) -> PauliExpansion:
    """Coefficients c_j = Tr[P_j m] / 2**n over all 4**n strings.

    Terms with |c_j| <= ZERO_COEFF_TOL are dropped; the kept terms
    reconstruct m exactly to working precision.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"matrix dimension {dim} is not a power of two >= 2")
    src = np.arange(dim)
    terms = []
    for j in range(4**n):
        p = PauliString.from_index(n, j)
        flip, phases = _phases(p)
        # Tr[P m] = sum_q phase(q) * m[q, q ^ flip]
        c = complex(np.dot(phases, m[src, src ^ flip])) / dim
        if abs(c) > ZERO_COEFF_TOL:
            terms.append((p, c))
    return PauliExpansion(n, tuple(terms))


def reconstruct(e: PauliExpansion) -> np.ndarray:
    """Dense sum of the expansion's terms."""
    dim = 1 << e.n_qubits
    m = np.zeros((dim, dim), dtype=np.complex128)
    src = np.arange(dim)
    for p, c in e.terms:
        flip, phases = _phases(p)
        m[src ^ flip, src] += c * phases
    return m


def apply_expansion(e: PauliExpansion, v: StateLike) -> RawVector:
    """sum_j c_j P_j |v>, term by term, without a dense matrix."""
    if e.n_qubits != v.n_qubits:
        raise ValueError(f"qubit counts differ: expansion {e.n_qubits} vs vector {v.n_qubits}")
    src = np.arange(v.dim)
    out = np.zeros(v.dim, dtype=np.complex128)
    for p, c in e.terms:
        flip, phases = _phases(p)
        out += c * (phases * v.amps)[src ^ flip]
    return RawVector(v.n_qubits, out)


def coefficient_via_circuit(m: np.ndarray, j: PauliString, backend: str = "exact",
                            sched=None, seed: int = 0) -> complex:
    """Single expansion coefficient evaluated column by column, circuit style.

    For each nonzero column f_q of m, the normalized column is prepared as a
    state, the string is applied, the NOT mask for q maps the readout back
    to amplitude 0, and the contributions ||f_q|| <0|...> are summed and
    divided by 2**n. With backend="exact" the column state is injected
    directly; with backend="variational" it is produced by a trained
    universal circuit (n <= 3 only), and a preparation that cannot reach
    cost 1e-6 raises ConvergenceError.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (1 << j.n_qubits,) * 2:
        raise ValueError(f"matrix shape {m.shape} does not match string on {j.n_qubits} qubits")
    if backend not in ("exact", "variational"):
        raise ValueError(f"unknown backend {backend!r}")
    n = j.n_qubits
    if backend == "variational" and n > 3:
        raise ValueError("variational column preparation is only available for up to 3 qubits")
    dim = 1 << n
    total = 0j
    for q in range(dim):
        column = RawVector(n, m[:, q])
        nrm = column.norm()
        if nrm == 0.0:
            continue
        fhat, _ = normalize(column)
        if backend == "variational":
            fhat = _prepare_column(fhat, sched, seed + q)
        bra = NotMask(n, q).apply(apply_pauli(j, fhat))
        total += nrm * bra.amps[0]
    return total / dim


def _prepare_column(target: StateVector, sched, seed: int) -> StateVector:
    """Train a universal circuit on the column; align its global phase to the target."""
    from .circuits import prepare_states  # deferred: circuits imports this module
    from .varprep import ConvergenceError, GdSchedule, train_state_prep

    if sched is None:
        # Long-lived schedule; column preparation must land well below 1e-6.
        sched = GdSchedule(xi1=0.05, xi2=2e-4, max_steps=30_000, cost_tolerance=1e-10)
    params, trace = train_state_prep(target, None, sched, seed)
    if trace.final_cost >= 1e-6:
        raise ConvergenceError(f"column preparation stalled at cost {trace.final_cost:.3e}",
                               costs=(trace.final_cost,))
    state = prepare_states(target.n_qubits, params.theta[None, :])[0]
    overlap = complex(np.vdot(state, target.amps))
    # The fidelity cost is blind to a global phase; rotate it away before
    # the amplitude is used additively.
    state = state * (overlap / abs(overlap))
    return StateVector(target.n_qubits, state)


# ---------------------------------------------------------------------------
# Expansion files: header "N <n_qubits>", then "<word> <re> <im>" per term.
# ---------------------------------------------------------------------------

def write_expansion(e: PauliExpansion, path) -> None:
    rows = [f"N {e.n_qubits}"]
    rows.extend(f"{p.word} {c.real:.17g} {c.imag:.17g}" for p, c in e.terms)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def read_expansion(path) -> PauliExpansion:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "N":
        raise ValueError(f"{path}: line 1: expected header 'N <n_qubits>', got {lines[0]!r}")
    n = int(header[1])
    terms = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{path}: line {i}: expected '<word> <re> <im>', got {line!r}")
        word, re_s, im_s = parts
        try:
            c = complex(float(re_s), float(im_s))
        except ValueError:
            raise ValueError(f"{path}: line {i}: cannot parse coefficient {re_s!r} {im_s!r}") from None
        try:
            p = PauliString.from_word(word)
        except ValueError as exc:
            raise ValueError(f"{path}: line {i}: {exc}") from None
        if p.n_qubits != n:
            raise ValueError(f"{path}: line {i}: word {word!r} does not match header qubit count {n}")
        terms.append((p, c))
    return PauliExpansion(n, tuple(terms))
