"""Dense complex vectors and small dense matrices shared by every module.

Basis convention, binding for the whole package: basis index q in [0, 2**n)
is read as the bit string b_1 b_2 ... b_n with b_1 the MOST significant bit,
so for n=3 the index 6 denotes |110>. Qubit 1 therefore lives at bit
position n-1 of the integer index.

All functions here are pure; the value types never mutate their arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Unit-norm check used by StateVector and by callers asserting normalization.
NORM_ATOL = 1e-12


class ZeroNormError(ValueError):
    """Normalization of an exactly zero vector was requested."""


def _as_amplitudes(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"amplitudes must be one-dimensional, got shape {arr.shape}")
    return arr


def _infer_n_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"length {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True, eq=False)
class RawVector:
    """Length 2**n amplitude vector with no norm constraint."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _as_amplitudes(self.amps))
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be a positive integer")
        if len(self.amps) != 1 << self.n_qubits:
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got {len(self.amps)}"
            )

    @classmethod
    def of(cls, values) -> "RawVector":
        """Build from any 1-D sequence whose length is a power of two."""
        arr = _as_amplitudes(values)
        return cls(_infer_n_qubits(len(arr)), arr)

    @property
    def dim(self) -> int:
        return len(self.amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm amplitude vector; construction rejects norms off 1 by > 1e-12."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _as_amplitudes(self.amps))
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be a positive integer")
        if len(self.amps) != 1 << self.n_qubits:
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got {len(self.amps)}"
            )
        nrm = np.linalg.norm(self.amps)
        if abs(nrm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {nrm!r} is not 1 within {NORM_ATOL}")

    @classmethod
    def of(cls, values) -> "StateVector":
        arr = _as_amplitudes(values)
        return cls(_infer_n_qubits(len(arr)), arr)

    @classmethod
    def basis(cls, n_qubits: int, q: int) -> "StateVector":
        """Computational basis state |q> in the MSB-first convention."""
        dim = 1 << n_qubits
        if not 0 <= q < dim:
            raise ValueError(f"basis index {q} out of range for {n_qubits} qubits")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[q] = 1.0
        return cls(n_qubits, amps)

    @property
    def dim(self) -> int:
        return len(self.amps)


StateLike = RawVector | StateVector


def inner_product(a: StateLike, b: StateLike) -> complex:
    """<a|b> = sum_q conj(a_q) * b_q."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amps, b.amps))


def apply_matrix(m: np.ndarray, v: StateLike) -> RawVector:
    """Plain matrix-vector product; the result is not normalized."""
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (v.dim, v.dim):
        raise ValueError(f"matrix shape {m.shape} does not match vector length {v.dim}")
    return RawVector(v.n_qubits, m @ v.amps)


def normalize(v: StateLike) -> tuple[StateVector, float]:
    """Return (v / ||v||, ||v||); a zero vector raises ZeroNormError."""
    nrm = float(np.linalg.norm(v.amps))
    if nrm == 0.0:
        raise ZeroNormError("cannot normalize the zero vector")
    return StateVector(v.n_qubits, v.amps / nrm), nrm


def n_qubits_of(m: np.ndarray) -> int:
    """Qubit count of a square matrix whose dimension is a power of two."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return _infer_n_qubits(m.shape[0])


def pad_to_power_of_two(m: np.ndarray, rhs) -> tuple[np.ndarray, RawVector]:
    """Embed a D x D system into the smallest 2**n >= D qubit register.

    The matrix is extended with an identity block (zeros off-block) so it
    stays invertible whenever the original is, and the right-hand side is
    extended with zeros. The padded system's solution is the original
    solution followed by zeros. At least one qubit is always used, so D=1
    pads up to a 2 x 2 system.
    """
    m = np.asarray(m, dtype=np.complex128)
    rhs = _as_amplitudes(rhs)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    if d != len(rhs):
        raise ValueError(f"matrix dimension {d} does not match rhs length {len(rhs)}")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    n = max(1, (d - 1).bit_length())
    dim = 1 << n
    padded = np.eye(dim, dtype=np.complex128)
    padded[:d, :d] = m
    padded[:d, d:] = 0.0
    padded[d:, :d] = 0.0
    rhs_padded = np.zeros(dim, dtype=np.complex128)
    rhs_padded[:d] = rhs
    return padded, RawVector(n, rhs_padded)


# ---------------------------------------------------------------------------
# Plain-text matrix / vector files: header "N <n_qubits>", then one row per
# line with whitespace-separated complex entries like "0.5-0.25j".
# ---------------------------------------------------------------------------

def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _parse_complex(token: str, path: str, lineno: int) -> complex:
    try:
        return complex(token)
    except ValueError:
        raise ValueError(f"{path}: line {lineno}: cannot parse complex entry {token!r}") from None


def _read_header(lines: list[str], path: str) -> int:
    if not lines:
        raise ValueError(f"{path}: empty file")
    parts = lines[0].split()
    if len(parts) != 2 or parts[0] != "N":
        raise ValueError(f"{path}: line 1: expected header 'N <n_qubits>', got {lines[0]!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise ValueError(f"{path}: line 1: qubit count {parts[1]!r} is not an integer") from None
    if n < 1:
        raise ValueError(f"{path}: line 1: qubit count must be positive, got {n}")
    return n


def write_matrix(m: np.ndarray, path) -> None:
    n = n_qubits_of(m)
    m = np.asarray(m, dtype=np.complex128)
    rows = [f"N {n}"]
    rows.extend(" ".join(format_complex(z) for z in row) for row in m)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def read_matrix(path) -> np.ndarray:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    n = _read_header(lines, path)
    dim = 1 << n
    if len(lines) - 1 != dim:
        raise ValueError(f"{path}: expected {dim} rows for {n} qubits, got {len(lines) - 1}")
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != dim:
            raise ValueError(f"{path}: line {i}: expected {dim} entries, got {len(tokens)}")
        out[i - 2] = [_parse_complex(t, path, i) for t in tokens]
    return out


def write_vector(v: StateLike, path) -> None:
    rows = [f"N {v.n_qubits}"]
    rows.extend(format_complex(z) for z in v.amps)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def read_vector(path) -> RawVector:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    n = _read_header(lines, path)
    dim = 1 << n
    if len(lines) - 1 != dim:
        raise ValueError(f"{path}: expected {dim} entries for {n} qubits, got {len(lines) - 1}")
    amps = np.empty(dim, dtype=np.complex128)
    for i, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != 1:
            raise ValueError(f"{path}: line {i}: expected a single entry, got {len(tokens)}")
        amps[i - 2] = _parse_complex(tokens[0], path, i)
    return RawVector(n, amps)
