"""Synthetic two-cluster datasets and dataset CSV files.

Red points are drawn around (r cos T, r sin T) with T uniform from its own
seed; blue points mirror the center. Per-axis spread defaults to sqrt(r)
(variance r); a config switch selects spread r instead.

Randomness comes from splitmix64, a fixed 64-bit generator, with normals
produced by the Box-Muller transform, so a (theta_seed, point_seed) pair
yields bit-identical datasets on any platform or runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .svm import Dataset

_MASK64 = (1 << 64) - 1
SIGMA_MODES = ("variance", "stddev")


class DatasetFormatError(ValueError):
    """A dataset file failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


def _splitmix64(seed: int):
    """Endless stream of 64-bit words from one seed."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def _uniforms(seed: int):
    """Doubles in (0, 1]: the top 53 bits of each word, shifted off zero."""
    for z in _splitmix64(seed):
        yield ((z >> 11) + 1) * (2.0**-53)


def _normal_pairs(seed: int):
    """Box-Muller: two uniforms in, one standard-normal pair out."""
    uniforms = _uniforms(seed)
    while True:
        u1 = next(uniforms)
        u2 = next(uniforms)
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        yield radius * math.cos(angle), radius * math.sin(angle)


@dataclass(frozen=True)
class ClusterSpec:
    """Two mirrored Gaussian clusters at radius r from the origin."""

    r: float
    theta_seed: int
    point_seed: int
    n_red: int
    n_blue: int
    sigma_mode: str = "variance"

    def __post_init__(self):
        if self.r <= 0.0:
            raise ValueError("cluster radius r must be positive")
        if self.n_red < 1 or self.n_blue < 1:
            raise ValueError("both clusters need at least one point")
        if self.sigma_mode not in SIGMA_MODES:
            raise ValueError(f"sigma_mode must be one of {SIGMA_MODES}, got {self.sigma_mode!r}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.r) if self.sigma_mode == "variance" else self.r


def generate(spec: ClusterSpec) -> Dataset:
    """Deterministic dataset: red (+1) first, then blue (-1)."""
    theta = 2.0 * math.pi * next(_uniforms(spec.theta_seed))
    center = np.array([spec.r * math.cos(theta), spec.r * math.sin(theta)])
    normals = _normal_pairs(spec.point_seed)
    sigma = spec.sigma
    points = np.empty((spec.n_red + spec.n_blue, 2), dtype=np.float64)
    for i in range(spec.n_red):
        dx, dy = next(normals)
        points[i] = center + sigma * np.array([dx, dy])
    for i in range(spec.n_blue):
        dx, dy = next(normals)
        points[spec.n_red + i] = -center + sigma * np.array([dx, dy])
    labels = np.array([1] * spec.n_red + [-1] * spec.n_blue, dtype=np.int64)
    return Dataset(points=points, labels=labels)


# ---------------------------------------------------------------------------
# Dataset CSV: header "x1,...,xD,label", then one row per point with the
# label in {+1,-1} last. Floats are printed with 17 significant digits so a
# write/read round trip is exact.
# ---------------------------------------------------------------------------

def write_csv(d: Dataset, path) -> None:
    header = ",".join(f"x{i + 1}" for i in range(d.n_features)) + ",label"
    rows = [header]
    for point, label in zip(d.points, d.labels):
        rows.append(",".join(f"{v:.17g}" for v in point) + f",{int(label)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def read_csv(path) -> Dataset:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    rows = [(i + 1, ln) for i, ln in enumerate(lines) if ln]
    if not rows:
        raise DatasetFormatError(f"{path}: empty file", line=1)
    header_no, header = rows[0]
    names = header.split(",")
    if len(names) < 2 or names[-1] != "label" or names[:-1] != [f"x{i + 1}" for i in range(len(names) - 1)]:
        raise DatasetFormatError(
            f"{path}: line {header_no}: expected header 'x1,...,xD,label', got {header!r}",
            line=header_no)
    dims = len(names) - 1
    points = []
    labels = []
    for lineno, row in rows[1:]:
        fields = row.split(",")
        if len(fields) != dims + 1:
            raise DatasetFormatError(
                f"{path}: line {lineno}: expected {dims + 1} fields, got {len(fields)}",
                line=lineno)
        try:
            coords = [float(v) for v in fields[:-1]]
            label = float(fields[-1])
        except ValueError:
            raise DatasetFormatError(
                f"{path}: line {lineno}: malformed numeric field", line=lineno) from None
        if label not in (1.0, -1.0):
            raise DatasetFormatError(
                f"{path}: line {lineno}: label must be +1 or -1, got {fields[-1]!r}",
                line=lineno)
        points.append(coords)
        labels.append(int(label))
    if not points:
        raise DatasetFormatError(f"{path}: no data rows", line=header_no)
    return Dataset(points=np.array(points), labels=np.array(labels))
