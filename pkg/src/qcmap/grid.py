"""Uniform complex grids, sampled fields, and the Fourier multiplier engine.

Every operator in this package acts on a :class:`Field`: complex samples on a
square periodic grid.  The grid covers ``center +/- half_width`` in both axes
with ``n`` samples per axis (endpoint excluded), so all convolutions computed
through the DFT are cyclic.  Accuracy policy: keep the support of input fields
inside the central quarter of the box (``half_width >= 2 * support radius``)
and trust pointwise values only on the central half.

Conventions, fixed once so results are bit-comparable:

* forward DFT unnormalized, inverse divided by ``n**2`` (numpy default);
* integer frequency lattice ``xi in [-n/2, n/2)^2``, complex frequency
  ``xi1 + 1j*xi2``, with xi1 along the x axis (array axis 1) and xi2 along
  the y axis (array axis 0);
* physical frequency is ``xi / (2 * half_width)`` cycles per unit length.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

__all__ = [
    "GridSpec",
    "Field",
    "FrequencyMultiplier",
    "make_grid",
    "sample",
    "apply_multiplier",
    "l2_norm",
    "dz",
    "dzbar",
    "bilinear",
    "write_field",
    "read_field",
]


@dataclass(frozen=True)
class GridSpec:
    """Square uniform grid: box ``center +/- half_width``, ``n`` samples per axis."""

    center: complex
    half_width: float
    n: int

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    def axis(self) -> np.ndarray:
        """1-D node offsets from the center, identical for both axes."""
        return -self.half_width + self.spacing * np.arange(self.n)

    def nodes(self) -> np.ndarray:
        """Complex node coordinates, shape (n, n); rows follow y, columns x."""
        t = self.axis()
        x, y = np.meshgrid(t, t, indexing="xy")
        return self.center + x + 1j * y

    def frequencies(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer frequency lattice (xi1, xi2) in fft order, shape (n, n)."""
        f = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return np.meshgrid(f, f, indexing="xy")

    def cell_area(self) -> float:
        return self.spacing**2


@dataclass(frozen=True)
class Field:
    """Complex samples on a :class:`GridSpec`, row-major by grid index."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} != grid ({self.grid.n}, {self.grid.n})")
        if not np.all(np.isfinite(v.view(float))):
            raise ValueError("field contains non-finite samples")
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)


@dataclass(frozen=True)
class FrequencyMultiplier:
    """Diagonal Fourier multiplier on the integer frequency lattice.

    ``rule(xi1, xi2)`` receives integer arrays and must return complex values;
    the value at the zero frequency is taken from ``zero_frequency`` instead
    (rules like ``conj(xi)/xi`` are undefined there).
    """

    rule: Callable[[np.ndarray, np.ndarray], np.ndarray]
    zero_frequency: complex = 0.0

    def table(self, grid: GridSpec) -> np.ndarray:
        xi1, xi2 = grid.frequencies()
        with np.errstate(divide="ignore", invalid="ignore"):
            m = np.asarray(self.rule(xi1, xi2), dtype=complex)
        m = np.broadcast_to(m, xi1.shape).copy()
        m[0, 0] = self.zero_frequency
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("multiplier is not finite on the grid's frequency range")
        return m


def make_grid(center: complex, half_width: float, n: int) -> GridSpec:
    """Build a grid; ``n`` must be a power of two >= 16, ``half_width`` > 0."""
    n = int(n)
    if n < 16 or (n & (n - 1)) != 0:
        raise ValueError(f"n must be a power of two >= 16, got {n}")
    if not (half_width > 0):
        raise ValueError(f"half_width must be positive, got {half_width}")
    return GridSpec(complex(center), float(half_width), n)


def sample(f, grid: GridSpec) -> Field:
    """Sample a pointwise complex function on every node of the grid."""
    z = grid.nodes()
    try:
        v = np.asarray(f(z), dtype=complex)
        if v.shape != z.shape:
            v = np.broadcast_to(v, z.shape).copy()
    except Exception:
        v = np.vectorize(lambda w: complex(f(w)))(z)
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError("sample: non-finite sample encountered")
    return Field(grid, v)


def l2_norm(field: Field) -> float:
    """Area-weighted discrete L2 norm."""
    return float(np.sqrt(np.sum(np.abs(field.values) ** 2) * field.grid.cell_area()))


def apply_multiplier(field: Field, m: FrequencyMultiplier, pad: int = 1) -> Field:
    """inverse-DFT( m(xi) * DFT(field) ).

    ``pad > 1`` embeds the field in a ``pad``-times larger box before applying
    the multiplier and crops afterwards, which suppresses wrap-around images
    for compactly supported inputs.  Only meaningful for rules that are
    homogeneous of degree zero (the integer lattice of the padded box maps to
    the same physical directions).
    """
    if pad == 1:
        table = m.table(field.grid)
        out = np.fft.ifft2(np.fft.fft2(field.values) * table)
        return Field(field.grid, out)
    if pad < 1:
        raise ValueError("pad must be >= 1")
    # Diagonal multipliers commute with translations, so the block can sit
    # anywhere in the padded box; crop the same block afterwards.
    n = field.grid.n
    big_grid = GridSpec(field.grid.center, field.grid.half_width * pad, n * pad)
    big = np.zeros((n * pad, n * pad), dtype=complex)
    big[:n, :n] = field.values
    out = apply_multiplier(Field(big_grid, big), m).values[:n, :n]
    return Field(field.grid, out)


def _deriv_multiplier(grid: GridSpec, conjugate: bool) -> np.ndarray:
    xi1, xi2 = grid.frequencies()
    xi = (xi1 + 1j * xi2) / (2.0 * grid.half_width)
    return 1j * np.pi * (np.conj(xi) if conjugate else xi)


def dz(field: Field) -> Field:
    """Spectral Wirtinger derivative d/dz (multiplier ``i*pi*conj(xi_phys)``)."""
    out = np.fft.ifft2(np.fft.fft2(field.values) * _deriv_multiplier(field.grid, True))
    return Field(field.grid, out)


def dzbar(field: Field) -> Field:
    """Spectral Wirtinger derivative d/dzbar (multiplier ``i*pi*xi_phys``)."""
    out = np.fft.ifft2(np.fft.fft2(field.values) * _deriv_multiplier(field.grid, False))
    return Field(field.grid, out)


def bilinear(field: Field, z) -> np.ndarray:
    """Bilinear interpolation of the field at complex points (clamped to the box)."""
    g = field.grid
    z = np.asarray(z, dtype=complex)
    fx = (z.real - (g.center.real - g.half_width)) / g.spacing
    fy = (z.imag - (g.center.imag - g.half_width)) / g.spacing
    fx = np.clip(fx, 0.0, g.n - 1.000001)
    fy = np.clip(fy, 0.0, g.n - 1.000001)
    ix = np.floor(fx).astype(int)
    iy = np.floor(fy).astype(int)
    tx = fx - ix
    ty = fy - iy
    v = field.values
    out = (
        v[iy, ix] * (1 - tx) * (1 - ty)
        + v[iy, ix + 1] * tx * (1 - ty)
        + v[iy + 1, ix] * (1 - tx) * ty
        + v[iy + 1, ix + 1] * tx * ty
    )
    return out


def write_field(field: Field, stem) -> None:
    """Write ``<stem>.json`` (grid header) and ``<stem>.csv`` ((re, im) rows)."""
    stem = Path(stem)
    header = {
        "center": [field.grid.center.real, field.grid.center.imag],
        "half_width": field.grid.half_width,
        "n": field.grid.n,
    }
    stem.with_suffix(".json").write_text(json.dumps(header, sort_keys=True))
    flat = field.values.ravel()
    np.savetxt(
        stem.with_suffix(".csv"),
        np.column_stack([flat.real, flat.imag]),
        fmt="%.17g",
        delimiter=",",
    )


def read_field(stem) -> Field:
    stem = Path(stem)
    header = json.loads(stem.with_suffix(".json").read_text())
    grid = GridSpec(complex(*header["center"]), float(header["half_width"]), int(header["n"]))
    raw = np.loadtxt(stem.with_suffix(".csv"), delimiter=",")
    values = (raw[:, 0] + 1j * raw[:, 1]).reshape(grid.n, grid.n)
    return Field(grid, values)
