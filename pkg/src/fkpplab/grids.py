"""Uniform grids, scalar fields, interpolation and the shared tridiagonal solve.

Three geometry modes are supported:

* ``line``   -- one Cartesian axis, u = u(x)
* ``radial`` -- r in [0, R], radially symmetric in dimension N >= 2, so the
  Laplacian is u_rr + (N-1)/r u_r
* ``plane``  -- two Cartesian axes, values stored row-major as (n0, n1)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConfigurationError, DomainError, NumericalError

_MODES = ("line", "radial", "plane")


@dataclass(frozen=True)
class Grid:
    """Uniform grid over closed per-axis intervals with common spacing dx."""

    mode: str
    extents: tuple  # ((lo, hi),) or ((lo, hi), (lo, hi))
    dx: float
    dim: int = 1  # spatial dimension N of the Laplacian (radial mode only)

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ConfigurationError(f"unknown geometry mode {self.mode!r}")
        if not self.dx > 0:
            raise ConfigurationError("dx must be positive")
        naxes = 2 if self.mode == "plane" else 1
        if len(self.extents) != naxes:
            raise ConfigurationError(
                f"{self.mode} mode needs {naxes} extent(s), got {len(self.extents)}"
            )
        for lo, hi in self.extents:
            if not hi > lo:
                raise ConfigurationError("empty extent")
            n = round((hi - lo) / self.dx) + 1
            if abs((hi - lo) - (n - 1) * self.dx) > 1e-9 * (hi - lo):
                raise ConfigurationError("extent is not a multiple of dx")
            if n < 3:
                raise ConfigurationError("need at least 3 points per axis")
        if self.mode == "radial":
            if self.extents[0][0] != 0.0:
                raise ConfigurationError("radial extent must start at r = 0")
            if self.dim < 2:
                raise ConfigurationError("radial mode needs dimension N >= 2")

    @property
    def shape(self):
        return tuple(
            round((hi - lo) / self.dx) + 1 for lo, hi in self.extents
        )

    def axis(self, i=0):
        """Coordinates along axis i."""
        lo, hi = self.extents[i]
        return np.linspace(lo, hi, self.shape[i])

    def points(self):
        """Coordinates of all grid points; shape (n,) in 1D, (n0, n1, 2) in plane mode."""
        if self.mode == "plane":
            x0, x1 = self.axis(0), self.axis(1)
            return np.stack(np.meshgrid(x0, x1, indexing="ij"), axis=-1)
        return self.axis(0)


@dataclass
class Field:
    """Scalar values sampled on a Grid (row-major in plane mode)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ConfigurationError(
                f"values shape {self.values.shape} != grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ConfigurationError("field values must be finite")

    def copy(self):
        return Field(self.grid, self.values.copy())


def interpolate(fld: Field, x):
    """Piecewise-linear (bilinear in plane mode) interpolation at point x.

    Exact at grid points.  Raises DomainError for x outside the extents.
    """
    g = fld.grid
    if g.mode == "plane":
        x = np.asarray(x, dtype=float)
        idx = []
        wts = []
        for ax in range(2):
            lo, hi = g.extents[ax]
            xi = float(x[ax])
            if xi < lo - 1e-12 or xi > hi + 1e-12:
                raise DomainError(f"point {xi} outside extent [{lo}, {hi}]")
            t = np.clip((xi - lo) / g.dx, 0.0, g.shape[ax] - 1)
            i = min(int(t), g.shape[ax] - 2)
            idx.append(i)
            wts.append(t - i)
        (i, j), (s, t) = idx, wts
        v = fld.values
        return (
            (1 - s) * (1 - t) * v[i, j]
            + s * (1 - t) * v[i + 1, j]
            + (1 - s) * t * v[i, j + 1]
            + s * t * v[i + 1, j + 1]
        )
    lo, hi = g.extents[0]
    xi = float(x)
    if xi < lo - 1e-12 or xi > hi + 1e-12:
        raise DomainError(f"point {xi} outside extent [{lo}, {hi}]")
    t = np.clip((xi - lo) / g.dx, 0.0, g.shape[0] - 1)
    i = min(int(t), g.shape[0] - 2)
    s = t - i
    return (1 - s) * fld.values[i] + s * fld.values[i + 1]


def solve_tridiagonal(lower, diag, upper, rhs):
    """Solve T y = rhs for a diagonally dominant tridiagonal T.

    ``lower`` (length n-1) is the sub-diagonal, ``diag`` (length n) the main
    diagonal, ``upper`` (length n-1) the super-diagonal.  ``rhs`` may be a
    vector of length n or an (n, m) block of right-hand sides.

    The system must be diagonally dominant (weak dominance everywhere with
    strict dominance in at least one row is accepted, which covers the
    classic Neumann-Laplacian rows); otherwise NumericalError is raised.
    The solution is verified to relative residual <= 1e-12.
    """
    lower = np.asarray(lower, dtype=float)
    diag = np.asarray(diag, dtype=float)
    upper = np.asarray(upper, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = diag.size
    if lower.size != n - 1 or upper.size != n - 1:
        raise ConfigurationError("off-diagonals must have length n-1")

    offsum = np.zeros(n)
    offsum[:-1] += np.abs(upper)
    offsum[1:] += np.abs(lower)
    dominance = np.abs(diag) - offsum
    if np.any(dominance < -1e-14 * np.abs(diag)) or not np.any(dominance > 0):
        raise NumericalError("tridiagonal system is not diagonally dominant")

    ab = np.zeros((3, n))
    ab[0, 1:] = upper
    ab[1, :] = diag
    ab[2, :-1] = lower
    y = solve_banded((1, 1), ab, rhs)

    resid = diag.reshape(-1, *([1] * (rhs.ndim - 1))) * y
    resid[:-1] += upper.reshape(-1, *([1] * (rhs.ndim - 1))) * y[1:]
    resid[1:] += lower.reshape(-1, *([1] * (rhs.ndim - 1))) * y[:-1]
    resid -= rhs
    scale = max(float(np.max(np.abs(rhs))), float(np.max(np.abs(y))), 1e-300)
    if float(np.max(np.abs(resid))) > 1e-12 * scale:
        raise NumericalError("tridiagonal solve residual exceeds 1e-12")
    return y
