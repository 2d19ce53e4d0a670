"""Uniform frequency grids, sampled functions, interpolation and quadrature.

Everything else in the package exchanges data as :class:`SampledFunction`
objects living on a :class:`FrequencyGrid`.  Both are immutable; the value
arrays are flagged read-only so they can be shared between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .exceptions import (
    CoverageError,
    GridMismatchError,
    InvalidRangeError,
    NonFiniteValueError,
    UnsortedPointsError,
)

__all__ = [
    "FrequencyGrid",
    "SampledFunction",
    "MeasurementPoint",
    "make_uniform_grid",
    "linear_interpolate",
    "integrate",
    "integrated_squared_difference",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform discretisation of ``[omega_min, omega_max]`` with both ends included."""

    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.omega_min) and np.isfinite(self.omega_max)):
            raise InvalidRangeError("grid bounds must be finite")
        if not self.omega_min < self.omega_max:
            raise InvalidRangeError(
                f"omega_min={self.omega_min} must be < omega_max={self.omega_max}"
            )
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise InvalidRangeError(f"n_points must be an integer >= 2, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        # multiply rather than accumulate, then pin the right end exactly
        nodes = self.omega_min + np.arange(self.n_points) * self.spacing
        nodes[-1] = self.omega_max
        nodes.setflags(write=False)
        return nodes

    def __len__(self):
        return self.n_points

    def contains(self, other: "FrequencyGrid") -> bool:
        return self.omega_min <= other.omega_min and other.omega_max <= self.omega_max


def make_uniform_grid(omega_min: float, omega_max: float, n_points: int) -> FrequencyGrid:
    """Build a :class:`FrequencyGrid`; raises :class:`InvalidRangeError` on bad input."""
    return FrequencyGrid(float(omega_min), float(omega_max), n_points)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Real values on the nodes of a grid.

    Calling the object evaluates its piecewise-linear extension; outside the
    grid the edge values are held constant.
    """

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 1 or values.shape[0] != self.grid.n_points:
            raise GridMismatchError(
                f"expected {self.grid.n_points} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteValueError("sampled values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, func, grid: FrequencyGrid) -> "SampledFunction":
        return cls(grid, func(grid.nodes))

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def __call__(self, omega):
        return np.interp(omega, self.grid.nodes, self.values)

    def __eq__(self, other):
        if not isinstance(other, SampledFunction):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.grid, self.values.tobytes()))


@dataclass(frozen=True)
class MeasurementPoint:
    """One noisy transmission estimate at a sampled frequency.

    ``variance`` is the sampling variance used to draw ``value`` (before any
    clamping); ``clamped`` records whether the draw had to be pulled back into
    the physical range.
    """

    omega: float
    value: float
    variance: float
    clamped: bool = False

    def __post_init__(self):
        if not self.variance >= 0:
            raise InvalidRangeError(f"variance must be >= 0, got {self.variance}")


PointLike = Union[MeasurementPoint, Sequence[float]]


def _as_xy(points: Iterable[PointLike]):
    xs, ys = [], []
    for p in points:
        if isinstance(p, MeasurementPoint):
            xs.append(p.omega)
            ys.append(p.value)
        else:
            x, y = p
            xs.append(x)
            ys.append(y)
    return np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)


def linear_interpolate(points, grid: FrequencyGrid, *, atol: float = 1e-12) -> SampledFunction:
    """Piecewise-linear interpolation of ``points`` onto ``grid``.

    Parameters
    ----------
    points : sequence of ``(omega, value)`` pairs or :class:`MeasurementPoint`
        Abscissae must be strictly increasing, and the first and last must sit
        on the grid ends (within ``atol`` relative to the interval width) so
        that no extrapolation ever happens.
    grid : FrequencyGrid

    Returns
    -------
    SampledFunction
    """
    if isinstance(points, tuple) and len(points) == 2 and np.ndim(points[0]) == 1:
        xs = np.asarray(points[0], dtype=float)
        ys = np.asarray(points[1], dtype=float)
    else:
        xs, ys = _as_xy(points)
    if xs.size < 2:
        raise CoverageError("need at least two points to interpolate")
    if np.any(np.diff(xs) <= 0):
        raise UnsortedPointsError("point abscissae must be strictly increasing")
    tol = atol * (grid.omega_max - grid.omega_min)
    if xs[0] > grid.omega_min + tol or xs[-1] < grid.omega_max - tol:
        raise CoverageError(
            f"points span [{xs[0]}, {xs[-1]}], grid needs "
            f"[{grid.omega_min}, {grid.omega_max}]"
        )
    return SampledFunction(grid, np.interp(grid.nodes, xs, ys))


def integrate(f: SampledFunction) -> float:
    """Rectangle-rule sum ``sum(values) * spacing`` over every node."""
    return float(np.sum(f.values) * f.grid.spacing)


def integrated_squared_difference(a: SampledFunction, b: SampledFunction) -> float:
    if a.grid != b.grid:
        raise GridMismatchError("functions live on different grids")
    diff = a.values - b.values
    return float(np.sum(diff * diff) * a.grid.spacing)
