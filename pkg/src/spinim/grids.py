"""Conformal charts, finite-difference stencils, and convergence-order estimates.

Grid fields are ndarrays with leading axes (ny, nx): ``f[j, i]`` is the sample
at (x0 + i·hx, y0 + j·hy). Derivatives are second order: centered in the
interior, one-sided three-point stencils at the boundary (np.gradient with
edge_order=2). Trailing axes (quaternion or Clifford coefficients) ride along.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_GRID = 5  # smallest size with full second-order stencils everywhere


@dataclass(frozen=True)
class Chart:
    """Rectangular conformal chart z = x + iy."""

    nx: int
    ny: int
    hx: float
    hy: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < MIN_GRID or self.ny < MIN_GRID:
            raise ValueError(f"chart sizes must be >= {MIN_GRID}")
        if self.hx <= 0 or self.hy <= 0:
            raise ValueError("spacings must be positive")

    @staticmethod
    def square(n: int, half_width: float = 1.0, center=(0.0, 0.0)) -> "Chart":
        """(n x n) chart covering [cx-w, cx+w] x [cy-w, cy+w]."""
        h = 2.0 * half_width / (n - 1)
        return Chart(nx=n, ny=n, hx=h, hy=h,
                     x0=center[0] - half_width, y0=center[1] - half_width)

    @staticmethod
    def rect(x_range, y_range, nx: int, ny: int) -> "Chart":
        return Chart(nx=nx, ny=ny,
                     hx=(x_range[1] - x_range[0]) / (nx - 1),
                     hy=(y_range[1] - y_range[0]) / (ny - 1),
                     x0=x_range[0], y0=y_range[0])

    @property
    def xs(self) -> np.ndarray:
        return self.x0 + self.hx * np.arange(self.nx)

    @property
    def ys(self) -> np.ndarray:
        return self.y0 + self.hy * np.arange(self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs, self.ys)  # X[j,i], Y[j,i]

    def sample(self, f) -> np.ndarray:
        x, y = self.mesh()
        return np.asarray(f(x, y))

    def refined(self, factor: int = 2) -> "Chart":
        """Same rectangle with (n-1)·factor + 1 points per side."""
        return Chart(nx=(self.nx - 1) * factor + 1, ny=(self.ny - 1) * factor + 1,
                     hx=self.hx / factor, hy=self.hy / factor, x0=self.x0, y0=self.y0)


def d_dx(f: np.ndarray, chart: Chart) -> np.ndarray:
    return np.gradient(f, chart.hx, axis=1, edge_order=2)


def d_dy(f: np.ndarray, chart: Chart) -> np.ndarray:
    return np.gradient(f, chart.hy, axis=0, edge_order=2)


def d_dz(f: np.ndarray, chart: Chart) -> np.ndarray:
    """Wirtinger derivative: (d/dx - i d/dy)/2."""
    return 0.5 * (d_dx(f, chart) - 1j * d_dy(f, chart))


def d_dzbar(f: np.ndarray, chart: Chart) -> np.ndarray:
    """Conjugate Wirtinger derivative: (d/dx + i d/dy)/2."""
    return 0.5 * (d_dx(f, chart) + 1j * d_dy(f, chart))


def coeff_max(f: np.ndarray, axes: int = 1) -> float:
    """Max over the grid of the max-abs over the trailing coefficient axes."""
    a = np.abs(np.asarray(f))
    for _ in range(axes):
        a = a.max(axis=-1)
    return float(a.max())


def interior(f: np.ndarray, margin: int = 1) -> np.ndarray:
    """Strip boundary rows/columns, keeping trailing axes."""
    return f[margin:-margin, margin:-margin]


EXACT_FLOOR = 1e-12


def convergence_order(res_coarse: float, res_fine: float, ratio: float = 2.0) -> float:
    """Richardson estimate log_ratio(coarse/fine); inf when both are at rounding
    (closed-form data with polynomial dependence makes the stencils exact)."""
    if res_fine < EXACT_FLOOR and res_coarse < EXACT_FLOOR:
        return float("inf")
    if res_fine <= 0:
        return float("inf")
    return float(np.log(res_coarse / res_fine) / np.log(ratio))


def bilinear_sampler(chart: Chart, f: np.ndarray):
    """Bilinear interpolator for a node field; used to freeze RK substep coefficients."""
    f = np.asarray(f)

    def sample(x: float, y: float) -> np.ndarray:
        u = (x - chart.x0) / chart.hx
        v = (y - chart.y0) / chart.hy
        i = int(np.clip(np.floor(u), 0, chart.nx - 2))
        j = int(np.clip(np.floor(v), 0, chart.ny - 2))
        a = u - i
        b = v - j
        return ((1 - a) * (1 - b) * f[j, i] + a * (1 - b) * f[j, i + 1]
                + (1 - a) * b * f[j + 1, i] + a * b * f[j + 1, i + 1])

    return sample
