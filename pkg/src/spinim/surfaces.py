"""Surface data on conformal charts: conformal factor, mean curvature, and the
traceless second-fundamental-form entries.

The real second fundamental form in the orthonormal tangent frame
((1/lam)dx, (1/lam)dy) has, for each unit normal direction a, the matrix

        ((H_a + alpha_a, gamma_a), (gamma_a, H_a - alpha_a)).

Fields are stored per node with shape (q, ny, nx); q is the normal rank
(1 for surfaces in hyperbolic 3-space). Presets carry closed-form derivative
samples so curvature residuals are free of finite-difference noise; data built
from bare arrays falls back to second-order differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .grids import Chart, d_dx, d_dy

LAMBDA_FLOOR = 1e-8  # conformal factor must stay above this (metric degenerates)


def _zero_fn(x, y):
    return np.zeros(np.broadcast(x, y).shape)


def _one_fn(x, y):
    return np.ones(np.broadcast(x, y).shape)


def _disc_lam(x, y):
    return 2.0 / (1.0 - x**2 - y**2)


def _const_fns(lam: float, H: float) -> dict:
    return {"lam": lambda x, y, v=lam: np.full(np.broadcast(x, y).shape, v),
            "lam_x": _zero_fn, "lam_y": _zero_fn,
            "H": lambda x, y, v=H: np.full(np.broadcast(x, y).shape, v),
            "alpha": _zero_fn, "gamma": _zero_fn}


@dataclass(frozen=True)
class SurfaceSpec:
    """Discretized first/second fundamental form data on a chart."""

    chart: Chart
    conformal_factor: np.ndarray          # (ny, nx) > 0
    mean_curvature: np.ndarray            # (q, ny, nx)
    alpha: np.ndarray                     # (q, ny, nx)
    gamma: np.ndarray                     # (q, ny, nx)
    normal_rank: int = 1
    # optional closed-form samples; None -> finite differences
    lam_x: np.ndarray | None = None
    lam_y: np.ndarray | None = None
    gauss_K: np.ndarray | None = None     # curvature of lam²(dx²+dy²)
    d_shape: dict | None = None           # {"alpha_x": (q,ny,nx), "alpha_y", "H_x", ...}
    normal_connection: np.ndarray | None = None   # (2, q, q, ny, nx), antisymmetric in (a,b)
    # closed-form field callables f(x, y) for off-node sampling (q = 1 only):
    # keys lam, lam_x, lam_y, H, alpha, gamma; used by the reconstruction
    # integrator at substep midpoints, bilinear interpolation otherwise
    fns: dict | None = None
    name: str = ""

    def __post_init__(self):
        ny, nx = self.chart.ny, self.chart.nx
        lam = np.asarray(self.conformal_factor, dtype=float)
        if lam.shape != (ny, nx):
            raise ValueError("conformal_factor shape does not match chart")
        if lam.min() < LAMBDA_FLOOR:
            raise ValueError(f"conformal factor falls below {LAMBDA_FLOOR}; metric degenerates")
        object.__setattr__(self, "conformal_factor", lam)
        for fname in ("mean_curvature", "alpha", "gamma"):
            arr = np.asarray(getattr(self, fname), dtype=float)
            if arr.ndim == 2:
                arr = arr[None]
            if arr.shape != (self.normal_rank, ny, nx):
                raise ValueError(f"{fname} shape {arr.shape} does not match (q, ny, nx)")
            object.__setattr__(self, fname, arr)

    # ---- derived quantities -------------------------------------------------

    @property
    def q(self) -> int:
        return self.normal_rank

    def lambda_derivs(self) -> tuple[np.ndarray, np.ndarray]:
        lx = self.lam_x if self.lam_x is not None else d_dx(self.conformal_factor, self.chart)
        ly = self.lam_y if self.lam_y is not None else d_dy(self.conformal_factor, self.chart)
        return lx, ly

    def rotation_form(self) -> tuple[np.ndarray, np.ndarray]:
        """Tangent-frame connection 1-form w23 = (lam_y/lam) dx - (lam_x/lam) dy."""
        lx, ly = self.lambda_derivs()
        lam = self.conformal_factor
        return ly / lam, -lx / lam

    def curvature_K(self) -> np.ndarray:
        """Gauss curvature -Delta(log lam)/lam² of the conformal metric."""
        if self.gauss_K is not None:
            return self.gauss_K
        loglam = np.log(self.conformal_factor)
        lap = d_dx(d_dx(loglam, self.chart), self.chart) + d_dy(d_dy(loglam, self.chart), self.chart)
        return -lap / self.conformal_factor**2

    def shape_matrices(self) -> np.ndarray:
        """S^a in the orthonormal frame: shape (q, ny, nx, 2, 2)."""
        H, a, g = self.mean_curvature, self.alpha, self.gamma
        S = np.empty(H.shape + (2, 2))
        S[..., 0, 0] = H + a
        S[..., 0, 1] = g
        S[..., 1, 0] = g
        S[..., 1, 1] = H - a
        return S

    def shape_derivative(self, which: str) -> np.ndarray:
        """d(field)/d(axis) with closed forms when available; which in {alpha,gamma,H}_{x,y}."""
        if self.d_shape and which in self.d_shape:
            return self.d_shape[which]
        fname = {"alpha": "alpha", "gamma": "gamma", "H": "mean_curvature"}[which[:-2]]
        arr = getattr(self, fname)  # (q, ny, nx): x is the last axis, y the middle
        if which.endswith("_x"):
            return np.gradient(arr, self.chart.hx, axis=-1, edge_order=2)
        return np.gradient(arr, self.chart.hy, axis=-2, edge_order=2)

    def normal_connection_form(self) -> np.ndarray:
        if self.normal_connection is not None:
            return self.normal_connection
        q, ny, nx = self.normal_rank, self.chart.ny, self.chart.nx
        return np.zeros((2, q, q, ny, nx))

    # ---- modification -------------------------------------------------------

    def with_bump(self, fname: str, node: tuple[int, int], size: float,
                  normal_index: int = 0) -> "SurfaceSpec":
        """Bump one node of one field; closed-form derivative data is dropped."""
        arr = getattr(self, fname).copy()
        j, i = node
        arr[normal_index, j, i] += size
        return replace(self, **{fname: arr}, d_shape=None, fns=None,
                       name=f"{self.name}+bump({fname},{node},{size})")

    # ---- presets -------------------------------------------------------------

    @staticmethod
    def horosphere(chart: Chart) -> "SurfaceSpec":
        """Totally umbilic CMC-1 surface: lam = 1, H = 1, alpha = gamma = 0."""
        ny, nx = chart.ny, chart.nx
        zero = np.zeros((1, ny, nx))
        return SurfaceSpec(
            chart=chart, conformal_factor=np.ones((ny, nx)),
            mean_curvature=np.ones((1, ny, nx)), alpha=zero, gamma=zero.copy(),
            lam_x=np.zeros((ny, nx)), lam_y=np.zeros((ny, nx)),
            gauss_K=np.zeros((ny, nx)),
            d_shape={k: np.zeros((1, ny, nx)) for k in
                     ("alpha_x", "alpha_y", "gamma_x", "gamma_y", "H_x", "H_y")},
            fns=_const_fns(lam=1.0, H=1.0),
            name="horosphere")

    @staticmethod
    def horosphere_exp_gauge(chart: Chart) -> "SurfaceSpec":
        """CMC-1 data with lam = e^x, H = 1, alpha = gamma = 0 (flat metric in
        another conformal gauge; exact compact-factor solution exp(y I / 2))."""
        x, _ = chart.mesh()
        ny, nx = chart.ny, chart.nx
        zero = np.zeros((1, ny, nx))
        ex = np.exp(x)
        return SurfaceSpec(
            chart=chart, conformal_factor=ex,
            mean_curvature=np.ones((1, ny, nx)), alpha=zero, gamma=zero.copy(),
            lam_x=ex.copy(), lam_y=np.zeros((ny, nx)), gauss_K=np.zeros((ny, nx)),
            d_shape={k: np.zeros((1, ny, nx)) for k in
                     ("alpha_x", "alpha_y", "gamma_x", "gamma_y", "H_x", "H_y")},
            fns={"lam": lambda x, y: np.exp(x), "lam_x": lambda x, y: np.exp(x),
                 "lam_y": _zero_fn, "H": _one_fn, "alpha": _zero_fn, "gamma": _zero_fn},
            name="horosphere-exp-gauge")

    @staticmethod
    def catenoid_cousin(chart: Chart) -> "SurfaceSpec":
        """CMC-1 data sharing (metric, traceless shape) with the minimal catenoid:
        lam = cosh x, H = 1, alpha = -sech²x, gamma = 0."""
        x, _ = chart.mesh()
        ny, nx = chart.ny, chart.nx
        sech2 = 1.0 / np.cosh(x) ** 2
        zero = np.zeros((1, ny, nx))
        d_shape = {k: np.zeros((1, ny, nx)) for k in
                   ("alpha_y", "gamma_x", "gamma_y", "H_x", "H_y")}
        d_shape["alpha_x"] = (2 * sech2 * np.tanh(x))[None]
        return SurfaceSpec(
            chart=chart, conformal_factor=np.cosh(x),
            mean_curvature=np.ones((1, ny, nx)), alpha=-sech2[None], gamma=zero,
            lam_x=np.sinh(x), lam_y=np.zeros((ny, nx)),
            gauss_K=-sech2**2, d_shape=d_shape,
            fns={"lam": lambda x, y: np.cosh(x), "lam_x": lambda x, y: np.sinh(x),
                 "lam_y": _zero_fn, "H": _one_fn,
                 "alpha": lambda x, y: -1.0 / np.cosh(x) ** 2, "gamma": _zero_fn},
            name="catenoid-cousin")

    @staticmethod
    def geodesic_disc(chart: Chart) -> "SurfaceSpec":
        """Totally geodesic data: Poincare-disc factor lam = 2/(1-x²-y²), II = 0."""
        x, y = chart.mesh()
        r2 = x**2 + y**2
        if r2.max() >= 1.0:
            raise ValueError("geodesic-disc chart must stay inside the unit disc")
        lam = 2.0 / (1.0 - r2)
        ny, nx = chart.ny, chart.nx
        zero = np.zeros((1, ny, nx))
        return SurfaceSpec(
            chart=chart, conformal_factor=lam,
            mean_curvature=zero, alpha=zero.copy(), gamma=zero.copy(),
            lam_x=x * lam**2, lam_y=y * lam**2,
            gauss_K=-np.ones((ny, nx)),
            d_shape={k: np.zeros((1, ny, nx)) for k in
                     ("alpha_x", "alpha_y", "gamma_x", "gamma_y", "H_x", "H_y")},
            fns={"lam": _disc_lam, "lam_x": lambda x, y: x * _disc_lam(x, y) ** 2,
                 "lam_y": lambda x, y: y * _disc_lam(x, y) ** 2,
                 "H": _zero_fn, "alpha": _zero_fn, "gamma": _zero_fn},
            name="geodesic-disc")

    @staticmethod
    def non_cmc_control(chart: Chart, slope: float = 0.1) -> "SurfaceSpec":
        """Negative control: H = 1 + slope·x with flat gauge data (violates the
        fundamental equations by construction; used to exercise failure paths)."""
        x, _ = chart.mesh()
        ny, nx = chart.ny, chart.nx
        zero = np.zeros((1, ny, nx))
        d_shape = {k: np.zeros((1, ny, nx)) for k in
                   ("alpha_x", "alpha_y", "gamma_x", "gamma_y", "H_y")}
        d_shape["H_x"] = np.full((1, ny, nx), slope)
        return SurfaceSpec(
            chart=chart, conformal_factor=np.ones((ny, nx)),
            mean_curvature=(1.0 + slope * x)[None], alpha=zero, gamma=zero.copy(),
            lam_x=np.zeros((ny, nx)), lam_y=np.zeros((ny, nx)),
            gauss_K=np.zeros((ny, nx)), d_shape=d_shape,
            fns={"lam": _one_fn, "lam_x": _zero_fn, "lam_y": _zero_fn,
                 "H": lambda x, y, s=slope: 1.0 + s * x,
                 "alpha": _zero_fn, "gamma": _zero_fn},
            name=f"non-cmc-control({slope})")

    @staticmethod
    def totally_geodesic_flat(chart: Chart, normal_rank: int) -> "SurfaceSpec":
        """II = 0 with flat gauge lam = 1 and arbitrary normal rank (general n)."""
        ny, nx = chart.ny, chart.nx
        zero = np.zeros((normal_rank, ny, nx))
        return SurfaceSpec(
            chart=chart, conformal_factor=np.ones((ny, nx)),
            mean_curvature=zero, alpha=zero.copy(), gamma=zero.copy(),
            normal_rank=normal_rank,
            lam_x=np.zeros((ny, nx)), lam_y=np.zeros((ny, nx)),
            gauss_K=np.zeros((ny, nx)),
            d_shape={k: np.zeros((normal_rank, ny, nx)) for k in
                     ("alpha_x", "alpha_y", "gamma_x", "gamma_y", "H_x", "H_y")},
            name=f"totally-geodesic-flat(q={normal_rank})")
