"""Null-curve representation of CMC-1 surfaces in hyperbolic 3-space, and the
right-Gauss-map holomorphy checks with the general-n integration route.

The n = 2 pipeline works in complex-quaternion arrays (the fast path):

    1. eta from the surface data (connection + traceless shape 1-form),
    2. compact factor h with dh = -h·eta (stays in the real unit quaternions),
    3. null curve v with dv·v^{-1} = (i/2)·lam·dz·h J(1+iI) h-bar,
    4. immersion F = v^{-1}·sigma(v).

The spinor component is recovered as g = h^{-1} v, and F agrees with the
Weierstrass map of the corresponding spinor grid; the generic Clifford path
cross-checks every stage.

For general n the same route runs in the full Clifford algebra: the transport
form of a Killing-field grid splits as eta + w·dz with eta the sigma-fixed
part; when eta is flat (equivalently, when the right Gauss map is
holomorphic), integrating dh = -h·eta and setting v = h·g yields a
holomorphic null curve with F = v^{-1}·sigma(v).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import MultiVector
from .grids import Chart, bilinear_sampler, coeff_max, d_dx, d_dy, d_dz, d_dzbar
from .liealg import LieModel
from .quaternion import (
    generic_to_quat_array,
    qconj,
    qH,
    qmul,
    qsigma,
    quat_array_to_generic,
    qunit_renormalize,
)
from .spin_rep import ImmersionMesh, SpinorGrid, hyperboloid_from_F, transport_generators
from .surfaces import SurfaceSpec

QUAT_SEED = np.array([1.0, 0, 0, 0], dtype=complex)


class StructureEquationError(RuntimeError):
    """eta fails the integrability (structure) equation; the compact-factor
    system would have no single-valued solution."""


# --------------------------------------------------------------------------
# eta and its structure equation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaForm:
    """Connection 1-form of the CMC-1 pipeline, per-node quaternion pair."""

    chart: Chart
    eta_x: np.ndarray   # (ny, nx, 4)
    eta_y: np.ndarray

    def reality_defect(self) -> float:
        """max |Im| of the coefficients; eta is real for CMC-1 data."""
        return float(max(np.abs(self.eta_x.imag).max(), np.abs(self.eta_y.imag).max()))

    def structure_residual(self) -> np.ndarray:
        """Per-node |d eta - eta ∧ eta| evaluated on (dx, dy)."""
        c = (d_dx(self.eta_y, self.chart) - d_dy(self.eta_x, self.chart)
             - qmul(self.eta_x, self.eta_y) + qmul(self.eta_y, self.eta_x))
        return np.abs(c).max(axis=-1)


def build_eta(data: SurfaceSpec, h_tol: float = 1e-12) -> EtaForm:
    """eta = (1/(2 lam))(lam_y dx - lam_x dy) I
           - (lam/2){(gamma dx - alpha dy) J - (alpha dx + gamma dy) K}.

    Requires codimension one and mean curvature identically 1 (the CMC-1
    pipeline); the coefficients are real by construction."""
    if data.normal_rank != 1:
        raise ValueError("the null-curve pipeline is the codimension-1 case")
    H = data.mean_curvature[0]
    if np.max(np.abs(H - 1.0)) > h_tol:
        raise ValueError(f"mean curvature must be identically 1 "
                         f"(max |H-1| = {np.max(np.abs(H - 1.0)):.3g})")
    lam = data.conformal_factor
    lx, ly = data.lambda_derivs()
    al, ga = data.alpha[0], data.gamma[0]
    shape = lam.shape + (4,)
    ex = np.zeros(shape, dtype=complex)
    ey = np.zeros(shape, dtype=complex)
    ex[..., 1] = ly / (2 * lam)
    ex[..., 2] = -0.5 * lam * ga
    ex[..., 3] = 0.5 * lam * al
    ey[..., 1] = -lx / (2 * lam)
    ey[..., 2] = 0.5 * lam * al
    ey[..., 3] = 0.5 * lam * ga
    return EtaForm(chart=data.chart, eta_x=ex, eta_y=ey)


# --------------------------------------------------------------------------
# grid integrators (quaternion fast path)
# --------------------------------------------------------------------------


def _rk4_grid(chart: Chart, gen_x, gen_y, seed: np.ndarray, deriv):
    """March the linear system over the grid, bottom row first, then every
    column at once: classical RK4 with frozen interpolated coefficients and
    unit renormalization per step. ``deriv(gen, state)`` gives d(state)/dt."""
    ny, nx = chart.ny, chart.nx
    out = np.empty((ny, nx, 4), dtype=complex)
    g = np.asarray(seed, dtype=complex)
    out[0, 0] = g
    for i in range(nx - 1):
        x = chart.x0 + i * chart.hx
        h = chart.hx
        o1 = gen_x(x, chart.y0)
        o2 = gen_x(x + 0.5 * h, chart.y0)
        o4 = gen_x(x + h, chart.y0)
        k1 = deriv(o1, g)
        k2 = deriv(o2, g + 0.5 * h * k1)
        k3 = deriv(o2, g + 0.5 * h * k2)
        k4 = deriv(o4, g + h * k3)
        g = qunit_renormalize(g + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4))
        out[0, i + 1] = g
    row = out[0].copy()
    xs = chart.xs
    for j in range(ny - 1):
        y = chart.y0 + j * chart.hy
        h = chart.hy
        o1 = gen_y(xs, y)
        o2 = gen_y(xs, y + 0.5 * h)
        o4 = gen_y(xs, y + h)
        k1 = deriv(o1, row)
        k2 = deriv(o2, row + 0.5 * h * k1)
        k3 = deriv(o2, row + 0.5 * h * k2)
        k4 = deriv(o4, row + h * k3)
        row = qunit_renormalize(row + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4))
        out[j + 1] = row
    return out


def _field_sampler(chart: Chart, field: np.ndarray):
    s = bilinear_sampler(chart, field)

    def at(x, y):
        if np.ndim(x) == 0:
            return s(float(x), float(y))
        return np.stack([s(float(xi), float(y)) for xi in np.asarray(x)])
    return at


def integrate_compact_factor(eta: EtaForm, h0: np.ndarray | None = None,
                             gate_factor: float = 10.0, force: bool = False) -> np.ndarray:
    """Solve dh = -h·eta over the chart (bottom row, then columns).

    The solution stays in the real unit quaternions since eta has real
    coefficients; refuses when the structure equation fails beyond
    gate_factor·h² (the system would be path dependent)."""
    res = eta.structure_residual().max()
    h = max(eta.chart.hx, eta.chart.hy)
    if res > gate_factor * h * h and not force:
        raise StructureEquationError(
            f"structure-equation residual {res:.3e} > {gate_factor * h * h:.3e}")
    ex = _field_sampler(eta.chart, eta.eta_x)
    ey = _field_sampler(eta.chart, eta.eta_y)
    seed = QUAT_SEED if h0 is None else np.asarray(h0, dtype=complex)
    return _rk4_grid(eta.chart, ex, ey, seed, lambda gen, s: -qmul(s, gen))


def compact_factor_reality_defect(h_field: np.ndarray) -> float:
    return float(np.abs(np.asarray(h_field).imag).max())


def lawson_residual(h_field: np.ndarray, eta: EtaForm) -> np.ndarray:
    """Per-node residual of d(h-bar)·h = eta: the flat-ambient spinor transport
    carrying this metric and traceless shape data (the minimal-surface
    correspondent of the CMC-1 surface)."""
    hb = qconj(h_field)
    rx = qmul(d_dx(hb, eta.chart), h_field) - eta.eta_x
    ry = qmul(d_dy(hb, eta.chart), h_field) - eta.eta_y
    return np.maximum(np.abs(rx).max(axis=-1), np.abs(ry).max(axis=-1))


# --------------------------------------------------------------------------
# null curves
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NullCurve:
    """Unit-norm holomorphic quaternion field with isotropic derivative."""

    chart: Chart
    v: np.ndarray       # (ny, nx, 4)

    def unit_defect(self) -> float:
        return float(np.abs(qH(self.v, self.v) - 1.0).max())

    def holomorphy_residual(self) -> np.ndarray:
        return np.abs(d_dzbar(self.v, self.chart)).max(axis=-1)

    def isotropy_residual(self) -> np.ndarray:
        dv = d_dz(self.v, self.chart)
        return np.abs(qH(dv, dv))


def null_curve_generator(lam: np.ndarray, h_field: np.ndarray) -> np.ndarray:
    """(i/2)·lam·h·J(1+iI)·h-bar per node: the dz-coefficient of dv·v^{-1}."""
    w = np.zeros(np.shape(lam) + (4,), dtype=complex)
    w[..., 2] = 0.5j * lam
    w[..., 3] = 0.5 * lam
    return qmul(h_field, qmul(w, qconj(h_field)))


def integrate_null_curve(data: SurfaceSpec, h_field: np.ndarray,
                         v0: np.ndarray | None = None,
                         drift_tol: float = 1e-8) -> NullCurve:
    """Solve dv = G·v·dz with G = (i/2) lam h J(1+iI) h-bar; dz acts as 1 along
    dx and i along dy. Unit norm is maintained by renormalization; a unit-norm
    drift beyond drift_tol before renormalization raises."""
    lam = data.conformal_factor
    G = null_curve_generator(lam, h_field)
    gx = _field_sampler(data.chart, G)
    gy = lambda x, y: 1j * gx(x, y)    # dz picks up i along the y direction
    seed = QUAT_SEED if v0 is None else np.asarray(v0, dtype=complex)
    v = _rk4_grid(data.chart, gx, gy, seed,
                  lambda gen, s: qmul(gen, s))
    nc = NullCurve(chart=data.chart, v=v)
    if nc.unit_defect() > drift_tol:
        raise RuntimeError(f"null-curve norm drifted by {nc.unit_defect():.3e}")
    return nc


def assemble_F(curve: NullCurve, model: LieModel, tol: float = 1e-8) -> ImmersionMesh:
    """F = v^{-1}·sigma(v) per node, with hyperboloid and ball coordinates."""
    v = curve.v
    fq = qmul(qconj(v), qsigma(v))     # v^{-1} = conj(v) for unit norm
    hyper = hyperboloid_from_F(fq, tol=tol)
    defect = np.abs(-hyper[..., 0] ** 2 + np.sum(hyper[..., 1:] ** 2, axis=-1) + 1.0)
    worst = np.unravel_index(np.argmax(defect), defect.shape)
    if defect[worst] > tol:
        raise ValueError(f"Minkowski constraint violated: {defect[worst]:.3g} at {worst}")
    ball = hyper[..., 1:] / (1.0 + hyper[..., 0])[..., None]
    return ImmersionMesh(chart=curve.chart, model=model,
                         F=quat_array_to_generic(fq), hyper=hyper, ball=ball)


@dataclass(frozen=True)
class BryantResult:
    eta: EtaForm
    h_field: np.ndarray
    curve: NullCurve
    mesh: ImmersionMesh
    grid: SpinorGrid      # spinor component g = h^{-1} v


def bryant_pipeline(data: SurfaceSpec, model: LieModel,
                    h0: np.ndarray | None = None, v0: np.ndarray | None = None,
                    force: bool = False) -> BryantResult:
    """Full CMC-1 pipeline; also returns the spinor grid g = h^{-1}·v whose
    Weierstrass map equals the assembled immersion."""
    eta = build_eta(data)
    h_field = integrate_compact_factor(eta, h0=h0, force=force)
    curve = integrate_null_curve(data, h_field, v0=v0)
    mesh = assemble_F(curve, model)
    g = qmul(qconj(h_field), curve.v)
    grid = SpinorGrid(chart=data.chart, model=model,
                      values=quat_array_to_generic(g), gauge="surface",
                      normal_rank=1)
    return BryantResult(eta=eta, h_field=h_field, curve=curve, mesh=mesh, grid=grid)


# --------------------------------------------------------------------------
# closed-form null-curve input
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuaternionPolynomial:
    """v(z) = sum_k c_k z^k with quaternion coefficients; exact holomorphic input."""

    coeffs: np.ndarray    # (deg+1, 4) complex

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (4,), dtype=complex)
        for k, c in enumerate(self.coeffs):
            out += (z ** k)[..., None] * c
        return out

    def sample(self, chart: Chart, unit_tol: float = 1e-10) -> NullCurve:
        x, y = chart.mesh()
        v = self(x + 1j * y)
        curve = NullCurve(chart=chart, v=v)
        if curve.unit_defect() > unit_tol:
            raise ValueError(f"polynomial is not unit-norm on the chart "
                             f"(defect {curve.unit_defect():.3g})")
        return curve

    @staticmethod
    def horosphere() -> "QuaternionPolynomial":
        """v(z) = 1 + (iz/2) J + (z/2) K, the nilpotent-generator solution."""
        return QuaternionPolynomial(np.array([[1, 0, 0, 0],
                                              [0, 0, 0.5j, 0.5]], dtype=complex))


# --------------------------------------------------------------------------
# right Gauss map: holomorphy and flatness
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussMapReport:
    G: np.ndarray               # (ny, nx, 2^d): d_z F·F^{-1} per node
    cr_residual: np.ndarray     # |d_zbar G|
    flat_residual: np.ndarray   # curvature of the sigma-fixed connection part
    tolerance: float

    @property
    def holomorphic(self) -> bool:
        return bool(self.cr_residual.max() <= self.tolerance)

    @property
    def flat(self) -> bool:
        return bool(self.flat_residual.max() <= self.tolerance)

    @property
    def verdicts_agree(self) -> bool:
        return self.holomorphic == self.flat


def _transport_fields(phi: SpinorGrid, data: SurfaceSpec | None, model: LieModel,
                      fd_fallback: bool) -> tuple[np.ndarray, np.ndarray]:
    """Per-node transport coefficients A_x, A_y with d_X g = A(X)·g."""
    if phi.gauge == "surface" and data is not None:
        return transport_generators(data, model)
    if not fd_fallback:
        raise ValueError("no surface data; pass fd_fallback=True to use "
                         "finite-difference transport coefficients")
    alg = model.algebra
    tau = alg.reverse_array(phi.values)
    return (alg.product_array(d_dx(phi.values, phi.chart), tau),
            alg.product_array(d_dy(phi.values, phi.chart), tau))


def gauss_map_holomorphy(phi: SpinorGrid, data: SurfaceSpec | None, model: LieModel,
                         tolerance: float) -> GaussMapReport:
    """Cauchy-Riemann residual of G = d_z F·F^{-1} = <<ad(d_z)·phi, phi>> and
    the curvature of the sigma-fixed part of the transport form (the flatness
    side of the holomorphy criterion). The two verdicts agree on consistent
    data: the right Gauss map is holomorphic iff that connection is flat."""
    alg = model.algebra
    g = phi.values
    tau_g = alg.reverse_array(g)
    if phi.gauge == "canonical":
        ad_z = 0.5 * (model.ad_bivector_coeffs(phi.mc_m[0])
                      - 1j * model.ad_bivector_coeffs(phi.mc_m[1]))
        G = alg.product_array(tau_g, alg.product_array(ad_z, g))
    else:
        if data is None:
            raise ValueError("surface-gauge grids need their surface data")
        lam = data.conformal_factor[..., None]
        q = data.normal_rank
        e = np.eye(model.d, dtype=complex)
        adb_z = 0.5 * lam * (model.ad_bivector_coeffs(e[q])
                             - 1j * model.ad_bivector_coeffs(e[q + 1]))
        G = alg.product_array(tau_g, alg.product_array(-adb_z, g))
    cr = np.abs(d_dzbar(G, phi.chart)).max(axis=-1)

    a_x, a_y = _transport_fields(phi, data, model, fd_fallback=True)
    eta_x, eta_y, _, _ = split_transport_form(alg, a_x, a_y)
    flat = (d_dx(eta_y, phi.chart) - d_dy(eta_x, phi.chart)
            - alg.commutator_array(eta_x, eta_y))
    return GaussMapReport(G=G, cr_residual=cr,
                          flat_residual=np.abs(flat).max(axis=-1),
                          tolerance=tolerance)


def split_transport_form(alg, a_x: np.ndarray, a_y: np.ndarray):
    """Split a transport form A into its sigma-fixed connection part eta and
    its (1,0)-part w·dz: since sigma conjugates scalars, solving
    A_x = eta_x + w, A_y = eta_y + i·w with sigma(eta) = eta gives

        w = ((A_x - sigma A_x) - i (A_y - sigma A_y)) / 2.

    Returns (eta_x, eta_y, w, split_defect) where the defect measures how far
    eta fails to be sigma-fixed (zero for consistent transports)."""
    s_x = alg.sigma_array(a_x)
    s_y = alg.sigma_array(a_y)
    w = 0.5 * ((a_x - s_x) - 1j * (a_y - s_y))
    eta_x = a_x - w
    eta_y = a_y - 1j * w
    defect = max(coeff_max(alg.sigma_array(eta_x) - eta_x),
                 coeff_max(alg.sigma_array(eta_y) - eta_y))
    return eta_x, eta_y, w, defect


# --------------------------------------------------------------------------
# general-n route: split the transport, integrate the compact factor in the
# Clifford algebra, and assemble the null curve
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneralRouteReport:
    flat_residual: float
    split_defect: float          # (1,0)-form property of the w dz part
    h_values: np.ndarray         # (ny, nx, 2^d), sigma-fixed spin elements
    v_values: np.ndarray
    transport_defect: float      # dv·v^{-1} - dz·h w h^{-1}
    holomorphy_defect: float     # |d_zbar v|
    isotropy_defect: float       # |B(d_z v, d_z v)|
    F_defect: float              # tau(v) sigma(v) vs tau(g) sigma(g)


def general_weierstrass_route(phi: SpinorGrid, data: SurfaceSpec | None,
                              model: LieModel, gate_factor: float = 10.0,
                              force: bool = False) -> GeneralRouteReport:
    """Factor the transport form as eta + w·dz (eta the sigma-fixed part),
    check flatness of eta, integrate dh = -h·eta, and verify that v = h·g is a
    holomorphic null curve reproducing the immersion F = v^{-1} sigma(v)."""
    alg = model.algebra
    chart = phi.chart
    a_x, a_y = _transport_fields(phi, data, model, fd_fallback=True)
    eta_x, eta_y, w, split = split_transport_form(alg, a_x, a_y)

    flat_field = (d_dx(eta_y, chart) - d_dy(eta_x, chart)
                  - alg.commutator_array(eta_x, eta_y))
    flat = coeff_max(flat_field)
    step = max(chart.hx, chart.hy)
    if flat > gate_factor * step and not force:
        raise StructureEquationError(
            f"sigma-fixed connection part is not flat ({flat:.3e})")

    sx = bilinear_sampler(chart, eta_x)
    sy = bilinear_sampler(chart, eta_y)
    h_values = _clifford_rk4_grid(alg, chart, sx, sy)
    v_values = alg.product_array(h_values, phi.values)

    hw = alg.product_array(h_values, alg.product_array(w, alg.reverse_array(h_values)))
    tau_v = alg.reverse_array(v_values)
    t_x = alg.product_array(d_dx(v_values, chart), tau_v) - hw
    t_y = alg.product_array(d_dy(v_values, chart), tau_v) - 1j * hw
    transport_defect = max(coeff_max(t_x), coeff_max(t_y))

    dzv = d_dz(v_values, chart)
    holo = coeff_max(d_dzbar(v_values, chart))
    iso = float(np.abs(alg.extended_B_array(dzv, dzv)).max())
    Fv = alg.product_array(tau_v, alg.sigma_array(v_values))
    Fg = alg.product_array(alg.reverse_array(phi.values), alg.sigma_array(phi.values))
    return GeneralRouteReport(
        flat_residual=flat, split_defect=split, h_values=h_values,
        v_values=v_values, transport_defect=transport_defect,
        holomorphy_defect=holo, isotropy_defect=iso,
        F_defect=coeff_max(Fv - Fg))


def _clifford_rk4_grid(alg, chart: Chart, eta_x_at, eta_y_at) -> np.ndarray:
    """dh = -h·eta over the grid in the full Clifford algebra, seeded with 1."""
    out = np.empty((chart.ny, chart.nx, alg.n_blades), dtype=complex)
    g = np.zeros(alg.n_blades, dtype=complex)
    g[0] = 1.0
    deriv = lambda gen, s: -alg.product_array(s, gen)

    def step(state, gen1, gen2, gen4, h):
        k1 = deriv(gen1, state)
        k2 = deriv(gen2, state + 0.5 * h * k1)
        k3 = deriv(gen2, state + 0.5 * h * k2)
        k4 = deriv(gen4, state + h * k3)
        return alg.unit_renormalize(state + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4))

    out[0, 0] = g
    for i in range(chart.nx - 1):
        x = chart.x0 + i * chart.hx
        g = step(g, eta_x_at(x, chart.y0), eta_x_at(x + 0.5 * chart.hx, chart.y0),
                 eta_x_at(x + chart.hx, chart.y0), chart.hx)
        out[0, i + 1] = g
    for i in range(chart.nx):
        g = out[0, i]
        x = chart.x0 + i * chart.hx
        for j in range(chart.ny - 1):
            y = chart.y0 + j * chart.hy
            g = step(g, eta_y_at(x, y), eta_y_at(x, y + 0.5 * chart.hy),
                     eta_y_at(x, y + chart.hy), chart.hy)
            out[j + 1, i] = g
    return out
