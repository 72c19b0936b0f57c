"""Fundamental-equation layer: Gauss/Ricci/Codazzi residuals, the compatibility
condition, the curvature decomposition of the spin connection, the ambient
curvature built from the adjoint bivectors, and the flat-connection integrator
that reconstructs a spinor field (hence an immersion) from surface data.

All residuals are evaluated in the adapted orthonormal frame (normals first,
then the two tangent directions dx/lam, dy/lam) and returned as per-node
magnitude fields plus grid maxima.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import MultiVector
from .grids import Chart, bilinear_sampler, coeff_max, d_dx, d_dy
from .liealg import LieModel
from .spin_rep import SpinorGrid, frame_blade_mask, transport_generators
from .surfaces import SurfaceSpec

__all__ = [
    "SurfaceSpec", "CurvatureReport", "ambient_curvature", "grc_residuals",
    "curvature_decomposition", "reconstruct", "GRCGateError", "path_independence_defect",
]


class GRCGateError(RuntimeError):
    """Raised when reconstruction is attempted on data whose fundamental
    equations fail: the connection would not be flat and the result would be
    integration-path dependent."""

    def __init__(self, report: "CurvatureReport", threshold: float):
        self.report = report
        self.threshold = threshold
        super().__init__(
            f"fundamental equations violated: max residual {report.max_residual():.3e} "
            f"> threshold {threshold:.3e}; worst check {report.worst_check()!r}")


# --------------------------------------------------------------------------
# ambient curvature
# --------------------------------------------------------------------------


def ambient_curvature(model: LieModel, x: np.ndarray, y: np.ndarray) -> MultiVector:
    """Half the ambient curvature operator (1/4)(ad(Y)·ad(X) - ad(X)·ad(Y)) as a
    bivector; its commutator action on a vector Z gives the curvature applied
    to Z. Antisymmetric in (x, y); for n = 2 the action is
    -<Y,Z>X + <X,Z>Y (constant curvature -1)."""
    ax = model.ad_bivector(np.asarray(x, dtype=complex))
    ay = model.ad_bivector(np.asarray(y, dtype=complex))
    return (ay * ax - ax * ay) * 0.25


def ambient_action_matrix(model: LieModel, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matrix of Z -> Rbar(x, y)Z in the orthonormal frame."""
    from .clifford import skew_from_bivector_action
    return skew_from_bivector_action(model.algebra, ambient_curvature(model, x, y))


# --------------------------------------------------------------------------
# Gauss / Ricci / Codazzi / compatibility / D-term residuals
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureReport:
    gauss_res: np.ndarray     # (ny, nx)
    ricci_res: np.ndarray
    codazzi_res: np.ndarray
    compat_res: np.ndarray
    D_res: np.ndarray

    def max_residual(self) -> float:
        return float(max(self.gauss_res.max(), self.ricci_res.max(),
                         self.codazzi_res.max(), self.compat_res.max(),
                         self.D_res.max()))

    def maxima(self) -> dict[str, float]:
        return {
            "gauss": float(self.gauss_res.max()),
            "ricci": float(self.ricci_res.max()),
            "codazzi": float(self.codazzi_res.max()),
            "compat": float(self.compat_res.max()),
            "D": float(self.D_res.max()),
        }

    def worst_check(self) -> str:
        m = self.maxima()
        return max(m, key=m.get)

    def worst_node(self) -> tuple[str, tuple[int, int]]:
        name = self.worst_check()
        arr = getattr(self, f"{name}_res" if name != "D" else "D_res")
        return name, tuple(int(v) for v in np.unravel_index(np.argmax(arr), arr.shape))


def _frame_rotation(data: SurfaceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Connection coefficient of the orthonormal tangent frame along unit
    directions: w23(e_tx) = w_x/lam, w23(e_ty) = w_y/lam."""
    w_x, w_y = data.rotation_form()
    lam = data.conformal_factor
    return w_x / lam, w_y / lam


def grc_residuals(data: SurfaceSpec, model: LieModel) -> CurvatureReport:
    """Evaluate the Gauss, Ricci and Codazzi equations, the compatibility
    condition of the adjoint map with the data connection, and the
    bivector-type symmetry (the part of the spin-curvature decomposition that
    must vanish identically for symmetric shape data)."""
    q = data.normal_rank
    tx, ty = q, q + 1
    if ty >= model.d:
        raise ValueError("normal rank incompatible with the model dimension")
    lam = data.conformal_factor
    S = data.shape_matrices()            # (q, ny, nx, 2, 2)
    K = data.curvature_K()
    eye = np.eye(model.d, dtype=complex)

    amb = ambient_action_matrix(model, eye[tx], eye[ty]).real  # constant frame matrix

    # Gauss: tangent components, Z in {e_tx, e_ty}
    gauss = np.zeros_like(lam)
    t_idx = (tx, ty)
    for zi, z in enumerate(t_idx):
        # R^T(e_tx, e_ty)Z = K(<e_ty,Z> e_tx - <e_tx,Z> e_ty)
        rT = np.zeros((2,) + lam.shape)
        if zi == 1:
            rT[0] = K
        else:
            rT[1] = -K
        # shape-operator terms: sum_a (-S^a[X,c] S^a[Y,z] + S^a[Y,c] S^a[X,z])
        sterm = (np.einsum("axyc,axy->xyc", S[:, :, :, 0, :], -S[:, :, :, 1, zi])
                 + np.einsum("axyc,axy->xyc", S[:, :, :, 1, :], S[:, :, :, 0, zi]))
        for ci in range(2):
            lhs = amb[t_idx[ci], z]
            gauss = np.maximum(gauss, np.abs(lhs - rT[ci] - sterm[..., ci]))

    # Ricci: normal components, N = e_a; -II(X, II*(Y,N)) + II(Y, II*(X,N))
    # has component b equal to -(S^b S^a)[X,Y] + (S^b S^a)[Y,X]
    ricci = np.zeros_like(lam)
    rn = _normal_curvature(data)          # (q, q, ny, nx), along (e_tx, e_ty)
    prod = np.einsum("bxyij,axyjk->abxyik", S, S)  # (S^b S^a) indexed [a, b]
    for a in range(q):
        for b in range(q):
            sterm = -prod[a, b][..., 0, 1] + prod[a, b][..., 1, 0]
            lhs = amb[b, a]
            ricci = np.maximum(ricci, np.abs(lhs - rn[b, a] - sterm))

    # Codazzi: normal components of Rbar(X,Y)Z vs the covariant curl of II
    codazzi = np.zeros_like(lam)
    wtx, wty = _frame_rotation(data)      # w23 along unit tangents
    nconn = data.normal_connection_form() # (2, q, q, ny, nx) along (dx, dy)
    dS = {
        "H_x": data.shape_derivative("H_x"), "H_y": data.shape_derivative("H_y"),
        "alpha_x": data.shape_derivative("alpha_x"), "alpha_y": data.shape_derivative("alpha_y"),
        "gamma_x": data.shape_derivative("gamma_x"), "gamma_y": data.shape_derivative("gamma_y"),
    }

    def S_entry_deriv(a, i, j, axis):
        sfx = "_x" if axis == 0 else "_y"
        if i == j:
            sign = 1.0 if i == 0 else -1.0
            return dS["H" + sfx][a] + sign * dS["alpha" + sfx][a]
        return dS["gamma" + sfx][a]

    # frame derivative e_X(S) = (1/lam) d_coord S;
    # nabla-tilde_X II(Y,Z) = e_X(S[Y,Z]) e_a + normal-connection term
    #                         - II(nabla_X Y, Z) - II(Y, nabla_X Z)
    # with nabla_{e_X} e_tx = -w23(e_X) e_ty, nabla_{e_X} e_ty = +w23(e_X) e_tx.
    for zi in range(2):
        res_a = np.zeros((q,) + lam.shape)
        for a in range(q):
            dxS = (1.0 / lam) * S_entry_deriv(a, 1, zi, 0)   # e_tx(S[Y=ty, z])
            dyS = (1.0 / lam) * S_entry_deriv(a, 0, zi, 1)   # e_ty(S[X=tx, z])
            t1 = dxS - dyS
            # frame rotation corrections (X=e_tx, Y=e_ty and the swap):
            # - II(nabla_X e_ty, Z) = -w23(X) S[0, zi]; - II(e_ty, nabla_X Z)
            rot = np.zeros_like(lam)
            rot -= wtx * S[a][..., 0, zi]                    # -II(nabla_tx e_ty, Z)
            rot -= wtx * (-1.0 if zi == 0 else 1.0) * S[a][..., 1, 1 - zi]  # -II(e_ty, nabla_tx Z)
            rot -= wty * S[a][..., 1, zi]                    # +II(nabla_ty e_tx, Z)
            rot += wty * (-1.0 if zi == 0 else 1.0) * S[a][..., 0, 1 - zi]  # +II(e_tx, nabla_ty Z)
            # normal-connection terms (zero by default)
            ncon = np.zeros_like(lam)
            for b in range(q):
                ncon += (nconn[0, a, b] / lam) * S[b][..., 1, zi]
                ncon -= (nconn[1, a, b] / lam) * S[b][..., 0, zi]
            res_a[a] = t1 + rot + ncon - amb[a, t_idx[zi]]
        codazzi = np.maximum(codazzi, np.abs(res_a).max(axis=0))

    compat = compatibility_residual(data, model)
    D = d_term_residual(data, model)
    return CurvatureReport(gauss_res=gauss, ricci_res=ricci, codazzi_res=codazzi,
                           compat_res=compat, D_res=D)


def _normal_curvature(data: SurfaceSpec) -> np.ndarray:
    """R^N along the unit tangent pair from the normal-connection coefficients."""
    q = data.normal_rank
    nc = data.normal_connection
    lam2 = data.conformal_factor ** 2
    if nc is None:
        return np.zeros((q, q) + data.conformal_factor.shape)
    curl = (d_dx(nc[1], data.chart) - d_dy(nc[0], data.chart)
            + np.einsum("ab...,bc...->ac...", nc[0], nc[1])
            - np.einsum("ab...,bc...->ac...", nc[1], nc[0]))
    return curl / lam2


def _nabla0_matrices(data: SurfaceSpec, model: LieModel) -> list[np.ndarray]:
    """Per-direction matrices M_X of the zeroth-order part of nabla0 = d + M,
    combining the frame rotation, normal connection and the shape block
    II-tilde(X)·: (TM+E) -> (TM+E)."""
    q = data.normal_rank
    tx, ty = q, q + 1
    d = model.d
    lam = data.conformal_factor
    w_x, w_y = data.rotation_form()
    S = data.shape_matrices()
    nc = data.normal_connection_form()

    out = []
    for axis, w in ((0, w_x), (1, w_y)):
        m = np.zeros((d, d) + lam.shape)
        m[ty, tx] = -w
        m[tx, ty] = w
        for a in range(q):
            for b in range(q):
                m[b, a] += nc[axis, b, a]
        for a in range(q):
            for t_idx, t in enumerate((tx, ty)):
                m[a, t] += lam * S[a][..., axis, t_idx]
                m[t, a] += -lam * S[a][..., axis, t_idx]
        out.append(m)
    return out


def compatibility_residual(data: SurfaceSpec, model: LieModel) -> np.ndarray:
    """Pointwise residual of the compatibility of the adjoint map with the data
    connection nabla0 = nabla + II-tilde.

    The derivative parts cancel by bilinearity, leaving the exact per-node
    condition [M_X, ad(Y)] = ad(M_X·Y) for the zeroth-order matrices M_X and
    all frame vectors Y; the residual is the max over directions and Y."""
    res = np.zeros_like(data.conformal_factor)
    d = model.d
    for M in _nabla0_matrices(data, model):
        for k in range(d):
            ad_k = model.ad_matrix(np.eye(d)[k])                      # (d, d) constant
            lhs = (np.einsum("lm...,mk->lk...", M.astype(complex), ad_k)
                   - np.einsum("lm,mk...->lk...", ad_k, M.astype(complex)))
            rhs = np.einsum("jkl,j...->lk...", model.structure, M[:, k].astype(complex))
            res = np.maximum(res, np.abs(lhs - rhs).max(axis=(0, 1)))
    return res


def compatibility_residual_fd(data: SurfaceSpec, model: LieModel,
                              n_fields: int = 2, seed: int = 11) -> np.ndarray:
    """Finite-difference form of the compatibility check on smooth random test
    sections: (nabla0_X(ad(Y)Z) - ad(Y)(nabla0_X Z) - ad(nabla0_X Y)Z) = O(h²)
    per node when the condition holds."""
    chart = data.chart
    d = model.d
    x, yy = chart.mesh()
    M = _nabla0_matrices(data, model)
    rng = np.random.default_rng(seed)
    res = np.zeros_like(data.conformal_factor)
    for _ in range(n_fields):
        cy = rng.normal(size=(d, 3))
        cz = rng.normal(size=(d, 3))
        Y = np.stack([c[0] + c[1] * np.sin(x + 0.7 * yy) + c[2] * np.cos(0.5 * x - yy)
                      for c in cy], axis=-1).astype(complex)
        Z = np.stack([c[0] + c[1] * np.cos(x - 0.4 * yy) + c[2] * np.sin(0.8 * x + yy)
                      for c in cz], axis=-1).astype(complex)
        adY_Z = np.einsum("jkl,...j,...k->...l", model.structure, Y, Z)
        for axis, dop in ((0, lambda f: d_dx(f, chart)), (1, lambda f: d_dy(f, chart))):
            conn = lambda F, Mx=M[axis]: np.einsum("lk...,...k->...l", Mx, F)
            n0 = lambda F, dF: dF + conn(F)
            n0_Z = n0(Z, dop(Z))
            n0_Y = n0(Y, dop(Y))
            lhs = n0(adY_Z, dop(adY_Z))
            r = (lhs
                 - np.einsum("jkl,...j,...k->...l", model.structure, Y, n0_Z)
                 - np.einsum("jkl,...j,...k->...l", model.structure, n0_Y, Z))
            res = np.maximum(res, np.abs(r).max(axis=-1))
    return res


def shape_clifford_elements(data: SurfaceSpec, model: LieModel) -> tuple[np.ndarray, np.ndarray]:
    """Full second-fundamental-form Clifford elements II(dx), II(dy) per node
    (twice the half-elements used in the transport generator)."""
    alg = model.algebra
    q = data.normal_rank
    tx, ty = q, q + 1
    lam = data.conformal_factor
    S = data.shape_matrices()
    shape = lam.shape + (alg.n_blades,)
    ii_x = np.zeros(shape, dtype=complex)
    ii_y = np.zeros(shape, dtype=complex)
    for a in range(q):
        for t_idx, t in enumerate((tx, ty)):
            m_at = frame_blade_mask(a, t)
            ii_x[..., m_at] += -lam * S[a][..., 0, t_idx]  # e_t·e_a = -e_a·e_t
            ii_y[..., m_at] += -lam * S[a][..., 1, t_idx]
    return ii_x, ii_y


def ad_clifford_elements(data: SurfaceSpec, model: LieModel) -> tuple[np.ndarray, np.ndarray]:
    """Adjoint bivectors of the coordinate tangent vectors lam·e_tx, lam·e_ty."""
    q = data.normal_rank
    lam = data.conformal_factor[..., None]
    e = np.eye(model.d, dtype=complex)
    return (lam * model.ad_bivector_coeffs(e[q]),
            lam * model.ad_bivector_coeffs(e[q + 1]))


def d_term_residual(data: SurfaceSpec, model: LieModel) -> np.ndarray:
    """Max norm of (1/4){[II(Y), ad(X)] - [II(X), ad(Y)]}; vanishes identically
    for symmetric shape data (the imaginary-bivector part of the curvature)."""
    alg = model.algebra
    ii_x, ii_y = shape_clifford_elements(data, model)
    ad_x, ad_y = ad_clifford_elements(data, model)
    D = 0.25 * (alg.commutator_array(ii_y, ad_x) - alg.commutator_array(ii_x, ad_y))
    return np.abs(D).max(axis=-1)


# --------------------------------------------------------------------------
# curvature decomposition of the spin connection
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionReport:
    A: np.ndarray            # (ny, nx, 2^d) Clifford fields, evaluated on (dx, dy)
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    fd_curvature: np.ndarray  # ([nabla_x, nabla_y]g)·g^{-1}
    residual: np.ndarray      # per-node |fd - (A+B+C+D)|
    D_max: float

    def residual_max(self) -> float:
        return float(self.residual.max())


def _gamma_fields(data: SurfaceSpec, model: LieModel) -> tuple[np.ndarray, np.ndarray]:
    alg = model.algebra
    q = data.normal_rank
    w_x, w_y = data.rotation_form()
    m_t = frame_blade_mask(q, q + 1)
    gx = np.zeros(w_x.shape + (alg.n_blades,), dtype=complex)
    gy = np.zeros_like(gx)
    gx[..., m_t] = 0.5 * w_x
    gy[..., m_t] = 0.5 * w_y
    nc = data.normal_connection
    if nc is not None:
        for a in range(q):
            for b in range(a + 1, q):
                m_ab = frame_blade_mask(a, b)
                gx[..., m_ab] += 0.5 * nc[0, a, b]
                gy[..., m_ab] += 0.5 * nc[1, a, b]
    return gx, gy


def curvature_decomposition(phi: SpinorGrid, data: SurfaceSpec, model: LieModel) -> DecompositionReport:
    """Split the spin curvature on the coordinate pair (dx, dy) into the four
    Clifford terms A (covariant curl of II), B (II·II commutator), C (ambient,
    from ad·ad), D (mixed, identically zero for symmetric data), and compare
    with the second-finite-difference curvature of the spinor transport."""
    alg = model.algebra
    chart = phi.chart
    lam = data.conformal_factor
    lx, ly = data.lambda_derivs()
    ii_x, ii_y = shape_clifford_elements(data, model)
    ad_x, ad_y = ad_clifford_elements(data, model)
    gam_x, gam_y = _gamma_fields(data, model)

    # covariant derivative of Clifford-valued fields: d - [Gamma, ·]
    cd = lambda eta, deta, gam: deta - alg.commutator_array(gam, eta)
    # conformal Christoffels: nabla_dx dx = (lx/lam) dx - (ly/lam) dy, etc.
    a_, b_ = (lx / lam)[..., None], (ly / lam)[..., None]
    nab_x_II_y = cd(ii_y, d_dx(ii_y, chart), gam_x) - (b_ * ii_x + a_ * ii_y)
    nab_y_II_x = cd(ii_x, d_dy(ii_x, chart), gam_y) - (b_ * ii_x + a_ * ii_y)
    A = 0.5 * (nab_y_II_x - nab_x_II_y)
    B = 0.25 * (alg.product_array(ii_y, ii_x) - alg.product_array(ii_x, ii_y))
    C = 0.25 * (alg.product_array(ad_y, ad_x) - alg.product_array(ad_x, ad_y))
    D = 0.25 * (alg.commutator_array(ii_y, ad_x) - alg.commutator_array(ii_x, ad_y))

    g = phi.values
    cov_x = lambda f: d_dx(f, chart) - alg.product_array(gam_x, f)
    cov_y = lambda f: d_dy(f, chart) - alg.product_array(gam_y, f)
    comm = cov_x(cov_y(g)) - cov_y(cov_x(g))
    fd = alg.product_array(comm, alg.reverse_array(g))
    total = A + B + C + D
    return DecompositionReport(A=A, B=B, C=C, D=D, fd_curvature=fd,
                               residual=np.abs(fd - total).max(axis=-1),
                               D_max=float(np.abs(D).max()))


# --------------------------------------------------------------------------
# reconstruction: integrate the flat Killing-type connection
# --------------------------------------------------------------------------


def _omega_interpolators(data: SurfaceSpec, model: LieModel):
    """Point evaluators for the transport generator: exact when the data
    carries closed-form field functions, bilinear interpolation otherwise."""
    q = data.normal_rank
    fns = getattr(data, "fns", None)
    if fns:
        from .spin_rep import transport_from_fields

        def om(x, y, axis):
            lam = np.asarray(fns["lam"](x, y), dtype=float)
            lam_x = np.asarray(fns["lam_x"](x, y), dtype=float)
            lam_y = np.asarray(fns["lam_y"](x, y), dtype=float)
            H = np.asarray(fns["H"](x, y), dtype=float)
            al = np.asarray(fns["alpha"](x, y), dtype=float)
            ga = np.asarray(fns["gamma"](x, y), dtype=float)
            S = np.empty(np.shape(lam) + (1, 2, 2))
            S[..., 0, 0, 0] = H + al
            S[..., 0, 0, 1] = ga
            S[..., 0, 1, 0] = ga
            S[..., 0, 1, 1] = H - al
            ox, oy = transport_from_fields(model, q, lam, lam_y / lam, -lam_x / lam,
                                           np.moveaxis(S, -3, 0))
            return ox if axis == 0 else oy
        return om

    om_x, om_y = transport_generators(data, model)
    sx = bilinear_sampler(data.chart, om_x)
    sy = bilinear_sampler(data.chart, om_y)

    def om(x, y, axis):
        s = sx if axis == 0 else sy
        if np.ndim(x) == 0:
            return s(float(x), float(y))
        return np.stack([s(float(xi), float(yi)) for xi, yi in
                         zip(np.ravel(np.broadcast_to(x, np.shape(x))),
                             np.ravel(np.broadcast_to(y, np.shape(x))))]).reshape(
                             np.shape(x) + (model.algebra.n_blades,))
    return om


def _rk4_sweep(alg, state, t0, h, n_steps, gen_at, collect):
    """March dg/dt = Omega(t)·g with classical RK4, renormalizing each step."""
    g = state
    collect(0, g)
    for k in range(n_steps):
        t = t0 + k * h
        o1 = gen_at(t)
        o2 = gen_at(t + 0.5 * h)
        o4 = gen_at(t + h)
        k1 = alg.product_array(o1, g)
        k2 = alg.product_array(o2, g + 0.5 * h * k1)
        k3 = alg.product_array(o2, g + 0.5 * h * k2)
        k4 = alg.product_array(o4, g + h * k3)
        g = g + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        g = alg.unit_renormalize(g)
        collect(k + 1, g)
    return g


def reconstruct(data: SurfaceSpec, model: LieModel, phi0: MultiVector,
                force: bool = False, gate_factor: float = 10.0,
                column_major: bool = False) -> SpinorGrid:
    """Integrate the Killing-type transport d_X g = Omega(X)·g over the chart,
    seeding the chart origin with phi0: first along the bottom row, then up
    every column (or the transpose order with column_major=True).

    Refuses, with the residual report attached, when the fundamental equations
    fail beyond gate_factor·h² — the connection would not be flat and the
    result would depend on the integration path. ``force`` overrides the gate
    (used for negative controls). Replacing phi0 by phi0·a right-translates
    the whole grid, and transforms the immersion by the corresponding isometry.
    """
    chart = data.chart
    h = max(chart.hx, chart.hy)
    report = grc_residuals(data, model)
    if report.max_residual() > gate_factor * h * h and not force:
        raise GRCGateError(report, gate_factor * h * h)

    alg = model.algebra
    om = _omega_interpolators(data, model)
    values = np.empty((chart.ny, chart.nx, alg.n_blades), dtype=complex)
    g0 = np.asarray(phi0.coeffs, dtype=complex)

    if not column_major:
        row = np.empty((chart.nx, alg.n_blades), dtype=complex)
        _rk4_sweep(alg, g0, chart.x0, chart.hx, chart.nx - 1,
                   lambda x: om(x, chart.y0, 0),
                   lambda i, g: row.__setitem__(i, g))
        xs = chart.xs
        _rk4_sweep(alg, row, chart.y0, chart.hy, chart.ny - 1,
                   lambda y: om(xs, np.full_like(xs, y), 1),
                   lambda j, g: values.__setitem__(j, g))
    else:
        col = np.empty((chart.ny, alg.n_blades), dtype=complex)
        _rk4_sweep(alg, g0, chart.y0, chart.hy, chart.ny - 1,
                   lambda y: om(chart.x0, y, 1),
                   lambda j, g: col.__setitem__(j, g))
        ys = chart.ys
        _rk4_sweep(alg, col, chart.x0, chart.hx, chart.nx - 1,
                   lambda x: om(np.full_like(ys, x), ys, 0),
                   lambda i, g: values.__setitem__((slice(None), i), g))

    return SpinorGrid(chart=chart, model=model, values=values, gauge="surface",
                      normal_rank=data.normal_rank)


def path_independence_defect(data: SurfaceSpec, model: LieModel, phi0: MultiVector,
                             force: bool = False) -> float:
    """Max node difference between row-major and column-major integrations."""
    a = reconstruct(data, model, phi0, force=force)
    b = reconstruct(data, model, phi0, force=force, column_major=True)
    return coeff_max(a.values - b.values)
