"""Concrete models of g = sl_n(C) with h = su(n) and m = i·su(n).

A LieModel holds a B-orthonormal basis of m as traceless hermitian n x n
matrices, the structure constants of the bracket in that basis, and the
Killing multiple lambda with B(X, Y) = lambda·tr(ad X ∘ ad Y).

For n = 2 the normalization lambda = 1/2 reproduces B(z, z) = -4(z1²+z2²+z3²)
on C·I + C·J + C·K and the orthonormal basis e1 = (i/2)I, e2 = (i/2)J,
e3 = (i/2)K with brackets [e2,e3] = i e1, [e3,e1] = i e2, [e1,e2] = i e3.

Group elements are generated as Clifford exponentials of bivectors (no
logarithm is provided); `lift_Ad` builds the spin lift of Ad(exp tX) together
with the n x n matrix representative for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .clifford import (
    CliffordAlgebra,
    ConvergenceError,
    MultiVector,
    clifford_exp,
    commutator,
    get_algebra,
)
from . import quaternion as quat

SUPPORTED_N = (2, 3)


@dataclass(frozen=True)
class LieModel:
    """sl_n(C) in a B-orthonormal basis of m = i·su(n)."""

    n: int
    lam: float
    basis: np.ndarray       # (d, n, n) complex, traceless hermitian
    structure: np.ndarray   # (d, d, d): [e_j, e_k] = sum_l structure[j,k,l] e_l
    algebra: CliffordAlgebra = field(repr=False)

    @property
    def d(self) -> int:
        return self.n * self.n - 1

    # ---- Lie algebra operations on coordinate vectors (length d, complex) ----

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("j,k,jkl->l", np.asarray(x, dtype=complex),
                         np.asarray(y, dtype=complex), self.structure)

    def ad_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of [x, ·] in the m-basis (complex d x d, B-skew)."""
        return np.einsum("j,jkl->lk", np.asarray(x, dtype=complex), self.structure)

    def B(self, x: np.ndarray, y: np.ndarray) -> complex:
        """Complex-bilinear form in orthonormal coordinates."""
        return complex(np.dot(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)))

    def to_matrix(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("j,jab->ab", np.asarray(x, dtype=complex), self.basis)

    def from_matrix(self, m: np.ndarray) -> np.ndarray:
        """Coordinates by B-projection; valid since the basis is B-orthonormal."""
        scale = 2.0 * self.n * self.lam
        return scale * np.einsum("jab,ba->j", self.basis, np.asarray(m, dtype=complex))

    def split_hm(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Split coordinates into the m-part (real) and h-part (imaginary) of g = m + i·m."""
        x = np.asarray(x, dtype=complex)
        return x.real.astype(complex), 1j * x.imag

    # ---- Clifford-side operations ----

    def ad_bivector(self, x: np.ndarray) -> MultiVector:
        return MultiVector(self.algebra, self.ad_bivector_coeffs(np.asarray(x, dtype=complex)))

    def ad_bivector_coeffs(self, x: np.ndarray) -> np.ndarray:
        """Batched adjoint bivector: coords (..., d) -> Clifford (..., 2^d).

        Returns (1/2) sum_j e_j·[x, e_j]; half of it acts by commutator as [x, ·].
        """
        x = np.asarray(x, dtype=complex)
        m = np.einsum("...j,jkl->...lk", x, self.structure)  # ad-matrix per point
        out = np.zeros(x.shape[:-1] + (self.algebra.n_blades,), dtype=complex)
        d = self.d
        for a in range(d):
            for b in range(a + 1, d):
                out[..., (1 << a) | (1 << b)] = m[..., b, a]
        return out

    def ad_tilde(self, x: np.ndarray) -> MultiVector:
        """Differential of the spin lift: half the adjoint bivector."""
        return self.ad_bivector(x) * 0.5


def _sl2_basis() -> np.ndarray:
    i2 = 0.5j
    return np.stack([
        i2 * quat.MAT_I,
        i2 * quat.MAT_J,
        i2 * quat.MAT_K,
    ])


def _gell_mann() -> np.ndarray:
    l = np.zeros((8, 3, 3), dtype=complex)
    l[0, 0, 1] = l[0, 1, 0] = 1
    l[1, 0, 1] = -1j
    l[1, 1, 0] = 1j
    l[2, 0, 0] = 1
    l[2, 1, 1] = -1
    l[3, 0, 2] = l[3, 2, 0] = 1
    l[4, 0, 2] = -1j
    l[4, 2, 0] = 1j
    l[5, 1, 2] = l[5, 2, 1] = 1
    l[6, 1, 2] = -1j
    l[6, 2, 1] = 1j
    l[7, 0, 0] = l[7, 1, 1] = 1 / np.sqrt(3)
    l[7, 2, 2] = -2 / np.sqrt(3)
    return l


def build_sl_n(n: int, lam: float | None = None) -> LieModel:
    """Desk-scale models for n in {2, 3}.

    lambda defaults: 1/2 for n = 2 (half the Killing form), 1/(2n) otherwise.
    The basis is scaled so the Gram matrix of B(X,Y) = lambda·tr(ad X ad Y)
    = 2 n lambda · tr(XY) is exactly the identity.
    """
    if n not in SUPPORTED_N:
        raise ValueError(f"n must be one of {SUPPORTED_N} (desk-scale limit), got {n}")
    if lam is None:
        lam = 0.5 if n == 2 else 1.0 / (2 * n)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    d = n * n - 1
    raw = _sl2_basis() if n == 2 else _gell_mann()
    # tr(raw_a raw_b) = t·delta_ab with t = 1/2 (n=2) or 2 (n=3)
    t = np.trace(raw[0] @ raw[0]).real
    basis = raw / np.sqrt(2 * n * lam * t)  # factor is exactly 1 for n=2, lam=1/2

    structure = np.zeros((d, d, d), dtype=complex)
    scale = 2.0 * n * lam
    for j in range(d):
        for k in range(d):
            br = basis[j] @ basis[k] - basis[k] @ basis[j]
            structure[j, k] = scale * np.einsum("lab,ba->l", basis, br)
    model = LieModel(n=n, lam=lam, basis=basis, structure=structure, algebra=get_algebra(d))
    _validate(model)
    return model


def _validate(model: LieModel, tol: float = 1e-12):
    gram = 2 * model.n * model.lam * np.einsum("iab,jba->ij", model.basis, model.basis)
    if np.max(np.abs(gram - np.eye(model.d))) > tol:
        raise AssertionError("basis is not B-orthonormal")
    if np.max(np.abs(jacobi_residual(model))) > tol:
        raise AssertionError("structure constants violate the Jacobi identity")


def jacobi_residual(model: LieModel) -> np.ndarray:
    """Max-norm Jacobi defect over all basis triples."""
    s = model.structure
    cyc = np.einsum("jkm,mln->jkln", s, s)
    res = cyc + np.einsum("klm,mjn->jkln", s, s) + np.einsum("ljm,mkn->jkln", s, s)
    return np.abs(res).max(axis=-1)


def gram_residual(model: LieModel) -> float:
    gram = 2 * model.n * model.lam * np.einsum("iab,jba->ij", model.basis, model.basis)
    return float(np.max(np.abs(gram - np.eye(model.d))))


@dataclass(frozen=True)
class GroupElement:
    """Spin-group element with an optional n x n matrix representative."""

    spin_rep: MultiVector
    matrix_rep: np.ndarray | None = None

    def unit_defect(self) -> float:
        g = self.spin_rep
        r = g.reverse() * g - MultiVector.one(g.algebra)
        return r.norm()


def lift_Ad(model: LieModel, x: np.ndarray, t: float = 1.0,
            tol: float = 1e-14) -> GroupElement:
    """Spin lift of Ad(exp(tX)) as the Clifford exponential of t·(ad-tilde X).

    Satisfies B'(adt X, adt Y) = (1/4) B(X, Y) with B' = -2·lambda·extended_B,
    and its grade-1 conjugation action matches matrix conjugation by exp(tX).
    """
    try:
        g = clifford_exp(model.ad_tilde(x) * t, tol=tol)
    except ConvergenceError as exc:  # pragma: no cover - diagnostic path
        raise ConvergenceError(f"spin lift failed to converge: {exc}") from exc
    mat = expm(t * model.to_matrix(x))
    return GroupElement(spin_rep=g, matrix_rep=mat)


def cartan_point(model: LieModel, g: GroupElement | MultiVector) -> MultiVector:
    """a·a* with a* = sigma(tau(a)); lands in the totally geodesic Cartan model."""
    a = g.spin_rep if isinstance(g, GroupElement) else g
    return a * a.reverse().sigma()


def vector_action(model: LieModel, g: MultiVector, xi: np.ndarray) -> np.ndarray:
    """Grade-1 conjugation action xi -> g·xi·g^{-1} in coordinates (spin-normalized g)."""
    v = MultiVector.vector(model.algebra, xi)
    return (g * v * g.reverse()).vector_coords()


def matrix_adjoint_action(model: LieModel, mat: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Oracle: Ad(mat)(xi) computed by matrix conjugation and B-projection."""
    m = model.to_matrix(xi)
    return model.from_matrix(mat @ m @ np.linalg.inv(mat))
