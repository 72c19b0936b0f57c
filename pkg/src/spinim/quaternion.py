"""Complex quaternions: the fast exact model of the n = 2 case.

H^C = C·1 + C·I + C·J + C·K with I² = J² = K² = -1, IJ = K. The complex
bilinear (not hermitian) form is H(z, z) = z0² + z1² + z2² + z3².

Elements double as the even Clifford subalgebra of the d = 3 engine through
`to_generic` / `from_generic` (1 -> 1, I -> e2e3, J -> e3e1, K -> e1e2), and
2x2 complex matrices map in through `from_matrix` (det M = H(z_M, z_M)).

Array layout: quaternion fields are complex ndarrays with a trailing axis of
length 4 holding the (1, I, J, K) coefficients; the q* helpers operate on
those and broadcast, which is what the surface pipelines use per grid node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import CliffordAlgebra, MultiVector, get_algebra

# trailing-axis coefficient order
_1, _I, _J, _K = 0, 1, 2, 3


# ---- array kernels -------------------------------------------------------


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product on (..., 4) complex arrays, IJ = K convention."""
    a = np.asarray(a)
    b = np.asarray(b)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


def qconj(a: np.ndarray) -> np.ndarray:
    """Quaternion conjugate a0 - a1 I - a2 J - a3 K (the reversal tau on the even part)."""
    out = -np.asarray(a)
    out[..., 0] = -out[..., 0]
    return out


def qsigma(a: np.ndarray) -> np.ndarray:
    """Coefficient-wise complex conjugation (the real-form involution on the even part)."""
    return np.conj(a)


def qH(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Complex bilinear form H(a, b) = sum_i a_i b_i."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def qinv(a: np.ndarray) -> np.ndarray:
    """Inverse qconj(a)/H(a,a); requires H(a,a) != 0."""
    return qconj(a) / qH(a, a)[..., None]


def qscalar(s, like_shape=()) -> np.ndarray:
    out = np.zeros(like_shape + (4,), dtype=complex)
    out[..., 0] = s
    return out


def qunit_renormalize(a: np.ndarray) -> np.ndarray:
    """Rescale to H(a, a) = 1 (principal square root; drift control after RK steps)."""
    return a / np.sqrt(qH(a, a))[..., None]


QUAT_ONE = np.array([1.0, 0, 0, 0], dtype=complex)
QUAT_I = np.array([0, 1.0, 0, 0], dtype=complex)
QUAT_J = np.array([0, 0, 1.0, 0], dtype=complex)
QUAT_K = np.array([0, 0, 0, 1.0], dtype=complex)


def qexp(a: np.ndarray, tol: float = 1e-15, max_terms: int = 60) -> np.ndarray:
    """Power-series exponential on (...,4) arrays (small desk-scale arguments)."""
    a = np.asarray(a, dtype=complex)
    term = np.zeros_like(a)
    term[..., 0] = 1.0
    acc = term.copy()
    for k in range(1, max_terms + 1):
        term = qmul(term, a) / k
        acc = acc + term
        if np.max(np.abs(term)) < tol:
            return acc
    raise RuntimeError("quaternion exp series did not converge")


# ---- scalar value type ----------------------------------------------------


@dataclass(frozen=True)
class CQuaternion:
    """Immutable complex quaternion z0 + z1 I + z2 J + z3 K."""

    z0: complex = 0.0
    z1: complex = 0.0
    z2: complex = 0.0
    z3: complex = 0.0

    @staticmethod
    def from_array(a: np.ndarray) -> "CQuaternion":
        a = np.asarray(a).reshape(4)
        return CQuaternion(complex(a[0]), complex(a[1]), complex(a[2]), complex(a[3]))

    def array(self) -> np.ndarray:
        return np.array([self.z0, self.z1, self.z2, self.z3], dtype=complex)

    def __add__(self, other: "CQuaternion") -> "CQuaternion":
        return CQuaternion.from_array(self.array() + other.array())

    def __sub__(self, other: "CQuaternion") -> "CQuaternion":
        return CQuaternion.from_array(self.array() - other.array())

    def __neg__(self) -> "CQuaternion":
        return CQuaternion.from_array(-self.array())

    def __mul__(self, other):
        if isinstance(other, CQuaternion):
            return CQuaternion.from_array(qmul(self.array(), other.array()))
        return CQuaternion.from_array(self.array() * other)

    def __rmul__(self, other):
        return CQuaternion.from_array(other * self.array())

    def conj(self) -> "CQuaternion":
        return CQuaternion.from_array(qconj(self.array()))

    def sigma(self) -> "CQuaternion":
        return CQuaternion.from_array(qsigma(self.array()))

    def H(self, other: "CQuaternion") -> complex:
        return complex(qH(self.array(), other.array()))

    def inverse(self) -> "CQuaternion":
        return CQuaternion.from_array(qinv(self.array()))

    def isclose(self, other: "CQuaternion", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.array() - other.array())) <= tol)

    def __repr__(self):
        return f"CQuaternion({self.z0:.6g}, {self.z1:.6g}, {self.z2:.6g}, {self.z3:.6g})"


ONE = CQuaternion(1)
I = CQuaternion(0, 1)
J = CQuaternion(0, 0, 1)
K = CQuaternion(0, 0, 0, 1)


def cq_product(a: CQuaternion, b: CQuaternion) -> CQuaternion:
    """Associative algebra product; H(ab, ab) = H(a,a)·H(b,b)."""
    return a * b


# ---- 2x2 matrix model ------------------------------------------------------

# Matrices of the quaternion units under the algebra isomorphism M_2(C) = H^C.
MAT_1 = np.eye(2, dtype=complex)
MAT_I = np.array([[1j, 0], [0, -1j]])
MAT_J = np.array([[0, 1], [-1, 0]], dtype=complex)
MAT_K = np.array([[0, 1j], [1j, 0]])


def from_matrix(m: np.ndarray) -> CQuaternion:
    """Algebra isomorphism M_2(C) -> H^C with det M = H(z_M, z_M).

    z_M = ((a+d) + i(d-a) I + (b-c) J - i(b+c) K) / 2.
    """
    m = np.asarray(m, dtype=complex)
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    return CQuaternion(
        0.5 * (a + d),
        0.5j * (d - a),
        0.5 * (b - c),
        -0.5j * (b + c),
    )


def to_matrix(q: CQuaternion) -> np.ndarray:
    return q.z0 * MAT_1 + q.z1 * MAT_I + q.z2 * MAT_J + q.z3 * MAT_K


def from_matrix_array(m: np.ndarray) -> np.ndarray:
    """Batched from_matrix: (..., 2, 2) -> (..., 4)."""
    m = np.asarray(m, dtype=complex)
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    return np.stack([0.5 * (a + d), 0.5j * (d - a), 0.5 * (b - c), -0.5j * (b + c)], axis=-1)


# ---- Clifford embedding of vectors and the even-subalgebra dictionary ------


def psi_embed(z: CQuaternion) -> tuple[CQuaternion, CQuaternion]:
    """Clifford embedding of a Lie-algebra vector as a diagonal block pair (-2iz, 2iz).

    Satisfies (psi(z))² = -B(z,z)·1 blockwise with B(z,z) = -4(z1²+z2²+z3²).
    Rejects elements with a scalar part, which do not lie in the Lie algebra.
    """
    if abs(z.z0) > 1e-14:
        raise ValueError("vector embedding requires zero scalar part")
    return (-2j * z, 2j * z)


def B_form(z: CQuaternion, w: CQuaternion) -> complex:
    """B(z, w) = -4(z1 w1 + z2 w2 + z3 w3) on the Lie algebra C·I + C·J + C·K."""
    return -4.0 * (z.z1 * w.z1 + z.z2 * w.z2 + z.z3 * w.z3)


@dataclass(frozen=True)
class SpinorPair:
    """Components of an even element in the two left ideals (C + CJ)(1 -/+ iI)."""

    plus: CQuaternion
    minus: CQuaternion

    def total(self) -> CQuaternion:
        return self.plus + self.minus


IDEMPOTENT_PLUS = CQuaternion(0.5, -0.5j)   # (1 - iI)/2, right factor for the + ideal
IDEMPOTENT_MINUS = CQuaternion(0.5, 0.5j)   # (1 + iI)/2


def split_even(a: CQuaternion) -> SpinorPair:
    """Split by right multiplication with the idempotents (1 -/+ iI)/2."""
    return SpinorPair(plus=a * IDEMPOTENT_PLUS, minus=a * IDEMPOTENT_MINUS)


def split_even_array(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return qmul(a, IDEMPOTENT_PLUS.array()), qmul(a, IDEMPOTENT_MINUS.array())


# Even-subalgebra blade masks in the d = 3 engine (0-based bits):
# I -> e2·e3 = mask 0b110, J -> e3·e1 = -e1·e3 -> mask 0b101 with sign -1,
# K -> e1·e2 = mask 0b011.
_EVEN_MASKS = (0b000, 0b110, 0b101, 0b011)
_EVEN_SIGNS = (1.0, 1.0, -1.0, 1.0)


def to_generic(a: CQuaternion, alg: CliffordAlgebra | None = None) -> MultiVector:
    """Isomorphism onto the even subalgebra of the d = 3 Clifford engine.

    Intertwines the product, tau and sigma: quaternion conjugation matches the
    reversal, coefficient conjugation matches the real-form involution.
    """
    alg = alg or get_algebra(3)
    if alg.dim != 3:
        raise ValueError("even-subalgebra dictionary requires d = 3")
    c = np.zeros(alg.n_blades, dtype=complex)
    for coeff, mask, sign in zip(a.array(), _EVEN_MASKS, _EVEN_SIGNS):
        c[mask] = sign * coeff
    return MultiVector(alg, c)


def from_generic(m: MultiVector, tol: float = 1e-12) -> CQuaternion:
    """Inverse dictionary; rejects elements with an odd part."""
    if m.algebra.dim != 3:
        raise ValueError("even-subalgebra dictionary requires d = 3")
    odd = m.grade(1).norm() + m.grade(3).norm()
    if odd > tol:
        raise ValueError(f"element has odd part of norm {odd:.3g}")
    return CQuaternion(*(sign * m.coeffs[mask] for mask, sign in zip(_EVEN_MASKS, _EVEN_SIGNS)))


def quat_array_to_generic(a: np.ndarray) -> np.ndarray:
    """Batched even embedding: (..., 4) quaternion fields -> (..., 8) Clifford fields."""
    a = np.asarray(a, dtype=complex)
    out = np.zeros(a.shape[:-1] + (8,), dtype=complex)
    for i, (mask, sign) in enumerate(zip(_EVEN_MASKS, _EVEN_SIGNS)):
        out[..., mask] = sign * a[..., i]
    return out


def generic_to_quat_array(c: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    c = np.asarray(c)
    odd = max(np.max(np.abs(c[..., [0b001, 0b010, 0b100, 0b111]])), 0.0)
    if odd > tol:
        raise ValueError(f"field has odd part of max magnitude {odd:.3g}")
    return np.stack([sign * c[..., mask] for mask, sign in zip(_EVEN_MASKS, _EVEN_SIGNS)], axis=-1)


# The central volume element omega_C = i·e1·e2·e3 as a diagonal block pair; it
# squares to -1 (blocks diag(-i, +i) of the matrix model).
OMEGA_C_BLOCKS = (CQuaternion(-1j), CQuaternion(1j))
