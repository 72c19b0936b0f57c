"""Complex Clifford algebra over a d-dimensional quadratic space with B-orthonormal basis.

The generating relation is u·u = -B(u,u), so every basis vector squares to -1.
Elements are stored densely as complex coefficient vectors of length 2^d indexed
by blade bitmasks: bit i set in ``mask`` means the basis vector e_{i+1} is a
factor of the blade, factors ordered by increasing index.

Two product kernels are provided: a fast bit-twiddling sign kernel used
everywhere, and a slow transposition-counting oracle (`_blade_product_slow`)
kept for cross-checking, since sign bugs are the dominant failure mode in this
kind of code.

Conventions:
    reverse (tau):  grade-k blade scaled by (-1)^(k(k-1)/2); anti-automorphism.
    sigma:          grade-k coefficient c -> (-1)^k * conj(c); algebra
                    automorphism (the real-form involution written in a basis
                    of the noncompact factor).
    extended_B:     complex-bilinear, blades are unit and mutually orthogonal,
                    so it is the plain coefficient dot product (no conjugation).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 12  # 2^12 coefficients; desk scale tops out at d = 8 (sl_3)

TOL_ALGEBRAIC = 1e-10  # default absolute tolerance for algebraic identity checks


class DimensionMismatchError(ValueError):
    """Operands live in Clifford algebras of different dimension."""


class ConvergenceError(RuntimeError):
    """An iterative kernel (exponential series) failed to converge."""


def _popcount_array(masks: np.ndarray) -> np.ndarray:
    out = np.zeros_like(masks)
    m = masks.copy()
    while m.any():
        out += m & 1
        m >>= 1
    return out


def _reorder_sign(a: int, b: int) -> int:
    """(-1)^t where t = #{(i,j): i in a, j in b, i > j}.

    This is the sign from interleaving the concatenated factor list e_a e_b
    into canonical increasing order, before contracting repeated vectors.
    """
    s = 0
    a >>= 1
    while a:
        s += bin(a & b).count("1")
        a >>= 1
    return -1 if s & 1 else 1


def _blade_product_slow(a_mask: int, b_mask: int) -> tuple[int, int]:
    """Transposition-counting oracle for one blade product.

    Concatenates the index lists, bubble-sorts counting swaps, contracts equal
    neighbours with e_i·e_i = -1. Returns (result_mask, sign).
    """
    factors = [i for i in range(a_mask.bit_length()) if a_mask >> i & 1]
    factors += [i for i in range(b_mask.bit_length()) if b_mask >> i & 1]
    sign = 1
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(factors):
            if factors[i] > factors[i + 1]:
                factors[i], factors[i + 1] = factors[i + 1], factors[i]
                sign = -sign
                changed = True
            elif factors[i] == factors[i + 1]:
                del factors[i : i + 2]
                sign = -sign  # e_i ^2 = -1
                changed = True
            else:
                i += 1
    mask = 0
    for i in factors:
        mask |= 1 << i
    return mask, sign


class CliffordAlgebra:
    """Product tables and array kernels for Cl of a given complex dimension d."""

    def __init__(self, dim: int):
        if not 0 < dim <= MAX_DIM:
            raise ValueError(f"dim must be in 1..{MAX_DIM}, got {dim}")
        self.dim = dim
        self.n_blades = 1 << dim
        masks = np.arange(self.n_blades, dtype=np.int64)
        self.grades = _popcount_array(masks).astype(np.int64)
        # sign[i, j] and xor index for e_i · e_j = sign * e_{i^j}
        sign = np.empty((self.n_blades, self.n_blades), dtype=np.int8)
        for i in range(self.n_blades):
            for j in range(self.n_blades):
                s = _reorder_sign(i, j)
                common = bin(i & j).count("1")
                if common & 1:
                    s = -s
                sign[i, j] = s
        self.sign = sign
        self.xor_idx = masks[:, None] ^ masks[None, :]
        self.reverse_signs = np.where(self.grades * (self.grades - 1) // 2 % 2, -1, 1).astype(np.int8)
        self.sigma_signs = np.where(self.grades % 2, -1, 1).astype(np.int8)

    # ---- array kernels: operate on (..., n_blades) complex arrays ----

    def product_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Batched Clifford product on (..., n_blades) arrays.

        Loops over the active blades of the sparser operand (transport
        generators are bivectors, rotors are even), vectorizing the other
        side and the batch axes.
        """
        a, b = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
        out = np.zeros(a.shape, dtype=complex)
        batch_axes = tuple(range(a.ndim - 1))
        act_a = np.flatnonzero(np.any(a != 0, axis=batch_axes) if batch_axes else a != 0)
        act_b = np.flatnonzero(np.any(b != 0, axis=batch_axes) if batch_axes else b != 0)
        if len(act_a) <= len(act_b):
            for i in act_a:
                out[..., self.xor_idx[i, :]] += (self.sign[i, :] * b) * a[..., i, None]
        else:
            for j in act_b:
                out[..., self.xor_idx[:, j]] += (self.sign[:, j] * a) * b[..., j, None]
        return out

    def reverse_array(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a) * self.reverse_signs

    def sigma_array(self, a: np.ndarray) -> np.ndarray:
        return np.conj(a) * self.sigma_signs

    def commutator_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.product_array(a, b) - self.product_array(b, a)

    def extended_B_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Complex-bilinear extension of B; orthonormal blades are unit vectors."""
        return np.sum(np.asarray(a) * np.asarray(b), axis=-1)

    def scalar_part(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a)[..., 0]

    def grade_project_array(self, a: np.ndarray, k: int) -> np.ndarray:
        out = np.zeros_like(np.asarray(a))
        sel = self.grades == k
        out[..., sel] = np.asarray(a)[..., sel]
        return out

    def vector_array(self, coords: np.ndarray) -> np.ndarray:
        """Grade-1 element(s) from coordinate vectors of shape (..., d)."""
        coords = np.asarray(coords, dtype=complex)
        out = np.zeros(coords.shape[:-1] + (self.n_blades,), dtype=complex)
        for i in range(self.dim):
            out[..., 1 << i] = coords[..., i]
        return out

    def vector_coords(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a)
        return np.stack([a[..., 1 << i] for i in range(self.dim)], axis=-1)

    def exp_array(self, b: np.ndarray, tol: float = 1e-14, max_terms: int = 200) -> np.ndarray:
        """exp of (batched) elements by scaled power series with squaring."""
        b = np.asarray(b, dtype=complex)
        norm = np.max(np.sum(np.abs(b), axis=-1)) if b.size else 0.0
        n_sq = max(0, int(np.ceil(np.log2(max(norm, 1e-30) / 0.5))))
        bs = b / (1 << n_sq)
        term = np.zeros_like(bs)
        term[..., 0] = 1.0
        acc = term.copy()
        for k in range(1, max_terms + 1):
            term = self.product_array(term, bs) / k
            acc += term
            if np.max(np.abs(term)) < tol:
                break
        else:
            raise ConvergenceError(f"exp series did not converge in {max_terms} terms")
        for _ in range(n_sq):
            acc = self.product_array(acc, acc)
        return acc

    def unit_renormalize(self, g: np.ndarray) -> np.ndarray:
        """Rescale so the scalar part of tau(g)·g is exactly 1 (spin normalization)."""
        s = self.scalar_part(self.product_array(self.reverse_array(g), g))
        return g / np.sqrt(s)[..., None]


@lru_cache(maxsize=None)
def get_algebra(dim: int) -> CliffordAlgebra:
    return CliffordAlgebra(dim)


@dataclass(frozen=True)
class MultiVector:
    """Immutable element of Cl; thin value wrapper over the array kernels."""

    algebra: CliffordAlgebra
    coeffs: np.ndarray  # (n_blades,) complex

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.shape != (self.algebra.n_blades,):
            raise ValueError("coefficient vector has wrong length")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction helpers -------------------------------------------------

    @staticmethod
    def zero(alg: CliffordAlgebra) -> "MultiVector":
        return MultiVector(alg, np.zeros(alg.n_blades, dtype=complex))

    @staticmethod
    def scalar(alg: CliffordAlgebra, value: complex) -> "MultiVector":
        c = np.zeros(alg.n_blades, dtype=complex)
        c[0] = value
        return MultiVector(alg, c)

    @staticmethod
    def one(alg: CliffordAlgebra) -> "MultiVector":
        return MultiVector.scalar(alg, 1.0)

    @staticmethod
    def basis_vector(alg: CliffordAlgebra, i: int) -> "MultiVector":
        c = np.zeros(alg.n_blades, dtype=complex)
        c[1 << i] = 1.0
        return MultiVector(alg, c)

    @staticmethod
    def blade(alg: CliffordAlgebra, indices: Iterable[int], value: complex = 1.0) -> "MultiVector":
        """Canonical blade e_{i1}···e_{ik} for strictly increasing 0-based indices."""
        idx = list(indices)
        if sorted(set(idx)) != idx:
            raise ValueError("blade indices must be strictly increasing")
        mask = 0
        for i in idx:
            mask |= 1 << i
        c = np.zeros(alg.n_blades, dtype=complex)
        c[mask] = value
        return MultiVector(alg, c)

    @staticmethod
    def vector(alg: CliffordAlgebra, coords: Sequence[complex]) -> "MultiVector":
        return MultiVector(alg, alg.vector_array(np.asarray(coords, dtype=complex)))

    # arithmetic ------------------------------------------------------------

    def _check(self, other: "MultiVector"):
        if self.algebra.dim != other.algebra.dim:
            raise DimensionMismatchError(
                f"dim {self.algebra.dim} vs {other.algebra.dim}")

    def __add__(self, other):
        if isinstance(other, MultiVector):
            self._check(other)
            return MultiVector(self.algebra, self.coeffs + other.coeffs)
        return self + MultiVector.scalar(self.algebra, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, MultiVector):
            self._check(other)
            return MultiVector(self.algebra, self.coeffs - other.coeffs)
        return self - MultiVector.scalar(self.algebra, other)

    def __rsub__(self, other):
        return MultiVector.scalar(self.algebra, other) - self

    def __neg__(self):
        return MultiVector(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, MultiVector):
            self._check(other)
            return MultiVector(self.algebra, self.algebra.product_array(self.coeffs, other.coeffs))
        return MultiVector(self.algebra, self.coeffs * other)

    def __rmul__(self, other):
        if isinstance(other, MultiVector):  # pragma: no cover - dispatch safety
            return other.__mul__(self)
        return MultiVector(self.algebra, other * self.coeffs)

    def __truediv__(self, scalar):
        return MultiVector(self.algebra, self.coeffs / scalar)

    # involutions and extractions -------------------------------------------

    def reverse(self) -> "MultiVector":
        return MultiVector(self.algebra, self.algebra.reverse_array(self.coeffs))

    def sigma(self) -> "MultiVector":
        return MultiVector(self.algebra, self.algebra.sigma_array(self.coeffs))

    def grade(self, k: int) -> "MultiVector":
        return MultiVector(self.algebra, self.algebra.grade_project_array(self.coeffs, k))

    def grades_present(self, tol: float = 1e-14) -> list[int]:
        return sorted({int(g) for g, c in zip(self.algebra.grades, self.coeffs) if abs(c) > tol})

    def scalar_part(self) -> complex:
        return complex(self.coeffs[0])

    def vector_coords(self) -> np.ndarray:
        return self.algebra.vector_coords(self.coeffs)

    def norm(self) -> float:
        """Coefficient 2-norm (storage norm, not the bilinear form)."""
        return float(np.linalg.norm(self.coeffs))

    def inverse_spin(self) -> "MultiVector":
        """Inverse of a spin-normalized element, tau(g) (valid when tau(g)g = 1)."""
        return self.reverse()

    def isclose(self, other: "MultiVector", tol: float = TOL_ALGEBRAIC) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)

    def __repr__(self):
        terms = []
        for mask, c in enumerate(self.coeffs):
            if abs(c) < 1e-14:
                continue
            name = "1" if mask == 0 else "e" + "".join(str(i + 1) for i in range(self.algebra.dim) if mask >> i & 1)
            terms.append(f"({c:.4g})*{name}")
        return " + ".join(terms) if terms else "0"


# ---- module-level operations (the public operation surface) ----


def product(a: MultiVector, b: MultiVector) -> MultiVector:
    """Clifford product; associative, bilinear, e_i·e_j = -e_j·e_i, e_i·e_i = -1."""
    return a * b


def reverse(a: MultiVector) -> MultiVector:
    """Order-reversing anti-automorphism tau."""
    return a.reverse()


def sigma(a: MultiVector) -> MultiVector:
    """Real-form involution: (-1)^grade times coefficient conjugation."""
    return a.sigma()


def commutator(a: MultiVector, b: MultiVector) -> MultiVector:
    """[a, b] = a·b - b·a."""
    a._check(b)
    return MultiVector(a.algebra, a.algebra.commutator_array(a.coeffs, b.coeffs))


def extended_B(a: MultiVector, b: MultiVector) -> complex:
    """Bilinear symmetric extension of B to the whole algebra.

    Blades of the orthonormal basis are unit and mutually orthogonal; on mixed
    grades the pairing vanishes. Equals the coefficient of 1 in reverse(b)·a
    with a (-1)^grade parity correction (see tests for the cross-check).
    """
    a._check(b)
    return complex(a.algebra.extended_B_array(a.coeffs, b.coeffs))


def check_skew(matrix: np.ndarray, tol: float = TOL_ALGEBRAIC) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("skew operator must be a square matrix")
    if np.max(np.abs(m + m.T)) > tol:
        raise ValueError("matrix is not skew-symmetric in the orthonormal basis")
    return m


def bivector_of_skew(alg: CliffordAlgebra, matrix: np.ndarray) -> MultiVector:
    """Grade-2 representative of a skew operator: (1/4) sum_j e_j·u(e_j).

    The commutator action [result, xi] recovers u(xi) for every vector xi.
    Column j of ``matrix`` holds the coordinates of u(e_j).
    """
    m = check_skew(matrix)
    if m.shape[0] != alg.dim:
        raise DimensionMismatchError("matrix size does not match algebra dimension")
    c = np.zeros(alg.n_blades, dtype=complex)
    for a in range(alg.dim):
        for b in range(a + 1, alg.dim):
            # (1/4)(e_a·u(e_a) + e_b·u(e_b)) contributes (m[b,a] - m[a,b])/4 on e_a e_b
            c[(1 << a) | (1 << b)] = 0.25 * (m[b, a] - m[a, b])
    return MultiVector(alg, c)


def mixed_bivector(
    alg: CliffordAlgebra,
    matrix: np.ndarray,
    tangent: Sequence[int],
    normal: Sequence[int],
) -> MultiVector:
    """Grade-2 representative (1/2) sum_{t in tangent} e_t·u(e_t) of a map
    u: span(tangent) -> span(normal).

    ``matrix[a, t]`` is the coefficient of e_{normal[a]} in u(e_{tangent[t]}).
    The commutator action sends xi_p + xi_q to u(xi_p) - u*(xi_q).
    """
    m = np.asarray(matrix, dtype=complex)
    tangent = list(tangent)
    normal = list(normal)
    if set(tangent) & set(normal):
        raise ValueError("tangent and normal index sets overlap")
    if max(tangent + normal) >= alg.dim:
        raise DimensionMismatchError("block indices exceed algebra dimension")
    if m.shape != (len(normal), len(tangent)):
        raise ValueError(f"matrix shape {m.shape} inconsistent with blocks "
                         f"({len(normal)}, {len(tangent)})")
    c = np.zeros(alg.n_blades, dtype=complex)
    for tj, t in enumerate(tangent):
        for aj, a in enumerate(normal):
            lo, hi = (t, a) if t < a else (a, t)
            sgn = 1.0 if t < a else -1.0  # e_t e_a vs canonical e_lo e_hi
            c[(1 << lo) | (1 << hi)] += 0.5 * sgn * m[aj, tj]
    return MultiVector(alg, c)


def clifford_exp(b: MultiVector, tol: float = 1e-14, max_terms: int = 200,
                 require_bivector: bool = True) -> MultiVector:
    """Power-series exponential, truncated when the term norm drops below tol.

    With a bivector argument the result g satisfies tau(g)·g = 1 to rounding.
    """
    if require_bivector and b.grades_present() not in ([], [2]):
        raise ValueError(f"exponent must be a pure bivector, has grades {b.grades_present()}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    return MultiVector(b.algebra, b.algebra.exp_array(b.coeffs, tol=tol, max_terms=max_terms))


def skew_from_bivector_action(alg: CliffordAlgebra, biv: MultiVector) -> np.ndarray:
    """Matrix of xi -> [biv, xi] on the vector grade (oracle for Lemma-style tests)."""
    cols = []
    for j in range(alg.dim):
        e = MultiVector.basis_vector(alg, j)
        cols.append(commutator(biv, e).vector_coords())
    return np.stack(cols, axis=-1)
