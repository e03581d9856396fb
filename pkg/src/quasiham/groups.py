"""Matrix-group foundations: GL_n(C) with a fixed Borel pair.

Conventions are fixed once and for all: B+ is upper triangular, B- lower
triangular, T the invertible diagonal matrices, U+/- the unitriangular
subgroups.  The invariant bilinear form on gl_n is (A, B) = tr(AB).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "GroupContext",
    "GroupElement",
    "AlgebraElement",
    "CartanElement",
    "CartanRegularity",
    "trace_form",
    "delta_cartan",
    "delta_borel",
    "epsilon",
    "cartan_regularity",
]

# Construction-time checks guard programmer error, not ill conditioning.
INVERTIBILITY_RTOL = 1e-12
TRIANGULARITY_RTOL = 1e-12
INTEGRALITY_ATOL = 1e-9


def _as_matrix(x) -> np.ndarray:
    """Coerce a wrapper type or array-like to a complex square matrix."""
    m = getattr(x, "mat", x)
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class GroupContext:
    """GL_n(C) together with the standard Borel pair."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix size must be positive")

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=complex)

    def gl_basis(self) -> np.ndarray:
        """Elementary-matrix basis of gl_n, shape (n*n, n, n), row-major."""
        n = self.n
        basis = np.zeros((n * n, n, n), dtype=complex)
        for a in range(n * n):
            basis[a, a // n, a % n] = 1.0
        return basis

    def strict_indices(self, lower: bool) -> list[tuple[int, int]]:
        """Row-major index list of the strictly lower/upper triangle."""
        n = self.n
        if lower:
            return [(i, j) for i in range(n) for j in range(n) if i > j]
        return [(i, j) for i in range(n) for j in range(n) if i < j]


@dataclass(frozen=True)
class GroupElement:
    """An invertible n x n complex matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.mat)
        object.__setattr__(self, "mat", m)
        m.setflags(write=False)
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= INVERTIBILITY_RTOL * max(s[0], np.finfo(float).tiny):
            raise ValueError("matrix is singular within tolerance")

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def inverse(self) -> "GroupElement":
        return GroupElement(np.linalg.inv(self.mat))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.mat @ _as_matrix(other))


@dataclass(frozen=True)
class AlgebraElement:
    """An arbitrary n x n complex matrix, an element of gl_n."""

    mat: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.mat)
        object.__setattr__(self, "mat", m)
        m.setflags(write=False)

    @property
    def n(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class CartanElement:
    """A diagonal matrix, stored by its diagonal."""

    diag: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.diag, dtype=complex))
        if d.ndim != 1:
            raise ValueError("diagonal must be one-dimensional")
        object.__setattr__(self, "diag", d)
        d.setflags(write=False)

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    @property
    def mat(self) -> np.ndarray:
        return np.diag(self.diag)


class CartanRegularity(NamedTuple):
    regular: bool
    affine_regular: bool


def trace_form(a, b) -> complex:
    """The invariant bilinear form (A, B) = tr(AB) on gl_n."""
    am, bm = _as_matrix(a), _as_matrix(b)
    if am.shape != bm.shape:
        raise ValueError(f"size mismatch: {am.shape} vs {bm.shape}")
    return complex(np.trace(am @ bm))


def delta_cartan(x) -> CartanElement:
    """Projection g -> t along the root spaces: the diagonal of x."""
    return CartanElement(np.diagonal(_as_matrix(x)))


def _triangularity(m: np.ndarray) -> tuple[bool, bool]:
    scale = max(np.abs(m).max(), np.finfo(float).tiny)
    tol = TRIANGULARITY_RTOL * scale
    lower_part = np.abs(np.tril(m, -1)).max() if m.shape[0] > 1 else 0.0
    upper_part = np.abs(np.triu(m, 1)).max() if m.shape[0] > 1 else 0.0
    return upper_part <= tol, lower_part <= tol  # (is_lower, is_upper)


def is_triangular(b) -> bool:
    """True if b is upper or lower triangular within tolerance."""
    is_lo, is_up = _triangularity(_as_matrix(b))
    return is_lo or is_up


def delta_borel(b) -> GroupElement:
    """The homomorphism B+/- -> T with kernel U+/-: the diagonal part.

    Raises on input that is not triangular within tolerance.
    """
    m = _as_matrix(b)
    if not is_triangular(m):
        raise ValueError("delta_borel requires a triangular matrix")
    return GroupElement(np.diag(np.diagonal(m)))


def epsilon(lam, k: int) -> GroupElement:
    """The diagonal element exp(pi*i*Lambda/(k-1)); defined for k >= 2."""
    if k < 2:
        raise ValueError("epsilon is defined for pole order k >= 2")
    d = lam.diag if isinstance(lam, CartanElement) else np.asarray(lam, dtype=complex)
    return GroupElement(np.diag(np.exp(1j * np.pi * d / (k - 1))))


def cartan_regularity(lam) -> CartanRegularity:
    """Regularity predicates for a Cartan element.

    regular: pairwise-distinct diagonal entries.  affine_regular: no two
    entries differ by an integer (entrywise test with absolute tolerance
    1e-9 on the distance of the real part to the nearest integer plus the
    magnitude of the imaginary part).
    """
    d = lam.diag if isinstance(lam, CartanElement) else np.asarray(lam, dtype=complex)
    n = d.shape[0]
    regular = True
    affine = True
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            diff = d[i] - d[j]
            if abs(diff) <= INTEGRALITY_ATOL:
                regular = False
            dist = abs(diff.real - round(diff.real)) + abs(diff.imag)
            if dist <= INTEGRALITY_ATOL:
                affine = False
    return CartanRegularity(regular=regular, affine_regular=affine)
