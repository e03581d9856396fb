"""Shared numerical helpers: rank decisions, Gauss decomposition, sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "RankResult",
    "numerical_rank",
    "null_space",
    "ul_decompose",
    "FactorizationError",
    "rand_disc",
    "rand_gl",
    "rel_residual",
]

RANK_RTOL = 1e-7
RANK_GAP = 10.0


class FactorizationError(RuntimeError):
    """Triangular factorization hit a (near-)vanishing pivot."""


@dataclass(frozen=True)
class RankResult:
    rank: int
    conclusive: bool
    singular_values: np.ndarray

    @property
    def kernel_dim_of(self) -> int:
        return self.singular_values.shape[0] - self.rank


def numerical_rank(singular_values: np.ndarray, rtol: float = RANK_RTOL,
                   gap: float = RANK_GAP) -> RankResult:
    """Rank from singular values with a mandatory spectral gap.

    Values above rtol * max are counted; the decision is conclusive only if
    the smallest counted value exceeds the largest discarded one by the gap
    factor (borderline cases must be confessed, never silently passed).
    """
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        return RankResult(0, True, s)
    s = np.sort(s)[::-1]
    cut = rtol * max(s[0], np.finfo(float).tiny)
    rank = int(np.sum(s > cut))
    if rank == 0 or rank == s.size:
        return RankResult(rank, True, s)
    conclusive = s[rank - 1] >= gap * max(s[rank], np.finfo(float).tiny)
    return RankResult(rank, conclusive, s)


def null_space(mat: np.ndarray, rtol: float = RANK_RTOL,
               gap: float = RANK_GAP) -> tuple[np.ndarray, RankResult]:
    """Orthonormal basis of the numerical kernel (columns) plus rank data."""
    mat = np.asarray(mat, dtype=complex)
    u, s, vh = np.linalg.svd(mat)
    # svd of an (r, c) matrix returns min(r, c) values; pad so that rank
    # bookkeeping sees all c columns of the domain.
    full = np.zeros(mat.shape[1])
    full[: s.shape[0]] = s
    rr = numerical_rank(full, rtol=rtol, gap=gap)
    basis = vh[rr.rank:].conj().T
    return basis, rr


def ul_decompose(w: np.ndarray, pivot_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Factor w = u0 @ diag(tau) @ l0 with u0 unit upper, l0 unit lower.

    Exists for generic w; raises FactorizationError when a pivot is too small
    relative to the matrix scale (caller resamples).
    """
    w = np.asarray(w, dtype=complex)
    n = w.shape[0]
    rev = np.arange(n)[::-1]
    wr = w[np.ix_(rev, rev)]
    scale = max(np.abs(w).max(), np.finfo(float).tiny)
    # Doolittle LU without pivoting on the reversed matrix.
    lo = np.eye(n, dtype=complex)
    up = np.zeros((n, n), dtype=complex)
    for i in range(n):
        up[i, i:] = wr[i, i:] - lo[i, :i] @ up[:i, i:]
        if abs(up[i, i]) <= pivot_tol * scale:
            raise FactorizationError(f"pivot {i} below tolerance; non-generic input")
        if i + 1 < n:
            lo[i + 1:, i] = (wr[i + 1:, i] - lo[i + 1:, :i] @ up[:i, i]) / up[i, i]
    lu = lo[np.ix_(rev, rev)]  # unit upper
    ud = up[np.ix_(rev, rev)]  # lower, diagonal = pivots
    tau = np.diagonal(ud).copy()
    l0 = ud / tau[:, None]
    return lu, tau, l0


def rand_disc(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform samples from the complex unit disc."""
    r = np.sqrt(rng.uniform(size=shape))
    phi = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return r * np.exp(1j * phi)


def rand_gl(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random GL_n element: exp of a matrix with unit-disc entries."""
    return scipy.linalg.expm(rand_disc(rng, (n, n)))


def rel_residual(delta: float, *magnitudes: float) -> float:
    """Absolute residual over max(1, largest contributing magnitude)."""
    denom = max(1.0, *(abs(m) for m in magnitudes)) if magnitudes else 1.0
    return float(abs(delta)) / denom
