"""Conjugacy classes of GL_n with the conjugation action.

The space is presented intrinsically: the chart at a class element m is a
slice through a complement of the centralizer, so the Gram matrix of the
two-form sees exactly the class tangent space.  The pullback form on the
covering chart C -> C^{-1} g0 C over all of G is exposed separately for
cross-checking the two descriptions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..groups import GroupContext
from ..jets import Jet2
from ..numeric import numerical_rank, rand_gl
from .base import Evaluation, Factor, OmegaTerm, OneForm, QHSpace, leftexp_block

__all__ = [
    "ClassPoint",
    "ConjugacyClass",
    "conjugacy_class",
    "conjugacy_intrinsic_form",
    "conjugacy_cover_form",
]


@dataclass(frozen=True)
class ClassPoint:
    """A class element together with the slice basis used by its chart."""

    mat: np.ndarray
    slice_basis: np.ndarray  # (dim, n, n), orthonormal rows transversal to the centralizer


def _ad_operator(m: np.ndarray) -> np.ndarray:
    """X -> mX - Xm on row-major vec coordinates."""
    n = m.shape[0]
    eye = np.eye(n, dtype=complex)
    return np.kron(m, eye) - np.kron(eye, m.T)


class ConjugacyClass(QHSpace):
    label = "conjugacy"

    def __init__(self, g0, ctx: GroupContext | None = None):
        g0 = np.asarray(getattr(g0, "mat", g0), dtype=complex)
        self.ctx = ctx or GroupContext(g0.shape[0])
        self.g0 = g0
        rr = numerical_rank(np.linalg.svd(_ad_operator(g0), compute_uv=False))
        self.dim = rr.rank
        self.factors = (Factor("G"),)
        self.omega_terms = (
            OmegaTerm(0.5, OneForm("R", "C"), OneForm("R", "C", conj="m0")),
        )

    def point_at(self, m: np.ndarray) -> ClassPoint:
        m = np.asarray(m, dtype=complex)
        _, s, vh = np.linalg.svd(_ad_operator(m))
        rr = numerical_rank(s)
        if rr.rank != self.dim:
            raise ValueError("element has a different orbit type than the base point")
        n = self.ctx.n
        basis = vh[: self.dim].conj().reshape(self.dim, n, n)
        return ClassPoint(m, basis)

    def random_point(self, rng: np.random.Generator) -> ClassPoint:
        c = rand_gl(rng, self.ctx.n)
        return self.point_at(np.linalg.inv(c) @ self.g0 @ c)

    def evaluate(self, p: ClassPoint, seeds: np.ndarray, order2: bool = False) -> Evaluation:
        C = leftexp_block(self.ctx.identity, seeds, p.slice_basis, order2)
        m0 = Jet2(p.mat)
        mu = C.inv() @ m0 @ C
        return Evaluation({"C": C, "m0": m0, "mu": mu})

    def moment_name(self, ifactor: int) -> str:
        return "mu"

    def _slice_coords(self, p: ClassPoint, X: np.ndarray) -> np.ndarray:
        """Coefficients of the slice component of X (mod the centralizer)."""
        return np.einsum("aij,ij->a", p.slice_basis.conj(), X)

    def act(self, ifactor: int, g: np.ndarray, p: ClassPoint) -> ClassPoint:
        return self.point_at(g @ p.mat @ np.linalg.inv(g))

    def transport(self, ifactor: int, g: np.ndarray, p: ClassPoint,
                  vectors: np.ndarray) -> np.ndarray:
        gi = np.linalg.inv(g)
        q = self.act(ifactor, g, p)
        gens = np.einsum("ra,aij->rij", vectors, p.slice_basis)
        moved = g @ gens @ gi
        return np.stack([self._slice_coords(q, mv) for mv in moved])

    def fundamental_vector(self, ifactor: int, X: np.ndarray, p: ClassPoint) -> np.ndarray:
        return self._slice_coords(p, np.asarray(X, dtype=complex))


def conjugacy_class(g0, ctx: GroupContext | None = None) -> ConjugacyClass:
    """The conjugacy class through g0 as a quasi-Hamiltonian G-space."""
    return ConjugacyClass(g0, ctx)


def conjugacy_intrinsic_form(m, X, Y) -> complex:
    """omega_m(v_X, v_Y) = ((X, mYm^{-1}) - (Y, mXm^{-1})) / 2."""
    m = np.asarray(getattr(m, "mat", m), dtype=complex)
    mi = np.linalg.inv(m)
    t1 = np.einsum("ij,ji->", X, m @ Y @ mi)
    t2 = np.einsum("ij,ji->", Y, m @ X @ mi)
    return 0.5 * complex(t1 - t2)


def conjugacy_cover_form(g0, C, U, V) -> complex:
    """The pullback form on the cover G at C, on left-trivialized tangents.

    The covering map is C -> C^{-1} g0 C and the form is
    (theta-bar, g0 theta-bar g0^{-1}) / 2.
    """
    g0 = np.asarray(getattr(g0, "mat", g0), dtype=complex)
    C = np.asarray(getattr(C, "mat", C), dtype=complex)
    ci = np.linalg.inv(C)
    g0i = np.linalg.inv(g0)
    tu = C @ U @ ci
    tv = C @ V @ ci
    t1 = np.einsum("ij,ji->", tu, g0 @ tv @ g0i)
    t2 = np.einsum("ij,ji->", tv, g0 @ tu @ g0i)
    return 0.5 * complex(t1 - t2)
