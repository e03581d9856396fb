"""The internally fused double G x G with the commutator moment map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..groups import GroupContext
from ..numeric import rand_gl
from .base import Evaluation, Factor, OmegaTerm, OneForm, QHSpace, leftexp_block

__all__ = ["DoublePoint", "InternallyFusedDouble", "double"]


@dataclass(frozen=True)
class DoublePoint:
    a: np.ndarray
    b: np.ndarray


class InternallyFusedDouble(QHSpace):
    label = "double"

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        n = ctx.n
        self.dim = 2 * n * n
        self.factors = (Factor("G"),)
        self._gl = ctx.gl_basis()
        self.omega_terms = (
            OmegaTerm(-0.5, OneForm("L", "a"), OneForm("R", "b")),
            OmegaTerm(-0.5, OneForm("R", "a"), OneForm("L", "b")),
            OmegaTerm(-0.5, OneForm("L", "ab"), OneForm("R", "aibi")),
        )

    def random_point(self, rng: np.random.Generator) -> DoublePoint:
        n = self.ctx.n
        return DoublePoint(rand_gl(rng, n), rand_gl(rng, n))

    def evaluate(self, p: DoublePoint, seeds: np.ndarray, order2: bool = False) -> Evaluation:
        n2 = self.ctx.n ** 2
        a = leftexp_block(p.a, seeds[:, :n2], self._gl, order2)
        b = leftexp_block(p.b, seeds[:, n2:], self._gl, order2)
        ab = a @ b
        aibi = a.inv() @ b.inv()
        return Evaluation({"a": a, "b": b, "ab": ab, "aibi": aibi, "mu": ab @ aibi})

    def moment_name(self, ifactor: int) -> str:
        return "mu"

    def act(self, ifactor: int, g: np.ndarray, p: DoublePoint) -> DoublePoint:
        gi = np.linalg.inv(g)
        return DoublePoint(g @ p.a @ gi, g @ p.b @ gi)

    def transport(self, ifactor: int, g: np.ndarray, p: DoublePoint,
                  vectors: np.ndarray) -> np.ndarray:
        n = self.ctx.n
        gi = np.linalg.inv(g)
        m = vectors.shape[0]
        out = np.empty_like(vectors)
        for blk in range(2):
            V = vectors[:, blk * n * n:(blk + 1) * n * n].reshape(m, n, n)
            out[:, blk * n * n:(blk + 1) * n * n] = (g @ V @ gi).reshape(m, n * n)
        return out

    def fundamental_vector(self, ifactor: int, X: np.ndarray, p: DoublePoint) -> np.ndarray:
        X = np.asarray(X, dtype=complex)
        va = X - np.linalg.inv(p.a) @ X @ p.a
        vb = X - np.linalg.inv(p.b) @ X @ p.b
        return np.concatenate([va.ravel(), vb.ravel()])


def double(ctx: GroupContext) -> InternallyFusedDouble:
    """The internally fused double, mu(a, b) = a b a^{-1} b^{-1}."""
    return InternallyFusedDouble(ctx)
