"""Level-set construction for two fused order-2 pole spaces.

Two k = 2 fission spaces with opposite Borel choices fuse to a space whose
mu = 1 level set, modulo the diagonal G, is the symplectic double groupoid:
sextuples (g, b_-, b_+, h, c_+, c_-) with c_+ h = g b_+ and c_- h = g b_-.
Points of the level set are produced constructively by a Gauss-type
triangular factorization, never by root finding.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..groups import GroupContext
from ..numeric import ul_decompose
from .fission import FissionPoint, FissionSpace
from .fusion import FusedPoint, FusedSpace, fuse

__all__ = [
    "GroupoidTuple",
    "double_fission_space",
    "solve_moment_one_pair",
    "groupoid_tuple",
]

MOMENT_ATOL = 1e-8


class GroupoidTuple(NamedTuple):
    g: np.ndarray
    bm: np.ndarray
    bp: np.ndarray
    h: np.ndarray
    cp: np.ndarray
    cm: np.ndarray


def double_fission_space(ctx: GroupContext) -> FusedSpace:
    """Fusion of two k = 2 spaces with opposite Borel orientations."""
    return fuse(FissionSpace(ctx, 2, flip=False), FissionSpace(ctx, 2, flip=True))


def solve_moment_one_pair(space: FusedSpace, p1: FissionPoint, C2) -> FusedPoint:
    """Complete (p1, C2) to a point of the fused space with mu = 1.

    The moment condition mu = 1 is equivalent to c_+^{-1} c_- equalling the
    word h b_+^{-1} b_- h^{-1} (h = C2 C1^{-1}); that word is factored as
    unit-upper * diagonal * unit-lower, the diagonal is split as
    exp(2 pi i Lambda_2) with the principal logarithm per entry, and the
    torus parts are distributed to satisfy the point constraints.
    Raises FactorizationError on non-generic input (caller resamples).
    """
    if not isinstance(space.m2, FissionSpace) or space.m2.k != 2 or not space.m2.flip:
        raise ValueError("expected the fusion of a k=2 space with a flipped k=2 space")
    C2 = np.asarray(getattr(C2, "mat", C2), dtype=complex)
    bm, bp = p1.d[0], p1.e[0]
    h = C2 @ np.linalg.inv(p1.C)
    word = h @ np.linalg.inv(bp) @ bm @ np.linalg.inv(h)
    u0, tau, l0 = ul_decompose(word)
    lam2 = np.log(tau) / (2j * np.pi)
    half = np.exp(1j * np.pi * lam2)
    cp = np.diag(1.0 / half) @ np.linalg.inv(u0)  # upper, delta = e^{-pi i Lambda_2}
    cm = np.diag(half) @ l0  # lower, delta = e^{pi i Lambda_2}
    p2 = space.m2.point(C2, (cp,), (cm,), lam2)
    return FusedPoint(p1, p2)


def groupoid_tuple(space: FusedSpace, p: FusedPoint) -> GroupoidTuple:
    """Extract (g, b_-, b_+, h, c_+, c_-) from a mu = 1 point of the fusion."""
    mu = space.moment(p, 0)
    n = mu.shape[0]
    if np.abs(mu - np.eye(n)).max() > MOMENT_ATOL:
        raise ValueError("point is not on the mu = 1 level set")
    p1, p2 = p.p1, p.p2
    bm, bp = p1.d[0], p1.e[0]
    cp, cm = p2.d[0], p2.e[0]
    h = p2.C @ np.linalg.inv(p1.C)
    g = cm @ h @ np.linalg.inv(bm)
    return GroupoidTuple(g, bm, bp, h, cp, cm)


def groupoid_residuals(t: GroupoidTuple) -> tuple[float, float]:
    """Max-norm residuals of the relations c_+ h = g b_+ and c_- h = g b_-."""
    r1 = np.abs(t.cp @ t.h - t.g @ t.bp).max()
    r2 = np.abs(t.cm @ t.h - t.g @ t.bm).max()
    scale = max(1.0, np.abs(t.g).max(), np.abs(t.h).max())
    return float(r1 / scale), float(r2 / scale)
