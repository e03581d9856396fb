"""Fusion of quasi-Hamiltonian spaces: merge two G-factors diagonally.

The fused moment map is the product mu_1 mu_2 and the two-form picks up the
correction -(mu_1* theta, mu_2* theta-bar)/2 on top of omega_1 + omega_2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import Evaluation, Factor, OmegaTerm, OneForm, QHSpace

__all__ = ["FusedPoint", "FusedSpace", "fuse"]

_PREF = ("A:", "B:")


@dataclass(frozen=True)
class FusedPoint:
    p1: object
    p2: object


def _prefix_form(o: OneForm, pref: str) -> OneForm:
    return OneForm(o.kind, pref + o.name, None if o.conj is None else pref + o.conj)


class FusedSpace(QHSpace):
    def __init__(self, m1: QHSpace, m2: QHSpace, i1: int | None = None,
                 i2: int | None = None):
        i1 = m1.g_factor() if i1 is None else i1
        i2 = m2.g_factor() if i2 is None else i2
        if m1.factors[i1].kind != "G" or m2.factors[i2].kind != "G":
            raise ValueError("fusion merges two full-G factors")
        if m1.ctx.n != m2.ctx.n:
            raise ValueError("factors live over different groups")
        self.ctx = m1.ctx
        self.m1, self.m2 = m1, m2
        self.i1, self.i2 = i1, i2
        self.dim = m1.dim + m2.dim
        self.label = f"({m1.label} (*) {m2.label})"

        factors = [Factor("G", "fused")]
        routes: list[tuple[int, int] | None] = [None]
        for which, (space, skip) in enumerate(((m1, i1), (m2, i2))):
            for idx, f in enumerate(space.factors):
                if idx == skip:
                    continue
                factors.append(f)
                routes.append((which, idx))
        self.factors = tuple(factors)
        self._routes = routes

        terms = [OmegaTerm(t.coef, _prefix_form(t.a, _PREF[0]), _prefix_form(t.b, _PREF[0]))
                 for t in m1.omega_terms]
        terms += [OmegaTerm(t.coef, _prefix_form(t.a, _PREF[1]), _prefix_form(t.b, _PREF[1]))
                  for t in m2.omega_terms]
        terms.append(OmegaTerm(
            -0.5,
            OneForm("L", _PREF[0] + m1.moment_name(i1)),
            OneForm("R", _PREF[1] + m2.moment_name(i2)),
        ))
        self.omega_terms = tuple(terms)

    def _split(self, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return vectors[:, : self.m1.dim], vectors[:, self.m1.dim:]

    def random_point(self, rng: np.random.Generator) -> FusedPoint:
        return FusedPoint(self.m1.random_point(rng), self.m2.random_point(rng))

    def evaluate(self, p: FusedPoint, seeds: np.ndarray, order2: bool = False) -> Evaluation:
        s1, s2 = self._split(seeds)
        ev = Evaluation()
        for pref, space, pt, s in ((_PREF[0], self.m1, p.p1, s1),
                                   (_PREF[1], self.m2, p.p2, s2)):
            for name, jet in space.evaluate(pt, s, order2).items():
                ev[pref + name] = jet
        mu1 = ev[_PREF[0] + self.m1.moment_name(self.i1)]
        mu2 = ev[_PREF[1] + self.m2.moment_name(self.i2)]
        ev["mu"] = mu1 @ mu2
        return ev

    def moment_name(self, ifactor: int) -> str:
        if ifactor == 0:
            return "mu"
        which, idx = self._routes[ifactor]
        space = (self.m1, self.m2)[which]
        return _PREF[which] + space.moment_name(idx)

    def act(self, ifactor: int, g: np.ndarray, p: FusedPoint) -> FusedPoint:
        if ifactor == 0:
            return FusedPoint(self.m1.act(self.i1, g, p.p1), self.m2.act(self.i2, g, p.p2))
        which, idx = self._routes[ifactor]
        if which == 0:
            return FusedPoint(self.m1.act(idx, g, p.p1), p.p2)
        return FusedPoint(p.p1, self.m2.act(idx, g, p.p2))

    def transport(self, ifactor: int, g: np.ndarray, p: FusedPoint,
                  vectors: np.ndarray) -> np.ndarray:
        v1, v2 = self._split(vectors)
        if ifactor == 0:
            return np.hstack([
                self.m1.transport(self.i1, g, p.p1, v1),
                self.m2.transport(self.i2, g, p.p2, v2),
            ])
        which, idx = self._routes[ifactor]
        if which == 0:
            return np.hstack([self.m1.transport(idx, g, p.p1, v1), v2])
        return np.hstack([v1, self.m2.transport(idx, g, p.p2, v2)])

    def fundamental_vector(self, ifactor: int, X: np.ndarray, p: FusedPoint) -> np.ndarray:
        if ifactor == 0:
            return np.concatenate([
                self.m1.fundamental_vector(self.i1, X, p.p1),
                self.m2.fundamental_vector(self.i2, X, p.p2),
            ])
        which, idx = self._routes[ifactor]
        v = np.zeros(self.dim, dtype=complex)
        if which == 0:
            v[: self.m1.dim] = self.m1.fundamental_vector(idx, X, p.p1)
        else:
            v[self.m1.dim:] = self.m2.fundamental_vector(idx, X, p.p2)
        return v


def fuse(m1: QHSpace, m2: QHSpace, i1: int | None = None, i2: int | None = None) -> FusedSpace:
    """Fusion product; the merged factor is factor 0 of the result."""
    return FusedSpace(m1, m2, i1, i2)
