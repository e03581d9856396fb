"""Chart-presented quasi-Hamiltonian spaces and their two-form machinery.

Every space bundles a centered holomorphic chart (evaluations always happen
at coordinate origin of the current point), per-factor group actions and
moment maps, and a two-form given as a sum of wedge-pairings of g-valued
one-forms.  The term structure is what makes the exterior derivative and the
full Gram matrix cheap: each one-form is a Maurer-Cartan pullback, an
Ad-conjugated pullback, or a coordinate differential, all evaluated from one
jet pass over the structure maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..groups import GroupContext
from ..jets import (
    Jet2,
    exp_nilpotent,
    npairs,
    pair_trace,
    slot_jet,
    value_jet,
)
from ..numeric import rand_disc

__all__ = [
    "Factor",
    "OneForm",
    "OmegaTerm",
    "Evaluation",
    "QHSpace",
    "omega_value",
    "omega_gram",
    "omega_d",
    "leftexp_block",
    "affine_block",
    "cartan_jet",
    "strict_basis",
]


@dataclass(frozen=True)
class Factor:
    """One factor of the acting group, full GL_n ("G") or the torus ("T")."""

    kind: str
    label: str = ""

    def algebra_basis(self, ctx: GroupContext) -> np.ndarray:
        if self.kind == "G":
            return ctx.gl_basis()
        basis = np.zeros((ctx.n, ctx.n, ctx.n), dtype=complex)
        for i in range(ctx.n):
            basis[i, i, i] = 1.0
        return basis


@dataclass(frozen=True)
class OneForm:
    """A g-valued one-form on the chart.

    kind "L"/"R" are theta/theta-bar pullbacks of the named map, "D" the
    plain coordinate differential of the named (matrix-valued) map.  conj
    optionally wraps the value in Ad of another map's value.
    """

    kind: str
    name: str
    conj: str | None = None


@dataclass(frozen=True)
class OmegaTerm:
    coef: complex
    a: OneForm
    b: OneForm


class Evaluation(dict):
    """Structure maps as jets, with cached value inverses."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._inv: dict[str, np.ndarray] = {}

    def inv(self, name: str) -> np.ndarray:
        if name not in self._inv:
            self._inv[name] = np.linalg.inv(self[name].val)
        return self._inv[name]


class QHSpace:
    """Base interface; concrete spaces fill in charts, actions and moments."""

    ctx: GroupContext
    dim: int
    factors: tuple[Factor, ...]
    omega_terms: tuple[OmegaTerm, ...]
    label: str = "space"
    # coordinate indices of the Cartan block, when the chart has one
    cartan_coords: slice | None = None

    def random_point(self, rng: np.random.Generator):
        raise NotImplementedError

    def evaluate(self, p, seeds: np.ndarray, order2: bool = False) -> Evaluation:
        """All structure maps as jets seeded with tangent rows of `seeds`."""
        raise NotImplementedError

    def moment_name(self, ifactor: int) -> str:
        raise NotImplementedError

    def act(self, ifactor: int, g: np.ndarray, p):
        raise NotImplementedError

    def transport(self, ifactor: int, g: np.ndarray, p, vectors: np.ndarray) -> np.ndarray:
        """Pushforward of chart tangents (rows) under the action of g."""
        raise NotImplementedError

    def fundamental_vector(self, ifactor: int, X: np.ndarray, p) -> np.ndarray:
        raise NotImplementedError

    # convenience ------------------------------------------------------

    def moment(self, p, ifactor: int) -> np.ndarray:
        ev = self.evaluate(p, _no_seeds(self.dim), order2=False)
        return ev[self.moment_name(ifactor)].val

    def random_tangent(self, rng: np.random.Generator) -> np.ndarray:
        return rand_disc(rng, (self.dim,))

    def g_factor(self) -> int:
        for i, f in enumerate(self.factors):
            if f.kind == "G":
                return i
        raise ValueError("space has no full-G factor")


def _no_seeds(dim: int) -> np.ndarray:
    return np.zeros((0, dim), dtype=complex)


# ---------------------------------------------------------------------------
# chart building blocks


def strict_basis(ctx: GroupContext, lower: bool) -> np.ndarray:
    """Basis of the strictly lower/upper triangular matrices."""
    idx = ctx.strict_indices(lower)
    basis = np.zeros((len(idx), ctx.n, ctx.n), dtype=complex)
    for a, (i, j) in enumerate(idx):
        basis[a, i, j] = 1.0
    return basis


def _block_firsts(seeds: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.einsum("ua,aij->uij", seeds, basis)


def leftexp_block(base: np.ndarray, seeds: np.ndarray, basis: np.ndarray,
                  order2: bool) -> Jet2:
    """Left-translated exponential chart base * exp(sum x_a basis_a) at x=0."""
    n = base.shape[0]
    m = seeds.shape[0]
    first = _block_firsts(seeds, basis)
    second = np.zeros((npairs(m), n, n), dtype=complex) if order2 else None
    lin = Jet2(np.zeros((n, n), dtype=complex), first, second)
    return base @ exp_nilpotent(lin)


def affine_block(base: np.ndarray, seeds: np.ndarray, basis: np.ndarray,
                 order2: bool) -> Jet2:
    """Affine chart base + sum x_a basis_a at x=0."""
    n = base.shape[0]
    m = seeds.shape[0]
    first = _block_firsts(seeds, basis)
    second = np.zeros((npairs(m), n, n), dtype=complex) if order2 else None
    return Jet2(base.astype(complex), first, second)


def cartan_jet(base_diag: np.ndarray, seeds: np.ndarray, order2: bool) -> Jet2:
    """Diagonal-matrix-valued jet of Lambda(x) = Lambda0 + diag(x)."""
    n = base_diag.shape[0]
    m = seeds.shape[0]
    first = np.zeros((m, n, n), dtype=complex)
    idx = np.arange(n)
    first[:, idx, idx] = seeds
    second = np.zeros((npairs(m), n, n), dtype=complex) if order2 else None
    return Jet2(np.diag(base_diag), first, second)


# ---------------------------------------------------------------------------
# two-form evaluation


def _oneform_stack(o: OneForm, ev: Evaluation) -> np.ndarray:
    """Values of the one-form on every seeded direction, shape (m, n, n)."""
    M = ev[o.name]
    if o.kind == "L":
        arr = ev.inv(o.name) @ M.first
    elif o.kind == "R":
        arr = M.first @ ev.inv(o.name)
    elif o.kind == "D":
        arr = M.first
    else:
        raise ValueError(f"unknown one-form kind {o.kind!r}")
    if o.conj is not None:
        arr = ev[o.conj].val @ arr @ ev.inv(o.conj)
    return arr


def _oneform_jet(o: OneForm, ev: Evaluation, slot: int, wrt: int) -> Jet2:
    """One-form value on direction `slot` as a 1-direction jet along `wrt`."""
    M = ev[o.name]
    der = slot_jet(M, slot, wrt)
    if o.kind == "L":
        r = value_jet(M, wrt).inv() @ der
    elif o.kind == "R":
        r = der @ value_jet(M, wrt).inv()
    elif o.kind == "D":
        r = der
    else:
        raise ValueError(f"unknown one-form kind {o.kind!r}")
    if o.conj is not None:
        cj = value_jet(ev[o.conj], wrt)
        r = cj @ r @ cj.inv()
    return r


def gram_from_evaluation(terms, ev: Evaluation, m: int,
                         with_scale: bool = False):
    """Antisymmetric Gram matrix Omega_ab over the m seeded directions.

    With with_scale, also returns the entrywise magnitude flowing through the
    pairings (the natural normalization scale for residuals: cancellation
    between large terms must not masquerade as precision).
    """
    gram = np.zeros((m, m), dtype=complex)
    scale = np.zeros((m, m)) if with_scale else None
    stacks: dict[OneForm, np.ndarray] = {}
    for t in terms:
        for o in (t.a, t.b):
            if o not in stacks:
                stacks[o] = _oneform_stack(o, ev)
        g1 = np.einsum("aij,bji->ab", stacks[t.a], stacks[t.b])
        gram += t.coef * (g1 - g1.T)
        if with_scale:
            s1 = np.einsum("aij,bji->ab", np.abs(stacks[t.a]), np.abs(stacks[t.b]))
            scale += abs(t.coef) * (s1 + s1.T)
    if with_scale:
        return gram, scale
    return gram


def omega_value(space: QHSpace, p, v, w) -> complex:
    """omega_p(v, w) for chart tangent vectors v, w."""
    seeds = np.vstack([np.asarray(v, dtype=complex), np.asarray(w, dtype=complex)])
    ev = space.evaluate(p, seeds, order2=False)
    return complex(gram_from_evaluation(space.omega_terms, ev, 2)[0, 1])


def omega_value_scaled(space: QHSpace, p, v, w) -> tuple[complex, float]:
    """omega_p(v, w) together with the magnitude flowing through the terms."""
    seeds = np.vstack([np.asarray(v, dtype=complex), np.asarray(w, dtype=complex)])
    ev = space.evaluate(p, seeds, order2=False)
    gram, scale = gram_from_evaluation(space.omega_terms, ev, 2, with_scale=True)
    return complex(gram[0, 1]), float(scale[0, 1])


def omega_gram(space: QHSpace, p) -> np.ndarray:
    """Full Gram matrix of omega over the chart coordinate directions."""
    ev = space.evaluate(p, np.eye(space.dim, dtype=complex), order2=False)
    return gram_from_evaluation(space.omega_terms, ev, space.dim)


def _jet_pair_scale(a: Jet2, b: Jet2) -> float:
    """Magnitude bound for d/dw tr(a b) of two 1-direction jets."""
    n = a.val.shape[0]
    s = np.abs(a.val).max() * np.abs(b.first[0]).max() if b.first is not None else 0.0
    if a.first is not None:
        s += np.abs(a.first[0]).max() * np.abs(b.val).max()
    return n * s


def domega_from_evaluation(terms, ev: Evaluation,
                           with_scale: bool = False):
    """d(omega) on the three seeded directions of an order-2 evaluation."""
    total = 0.0 + 0.0j
    scale = 0.0
    for sign, w, (u, v) in ((1, 0, (1, 2)), (-1, 1, (0, 2)), (1, 2, (0, 1))):
        for t in terms:
            au = _oneform_jet(t.a, ev, u, w)
            av = _oneform_jet(t.a, ev, v, w)
            bu = _oneform_jet(t.b, ev, u, w)
            bv = _oneform_jet(t.b, ev, v, w)
            tj = pair_trace(au, bv) - pair_trace(av, bu)
            total += sign * t.coef * tj.first[0]
            if with_scale:
                scale += abs(t.coef) * (_jet_pair_scale(au, bv) + _jet_pair_scale(av, bu))
    if with_scale:
        return complex(total), scale
    return complex(total)


def omega_d(space: QHSpace, p, triple: tuple[int, int, int]) -> complex:
    """d(omega)(e_a, e_b, e_c) on coordinate directions, via degree-2 jets."""
    seeds = np.eye(space.dim, dtype=complex)[list(triple)]
    ev = space.evaluate(p, seeds, order2=True)
    return domega_from_evaluation(space.omega_terms, ev)
