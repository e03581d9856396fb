"""Fission spaces: the quasi-Hamiltonian G x T-spaces attached to a pole of
order k, in both the (C, d, e, Lambda) and the Stokes-multiplier coordinates.

For k >= 2 a point is (C, d_1..d_{k-1}, e_1..e_{k-1}, Lambda) with the d's
and e's in alternating opposite Borels, diagonal parts pinned to powers of
epsilon = exp(pi i Lambda / (k-1)).  The moment maps are D^{-1}E for the
G-factor (D = d_{k-1}...d_1 C, E = e_{k-1}...e_1 C) and exp(-2 pi i Lambda)
for the torus.  k = 1 is the simple-pole space G x t_1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..groups import GroupContext, cartan_regularity
from ..jets import Jet2, exp_diag
from ..numeric import rand_disc, rand_gl
from .base import (
    Evaluation,
    Factor,
    OmegaTerm,
    OneForm,
    QHSpace,
    affine_block,
    cartan_jet,
    leftexp_block,
    strict_basis,
)

__all__ = [
    "FissionPoint",
    "StokesPoint",
    "DualGroupPoint",
    "FissionSpace",
    "FissionSimple",
    "StokesChart",
    "fission",
    "fission_simple",
    "stokes_to_de",
    "de_to_stokes",
    "stokes_moment",
    "omega_alt",
    "dual_group_view",
]

POINT_ATOL = 1e-8

# Cartan entries are sampled from a half-radius disc: the two-form and the
# Ad_mu eigenproblem see exp(2 pi i Lambda), whose entry ratios reach
# exp(4 pi |Im Lambda|); radius 1/2 keeps the conditioning of a fused pair
# of spaces within what double precision needs for 1e-8 residuals.
CARTAN_RADIUS = 0.5


@dataclass(frozen=True)
class FissionPoint:
    """A point (C, d, e, Lambda); k = 1 points have empty d and e."""

    C: np.ndarray
    d: tuple
    e: tuple
    lam: np.ndarray

    @property
    def k(self) -> int:
        return len(self.d) + 1


@dataclass(frozen=True)
class StokesPoint:
    """A point (C, S_1..S_{2k-2}, Lambda) in Stokes coordinates."""

    C: np.ndarray
    S: tuple
    lam: np.ndarray

    @property
    def k(self) -> int:
        return len(self.S) // 2 + 1


@dataclass(frozen=True)
class DualGroupPoint:
    """(b_-, b_+, Lambda) with delta(b_-) delta(b_+) = 1, delta(b_+) = e^{pi i Lambda}."""

    bm: np.ndarray
    bp: np.ndarray
    lam: np.ndarray


def _eps_diag(lam: np.ndarray, k: int, power: float = 1.0) -> np.ndarray:
    """Diagonal of epsilon^power = exp(power * pi i Lambda / (k-1))."""
    return np.exp(1j * np.pi * power * np.asarray(lam) / (k - 1))


def _check_unipotent_shape(mat: np.ndarray, lower: bool, what: str) -> None:
    scale = max(np.abs(mat).max(), 1.0)
    off = np.tril(mat, -1) if not lower else np.triu(mat, 1)
    if np.abs(off).max() > POINT_ATOL * scale:
        side = "lower" if lower else "upper"
        raise ValueError(f"{what} is not {side} triangular")


class FissionSpace(QHSpace):
    """The pole-order-k space for k >= 2.

    flip swaps the roles of the two Borels (needed when two poles carry
    opposite choices, as in the double-groupoid reduction).
    """

    def __init__(self, ctx: GroupContext, k: int, flip: bool = False):
        if k < 2:
            raise ValueError("use FissionSimple for k = 1")
        self.ctx = ctx
        self.k = k
        self.flip = flip
        n = ctx.n
        s = (n * n - n) // 2
        self._s = s
        self.dim = n * n + (k - 1) * 2 * s + n
        self.factors = (Factor("G"), Factor("T"))
        self._gl = ctx.gl_basis()
        self.label = f"fission(k={k})" + ("*" if flip else "")
        self.cartan_coords = slice(self.dim - n, self.dim)

        self._sl_C = slice(0, n * n)
        self._sl_d = []
        self._sl_e = []
        off = n * n
        for _ in range(1, k):
            self._sl_d.append(slice(off, off + s))
            off += s
            self._sl_e.append(slice(off, off + s))
            off += s
        self._basis_lower = strict_basis(ctx, lower=True)
        self._basis_upper = strict_basis(ctx, lower=False)

        terms = [OmegaTerm(0.5, OneForm("R", "D"), OneForm("R", "E"))]
        for i in range(1, k):
            terms.append(OmegaTerm(0.5, OneForm("L", f"D{i}"), OneForm("L", f"D{i-1}")))
            terms.append(OmegaTerm(-0.5, OneForm("L", f"E{i}"), OneForm("L", f"E{i-1}")))
        self.omega_terms = tuple(terms)

    # triangularity conventions: d_odd in B-, d_even in B+, e the opposite
    def d_lower(self, j: int) -> bool:
        return (j % 2 == 1) != self.flip

    def e_lower(self, j: int) -> bool:
        return (j % 2 == 0) != self.flip

    def _strict(self, lower: bool) -> np.ndarray:
        return self._basis_lower if lower else self._basis_upper

    # points -----------------------------------------------------------

    def point(self, C, d, e, lam, check: bool = True) -> FissionPoint:
        C = np.asarray(getattr(C, "mat", C), dtype=complex)
        lam = np.asarray(getattr(lam, "diag", lam), dtype=complex)
        d = tuple(np.asarray(getattr(x, "mat", x), dtype=complex) for x in d)
        e = tuple(np.asarray(getattr(x, "mat", x), dtype=complex) for x in e)
        p = FissionPoint(C, d, e, lam)
        if check:
            self.validate_point(p)
        return p

    def point_from_unipotent(self, C, nd, ne, lam) -> FissionPoint:
        """Build a point from strictly-triangular parts of the d's and e's."""
        lam = np.asarray(lam, dtype=complex)
        em1 = np.diag(_eps_diag(lam, self.k, -1.0))
        ep1 = np.diag(_eps_diag(lam, self.k, 1.0))
        eye = self.ctx.identity
        d = tuple(em1 @ (eye + N) for N in nd)
        e = tuple(ep1 @ (eye + N) for N in ne)
        return self.point(C, d, e, lam)

    def validate_point(self, p: FissionPoint) -> None:
        if p.k != self.k:
            raise ValueError(f"point has k={p.k}, space has k={self.k}")
        eps = _eps_diag(p.lam, self.k)
        for j in range(1, self.k):
            dj, ej = p.d[j - 1], p.e[j - 1]
            _check_unipotent_shape(dj, self.d_lower(j), f"d_{j}")
            _check_unipotent_shape(ej, self.e_lower(j), f"e_{j}")
            if np.abs(np.diagonal(dj) - 1.0 / eps).max() > POINT_ATOL:
                raise ValueError(f"delta(d_{j}) != epsilon^-1")
            if np.abs(np.diagonal(ej) - eps).max() > POINT_ATOL:
                raise ValueError(f"delta(e_{j}) != epsilon")

    def random_point(self, rng: np.random.Generator) -> FissionPoint:
        n = self.ctx.n
        s = self._s
        lam = CARTAN_RADIUS * rand_disc(rng, (n,))
        nd, ne = [], []
        for j in range(1, self.k):
            Nd = np.einsum("a,aij->ij", rand_disc(rng, (s,)), self._strict(self.d_lower(j)))
            Ne = np.einsum("a,aij->ij", rand_disc(rng, (s,)), self._strict(self.e_lower(j)))
            nd.append(Nd)
            ne.append(Ne)
        return self.point_from_unipotent(rand_gl(rng, n), nd, ne, lam)

    # evaluation -------------------------------------------------------

    def evaluate(self, p: FissionPoint, seeds: np.ndarray, order2: bool = False) -> Evaluation:
        k, n = self.k, self.ctx.n
        C = leftexp_block(p.C, seeds[:, self._sl_C], self._gl, order2)
        lam = cartan_jet(p.lam, seeds[:, self.cartan_coords], order2)
        em1 = exp_diag(lam.scale(-1j * np.pi / (k - 1)))
        ep1 = exp_diag(lam.scale(1j * np.pi / (k - 1)))
        eps0 = _eps_diag(p.lam, k)

        maps = {"C": C, "Lam": lam, "D0": C, "E0": C}
        D, E = C, C
        for j in range(1, k):
            Ud = np.diag(eps0) @ p.d[j - 1]  # unipotent part of d_j at the base point
            Ue = np.diag(1.0 / eps0) @ p.e[j - 1]
            dj = em1 @ affine_block(Ud, seeds[:, self._sl_d[j - 1]],
                                    self._strict(self.d_lower(j)), order2)
            ej = ep1 @ affine_block(Ue, seeds[:, self._sl_e[j - 1]],
                                    self._strict(self.e_lower(j)), order2)
            maps[f"d{j}"] = dj
            maps[f"e{j}"] = ej
            D = dj @ D
            E = ej @ E
            maps[f"D{j}"] = D
            maps[f"E{j}"] = E
        maps["D"] = D
        maps["E"] = E
        maps["mu"] = D.inv() @ E
        maps["muT"] = exp_diag(lam.scale(-2j * np.pi))
        return Evaluation(maps)

    def moment_name(self, ifactor: int) -> str:
        return ("mu", "muT")[ifactor]

    # actions ----------------------------------------------------------

    def act(self, ifactor: int, g: np.ndarray, p: FissionPoint) -> FissionPoint:
        g = np.asarray(getattr(g, "mat", g), dtype=complex)
        if ifactor == 0:
            return FissionPoint(p.C @ np.linalg.inv(g), p.d, p.e, p.lam)
        gi = np.linalg.inv(g)
        return FissionPoint(
            g @ p.C,
            tuple(g @ x @ gi for x in p.d),
            tuple(g @ x @ gi for x in p.e),
            p.lam,
        )

    def transport(self, ifactor: int, g: np.ndarray, p: FissionPoint,
                  vectors: np.ndarray) -> np.ndarray:
        g = np.asarray(getattr(g, "mat", g), dtype=complex)
        n = self.ctx.n
        m = vectors.shape[0]
        out = vectors.copy()
        if ifactor == 0:
            gi = np.linalg.inv(g)
            V = vectors[:, self._sl_C].reshape(m, n, n)
            out[:, self._sl_C] = (g @ V @ gi).reshape(m, n * n)
            return out
        t = np.diagonal(g)
        for j in range(1, self.k):
            for sl, lower in ((self._sl_d[j - 1], self.d_lower(j)),
                              (self._sl_e[j - 1], self.e_lower(j))):
                scale = np.array([t[i] / t[jj] for i, jj in self.ctx.strict_indices(lower)])
                out[:, sl] = vectors[:, sl] * scale
        return out

    def fundamental_vector(self, ifactor: int, X: np.ndarray, p: FissionPoint) -> np.ndarray:
        X = np.asarray(getattr(X, "mat", X), dtype=complex)
        v = np.zeros(self.dim, dtype=complex)
        if ifactor == 0:
            v[self._sl_C] = X.ravel()
            return v
        v[self._sl_C] = (-np.linalg.inv(p.C) @ X @ p.C).ravel()
        x = np.diagonal(X)
        eps0 = _eps_diag(p.lam, self.k)
        for j in range(1, self.k):
            for sl, lower, mat, tpart in (
                (self._sl_d[j - 1], self.d_lower(j), p.d[j - 1], eps0),
                (self._sl_e[j - 1], self.e_lower(j), p.e[j - 1], 1.0 / eps0),
            ):
                N = np.diag(tpart) @ mat - self.ctx.identity
                comm = -(X @ N - N @ X)
                v[sl] = np.array([comm[i, jj] for i, jj in self.ctx.strict_indices(lower)])
        return v


class FissionSimple(QHSpace):
    """The simple-pole space G x t_1 (Lambda off the affine root hyperplanes)."""

    label = "fission(k=1)"
    k = 1

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        n = ctx.n
        self.dim = n * n + n
        self.factors = (Factor("G"), Factor("T"))
        self._gl = ctx.gl_basis()
        self._sl_C = slice(0, n * n)
        self.cartan_coords = slice(n * n, n * n + n)
        self.omega_terms = (
            OmegaTerm(2j * np.pi, OneForm("R", "C"), OneForm("D", "Lam")),
            OmegaTerm(0.5, OneForm("R", "C"), OneForm("R", "C", conj="q")),
        )

    def point(self, C, lam, check: bool = True) -> FissionPoint:
        C = np.asarray(getattr(C, "mat", C), dtype=complex)
        lam = np.asarray(getattr(lam, "diag", lam), dtype=complex)
        if check and not cartan_regularity(lam).affine_regular:
            raise ValueError("Lambda must be affine-regular for k = 1")
        return FissionPoint(C, (), (), lam)

    def random_point(self, rng: np.random.Generator) -> FissionPoint:
        n = self.ctx.n
        while True:
            lam = CARTAN_RADIUS * rand_disc(rng, (n,))
            if cartan_regularity(lam).affine_regular:
                return self.point(rand_gl(rng, n), lam)

    def evaluate(self, p: FissionPoint, seeds: np.ndarray, order2: bool = False) -> Evaluation:
        C = leftexp_block(p.C, seeds[:, self._sl_C], self._gl, order2)
        lam = cartan_jet(p.lam, seeds[:, self.cartan_coords], order2)
        q = exp_diag(lam.scale(2j * np.pi))
        mu = C.inv() @ q @ C
        muT = exp_diag(lam.scale(-2j * np.pi))
        return Evaluation({"C": C, "Lam": lam, "q": q, "mu": mu, "muT": muT})

    def moment_name(self, ifactor: int) -> str:
        return ("mu", "muT")[ifactor]

    def act(self, ifactor: int, g: np.ndarray, p: FissionPoint) -> FissionPoint:
        g = np.asarray(getattr(g, "mat", g), dtype=complex)
        if ifactor == 0:
            return FissionPoint(p.C @ np.linalg.inv(g), (), (), p.lam)
        return FissionPoint(g @ p.C, (), (), p.lam)

    def transport(self, ifactor: int, g: np.ndarray, p: FissionPoint,
                  vectors: np.ndarray) -> np.ndarray:
        g = np.asarray(getattr(g, "mat", g), dtype=complex)
        n = self.ctx.n
        m = vectors.shape[0]
        out = vectors.copy()
        if ifactor == 0:
            gi = np.linalg.inv(g)
            V = vectors[:, self._sl_C].reshape(m, n, n)
            out[:, self._sl_C] = (g @ V @ gi).reshape(m, n * n)
        return out

    def fundamental_vector(self, ifactor: int, X: np.ndarray, p: FissionPoint) -> np.ndarray:
        X = np.asarray(getattr(X, "mat", X), dtype=complex)
        v = np.zeros(self.dim, dtype=complex)
        if ifactor == 0:
            v[self._sl_C] = X.ravel()
        else:
            v[self._sl_C] = (-np.linalg.inv(p.C) @ X @ p.C).ravel()
        return v


def fission(ctx: GroupContext, k: int, flip: bool = False) -> QHSpace:
    """The pole-order-k quasi-Hamiltonian G x T-space (k >= 1)."""
    if k < 1:
        raise ValueError("pole order must be >= 1")
    return FissionSimple(ctx) if k == 1 else FissionSpace(ctx, k, flip)


def fission_simple(ctx: GroupContext) -> FissionSimple:
    return FissionSimple(ctx)


# ---------------------------------------------------------------------------
# Stokes coordinates


class StokesChart(QHSpace):
    """The same space in (C, S_1..S_{2k-2}, Lambda) coordinates.

    S_odd is unitriangular in U+, S_even in U- (swapped by flip).  Used for
    the lattice-invariance and coordinate-consistency checks; actions are
    taken on the (C, d, e, Lambda) chart.
    """

    def __init__(self, ctx: GroupContext, k: int, flip: bool = False):
        if k < 2:
            raise ValueError("Stokes coordinates need k >= 2")
        self.ctx = ctx
        self.k = k
        self.flip = flip
        n = ctx.n
        s = (n * n - n) // 2
        self._s = s
        self.dim = n * n + (2 * k - 2) * s + n
        self.factors = (Factor("G"), Factor("T"))
        self._gl = ctx.gl_basis()
        self.label = f"fission-stokes(k={k})"
        self.cartan_coords = slice(self.dim - n, self.dim)
        self._sl_C = slice(0, n * n)
        self._sl_S = [slice(n * n + i * s, n * n + (i + 1) * s) for i in range(2 * k - 2)]
        self._basis_lower = strict_basis(ctx, lower=True)
        self._basis_upper = strict_basis(ctx, lower=False)

        terms = [OmegaTerm(0.5, OneForm("R", "D"), OneForm("R", "E"))]
        for i in range(1, k):
            terms.append(OmegaTerm(0.5, OneForm("L", f"D{i}"), OneForm("L", f"D{i-1}")))
            terms.append(OmegaTerm(-0.5, OneForm("L", f"E{i}"), OneForm("L", f"E{i-1}")))
        self.omega_terms = tuple(terms)

    def s_lower(self, i: int) -> bool:
        return (i % 2 == 0) != self.flip

    def point(self, C, S, lam) -> StokesPoint:
        C = np.asarray(getattr(C, "mat", C), dtype=complex)
        lam = np.asarray(getattr(lam, "diag", lam), dtype=complex)
        S = tuple(np.asarray(getattr(x, "mat", x), dtype=complex) for x in S)
        if len(S) != 2 * self.k - 2:
            raise ValueError("expected 2k-2 Stokes multipliers")
        for i, si in enumerate(S, start=1):
            _check_unipotent_shape(si, self.s_lower(i), f"S_{i}")
            if np.abs(np.diagonal(si) - 1.0).max() > POINT_ATOL:
                raise ValueError(f"S_{i} is not unipotent")
        return StokesPoint(C, S, lam)

    def random_point(self, rng: np.random.Generator) -> StokesPoint:
        n = self.ctx.n
        s = self._s
        S = []
        for i in range(1, 2 * self.k - 1):
            N = np.einsum("a,aij->ij", rand_disc(rng, (s,)),
                          self._basis_lower if self.s_lower(i) else self._basis_upper)
            S.append(self.ctx.identity + N)
        return self.point(rand_gl(rng, n), S, CARTAN_RADIUS * rand_disc(rng, (n,)))

    def evaluate(self, p: StokesPoint, seeds: np.ndarray, order2: bool = False) -> Evaluation:
        k = self.k
        C = leftexp_block(p.C, seeds[:, self._sl_C], self._gl, order2)
        lam = cartan_jet(p.lam, seeds[:, self.cartan_coords], order2)

        def eps_pow(s: float) -> Jet2:
            return exp_diag(lam.scale(1j * np.pi * s / (k - 1)))

        S = []
        for i in range(1, 2 * k - 1):
            basis = self._basis_lower if self.s_lower(i) else self._basis_upper
            S.append(affine_block(p.S[i - 1], seeds[:, self._sl_S[i - 1]], basis, order2))

        maps = {"C": C, "Lam": lam, "D0": C, "E0": C}
        D, E = C, C
        for j in range(1, k):
            dj = eps_pow(-j) @ S[2 * k - 2 - j].inv() @ eps_pow(j - 1)
            ej = eps_pow(j + 2 - 2 * k) @ S[j - 1] @ eps_pow(2 * k - 1 - j)
            maps[f"d{j}"] = dj
            maps[f"e{j}"] = ej
            D = dj @ D
            E = ej @ E
            maps[f"D{j}"] = D
            maps[f"E{j}"] = E
        maps["D"] = D
        maps["E"] = E
        maps["mu"] = D.inv() @ E
        maps["muT"] = exp_diag(lam.scale(-2j * np.pi))
        return Evaluation(maps)

    def moment_name(self, ifactor: int) -> str:
        return ("mu", "muT")[ifactor]


# ---------------------------------------------------------------------------
# coordinate conversions


def stokes_to_de(p: StokesPoint, flip: bool = False,
                 ctx: GroupContext | None = None) -> FissionPoint:
    """d_j = eps^{-j} S_{2k-1-j}^{-1} eps^{j-1},  e_j = eps^{j+2-2k} S_j eps^{2k-1-j}."""
    k = p.k
    if k < 2:
        raise ValueError("conversion needs k >= 2")

    def ep(s: float) -> np.ndarray:
        return np.diag(_eps_diag(p.lam, k, s))

    d, e = [], []
    for j in range(1, k):
        d.append(ep(-j) @ np.linalg.inv(p.S[2 * k - 2 - j]) @ ep(j - 1))
        e.append(ep(j + 2 - 2 * k) @ p.S[j - 1] @ ep(2 * k - 1 - j))
    space = FissionSpace(ctx or GroupContext(p.C.shape[0]), k, flip)
    return space.point(p.C, d, e, p.lam)


def de_to_stokes(p: FissionPoint) -> StokesPoint:
    """Inverse of `stokes_to_de`; exact diagonal rescalings."""
    k = p.k
    if k < 2:
        raise ValueError("conversion needs k >= 2")

    def ep(s: float) -> np.ndarray:
        return np.diag(_eps_diag(p.lam, k, s))

    S: list = [None] * (2 * k - 2)
    for j in range(1, k):
        S[2 * k - 2 - j] = ep(j - 1) @ np.linalg.inv(p.d[j - 1]) @ ep(-j)
        S[j - 1] = ep(2 * k - 2 - j) @ p.e[j - 1] @ ep(j + 1 - 2 * k)
    return StokesPoint(p.C, tuple(S), p.lam)


def stokes_moment(p: StokesPoint) -> np.ndarray:
    """mu = C^{-1} S_{2k-2} ... S_2 S_1 e^{2 pi i Lambda} C."""
    word = np.diag(np.exp(2j * np.pi * p.lam))
    for s in p.S:
        word = s @ word
    ci = np.linalg.inv(p.C)
    return ci @ word @ p.C


def fission_moment(p: FissionPoint) -> np.ndarray:
    """mu = C^{-1} d_1^{-1} ... d_{k-1}^{-1} e_{k-1} ... e_1 C = D^{-1} E."""
    D, E = p.C, p.C
    for dj, ej in zip(p.d, p.e):
        D = dj @ D
        E = ej @ E
    if p.k == 1:
        D = np.diag(_eps_diag_k1(p.lam, -1.0)) @ p.C
        E = np.diag(_eps_diag_k1(p.lam, 1.0)) @ p.C
    return np.linalg.inv(D) @ E


def _eps_diag_k1(lam: np.ndarray, power: float) -> np.ndarray:
    return np.exp(1j * np.pi * power * np.asarray(lam))


# ---------------------------------------------------------------------------
# the alternative expansion of the two-form


def omega_alt(space: FissionSpace, p: FissionPoint, v, w) -> complex:
    """The two-form via the expanded bracket-word formula (half of 2*omega).

    Expands the pullbacks through the coordinate maps d_i, e_i, C only, with
    the words (ij) = d_i^{-1}..d_{k-1}^{-1} e_{k-1}..e_j, [ij] = d_{i-1}..d_j,
    {ij} = e_{i-1}..e_j.  Must agree with the structured evaluator.
    """
    k = space.k
    seeds = np.vstack([np.asarray(v, dtype=complex), np.asarray(w, dtype=complex)])
    ev = space.evaluate(p, seeds, order2=False)

    def one_forms(name: str, kind: str) -> tuple[np.ndarray, np.ndarray]:
        M = ev[name]
        if kind == "L":
            arr = ev.inv(name) @ M.first
        else:
            arr = M.first @ ev.inv(name)
        return arr[0], arr[1]

    gbar = one_forms("C", "R")
    delta = {i: one_forms(f"d{i}", "L") for i in range(1, k)}
    epsln = {i: one_forms(f"e{i}", "L") for i in range(1, k)}
    dval = {i: ev[f"d{i}"].val for i in range(1, k)}
    evals = {i: ev[f"e{i}"].val for i in range(1, k)}
    eye = space.ctx.identity

    def word_round(i: int, j: int) -> np.ndarray:  # (ij)
        m = eye
        for a in range(i, k):
            m = m @ np.linalg.inv(dval[a])
        for a in range(k - 1, j - 1, -1):
            m = m @ evals[a]
        return m

    def word_square(i: int, j: int) -> np.ndarray:  # [ij] = d_{i-1}...d_j
        m = eye
        for a in range(i - 1, j - 1, -1):
            m = m @ dval[a]
        return m

    def word_brace(i: int, j: int) -> np.ndarray:  # {ij} = e_{i-1}...e_j
        m = eye
        for a in range(i - 1, j - 1, -1):
            m = m @ evals[a]
        return m

    def pair2(a_pair, b_pair) -> complex:
        (au, av), (bu, bv) = a_pair, b_pair
        return complex(np.einsum("ij,ji->", au, bv) - np.einsum("ij,ji->", av, bu))

    def conj_pair(c: np.ndarray, pair_) -> tuple[np.ndarray, np.ndarray]:
        ci = np.linalg.inv(c)
        return c @ pair_[0] @ ci, c @ pair_[1] @ ci

    w11 = word_round(1, 1)
    total = pair2(gbar, conj_pair(w11, gbar))
    for i in range(1, k):
        total += pair2(gbar, conj_pair(word_round(1, i), epsln[i]))
        total += pair2(gbar, conj_pair(np.linalg.inv(word_brace(i, 1)), epsln[i]))
        total -= pair2(gbar, conj_pair(np.linalg.inv(word_round(i, 1)), delta[i]))
        total -= pair2(gbar, conj_pair(np.linalg.inv(word_square(i, 1)), delta[i]))
    for i in range(1, k):
        for j in range(1, k):
            total += pair2(delta[i], conj_pair(word_round(i, j), epsln[j]))
    for i in range(1, k):
        for j in range(1, i):
            total += pair2(delta[i], conj_pair(word_square(i, j), delta[j]))
            total -= pair2(epsln[i], conj_pair(word_brace(i, j), epsln[j]))
    return 0.5 * total


# ---------------------------------------------------------------------------
# the k = 2 dual-group picture


def dual_group_view(p: FissionPoint) -> DualGroupPoint:
    """(b_-, b_+, Lambda) for a k = 2 point: b_- = d_1, b_+ = e_1."""
    if p.k != 2:
        raise ValueError("the dual-group picture needs k = 2")
    bm, bp = p.d[0], p.e[0]
    target = np.exp(1j * np.pi * p.lam)
    if np.abs(np.diagonal(bm) * np.diagonal(bp) - 1.0).max() > POINT_ATOL:
        raise ValueError("delta(b_-) delta(b_+) != 1")
    if np.abs(np.diagonal(bp) - target).max() > POINT_ATOL:
        raise ValueError("delta(b_+) != exp(pi i Lambda)")
    return DualGroupPoint(bm, bp, p.lam)
