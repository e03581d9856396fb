"""Additive analogues: jet groups, principal parts, and extended orbits.

G_k = G(C[z]/z^k) acts coadjointly on principal parts
A = A_0 dz/z^k + ... + A_{k-1} dz/z via the residue pairing
<A, X> = sum_{i+j=k-1} (A_i, X_j).  The extended orbit attached to a
diagonal irregular type pairs a framing g_0 with a principal part whose
framed irregular part lies on the B_k-coadjoint orbit of the type; its
symplectic form is taken in decoupled shape: canonical T*G (left
trivialization) plus the orbit form on O_B, pulled back through
(g_0, A) -> (g_0, res(A), irr(g_0 A g_0^{-1})).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import GroupContext, cartan_regularity
from .jets import Jet2, pair_slot, pair_trace, slot_jet, value_jet
from .numeric import rand_disc, rand_gl
from .spaces.base import leftexp_block, affine_block

__all__ = [
    "JetGroupElement",
    "JetAlgebraElement",
    "PrincipalPart",
    "ExtendedPoint",
    "ExtendedChartPoint",
    "ExtendedOrbit",
    "ExtendedOrbitSimple",
    "NormalizationError",
    "extended_orbit",
    "res_pairing",
    "coadjoint",
    "coadjoint_algebra",
    "pi_res",
    "pi_irr",
    "jet_bracket",
    "generate_extended",
    "formal_normalize",
    "orbit_dimension",
]


class NormalizationError(RuntimeError):
    """The principal part cannot be brought to the target diagonal shape."""


# ---------------------------------------------------------------------------
# truncated polynomial arithmetic (entries: ndarrays or Jet2)


def _inv(x):
    return x.inv() if isinstance(x, Jet2) else np.linalg.inv(x)


def _zero_like(template):
    if isinstance(template, Jet2):
        z = np.zeros_like(template.val)
        first = None if template.first is None else np.zeros_like(template.first)
        second = None if template.second is None else np.zeros_like(template.second)
        return Jet2(z, first, second)
    return np.zeros_like(template)


def poly_mul(a: list, b: list, trunc: int) -> list:
    out: list = [None] * trunc
    for i, ai in enumerate(a):
        if i >= trunc:
            break
        for j, bj in enumerate(b):
            if i + j >= trunc:
                break
            t = ai @ bj
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    z = _zero_like(a[0] @ b[0])
    return [z if c is None else c for c in out]


def poly_inv(a: list, trunc: int) -> list:
    c0 = _inv(a[0])
    out = [c0]
    for m in range(1, trunc):
        acc = None
        for i in range(1, m + 1):
            if i < len(a):
                t = a[i] @ out[m - i]
                acc = t if acc is None else acc + t
        out.append(_zero_like(out[0]) if acc is None else -(c0 @ acc))
    return out


def _conj_coeffs(g: list, a: list, trunc: int) -> list:
    """Coefficients 0..trunc-1 of g(z) a(z) g(z)^{-1}."""
    return poly_mul(poly_mul(g, a, trunc), poly_inv(g, trunc), trunc)


# ---------------------------------------------------------------------------
# public data types


@dataclass(frozen=True)
class JetGroupElement:
    """g(z) = g_0 + g_1 z + ... + g_{k-1} z^{k-1} mod z^k with g_0 invertible."""

    coeffs: np.ndarray  # (k, n, n)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", c)
        if abs(np.linalg.det(c[0])) < 1e-300:
            raise ValueError("constant term must be invertible")

    @property
    def k(self) -> int:
        return self.coeffs.shape[0]

    def __matmul__(self, other: "JetGroupElement") -> "JetGroupElement":
        return JetGroupElement(np.stack(poly_mul(list(self.coeffs), list(other.coeffs), self.k)))

    def inv(self) -> "JetGroupElement":
        return JetGroupElement(np.stack(poly_inv(list(self.coeffs), self.k)))

    @classmethod
    def identity(cls, k: int, n: int) -> "JetGroupElement":
        c = np.zeros((k, n, n), dtype=complex)
        c[0] = np.eye(n)
        return cls(c)

    def is_unit_constant(self, atol: float = 1e-10) -> bool:
        n = self.coeffs.shape[1]
        return bool(np.abs(self.coeffs[0] - np.eye(n)).max() <= atol)


@dataclass(frozen=True)
class JetAlgebraElement:
    """X(z) = X_0 + X_1 z + ... + X_{k-1} z^{k-1}."""

    coeffs: np.ndarray  # (k, n, n)

    @property
    def k(self) -> int:
        return self.coeffs.shape[0]


@dataclass(frozen=True)
class PrincipalPart:
    """A = A_0 dz/z^k + ... + A_{k-1} dz/z; coeffs[k-1] is the residue."""

    coeffs: np.ndarray  # (k, n, n)

    @property
    def k(self) -> int:
        return self.coeffs.shape[0]

    @property
    def residue(self) -> np.ndarray:
        return self.coeffs[-1]


@dataclass(frozen=True)
class ExtendedPoint:
    """(g_0, A): a framing together with a principal part."""

    g0: np.ndarray
    A: PrincipalPart


def res_pairing(A: PrincipalPart, X) -> complex:
    """<A, X> = Res_0 (A, X) = sum_{i+j=k-1} tr(A_i X_j)."""
    xc = X.coeffs if isinstance(X, JetAlgebraElement) else np.asarray(X, dtype=complex)
    if xc.ndim == 2:  # a constant algebra element
        return complex(np.einsum("ij,ji->", A.coeffs[-1], xc))
    if xc.shape != A.coeffs.shape:
        raise ValueError(f"shape mismatch: {A.coeffs.shape} vs {xc.shape}")
    k = A.k
    return complex(sum(np.einsum("ij,ji->", A.coeffs[i], xc[k - 1 - i]) for i in range(k)))


def coadjoint(g: JetGroupElement, A: PrincipalPart) -> PrincipalPart:
    """Coadjoint action: the principal part of g(z) A(z) g(z)^{-1}.

    Exact for the residue pairing: the discarded orders never pair with
    polynomial jets, so <coadjoint(g, A), X> = <A, g^{-1} X g> to roundoff.
    """
    return PrincipalPart(np.stack(_conj_coeffs(list(g.coeffs), list(A.coeffs), A.k)))


def coadjoint_algebra(X: JetAlgebraElement, A: PrincipalPart) -> PrincipalPart:
    """Infinitesimal coadjoint action: principal part of [X(z), A(z)]."""
    xy = poly_mul(list(X.coeffs), list(A.coeffs), A.k)
    yx = poly_mul(list(A.coeffs), list(X.coeffs), A.k)
    return PrincipalPart(np.stack([a - b for a, b in zip(xy, yx)]))


def pi_res(A: PrincipalPart) -> PrincipalPart:
    out = np.zeros_like(A.coeffs)
    out[-1] = A.coeffs[-1]
    return PrincipalPart(out)


def pi_irr(A: PrincipalPart) -> PrincipalPart:
    out = A.coeffs.copy()
    out[-1] = 0.0
    return PrincipalPart(out)


def jet_bracket(X: JetAlgebraElement, Y: JetAlgebraElement) -> JetAlgebraElement:
    xy = poly_mul(list(X.coeffs), list(Y.coeffs), X.k)
    yx = poly_mul(list(Y.coeffs), list(X.coeffs), X.k)
    return JetAlgebraElement(np.stack([a - b for a, b in zip(xy, yx)]))


# ---------------------------------------------------------------------------
# normalization to the diagonal irregular type


def _check_irregular_type(irr: np.ndarray) -> None:
    k = irr.shape[0]
    for i in range(k - 1):
        if np.abs(irr[i] - np.diag(np.diagonal(irr[i]))).max() > 1e-12:
            raise ValueError("irregular type coefficients must be diagonal")
    if np.abs(irr[-1]).max() > 1e-12:
        raise ValueError("irregular type must have zero residue")
    lead = np.diagonal(irr[0])
    if not cartan_regularity(lead).regular:
        raise ValueError("leading coefficient must be regular")


def formal_normalize(p: ExtendedPoint, irr: np.ndarray,
                     atol: float = 1e-8) -> tuple[JetGroupElement, np.ndarray]:
    """Bring g_0 A g_0^{-1} to the shape irr + R dz/z by a unit-constant jet.

    Solved order by order: the off-diagonal part of each correction inverts
    ad of the regular leading coefficient; diagonal parts of the corrections
    are set to zero (a gauge choice; delta(R) does not depend on it).
    Raises NormalizationError when the diagonal parts cannot match, i.e. the
    point is not on the orbit of the given type.
    """
    irr = np.asarray(irr, dtype=complex)
    _check_irregular_type(irr)
    k = irr.shape[0]
    if p.A.k != k:
        raise ValueError("pole order mismatch")
    n = irr.shape[1]
    g0i = np.linalg.inv(p.g0)
    X = [p.g0 @ c @ g0i for c in p.A.coeffs]
    scale = max(1.0, max(np.abs(c).max() for c in X))
    if np.abs(X[0] - irr[0]).max() > atol * scale:
        raise NormalizationError("leading coefficient differs from the type's")

    lead = np.diagonal(irr[0])
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = 1.0 / (lead[:, None] - lead[None, :])
    np.fill_diagonal(weights, 0.0)

    bacc = JetGroupElement.identity(k, n)
    for j in range(1, k - 1):
        M = X[j] - irr[j]
        if np.abs(np.diagonal(M)).max() > atol * scale:
            raise NormalizationError(
                f"order-{j} diagonal part off the orbit of the irregular type")
        bj = weights * M
        u = np.zeros((k, n, n), dtype=complex)
        u[0] = np.eye(n)
        u[j] = bj
        uj = JetGroupElement(u)
        X = _conj_coeffs(list(uj.coeffs), X, k)
        bacc = uj @ bacc
    return bacc, X[k - 1]


def generate_extended(g0, b: JetGroupElement, R, irr: np.ndarray) -> ExtendedPoint:
    """A point with A := g_0^{-1} coadjoint(b, irr + R dz/z) g_0.

    Membership in the extended orbit holds by construction, and the
    normalization recovers exactly irr + R dz/z, so Lambda = delta(R).
    """
    irr = np.asarray(irr, dtype=complex)
    _check_irregular_type(irr)
    if not b.is_unit_constant():
        raise ValueError("b must have unit constant term")
    g0 = np.asarray(getattr(g0, "mat", g0), dtype=complex)
    seed = irr.copy()
    seed[-1] = np.asarray(getattr(R, "mat", R), dtype=complex)
    moved = coadjoint(b, PrincipalPart(seed))
    g0i = np.linalg.inv(g0)
    return ExtendedPoint(g0, PrincipalPart(np.stack([g0i @ c @ g0 for c in moved.coeffs])))


# ---------------------------------------------------------------------------
# orbit dimensions


def orbit_dimension(xi: PrincipalPart, ctx: GroupContext, algebra: str = "g",
                    rtol: float = 1e-7):
    """Rank of M_ab = <xi, [X_a, X_b]> over a monomial basis of g_k or b_k."""
    from .numeric import numerical_rank

    k = xi.k
    n = ctx.n
    basis_deg = range(0, k) if algebra == "g" else range(1, k)
    mats = ctx.gl_basis()
    # T[m][a, b] = tr(xi_{k-1-m} [E_a, E_b]) for total monomial degree m
    T = []
    for m in range(2 * k - 1):
        idx = k - 1 - m
        if 0 <= idx < k:
            comm = np.einsum("rij,sjl->rsil", mats, mats) - np.einsum(
                "sij,rjl->rsil", mats, mats)
            T.append(np.einsum("ij,rsji->rs", xi.coeffs[idx], comm))
        else:
            T.append(np.zeros((n * n, n * n), dtype=complex))
    degs = list(basis_deg)
    dim = len(degs) * n * n
    gram = np.zeros((dim, dim), dtype=complex)
    for a, p in enumerate(degs):
        for b, q in enumerate(degs):
            gram[a * n * n:(a + 1) * n * n, b * n * n:(b + 1) * n * n] = T[p + q]
    s = np.linalg.svd(gram, compute_uv=False)
    return numerical_rank(s, rtol=rtol)


# ---------------------------------------------------------------------------
# extended orbits


@dataclass(frozen=True)
class ExtendedChartPoint:
    """Chart data (g_0, b, R) of an extended-orbit point; b sweeps O_B."""

    g0: np.ndarray
    b: JetGroupElement
    R: np.ndarray


class ExtendedOrbit:
    """The extended orbit of a diagonal irregular type, pole order k >= 2.

    Chart coordinates: g_0 by a left exponential chart, the k-1 higher
    coefficients of b entrywise, and R entrywise.  The chart is a submersion
    onto the orbit; the stabilizer of the type inside B_k contributes a
    known-dimensional gauge kernel to the pulled-back form.
    """

    # fixed by requiring the -Lambda and res(A) moment conditions to hold
    orbit_sign = 1.0

    def __init__(self, ctx: GroupContext, k: int, irr: np.ndarray):
        if k < 2:
            raise ValueError("use ExtendedOrbitSimple for k = 1")
        irr = np.asarray(irr, dtype=complex)
        _check_irregular_type(irr)
        if irr.shape[0] != k:
            raise ValueError("irregular type has wrong pole order")
        self.ctx = ctx
        self.k = k
        self.irr = irr
        n = ctx.n
        self.dim = (k + 1) * n * n
        self._gl = ctx.gl_basis()
        self.label = f"extended(k={k})"
        self._sl_g0 = slice(0, n * n)
        self._sl_b = [slice((j + 1) * n * n, (j + 2) * n * n) for j in range(k - 1)]
        self._sl_R = slice(k * n * n, (k + 1) * n * n)

    @property
    def gauge_dim(self) -> int:
        """Stabilizer of the type in B_k: diagonal jets plus the top level."""
        n = self.ctx.n
        return (self.k - 2) * n + n * n

    def chart_point(self, g0, b: JetGroupElement, R) -> ExtendedChartPoint:
        g0 = np.asarray(getattr(g0, "mat", g0), dtype=complex)
        R = np.asarray(getattr(R, "mat", R), dtype=complex)
        if not b.is_unit_constant():
            raise ValueError("b must have unit constant term")
        return ExtendedChartPoint(g0, b, R)

    def random_point(self, rng: np.random.Generator) -> ExtendedChartPoint:
        n = self.ctx.n
        bc = np.zeros((self.k, n, n), dtype=complex)
        bc[0] = np.eye(n)
        bc[1:] = rand_disc(rng, (self.k - 1, n, n))
        return ExtendedChartPoint(rand_gl(rng, n), JetGroupElement(bc),
                                  rand_disc(rng, (n, n)))

    def extended_point(self, p: ExtendedChartPoint) -> ExtendedPoint:
        return generate_extended(p.g0, p.b, p.R, self.irr)

    # chart evaluation ---------------------------------------------------

    def evaluate(self, p: ExtendedChartPoint, seeds: np.ndarray,
                 order2: bool = False) -> dict:
        n = self.ctx.n
        k = self.k
        g0 = leftexp_block(p.g0, seeds[:, self._sl_g0], self._gl, order2)
        bjets: list = [Jet2(np.eye(n))]
        for j in range(k - 1):
            bjets.append(affine_block(p.b.coeffs[j + 1], seeds[:, self._sl_b[j]],
                                      self._gl, order2))
        Rjet = affine_block(p.R, seeds[:, self._sl_R], self._gl, order2)
        seed = [Jet2(self.irr[i]) for i in range(k - 1)] + [Rjet]
        binv = poly_inv(bjets, k)
        adb = poly_mul(poly_mul(bjets, seed, k), binv, k)
        rho = g0.inv() @ adb[k - 1] @ g0
        return {"g0": g0, "b": bjets, "binv": binv, "R": Rjet,
                "adb": adb, "rho": rho, "xi": adb[: k - 1]}

    def _orbit_generators(self, ev: dict, m: int) -> np.ndarray:
        """Z_u = (d_u b)(z) b(z)^{-1} as (m, k, n, n) coefficient values."""
        n = self.ctx.n
        k = self.k
        Z = np.zeros((m, k, n, n), dtype=complex)
        binv_vals = [c.val for c in ev["binv"]]
        for u in range(m):
            db = [np.zeros((n, n), dtype=complex)]
            db += [ev["b"][j].first[u] for j in range(1, k)]
            Z[u] = np.stack(poly_mul(db, binv_vals, k))
        return Z

    def gram(self, p: ExtendedChartPoint) -> np.ndarray:
        """Gram matrix of the two-form over the chart coordinate directions."""
        m = self.dim
        ev = self.evaluate(p, np.eye(m, dtype=complex), order2=False)
        g0 = ev["g0"]
        X = np.linalg.inv(g0.val) @ g0.first
        phi = ev["rho"].first
        rho0 = ev["rho"].val
        cot = np.einsum("bij,aji->ab", phi, X) - np.einsum("aij,bji->ab", phi, X)
        comm = np.einsum("aij,bjl->abil", X, X)
        cot += np.einsum("ij,abji->ab", rho0, comm - comm.transpose(1, 0, 2, 3))
        Z = self._orbit_generators(ev, m)
        orb = np.zeros((m, m), dtype=complex)
        k = self.k
        xi = [c.val for c in ev["xi"]]
        for pdeg in range(k):
            for qdeg in range(k):
                i = k - 1 - pdeg - qdeg
                if 0 <= i < k - 1:
                    t = np.einsum("ij,ajl,bli->ab", xi[i], Z[:, pdeg], Z[:, qdeg])
                    orb += t - t.T
        return cot + self.orbit_sign * orb

    def omega(self, p: ExtendedChartPoint, v, w) -> complex:
        seeds = np.vstack([np.asarray(v, dtype=complex), np.asarray(w, dtype=complex)])
        return complex(self._gram_on(p, seeds)[0, 1])

    def _gram_on(self, p: ExtendedChartPoint, seeds: np.ndarray) -> np.ndarray:
        m = seeds.shape[0]
        ev = self.evaluate(p, seeds, order2=False)
        g0 = ev["g0"]
        X = np.linalg.inv(g0.val) @ g0.first
        phi = ev["rho"].first
        rho0 = ev["rho"].val
        gram = np.einsum("bij,aji->ab", phi, X) - np.einsum("aij,bji->ab", phi, X)
        comm = np.einsum("aij,bjl->abil", X, X)
        gram += np.einsum("ij,abji->ab", rho0, comm - comm.transpose(1, 0, 2, 3))
        Z = self._orbit_generators(ev, m)
        k = self.k
        xi = [c.val for c in ev["xi"]]
        for pdeg in range(k):
            for qdeg in range(k):
                i = k - 1 - pdeg - qdeg
                if 0 <= i < k - 1:
                    t = np.einsum("ij,ajl,bli->ab", xi[i], Z[:, pdeg], Z[:, qdeg])
                    gram += self.orbit_sign * (t - t.T)
        return gram

    def domega(self, p: ExtendedChartPoint, triple: tuple[int, int, int]) -> complex:
        """Exterior derivative of the form on chart coordinate directions."""
        seeds = np.eye(self.dim, dtype=complex)[list(triple)]
        ev = self.evaluate(p, seeds, order2=True)
        k = self.k
        n = self.ctx.n
        g0 = ev["g0"]
        total = 0.0 + 0.0j
        for sign, w, (u, v) in ((1, 0, (1, 2)), (-1, 1, (0, 2)), (1, 2, (0, 1))):
            g0w = value_jet(g0, w).inv()
            Xu = g0w @ slot_jet(g0, u, w)
            Xv = g0w @ slot_jet(g0, v, w)
            phiu = slot_jet(ev["rho"], u, w)
            phiv = slot_jet(ev["rho"], v, w)
            rhoj = value_jet(ev["rho"], w)
            term = pair_trace(phiv, Xu) - pair_trace(phiu, Xv)
            term = term + pair_trace(rhoj, Xu @ Xv - Xv @ Xu)

            binv_w = [value_jet(c, w) for c in ev["binv"]]
            zero = Jet2(np.zeros((n, n), dtype=complex),
                        np.zeros((1, n, n), dtype=complex))

            def gen(slot: int) -> list:
                db = [zero] + [slot_jet(ev["b"][j], slot, w) for j in range(1, k)]
                return poly_mul(db, binv_w, k)

            Zu, Zv = gen(u), gen(v)
            xi_w = [value_jet(c, w) for c in ev["xi"]]
            orb = None
            for pdeg in range(k):
                for qdeg in range(k):
                    i = k - 1 - pdeg - qdeg
                    if 0 <= i < k - 1:
                        br = Zu[pdeg] @ Zv[qdeg] - Zv[qdeg] @ Zu[pdeg]
                        t = pair_trace(xi_w[i], br)
                        orb = t if orb is None else orb + t
            if orb is not None:
                term = term + orb * self.orbit_sign
            total += sign * term.first[0]
        return complex(total)

    # actions and moments -------------------------------------------------

    def act_g(self, h: np.ndarray, p: ExtendedChartPoint) -> ExtendedChartPoint:
        h = np.asarray(getattr(h, "mat", h), dtype=complex)
        return ExtendedChartPoint(p.g0 @ np.linalg.inv(h), p.b, p.R)

    def act_t(self, t: np.ndarray, p: ExtendedChartPoint) -> ExtendedChartPoint:
        t = np.asarray(getattr(t, "mat", t), dtype=complex)
        ti = np.linalg.inv(t)
        return ExtendedChartPoint(t @ p.g0,
                                  JetGroupElement(t @ p.b.coeffs @ ti),
                                  t @ p.R @ ti)

    def fundamental_vector(self, kind: str, X: np.ndarray,
                           p: ExtendedChartPoint) -> np.ndarray:
        X = np.asarray(getattr(X, "mat", X), dtype=complex)
        v = np.zeros(self.dim, dtype=complex)
        if kind == "G":
            v[self._sl_g0] = X.ravel()
            return v
        v[self._sl_g0] = (-np.linalg.inv(p.g0) @ X @ p.g0).ravel()
        for j in range(self.k - 1):
            bj = p.b.coeffs[j + 1]
            v[self._sl_b[j]] = (-(X @ bj - bj @ X)).ravel()
        v[self._sl_R] = (-(X @ p.R - p.R @ X)).ravel()
        return v

    def moment_residuals(self, p: ExtendedChartPoint) -> dict[str, float]:
        """Worst residual of the Hamiltonian condition for each factor."""
        n = self.ctx.n
        ev = self.evaluate(p, np.eye(self.dim, dtype=complex), order2=False)
        out = {}
        for kind, basis in (("G", self.ctx.gl_basis()),
                            ("T", np.stack([np.diag(np.eye(n)[i]) for i in range(n)]))):
            worst = 0.0
            for X in basis:
                vX = self.fundamental_vector(kind, X, p)
                seeds = np.vstack([vX[None, :], np.eye(self.dim, dtype=complex)])
                lhs = self._gram_on(p, seeds)[0, 1:]
                if kind == "G":
                    rhs = np.einsum("bij,ji->b", ev["rho"].first, X)
                else:
                    rhs = -np.einsum("bii,ii->b", ev["R"].first, X)
                scale = max(1.0, np.abs(lhs).max(), np.abs(rhs).max())
                worst = max(worst, float(np.abs(lhs - rhs).max() / scale))
            out[kind] = worst
        return out

    def lambda_jacobian(self, p: ExtendedChartPoint) -> np.ndarray:
        """d(Lambda) over the chart: rows are diagonals of dR."""
        ev = self.evaluate(p, np.eye(self.dim, dtype=complex), order2=False)
        dR = ev["R"].first  # (dim, n, n)
        return np.diagonal(dR, axis1=1, axis2=2).T.copy()  # (n, dim)


class ExtendedOrbitSimple:
    """k = 1 extended orbit: pairs (g_0, A) with g_0 A g_0^{-1} in t_1."""

    label = "extended(k=1)"
    k = 1

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        n = ctx.n
        self.dim = n * n + n
        self._gl = ctx.gl_basis()
        self._sl_g0 = slice(0, n * n)
        self._sl_lam = slice(n * n, n * n + n)

    def chart_point(self, g0, lam) -> ExtendedChartPoint:
        g0 = np.asarray(getattr(g0, "mat", g0), dtype=complex)
        lam = np.asarray(getattr(lam, "diag", lam), dtype=complex)
        if not cartan_regularity(lam).affine_regular:
            raise ValueError("Lambda must be affine-regular")
        bc = np.eye(self.ctx.n, dtype=complex)[None]
        return ExtendedChartPoint(g0, JetGroupElement(bc), np.diag(lam))

    def random_point(self, rng: np.random.Generator) -> ExtendedChartPoint:
        n = self.ctx.n
        while True:
            lam = 0.5 * rand_disc(rng, (n,))
            if cartan_regularity(lam).affine_regular:
                return self.chart_point(rand_gl(rng, n), lam)

    def extended_point(self, p: ExtendedChartPoint) -> ExtendedPoint:
        g0i = np.linalg.inv(p.g0)
        return ExtendedPoint(p.g0, PrincipalPart((g0i @ p.R @ p.g0)[None]))

    def evaluate(self, p: ExtendedChartPoint, seeds: np.ndarray,
                 order2: bool = False) -> dict:
        from .spaces.base import cartan_jet

        g0 = leftexp_block(p.g0, seeds[:, self._sl_g0], self._gl, order2)
        lam = cartan_jet(np.diagonal(p.R), seeds[:, self._sl_lam], order2)
        rho = g0.inv() @ lam @ g0
        return {"g0": g0, "Lam": lam, "rho": rho}

    def _gram_on(self, p: ExtendedChartPoint, seeds: np.ndarray) -> np.ndarray:
        ev = self.evaluate(p, seeds, order2=False)
        g0 = ev["g0"]
        X = np.linalg.inv(g0.val) @ g0.first
        phi = ev["rho"].first
        rho0 = ev["rho"].val
        gram = np.einsum("bij,aji->ab", phi, X) - np.einsum("aij,bji->ab", phi, X)
        comm = np.einsum("aij,bjl->abil", X, X)
        gram += np.einsum("ij,abji->ab", rho0, comm - comm.transpose(1, 0, 2, 3))
        return gram

    def gram(self, p: ExtendedChartPoint) -> np.ndarray:
        return self._gram_on(p, np.eye(self.dim, dtype=complex))

    def omega(self, p: ExtendedChartPoint, v, w) -> complex:
        seeds = np.vstack([np.asarray(v, dtype=complex), np.asarray(w, dtype=complex)])
        return complex(self._gram_on(p, seeds)[0, 1])

    def fundamental_vector(self, kind: str, X: np.ndarray,
                           p: ExtendedChartPoint) -> np.ndarray:
        X = np.asarray(getattr(X, "mat", X), dtype=complex)
        v = np.zeros(self.dim, dtype=complex)
        if kind == "G":
            v[self._sl_g0] = X.ravel()
        else:
            v[self._sl_g0] = (-np.linalg.inv(p.g0) @ X @ p.g0).ravel()
        return v

    def moment_residuals(self, p: ExtendedChartPoint) -> dict[str, float]:
        n = self.ctx.n
        ev = self.evaluate(p, np.eye(self.dim, dtype=complex), order2=False)
        out = {}
        for kind, basis in (("G", self.ctx.gl_basis()),
                            ("T", np.stack([np.diag(np.eye(n)[i]) for i in range(n)]))):
            worst = 0.0
            for X in basis:
                vX = self.fundamental_vector(kind, X, p)
                seeds = np.vstack([vX[None, :], np.eye(self.dim, dtype=complex)])
                lhs = self._gram_on(p, seeds)[0, 1:]
                if kind == "G":
                    rhs = np.einsum("bij,ji->b", ev["rho"].first, X)
                else:
                    rhs = -np.einsum("bii,ii->b", ev["Lam"].first, X)
                scale = max(1.0, np.abs(lhs).max(), np.abs(rhs).max())
                worst = max(worst, float(np.abs(lhs - rhs).max() / scale))
            out[kind] = worst
        return out


def extended_orbit(ctx: GroupContext, k: int, irr: np.ndarray | None = None):
    """The extended orbit for pole order k (k = 1 needs no irregular type)."""
    if k == 1:
        return ExtendedOrbitSimple(ctx)
    if irr is None:
        raise ValueError("k >= 2 needs an irregular type")
    return ExtendedOrbit(ctx, k, irr)
