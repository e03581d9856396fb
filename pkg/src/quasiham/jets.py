"""Exact holomorphic differentiation via truncated forward jets.

A `Jet2` carries the value of a matrix-valued map together with its first
derivatives along m tagged directions and (optionally) the second derivatives
for every unordered pair of directions.  Arithmetic follows the truncated
Leibniz rules, so composite maps built from products, inverses and
exponentials propagate derivatives exactly; finite differences appear in the
test suite only, as oracles.

Second-order tracking is used with at most 3 simultaneous directions (enough
for three-forms); first-order-only jets may carry any number of directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Jet2",
    "ScalarJet",
    "CoordJet",
    "Chart",
    "npairs",
    "pair_slot",
    "pair_arrays",
    "exp_nilpotent",
    "exp_diag",
    "pair_trace",
    "value_jet",
    "slot_jet",
    "scalar_slot_jet",
    "seed_point",
    "extend_point",
    "coord_scalar",
    "linear_map",
    "directional",
    "mc_left",
    "mc_right",
    "pair_one_forms",
    "eta",
    "d_one_form",
    "d_two_form",
]


# ---------------------------------------------------------------------------
# direction-pair bookkeeping


def npairs(m: int) -> int:
    return m * (m + 1) // 2


def pair_slot(m: int, i: int, j: int) -> int:
    """Slot of the unordered pair (i, j) in the canonical order."""
    if i > j:
        i, j = j, i
    return i * m - (i * (i - 1)) // 2 + (j - i)


_PAIR_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def pair_arrays(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (I, J) with I[s] <= J[s] enumerating unordered pairs."""
    if m not in _PAIR_CACHE:
        idx = [(i, j) for i in range(m) for j in range(i, m)]
        ii = np.array([p[0] for p in idx], dtype=int)
        jj = np.array([p[1] for p in idx], dtype=int)
        _PAIR_CACHE[m] = (ii, jj)
    return _PAIR_CACHE[m]


# ---------------------------------------------------------------------------
# matrix-valued jets


class Jet2:
    """Truncated 2-jet of a holomorphic matrix-valued map.

    val: (n, n) value.  first: (m, n, n) directional derivatives, or None for
    a constant.  second: (m(m+1)/2, n, n) derivatives for unordered direction
    pairs in the order given by `pair_arrays`, or None when only first order
    is propagated.
    """

    __slots__ = ("val", "first", "second")

    # defer numpy binary ops to our reflected methods
    __array_ufunc__ = None
    __array_priority__ = 1000

    def __init__(self, val, first=None, second=None):
        self.val = np.asarray(val, dtype=complex)
        self.first = first
        self.second = second

    @property
    def m(self) -> int:
        return 0 if self.first is None else self.first.shape[0]

    @classmethod
    def constant(cls, val) -> "Jet2":
        return cls(val)

    def __add__(self, other):
        o = other if isinstance(other, Jet2) else Jet2(other)
        return Jet2(
            self.val + o.val,
            _zadd(self.first, o.first),
            _zadd(self.second, o.second),
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet2(
            -self.val,
            None if self.first is None else -self.first,
            None if self.second is None else -self.second,
        )

    def __sub__(self, other):
        o = other if isinstance(other, Jet2) else Jet2(other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: complex) -> "Jet2":
        return Jet2(
            c * self.val,
            None if self.first is None else c * self.first,
            None if self.second is None else c * self.second,
        )

    def __matmul__(self, other):
        o = other if isinstance(other, Jet2) else Jet2(other)
        val = self.val @ o.val
        first = None
        if self.first is not None and o.first is not None:
            first = self.first @ o.val + self.val @ o.first
        elif self.first is not None:
            first = self.first @ o.val
        elif o.first is not None:
            first = self.val @ o.first
        second = None
        if self.second is not None:
            second = self.second @ o.val
        if o.second is not None:
            second = _zadd(second, self.val @ o.second)
        if self.first is not None and o.first is not None:
            ii, jj = pair_arrays(self.m)
            cross = self.first[ii] @ o.first[jj] + self.first[jj] @ o.first[ii]
            second = _zadd(second, cross)
        return Jet2(val, first, second)

    def __rmatmul__(self, other):
        return Jet2(other) @ self

    def inv(self) -> "Jet2":
        v = np.linalg.inv(self.val)
        if self.first is None:
            return Jet2(v)
        f = -v @ self.first @ v
        if self.second is None:
            return Jet2(v, f)
        ii, jj = pair_arrays(self.m)
        vf = v @ self.first @ v  # (m,n,n)
        s = -v @ self.second @ v + vf[ii] @ self.first[jj] @ v + vf[jj] @ self.first[ii] @ v
        return Jet2(v, f, s)


def _zadd(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def exp_nilpotent(j: Jet2) -> Jet2:
    """exp of a jet whose value part vanishes: I + j + j@j/2, exact to order 2."""
    n = j.val.shape[0]
    return (j @ j).scale(0.5) + j + np.eye(n)


def _embed_diag(vecs: np.ndarray) -> np.ndarray:
    """(... , n) diagonal vectors -> (..., n, n) diagonal matrices."""
    n = vecs.shape[-1]
    out = np.zeros(vecs.shape + (n,), dtype=complex)
    idx = np.arange(n)
    out[..., idx, idx] = vecs
    return out


def exp_diag(j: Jet2) -> Jet2:
    """Entrywise exponential of a diagonal-matrix-valued jet."""
    d0 = np.diagonal(j.val)
    e0 = np.exp(d0)
    val = np.diag(e0)
    if j.first is None:
        return Jet2(val)
    df = np.diagonal(j.first, axis1=-2, axis2=-1)  # (m, n)
    first = _embed_diag(e0 * df)
    if j.second is None:
        return Jet2(val, first)
    ii, jj = pair_arrays(j.m)
    ds = np.diagonal(j.second, axis1=-2, axis2=-1)
    second = _embed_diag(e0 * (df[ii] * df[jj] + ds))
    return Jet2(val, first, second)


# ---------------------------------------------------------------------------
# scalar jets (results of trace pairings)


@dataclass
class ScalarJet:
    """Scalar counterpart of Jet2, produced by trace pairings."""

    val: complex
    first: np.ndarray | None = None  # (m,)
    second: np.ndarray | None = None  # (m(m+1)/2,)

    __array_ufunc__ = None
    __array_priority__ = 1000

    def __add__(self, other):
        o = other if isinstance(other, ScalarJet) else ScalarJet(complex(other))
        return ScalarJet(self.val + o.val, _zadd(self.first, o.first), _zadd(self.second, o.second))

    __radd__ = __add__

    def __neg__(self):
        return ScalarJet(
            -self.val,
            None if self.first is None else -self.first,
            None if self.second is None else -self.second,
        )

    def __sub__(self, other):
        o = other if isinstance(other, ScalarJet) else ScalarJet(complex(other))
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ScalarJet):
            c = complex(other)
            return ScalarJet(
                c * self.val,
                None if self.first is None else c * self.first,
                None if self.second is None else c * self.second,
            )
        o = other
        val = self.val * o.val
        first = None
        if self.first is not None and o.first is not None:
            first = self.first * o.val + self.val * o.first
        elif self.first is not None:
            first = self.first * o.val
        elif o.first is not None:
            first = self.val * o.first
        second = None
        if self.second is not None:
            second = self.second * o.val
        if o.second is not None:
            second = _zadd(second, self.val * o.second)
        if self.first is not None and o.first is not None:
            m = self.first.shape[0]
            ii, jj = pair_arrays(m)
            second = _zadd(second, self.first[ii] * o.first[jj] + self.first[jj] * o.first[ii])
        return ScalarJet(val, first, second)

    __rmul__ = __mul__


def pair_trace(a: Jet2, b: Jet2) -> ScalarJet:
    """tr(a @ b) with full jet propagation."""
    val = complex(np.einsum("ij,ji->", a.val, b.val))
    first = None
    if a.first is not None:
        first = np.einsum("uij,ji->u", a.first, b.val)
    if b.first is not None:
        t = np.einsum("ij,uji->u", a.val, b.first)
        first = t if first is None else first + t
    second = None
    if a.second is not None:
        second = np.einsum("pij,ji->p", a.second, b.val)
    if b.second is not None:
        t = np.einsum("ij,pji->p", a.val, b.second)
        second = t if second is None else second + t
    if a.first is not None and b.first is not None:
        ii, jj = pair_arrays(a.first.shape[0])
        cross = np.einsum("pij,pji->p", a.first[ii], b.first[jj])
        cross = cross + np.einsum("pij,pji->p", a.first[jj], b.first[ii])
        second = cross if second is None else second + cross
    return ScalarJet(val, first, second)


def value_jet(M: Jet2, wrt: int) -> Jet2:
    """The map value as a 1-direction first-order jet along direction wrt."""
    if M.first is None:
        return Jet2(M.val)
    return Jet2(M.val, M.first[None, wrt])


def slot_jet(M: Jet2, slot: int, wrt: int) -> Jet2:
    """The slot-th first derivative as a 1-direction jet along wrt."""
    s = pair_slot(M.m, slot, wrt)
    return Jet2(M.first[slot], M.second[None, s])


def scalar_slot_jet(s: ScalarJet, slot: int, wrt: int) -> ScalarJet:
    """Scalar analogue of `slot_jet`."""
    m = s.first.shape[0]
    p = pair_slot(m, slot, wrt)
    return ScalarJet(complex(s.first[slot]), np.array([s.second[p]]))


# ---------------------------------------------------------------------------
# chart-level coordinate jets


@dataclass
class CoordJet:
    """A coordinate vector together with seeded directions."""

    val: np.ndarray  # (dim,)
    first: np.ndarray | None = None  # (m, dim)
    second: np.ndarray | None = None  # (m(m+1)/2, dim)

    @property
    def dim(self) -> int:
        return self.val.shape[0]

    @property
    def m(self) -> int:
        return 0 if self.first is None else self.first.shape[0]


@dataclass(frozen=True)
class Chart:
    """A local holomorphic chart: dim coordinates plus an embedding map."""

    dim: int
    embed: Callable[[CoordJet], Jet2]
    labels: tuple[str, ...] = ()


def seed_point(x, vectors: Sequence, order2: bool = True) -> CoordJet:
    """Seed a coordinate point with tangent directions."""
    x = np.asarray(x, dtype=complex)
    first = np.asarray(vectors, dtype=complex).reshape(len(vectors), x.shape[0])
    second = np.zeros((npairs(len(vectors)), x.shape[0]), dtype=complex) if order2 else None
    return CoordJet(x, first, second)


def extend_point(cj: CoordJet, extra: Sequence) -> CoordJet:
    """Append extra seeded directions (coordinates are flat, so seconds stay 0)."""
    extra = np.asarray(extra, dtype=complex).reshape(len(extra), cj.dim)
    vecs = extra if cj.first is None else np.vstack([cj.first, extra])
    m = vecs.shape[0]
    second = np.zeros((npairs(m), cj.dim), dtype=complex)
    if cj.second is not None:
        mi, mj = pair_arrays(cj.m)
        for s, (i, j) in enumerate(zip(mi, mj)):
            second[pair_slot(m, int(i), int(j))] = cj.second[s]
    return CoordJet(cj.val, vecs, second)


def coord_scalar(cj: CoordJet, a: int) -> ScalarJet:
    """The a-th coordinate as a scalar jet."""
    first = None if cj.first is None else cj.first[:, a].copy()
    second = None if cj.second is None else cj.second[:, a].copy()
    return ScalarJet(complex(cj.val[a]), first, second)


def linear_map(cj: CoordJet, basis: np.ndarray, base: np.ndarray | None = None) -> Jet2:
    """The affine map x -> base + sum_a x_a basis[a] as a matrix jet."""
    val = np.einsum("a,aij->ij", cj.val, basis)
    if base is not None:
        val = val + base
    first = None if cj.first is None else np.einsum("ua,aij->uij", cj.first, basis)
    second = None if cj.second is None else np.einsum("pa,aij->pij", cj.second, basis)
    return Jet2(val, first, second)


# ---------------------------------------------------------------------------
# generic differential-geometric operations


def directional(f: Callable[[CoordJet], Jet2], x, v) -> np.ndarray:
    """Exact directional derivative of a chart map at x along v."""
    M = f(seed_point(x, [v], order2=False))
    return M.first[0]


def mc_left(f: Callable[[CoordJet], Jet2], x, v) -> np.ndarray:
    """Pullback of the left-invariant Maurer-Cartan form: g^{-1} dg on v."""
    M = f(seed_point(x, [v], order2=False))
    return np.linalg.inv(M.val) @ M.first[0]


def mc_right(f: Callable[[CoordJet], Jet2], x, v) -> np.ndarray:
    """Pullback of the right-invariant Maurer-Cartan form: (dg) g^{-1} on v."""
    M = f(seed_point(x, [v], order2=False))
    return M.first[0] @ np.linalg.inv(M.val)


def pair_one_forms(A, B, x, X, Y) -> complex:
    """(A, B)(X, Y) = (A(X), B(Y)) - (A(Y), B(X)) with the trace pairing."""
    ax, ay = A(x, X), A(x, Y)
    bx, by = B(x, X), B(x, Y)
    return complex(np.einsum("ij,ji->", ax, by) - np.einsum("ij,ji->", ay, bx))


def eta(g, u, v, w) -> complex:
    """Canonical bi-invariant three-form of G on ambient tangents at g."""
    gi = np.linalg.inv(np.asarray(g, dtype=complex))
    a, b, c = gi @ u, gi @ v, gi @ w
    return 0.5 * complex(np.einsum("ij,ji->", a, b @ c - c @ b))


def d_one_form(sigma, x, pair: tuple[int, int]) -> complex:
    """d(sigma)(e_i, e_j) for a scalar-jet one-form on coordinate directions.

    sigma(cj, slot) must return sigma contracted with the slot-th seeded
    direction as a ScalarJet over all of cj's directions.
    """
    i, j = pair
    dim = np.asarray(x).shape[0]
    ei, ej = np.eye(dim)[i], np.eye(dim)[j]
    cj = seed_point(x, [ei, ej], order2=True)
    si = sigma(cj, 0)
    sj = sigma(cj, 1)
    return complex(sj.first[0] - si.first[1])


def d_two_form(omega, x, triple: tuple[int, int, int]) -> complex:
    """Exterior derivative of a two-form on a coordinate triple.

    omega(cj, i, j) must return omega(e_i, e_j) at the (possibly jet-valued)
    point cj as a ScalarJet over cj's seeded directions; the outer derivatives
    are then read off by degree-2 jet propagation.  Coordinate vector fields
    commute, so d reduces to the alternating sum of coordinate derivatives.
    """
    a, b, c = triple
    dim = np.asarray(x).shape[0]
    e = np.eye(dim)
    total = 0.0 + 0.0j

    for sign, outer, rest in ((1, a, (b, c)), (-1, b, (a, c)), (1, c, (a, b))):
        cj = seed_point(x, [e[outer]], order2=True)
        s = omega(cj, rest[0], rest[1])
        total += sign * complex(s.first[0])
    return total
