"""Weights: twisted symmetric powers V_r of the standard representation.

``V_r = (x) Sym^{r_i}(E^2)^{Fr^i}`` for ``r in {0..p-1}^f``.  An element of
K acts through its reduction in SL_2(k); the i-th tensor factor sees the
matrix entries raised to the p^i-th power, then embedded in E.

Convention for Sym^r: g = (a b; c d) sends a homogeneous polynomial P(x, y)
to P(ax + cy, bx + dy).  This is a left action.  The basis of V_r is the set
of monomials (x)_i x^{a_i} y^{r_i - a_i}, ordered lexicographically in
(a_0, ..., a_{f-1}); the last basis vector is the highest-weight monomial
(x)_i x^{r_i}.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable

import numpy as np

from .arith import FieldElement, PadicField
from .gf import GF
from .metaplectic import Mat2


def as_weight(F: PadicField, r) -> tuple[int, ...]:
    """Normalize an int or sequence to a weight vector of length f."""
    if isinstance(r, int):
        r = (r,) + (0,) * (F.f - 1) if F.f > 1 else (r,)
    r = tuple(int(x) for x in r)
    if len(r) != F.f or any(not 0 <= x <= F.p - 1 for x in r):
        raise ValueError(f"weight must be {F.f} integers in [0, {F.p - 1}], got {r}")
    return r


def zero_weight(F: PadicField) -> tuple[int, ...]:
    return (0,) * F.f


def top_weight(F: PadicField) -> tuple[int, ...]:
    return (F.p - 1,) * F.f


def half_weight(F: PadicField) -> tuple[int, ...]:
    return ((F.p - 1) // 2,) * F.f


def all_weights(F: PadicField) -> list[tuple[int, ...]]:
    return [tuple(r) for r in product(range(F.p), repeat=F.f)]


def weight_exponent(F: PadicField, r) -> int:
    return sum(ri * F.p ** i for i, ri in enumerate(r))


def is_admissible_pair(F: PadicField, r, s) -> bool:
    """True when the Hecke bimodule for (r, s) can be nonzero."""
    r, s = as_weight(F, r), as_weight(F, s)
    return r == s or {r, s} == {zero_weight(F), top_weight(F)}


def _sym_matrix(E: GF, r: int, A: int, B: int, C: int, D: int) -> np.ndarray:
    """Matrix of Sym^r(g) for g = (A B; C D) over E in the basis x^a y^{r-a}, a = 0..r."""

    def polymul(P, Q):
        out = [0] * (len(P) + len(Q) - 1)
        for i, x in enumerate(P):
            if x:
                for j, y in enumerate(Q):
                    out[i + j] = E.add(out[i + j], E.mul(x, y))
        return out

    # polynomials in x (coefficient list by power of x) times the matching y power
    X = [C, A]  # image of x: A x + C y
    Y = [D, B]  # image of y: B x + D y
    M = np.zeros((r + 1, r + 1), dtype=np.int64)
    for a in range(r + 1):
        P = [1]
        for _ in range(a):
            P = polymul(P, X)
        for _ in range(r - a):
            P = polymul(P, Y)
        for b, coeff in enumerate(P):
            M[b, a] = coeff
    return M


def _kron(E: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    big = E.mul_table[A[:, None, :, None], B[None, :, None, :]]
    return big.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


class WeightModule:
    """The E-vector space V_r with its action of SL_2(k)."""

    def __init__(self, F: PadicField, r):
        self.F = F
        self.E = F.E
        self.r = as_weight(F, r)
        self.dim = int(np.prod([ri + 1 for ri in self.r]))
        self.top = self.dim - 1
        self._cache: dict[tuple[int, int, int, int], np.ndarray] = {}

    def basis(self) -> list[np.ndarray]:
        return [self.unit_vector(i) for i in range(self.dim)]

    def unit_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def highest_weight(self) -> np.ndarray:
        return self.unit_vector(self.top)

    def monomials(self) -> list[tuple[int, ...]]:
        """x-exponents (a_0, ..., a_{f-1}) of the basis monomials, in basis order."""
        return [tuple(a) for a in product(*[range(ri + 1) for ri in self.r])]

    # -- the action ---------------------------------------------------------------
    def matrix(self, k) -> np.ndarray:
        """Matrix of sigma_r(k) for k an integral Mat2 or a tuple of residue codes (a, b, c, d)."""
        if isinstance(k, Mat2):
            k = k.reduce()
        key = tuple(int(x) for x in k)
        M = self._cache.get(key)
        if M is None:
            M = self._build(key)
            self._cache[key] = M
        return M

    def _build(self, key) -> np.ndarray:
        F, E = self.F, self.E
        kf = F.k
        a, b, c, d = key
        if kf.sub(kf.mul(a, d), kf.mul(b, c)) != 1:
            raise ValueError(f"{key} is not in SL_2 of the residue field")
        M = np.ones((1, 1), dtype=np.int64)
        for i, ri in enumerate(self.r):
            A, B, C, D = (F.embed(kf.frobenius(x, i)) for x in (a, b, c, d))
            M = _kron(E, M, _sym_matrix(E, ri, A, B, C, D))
        return M

    def act(self, k, v: np.ndarray) -> np.ndarray:
        return self.E.matmul(self.matrix(k), v)

    # standard elements by residue codes
    def u(self, x: int) -> np.ndarray:
        return self.matrix((1, x, 0, 1))

    def ubar(self, x: int) -> np.ndarray:
        return self.matrix((1, 0, x, 1))

    def w(self, x: int) -> np.ndarray:
        """sigma(w(x)) for a nonzero residue x, w(x) = (0 x; -x^{-1} 0)."""
        kf = self.F.k
        return self.matrix((0, x, kf.neg(kf.inv(x)), 0))

    def h(self, x: int) -> np.ndarray:
        kf = self.F.k
        return self.matrix((x, 0, 0, kf.inv(x)))

    # -- invariants and coinvariants -------------------------------------------------
    def u_invariants(self) -> np.ndarray:
        """Basis (rows) of the U(k)-invariants, computed as a common kernel."""
        E = self.E
        kf = self.F.k
        gens = [kf.from_coeffs([0] * i + [1]) for i in range(self.F.f)]
        rows = [E.vsub(self.u(x), E.identity(self.dim)) for x in gens]
        return E.nullspace(np.vstack(rows))

    def coinvariant_kernel(self) -> np.ndarray:
        """Span (rows, echelon) of the vectors ubar(z) v - v: the kernel of the coinvariant map."""
        E = self.E
        kf = self.F.k
        gens = [kf.from_coeffs([0] * i + [1]) for i in range(self.F.f)]
        cols = [E.vsub(self.ubar(x), E.identity(self.dim)) for x in gens]
        span = np.hstack(cols).T
        R, piv = E.row_echelon(span)
        return R[: len(piv)]

    def coinv_project(self, v: np.ndarray) -> int:
        """Coordinate of v in the one-dimensional Ubar(k)-coinvariants: the top coefficient."""
        return int(v[self.top])

    def __repr__(self):
        return f"V_{self.r}"


@lru_cache(maxsize=None)
def weight_module(F: PadicField, r) -> WeightModule:
    return WeightModule(F, as_weight(F, r))


def rho_matrix(F: PadicField, r, s) -> np.ndarray:
    """Matrix of rho_{r,s}: V_r -> V_s, v |-> (top coefficient of v) * highest weight of V_s."""
    Vr, Vs = weight_module(F, r), weight_module(F, s)
    M = np.zeros((Vs.dim, Vr.dim), dtype=np.int64)
    if is_admissible_pair(F, Vr.r, Vs.r):
        M[Vs.top, Vr.top] = 1
    return M


def rho(F: PadicField, r, s, v: np.ndarray) -> np.ndarray:
    return F.E.matmul(rho_matrix(F, r, s), v)


def sigma_act(F: PadicField, r, k, v: np.ndarray) -> np.ndarray:
    return weight_module(F, r).act(k, v)


def u_invariants(F: PadicField, r) -> np.ndarray:
    return weight_module(F, r).u_invariants()


def coinv_project(F: PadicField, r, v: np.ndarray) -> int:
    return weight_module(F, r).coinv_project(v)


def delta_char(F: PadicField, r, a: FieldElement | int) -> int:
    """delta_r(a) = image in E of abar^{sum r_i p^i}, for a unit (or a nonzero residue code)."""
    if isinstance(a, FieldElement):
        if not a.is_unit():
            raise ValueError("delta_r is defined on units")
        a = a.leading()
    if a == 0:
        raise ValueError("delta_r is defined on units")
    r = as_weight(F, r)
    return F.embed(F.k.pow(a, weight_exponent(F, r)))


def delta_table(F: PadicField, r) -> tuple[int, ...]:
    """Values of delta_r on the nonzero residues 1..q-1."""
    return tuple(delta_char(F, r, a) for a in F.k.units())


def weight_dict(F: PadicField, r) -> set[tuple[int, ...]]:
    """All r' with sum r'_i p^i = sum (r_i + (p-1)/2) p^i  (mod q - 1)."""
    r = as_weight(F, r)
    target = (weight_exponent(F, r) + weight_exponent(F, half_weight(F))) % (F.q - 1)
    return {rp for rp in all_weights(F) if weight_exponent(F, rp) % (F.q - 1) == target}


def weights_with_character(F: PadicField, table: Iterable[int]) -> list[tuple[int, ...]]:
    """All r whose delta_r has the given value table on residues 1..q-1."""
    table = tuple(table)
    return [r for r in all_weights(F) if delta_table(F, r) == table]
