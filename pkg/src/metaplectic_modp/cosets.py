"""Coset representatives for G~/K*, decompositions, and Cartan-Iwasawa counts.

The left cosets of K* in the cover are indexed by

* depth 0: the identity;
* kind 0, depth n >= 1: h0(2n, kappa) = h~(p)^n u~(kappa p^{-2n}) (1, (-1, p^n)),
  kappa in I_{2n};
* kind 1, depth n >= 1: h1(2n-1, 0) = h~(p)^{-n} and, for 0 != kappa in I_{2n-1}
  with v = v(kappa),  h1(2n-1, kappa) = h~(p)^{n-v-1} u~(kappa p^{-2n+1}) (1, eta_n(kappa)).

Labels kappa are stored as tuples of Teichmuller digits, so all the label
arithmetic needed by the Hecke action is digit manipulation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .arith import FieldElement, PadicField, hilbert_from_data, hilbert_symbol
from .metaplectic import (
    Mat2,
    MetaElem,
    central,
    h_mat,
    h_pi_power,
    identity,
    meta_identity,
    phi,
    theta,
    u_mat,
    u_tilde,
    ubar_mat,
    ubar_tilde,
    w_mat,
)


class DecompositionError(ArithmeticError):
    pass


@dataclass(frozen=True, order=True)
class CosetRep:
    """Canonical left K*-coset representative: kind (0 or 1), depth n, digit label."""

    n: int
    kind: int
    kappa: tuple[int, ...]

    def __post_init__(self):
        if self.n == 0:
            if self.kind != 0 or self.kappa:
                raise ValueError("the depth-0 representative is the identity")
        elif self.kind == 0 and len(self.kappa) != 2 * self.n:
            raise ValueError("kind-0 labels have 2n digits")
        elif self.kind == 1 and len(self.kappa) != 2 * self.n - 1:
            raise ValueError("kind-1 labels have 2n-1 digits")
        elif self.kind not in (0, 1):
            raise ValueError("kind must be 0 or 1")

    @property
    def m(self) -> int:
        """Length of the label: 2n for kind 0, 2n - 1 for kind 1."""
        return 2 * self.n - self.kind

    def label_valuation(self) -> int | None:
        for i, c in enumerate(self.kappa):
            if c:
                return i
        return None

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "kappa": list(self.kappa)}

    @staticmethod
    def from_json(obj) -> "CosetRep":
        return CosetRep(int(obj["n"]), int(obj["kind"]), tuple(int(c) for c in obj["kappa"]))

    def __str__(self):
        if self.n == 0:
            return "1"
        return f"h{self.kind}[{self.m};{''.join(map(str, self.kappa))}]"


def identity_rep() -> CosetRep:
    return CosetRep(0, 0, ())


def rep0(n: int, kappa) -> CosetRep:
    return CosetRep(n, 0, tuple(kappa)) if n else identity_rep()


def rep1(n: int, kappa) -> CosetRep:
    return CosetRep(n, 1, tuple(kappa))


# -- the signs eta_n -------------------------------------------------------------------

def eta_from_data(F: PadicField, n: int, v: int, lead: int) -> int:
    """eta_n(lambda) for lambda of valuation v and leading residue digit ``lead``."""
    e = -v - 1
    s = phi(F, e)
    s *= hilbert_from_data(F, v, lead, e, 1)
    if n % 2 and F.minus_one_pi() == -1:
        s = -s
    return s


def eta(F: PadicField, n: int, lam: FieldElement) -> int:
    """eta_n(lambda) = phi(-v-1) (lambda, p^{-v-1})_F (-1, p^n)_F for lambda != 0."""
    if n < 1:
        raise ValueError("eta_n needs n >= 1")
    if lam.is_zero():
        raise ValueError("eta_n(0) is undefined")
    v = lam.val
    pi = F.uniformizer()
    return phi(F, -v - 1) * hilbert_symbol(lam, F.pi_power(-v - 1)) * hilbert_symbol(-F.one(), pi ** n)


def eta_digits(F: PadicField, n: int, kappa: tuple[int, ...]) -> int:
    for v, c in enumerate(kappa):
        if c:
            return eta_from_data(F, n, v, c)
    raise ValueError("eta_n(0) is undefined")


# -- representatives as group elements ------------------------------------------------------

@lru_cache(maxsize=200_000)
def rep_element(F: PadicField, rep: CosetRep) -> MetaElem:
    """The representative as an element of the cover, built from its defining product."""
    n = rep.n
    if n == 0:
        return meta_identity(F)
    lam = F.from_digits(rep.kappa)
    if rep.kind == 0:
        x = lam * F.pi_power(-2 * n)
        return h_pi_power(F, n) * u_tilde(x) * central(F, F.minus_one_pi() ** n)
    if lam.is_zero():
        return h_pi_power(F, -n)
    v = lam.val
    x = lam * F.pi_power(-2 * n + 1)
    return h_pi_power(F, n - v - 1) * u_tilde(x) * central(F, eta_digits(F, n, rep.kappa))


def rep_matrix(F: PadicField, rep: CosetRep) -> Mat2:
    """Closed-form matrix of a representative."""
    n = rep.n
    if n == 0:
        return identity(F)
    lam = F.from_digits(rep.kappa)
    if rep.kind == 0:
        return Mat2(F.pi_power(n), lam * F.pi_power(-n), F.zero(), F.pi_power(-n))
    if lam.is_zero():
        return h_mat(F.pi_power(-n))
    v = lam.val
    return Mat2(F.pi_power(n - v - 1), lam * F.pi_power(-n - v), F.zero(), F.pi_power(-n + v + 1))


def coset_reps(F: PadicField, n: int, kind: int | None = None) -> list[CosetRep]:
    """The representatives S_n (or S_n^kind) in a fixed order."""
    if n < 0:
        raise ValueError("depth must be >= 0")
    if n == 0:
        return [identity_rep()] if kind in (None, 0) else []
    out = []
    if kind in (None, 0):
        out += [CosetRep(n, 0, k[::-1]) for k in iproduct(range(F.q), repeat=2 * n)]
    if kind in (None, 1):
        out += [CosetRep(n, 1, k[::-1]) for k in iproduct(range(F.q), repeat=2 * n - 1)]
    return out


def reps_upto(F: PadicField, N: int) -> list[CosetRep]:
    out = []
    for n in range(N + 1):
        out += coset_reps(F, n)
    return out


def sphere_size(q: int, n: int) -> int:
    return 1 if n == 0 else q ** (2 * n) + q ** (2 * n - 1)


# -- decomposition g = rep (1, zeta) (k, theta(k)) ---------------------------------------------

def _column_reduce(g: Mat2) -> tuple[int, FieldElement]:
    """Right-multiply by K to reach (p^j, beta; 0, p^{-j}); return (j, beta)."""
    F = g.F
    a, b, c, d = g.entries()
    if not c.is_zero() and (d.is_zero() or c.val < d.val):
        a, b, c, d = -b, a, -d, c  # g w(1)
    e = d.val  # right-multiplying by ubar(-c/d) clears c without touching b, d
    u = d * F.pi_power(-e)
    return -e, b / u


def _rep_from_upper(F: PadicField, j: int, beta: FieldElement) -> CosetRep:
    if beta.is_zero() or beta.val >= j:
        return rep0(j, (0,) * (2 * j)) if j >= 0 else rep1(-j, (0,) * (-2 * j - 1))
    t = beta.val
    if t >= -j:
        n = j
        return rep0(n, tuple((beta * F.pi_power(n)).digits(2 * n)))
    n = -t
    v = n - j - 1
    return rep1(n, tuple((beta * F.pi_power(n + v)).digits(2 * n - 1)))


def coset_of(g: Mat2) -> CosetRep:
    """The representative R with R^{-1} g in K (matrix level)."""
    j, beta = _column_reduce(g)
    return _rep_from_upper(g.F, j, beta)


def decompose(g: MetaElem) -> tuple[CosetRep, int, Mat2]:
    """Write g = rep (1, zeta) (k, theta(k)) with rep canonical and k in K."""
    F = g.F
    rep = coset_of(g.g)
    R = rep_element(F, rep)
    rest = R.inverse() * g
    k = rest.g
    if not k.is_integral():
        raise DecompositionError(f"residual {k} not in K for rep {rep}")
    return rep, rest.zeta * theta(k), k


def recompose(F: PadicField, rep: CosetRep, zeta: int, k: Mat2) -> MetaElem:
    return rep_element(F, rep) * central(F, zeta) * MetaElem(k, theta(k))


# -- Cartan factorization g = k1* h~(p)^{-n} (1, zeta) k2* --------------------------------------


def cartan_factor(g: MetaElem) -> tuple[Mat2, int, int, Mat2]:
    """Return (k1, n, zeta, k2) with g = (k1, theta) h~(p)^{-n} (1, zeta) (k2, theta)."""
    F = g.F
    m = g.g
    a, b, c, d = m.entries()
    one = F.one()
    w1 = w_mat(one)
    wm1 = w_mat(-one)
    vals = [x.val if not x.is_zero() else None for x in (a, b, c, d)]
    best = min(range(4), key=lambda i: (vals[i] is None, vals[i] if vals[i] is not None else 0))
    L0 = identity(F)
    R0 = identity(F)
    if best == 1:
        R0 = w1
    elif best == 2:
        L0 = w1
    elif best == 3:
        L0, R0 = w1, w1
    mm = L0 @ m @ R0
    a, b, c, d = mm.entries()
    n = -a.val
    if n < 0:
        raise DecompositionError("matrix is not in SL_2")
    ai = a.inverse()
    u = a * F.pi_power(n)
    k1 = L0.inverse() @ ubar_mat(c * ai)
    k2 = h_mat(u) @ u_mat(b * ai) @ R0.inverse()
    prod = MetaElem(k1, theta(k1)) * h_pi_power(F, -n) * MetaElem(k2, theta(k2))
    if not prod.g == m:
        raise DecompositionError("Cartan factorization failed to reproduce the matrix")
    return k1, n, g.zeta * prod.zeta, k2


def cartan_radius(g: MetaElem | Mat2) -> int:
    """The n with g in K~ h~(p)^{-n} K~: minus the least valuation of an entry."""
    m = g.g if isinstance(g, MetaElem) else g
    return -m.min_valuation()


def cartan_class(g: MetaElem) -> tuple[int, int]:
    """(n, zeta) with g in K* h~(p)^{-n} (1, zeta) K*."""
    _, n, zeta, _ = cartan_factor(g)
    return n, zeta


# -- Cartan-Iwasawa counts -----------------------------------------------------------------

def closed_count(F: PadicField, n: int, m: int, zeta: int) -> int:
    """Closed form for #{u in U*/(U cap K)* : h~(p)^m u K* in K* h~(p)^{-n} (1, zeta) K*}."""
    q = F.q
    e = F.minus_one_pi()
    if n == 0:
        return 1 if (m == 0 and zeta == 1) else 0
    if m == -n:
        return 1 if zeta == 1 else 0
    if -n < m < n:
        if (m - n) % 2 == 0:
            return q ** (n + m - 1) * (q - 1) if zeta == e ** ((n + m) // 2) else 0
        return q ** (n + m - 1) * (q - 1) // 2
    if m == n:
        return q ** (2 * n) if zeta == e ** n else 0
    return 0


DEFAULT_MAX_DEPTH = 6  # denominators up to p^{-6}, i.e. n <= 3


def _frac_elements(F: PadicField, depth: int):
    """Representatives x of p^{-depth} O / O."""
    scale = F.pi_power(-depth)
    for digits in iproduct(range(F.q), repeat=depth):
        yield F.from_digits(digits[::-1]) * scale


@lru_cache(maxsize=None)
def _iwasawa_census(F: PadicField, m: int, depth: int, side: str) -> Counter:
    census = Counter()
    t = h_pi_power(F, m)
    for x in _frac_elements(F, depth):
        g = t * u_tilde(x) if side == "upper" else ubar_tilde(x) * t
        census[cartan_class(g)] += 1
    return census


def brute_count(F: PadicField, n: int, m: int, zeta: int, side: str = "upper",
                max_depth: int = DEFAULT_MAX_DEPTH) -> int:
    """Enumerate u~(x) (or ubar~(x)) with x in p^{-2n} O / O and classify double cosets."""
    if side not in ("upper", "lower"):
        raise ValueError("side must be 'upper' or 'lower'")
    depth = 2 * n
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the enumeration bound {max_depth}; "
                         f"pass max_depth >= {depth}")
    return _iwasawa_census(F, m, depth, side)[(n, zeta)]


def count_cartan_iwasawa(F: PadicField, n: int, m: int, zeta: int, side: str = "upper",
                         method: str = "closed", max_depth: int = DEFAULT_MAX_DEPTH) -> int:
    if zeta not in (1, -1):
        raise ValueError("zeta must be +1 or -1")
    if method == "closed":
        return closed_count(F, n, m, zeta)
    if method == "brute":
        return brute_count(F, n, m, zeta, side, max_depth)
    raise ValueError("method must be 'closed' or 'brute'")


def count_mod_q(F: PadicField, n: int, m: int, zeta: int) -> int:
    """Reduction mod q of the count."""
    return closed_count(F, n, m, zeta) % F.q


# -- tree distances --------------------------------------------------------------------------

def tree_distance(F: PadicField, r1: CosetRep, r2: CosetRep) -> int:
    """Distance between the vertices r1 K and r2 K of the tree, via a Cartan radius."""
    g = rep_matrix(F, r1).inverse() @ rep_matrix(F, r2)
    return 2 * cartan_radius(g)


def label_distance(r1: CosetRep, r2: CosetRep) -> int:
    """Distance from labels, for two reps of the same kind and depth."""
    if (r1.kind, r1.n) != (r2.kind, r2.n):
        raise ValueError("label formula needs equal kind and depth")
    for i, (x, y) in enumerate(zip(r1.kappa, r2.kappa)):
        if x != y:
            return 2 * (r1.m - i)
    return 0


def parent(rep: CosetRep) -> CosetRep:
    """The neighbouring representative one step closer to the base vertex."""
    if rep.n == 0:
        raise ValueError("the base vertex has no parent")
    if rep.n == 1:
        return identity_rep()
    return CosetRep(rep.n - 1, rep.kind, rep.kappa[: rep.m - 2])


# -- products of representatives with depth-one representatives ---------------------------------

@dataclass(frozen=True)
class ProductRule:
    """Predicted shape of a product A * B with B in S_1: rep * u~(x) * (1, sign).

    ``x`` is the predicted unipotent entry when it is determined, ``None`` when
    only integrality is asserted.
    """

    case: str
    rep: CosetRep
    sign: int
    x: FieldElement | None


def _lower_kind1(n: int) -> CosetRep:
    """h1(2n-3, 0), read as the identity when n = 1."""
    return rep1(n - 1, (0,) * (2 * n - 3)) if n >= 2 else identity_rep()


def product_rule(F: PadicField, a: CosetRep, b: CosetRep) -> ProductRule:
    """Closed-form product of a depth-n rep (n >= 1) with a depth-one rep."""
    kf = F.k
    e = F.minus_one_pi()
    n, kappa = a.n, a.kappa
    if n < 1 or b.n != 1:
        raise ValueError("product rules need depth(a) >= 1 and depth(b) = 1")
    zero = F.zero()
    if a.kind == 0:
        if b.kind == 0:
            return ProductRule("1a", rep0(n + 1, kappa + b.kappa), 1, zero)
        lam = b.kappa[0]
        if lam:
            shifted = kappa[:-1] + (kf.add(kappa[-1], lam),)
            return ProductRule("1b", rep0(n, shifted), eta_from_data(F, 1, 0, lam), None)
        return ProductRule("1c", rep0(n - 1, kappa[: 2 * n - 2]), e, F.from_digits(kappa[2 * n - 2:]))

    v = a.label_valuation()
    if v is None:
        if b.kind == 0:
            l0, l1 = b.kappa
            if l0:
                return ProductRule("3a", rep1(n + 1, (0,) * (2 * n - 1) + (l0, l1)), 1, zero)
            if l1:
                # the sign is ([l1], p)_F, the symbol of the unit part of lambda = [l1] p
                return ProductRule("3b", rep1(n, (0,) * (2 * n - 2) + (l1,)), F.legendre(l1), zero)
            return ProductRule("3c", _lower_kind1(n), e, zero)
        return ProductRule("3d", rep1(n + 1, (0,) * (2 * n) + b.kappa), 1, zero)

    if b.kind == 0:
        return ProductRule("2a", rep1(n + 1, kappa + b.kappa), 1, zero)
    lam = b.kappa[0]
    if lam:
        if v <= 2 * n - 3:
            shifted = kappa[:-1] + (kf.add(kappa[-1], lam),)
            return ProductRule("2b(i)", rep1(n, shifted), eta_from_data(F, 1, 0, lam), None)
        c = kappa[-1]
        if kf.add(c, lam):
            res = kf.sub(kf.neg(kf.inv(lam)), kf.inv(c))
            shifted = kappa[:-1] + (kf.add(c, lam),)
            return ProductRule("2b(ii)", rep1(n, shifted), F.legendre(res), None)
        return ProductRule("2b(iii)", _lower_kind1(n), e, None)
    if v <= 2 * n - 3:
        return ProductRule("2c(i)", rep1(n - 1, kappa[: 2 * n - 3]), e, F.from_digits(kappa[2 * n - 3:]))
    tail = kappa[2 * n - 3:] if n >= 2 else (0,) + kappa
    return ProductRule("2c(ii)", rep1(n, (0,) * (2 * n - 1)), eta_digits(F, n, kappa), F.from_digits(tail))


def check_product_rule(F: PadicField, a: CosetRep, b: CosetRep) -> tuple[ProductRule, bool, str]:
    """Multiply the two reps in the cover and compare with ``product_rule``."""
    rule = product_rule(F, a, b)
    rep, zeta, k = decompose(rep_element(F, a) * rep_element(F, b))
    if rep != rule.rep:
        return rule, False, f"rep {rep} != {rule.rep}"
    one = F.one()
    if not (k.c.is_zero() and k.a == one and k.d == one and k.b.is_integral()):
        return rule, False, f"residual {k} is not in U cap K"
    if rule.x is not None and not (k.b == rule.x):
        return rule, False, f"residual entry {k.b} != {rule.x}"
    if zeta != rule.sign:
        return rule, False, f"sign {zeta:+d} != {rule.sign:+d}"
    return rule, True, "ok"
