"""The metaplectic double cover of SL_2(F) (and of GL_2(F)).

Elements are pairs ``(g, zeta)`` with ``g`` a 2x2 matrix and ``zeta = +-1``;
multiplication is twisted by the Kubota cocycle

    Delta(g, g') = (X(gg')/X(g), X(gg')/X(g'))_F * (det g, X(gg')/X(g))_F,

where ``X`` picks the lower-left entry, or the lower-right one when the
lower-left entry vanishes.  On SL_2 the determinant factor is trivial.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import FieldElement, PadicField, hilbert_symbol


class NotIntegralError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Mat2:
    """A 2x2 matrix (a b; c d) over F."""

    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    @property
    def F(self) -> PadicField:
        return self.a.F

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Mat2":
        det = self.det()
        if det.is_zero():
            raise ZeroDivisionError("singular matrix")
        if det == 1:
            return Mat2(self.d, -self.b, -self.c, self.a)
        di = det.inverse()
        return Mat2(self.d * di, -self.b * di, -self.c * di, self.a * di)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def min_valuation(self) -> int:
        return min(x.val for x in self.entries() if not x.is_zero())

    def is_integral(self) -> bool:
        return all(x.is_integral() for x in self.entries())

    def __eq__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries(), o.entries()))

    __hash__ = None

    def reduce(self) -> tuple[int, int, int, int]:
        """Reduction modulo p of an integral matrix, as residue codes."""
        if not self.is_integral():
            raise NotIntegralError("matrix is not in M_2(O_F)")
        return tuple(x.reduce() for x in self.entries())

    def to_json(self):
        return [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]]

    @staticmethod
    def from_json(F: PadicField, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return Mat2(F.from_json(a), F.from_json(b), F.from_json(c), F.from_json(d))

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


# -- standard matrices ------------------------------------------------------------

def identity(F: PadicField) -> Mat2:
    return Mat2(F.one(), F.zero(), F.zero(), F.one())


def u_mat(x: FieldElement) -> Mat2:
    F = x.F
    return Mat2(F.one(), x, F.zero(), F.one())


def ubar_mat(x: FieldElement) -> Mat2:
    F = x.F
    return Mat2(F.one(), F.zero(), x, F.one())


def h_mat(x: FieldElement) -> Mat2:
    F = x.F
    return Mat2(x, F.zero(), F.zero(), x.inverse())


def w_mat(x: FieldElement) -> Mat2:
    F = x.F
    return Mat2(F.zero(), x, -x.inverse(), F.zero())


def alpha_mat(F: PadicField) -> Mat2:
    return Mat2(F.one(), F.zero(), F.zero(), F.uniformizer())


# -- cocycle ------------------------------------------------------------------------

def x_of(g: Mat2) -> FieldElement:
    """X(g): the lower-left entry if nonzero, otherwise the lower-right entry."""
    return g.d if g.c.is_zero() else g.c


def cocycle(g: Mat2, g2: Mat2) -> int:
    """Kubota's cocycle on SL_2(F)."""
    x = x_of(g @ g2)
    return hilbert_symbol(x / x_of(g), x / x_of(g2))


def cocycle_gl2(g: Mat2, g2: Mat2) -> int:
    """The extension of the cocycle to GL_2(F)."""
    x = x_of(g @ g2)
    t = x / x_of(g)
    return hilbert_symbol(t, x / x_of(g2)) * hilbert_symbol(g.det(), t)


@dataclass(frozen=True, eq=False)
class MetaElem:
    """Element (g, zeta) of the double cover."""

    g: Mat2
    zeta: int = 1

    @property
    def F(self) -> PadicField:
        return self.g.F

    def __mul__(self, o: "MetaElem") -> "MetaElem":
        return MetaElem(self.g @ o.g, self.zeta * o.zeta * cocycle_gl2(self.g, o.g))

    def inverse(self) -> "MetaElem":
        gi = self.g.inverse()
        return MetaElem(gi, self.zeta * cocycle_gl2(self.g, gi))

    def __pow__(self, n: int) -> "MetaElem":
        base = self if n >= 0 else self.inverse()
        out = meta_identity(self.F)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, o):
        if not isinstance(o, MetaElem):
            return NotImplemented
        return self.zeta == o.zeta and self.g == o.g

    __hash__ = None

    def to_json(self):
        return {"mat": self.g.to_json(), "zeta": self.zeta}

    @staticmethod
    def from_json(F: PadicField, obj) -> "MetaElem":
        return MetaElem(Mat2.from_json(F, obj["mat"]), int(obj["zeta"]))

    def __repr__(self):
        return f"({self.g}, {self.zeta:+d})"


def mult(a: MetaElem, b: MetaElem) -> MetaElem:
    return a * b


def inverse(a: MetaElem) -> MetaElem:
    return a.inverse()


def meta_identity(F: PadicField) -> MetaElem:
    return MetaElem(identity(F), 1)


def central(F: PadicField, zeta: int) -> MetaElem:
    """The central element (1, zeta)."""
    return MetaElem(identity(F), zeta)


# -- splittings over K and K' ----------------------------------------------------------

def theta(k: Mat2) -> int:
    """Sign of the splitting K -> K~, k |-> (k, theta(k))."""
    if not k.is_integral():
        raise NotIntegralError("theta is defined on K = SL_2(O_F)")
    if k.c.is_zero() or k.c.is_unit():
        return 1
    return hilbert_symbol(k.c, k.d)


def in_K_prime(g: Mat2) -> bool:
    F = g.F
    a = alpha_mat(F)
    return (a.inverse() @ g @ a).is_integral()


def theta_prime(kp: Mat2) -> int:
    """Sign of the splitting over K' = alpha K alpha^{-1}."""
    F = kp.F
    al = alpha_mat(F)
    k = al.inverse() @ kp @ al
    if not k.is_integral():
        raise NotIntegralError("theta' is defined on K' = alpha K alpha^{-1}")
    if k.c.is_zero():
        return hilbert_symbol(k.d, F.uniformizer())
    if k.c.is_unit():
        return 1
    return hilbert_symbol(k.c, k.d)


def k_star(k: Mat2) -> MetaElem:
    """The image (k, theta(k)) of k in K*."""
    return MetaElem(k, theta(k))


def k_prime_star(k: Mat2) -> MetaElem:
    return MetaElem(k, theta_prime(k))


# -- preferred lifts ------------------------------------------------------------------

def u_tilde(x: FieldElement) -> MetaElem:
    return MetaElem(u_mat(x), 1)


def ubar_tilde(x: FieldElement) -> MetaElem:
    return MetaElem(ubar_mat(x), 1)


def w_tilde(x: FieldElement) -> MetaElem:
    if x.is_zero():
        raise ValueError("w(x) needs x != 0")
    return MetaElem(w_mat(x), 1)


def h_tilde(x: FieldElement) -> MetaElem:
    if x.is_zero():
        raise ValueError("h(x) needs x != 0")
    return MetaElem(h_mat(x), hilbert_symbol(-x.F.one(), x))


def preferred_lift(kind: str, x: FieldElement) -> MetaElem:
    lifts = {"h": h_tilde, "u": u_tilde, "ubar": ubar_tilde, "w": w_tilde}
    if kind not in lifts:
        raise ValueError(f"unknown lift kind {kind!r}")
    return lifts[kind](x)


def phi(F: PadicField, n: int) -> int:
    """The sign phi(n) with h~(p)^n = (h(p^n), phi(n))."""
    return F.minus_one_pi() if n % 4 in (1, 2) else 1


def h_pi_power(F: PadicField, n: int) -> MetaElem:
    """h~(p)^n, in closed form."""
    return MetaElem(h_mat(F.pi_power(n)), phi(F, n))


# -- conjugation by a lift of alpha -------------------------------------------------------

def alpha_tilde(F: PadicField, sign: int = 1) -> MetaElem:
    return MetaElem(alpha_mat(F), sign)


def conjugate_by_alpha(a: MetaElem, direction: str = "fwd", lift_sign: int = 1) -> MetaElem:
    """alpha~ a alpha~^{-1} (``fwd``) or alpha~^{-1} a alpha~ (``inv``) in the GL_2 cover."""
    al = alpha_tilde(a.F, lift_sign)
    if direction == "fwd":
        return al * a * al.inverse()
    if direction == "inv":
        return al.inverse() * a * al
    raise ValueError("direction must be 'fwd' or 'inv'")


def commutator(a: MetaElem, b: MetaElem) -> MetaElem:
    return a * b * a.inverse() * b.inverse()


def nonsquare_unit(F: PadicField) -> FieldElement:
    """Teichmuller lift of the least nonsquare residue."""
    for c in F.k.units():
        if not F.k.is_square(c):
            return F.teichmuller(c)
    raise AssertionError("residue field has no nonsquares")


def commutator_witness(F: PadicField) -> list[MetaElem]:
    """Factors h~(u), h~(p), h~(u p)^{-1} whose product is the central (1, -1).

    Each factor lies in the commutator subgroup, so the product exhibits
    (1, -1) as a product of commutators.  Here u is a unit with (u, p) = -1.
    """
    u = nonsquare_unit(F)
    pi = F.uniformizer()
    return [h_tilde(u), h_tilde(pi), h_tilde(u * pi).inverse()]


def product(elems, F: PadicField | None = None) -> MetaElem:
    elems = list(elems)
    out = meta_identity(F or elems[0].F)
    for e in elems:
        out = out * e
    return out
