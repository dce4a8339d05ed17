"""Weil indices, genuine characters of the torus cover, and principal-series parameters.

Fourth roots of unity are kept symbolic as exponents ``k`` in Z/4 (standing
for i^k) and are only mapped into E at the end, through the embedding fixed
in ``arith``.  An additive character psi of F enters only through its
conductor m and the Weil index gamma_k(psibar) of its residual character,
which is a configured element of mu_4 with gamma^2 = (-1 | k).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .arith import FieldElement, PadicField
from .metaplectic import MetaElem, h_tilde
from .weights import (
    all_weights,
    as_weight,
    delta_table,
    half_weight,
    top_weight,
    weight_exponent,
    weights_with_character,
    zero_weight,
)

COMPACTS = ("K", "Kprime")


def sign_exponent(s: int) -> int:
    """+1 -> 0, -1 -> 2 in Z/4."""
    if s not in (1, -1):
        raise ValueError("expected a sign")
    return 0 if s == 1 else 2


def default_gamma(F: PadicField) -> int:
    """+1 when q = 1 mod 4, +i otherwise."""
    return 0 if F.q % 4 == 1 else 1


@dataclass(frozen=True)
class AdditiveCharDescriptor:
    """An additive character psi, recorded by its conductor and gamma_k(psibar) as an exponent of i."""

    F: PadicField
    m: int = 0
    gamma: int | None = None

    def __post_init__(self):
        g = default_gamma(self.F) if self.gamma is None else self.gamma % 4
        object.__setattr__(self, "gamma", g)
        if (2 * g) % 4 != sign_exponent(self.F.minus_one_pi()):
            raise ValueError(f"gamma = i^{g} does not square to the quadratic character of -1")

    def twist(self, a: FieldElement) -> "AdditiveCharDescriptor":
        """Descriptor of psi_a : x |-> psi(a x)."""
        if a.is_zero():
            raise ValueError("psi_a needs a != 0")
        u_sign = self.F.legendre(a.leading())
        return AdditiveCharDescriptor(self.F, self.m + a.val, self.gamma + sign_exponent(u_sign))


def weil_index(a: FieldElement, psi: AdditiveCharDescriptor) -> int:
    """gamma_F(a, psi) as an exponent of i.

    With a = u p^v: ((u, p) gamma)^{parity(m + v)} / gamma^{parity(m)}.  Square
    classes only matter, so the formula holds for every a != 0.
    """
    if a.is_zero():
        raise ValueError("the Weil index is undefined at 0")
    F = a.F
    u = sign_exponent(F.legendre(a.leading()))
    m, v = psi.m, a.val
    return (((u + psi.gamma) * ((m + v) % 2)) - psi.gamma * (m % 2)) % 4


def chi_psi_exponent(t: MetaElem, psi: AdditiveCharDescriptor) -> int:
    """chi_psi((h(a), zeta)) = zeta * gamma_F(a, psi)^{-1}, as an exponent of i."""
    g = t.g
    if not (g.b.is_zero() and g.c.is_zero()):
        raise ValueError("chi_psi is defined on the diagonal torus")
    return (sign_exponent(t.zeta) - weil_index(g.a, psi)) % 4


def chi_psi(t: MetaElem, psi: AdditiveCharDescriptor) -> int:
    """chi_psi(t) in E."""
    return t.F.mu4_in_E(chi_psi_exponent(t, psi))


@dataclass(frozen=True)
class GenuineTorusChar:
    """The genuine character mu . chi_psi of the torus cover.

    mu is tamely parametrized: mu(p) = ``mu_pi`` (a nonzero element of E) and
    mu restricted to the units is delta_r for ``mu_r``.
    """

    psi: AdditiveCharDescriptor
    mu_pi: int
    mu_r: tuple[int, ...]

    def __post_init__(self):
        F = self.psi.F
        if not 0 < self.mu_pi < F.E.size:
            raise ValueError("mu(p) must be a nonzero element of E")
        object.__setattr__(self, "mu_r", as_weight(F, self.mu_r))

    @property
    def F(self) -> PadicField:
        return self.psi.F

    def mu(self, a: FieldElement) -> int:
        F = self.F
        E = F.E
        unit = F.embed(F.k.pow(a.leading(), weight_exponent(F, self.mu_r)))
        return E.mul(E.pow(self.mu_pi, a.val), unit)

    def __call__(self, t: MetaElem) -> int:
        E = self.F.E
        return E.mul(self.mu(t.g.a), chi_psi(t, self.psi))

    def unit_character_exponent(self, compact: str = "K") -> int:
        """Exponent e with (mu . chi_psi)|units = (x |-> xbar^e), twisted by (-, p) for K'."""
        F = self.F
        half = (F.q - 1) // 2
        shift = self.psi.m if compact == "K" else self.psi.m + 1
        return (weight_exponent(F, self.mu_r) + half * shift) % (F.q - 1)

    def value_table(self) -> tuple:
        """Values at h~(p) and at (h([c]), 1) for the residues c = 1..q-1."""
        F = self.F
        units = tuple(self(MetaElem(h_tilde(F.teichmuller(c)).g, 1)) for c in F.k.units())
        return (self(h_tilde(F.uniformizer())), units)


def lambda_param(char: GenuineTorusChar) -> int:
    """lambda = mu(p) (-1, p)_F gamma_F(p, psi)^{-1} in E."""
    F = char.F
    E = F.E
    e = (sign_exponent(F.minus_one_pi()) - weil_index(F.uniformizer(), char.psi)) % 4
    return E.mul(char.mu_pi, F.mu4_in_E(e))


@dataclass(frozen=True, order=True)
class Parameter:
    compact: str
    r: tuple[int, ...]
    lam: int

    @property
    def supersingular(self) -> bool:
        return self.lam == 0

    def to_json(self):
        return {"compact": self.compact, "r": list(self.r), "lambda": self.lam}


def ps_weights(char: GenuineTorusChar, compact: str = "K") -> list[tuple[tuple[int, ...], int]]:
    """Weights (with multiplicity) of the principal series Ind(mu . chi_psi) for K or K'.

    A weight sigma_r occurs iff delta_r equals the restriction of mu . chi_psi to
    the units, twisted by (-, p)_F on the K' side; the trivial character is hit
    by both 0 and p-1.
    """
    if compact not in COMPACTS:
        raise ValueError(f"compact must be one of {COMPACTS}")
    F = char.F
    e = char.unit_character_exponent(compact)
    table = tuple(F.embed(F.k.pow(c, e)) for c in F.k.units())
    return [(r, 1) for r in sorted(weights_with_character(F, table))]


def ps_parameters(char: GenuineTorusChar) -> dict[str, set[Parameter]]:
    lam = lambda_param(char)
    return {c: {Parameter(c, r, lam) for r, _ in ps_weights(char, c)} for c in COMPACTS}


def twist_parameters(char: GenuineTorusChar, a: FieldElement) -> dict[str, set[Parameter]]:
    """Parameters of Ind(mu . chi_{psi_a})."""
    if a.is_zero():
        raise ValueError("twist needs a != 0")
    return ps_parameters(replace(char, psi=char.psi.twist(a)))


def dictionary_case(char: GenuineTorusChar) -> int:
    """Which of the three shapes the parameters take: 1 (K-side {0, p-1}), 2 (K'-side {0, p-1}), 3 (neither)."""
    e = char.unit_character_exponent("K")
    q = char.F.q
    if e == 0:
        return 1
    if e == (q - 1) // 2:
        return 2
    return 3


def expected_twist(char: GenuineTorusChar, a: FieldElement) -> dict[str, set[Parameter]]:
    """Transform of the parameters under psi -> psi_a read off from the sign rule.

    Even v(a): same weights, lambda times (u, p)_F.  Odd v(a): K and K' weight
    sets exchanged, lambda times (-u, p)_F.
    """
    F = char.F
    E = F.E
    params = ps_parameters(char)
    u = F.legendre(a.leading())
    if a.val % 2 == 0:
        s = u
        out = {c: {Parameter(c, P.r, E.mul(P.lam, E.from_int(s))) for P in params[c]} for c in COMPACTS}
    else:
        s = u * F.minus_one_pi()
        out = {
            "K": {Parameter("K", P.r, E.mul(P.lam, E.from_int(s))) for P in params["Kprime"]},
            "Kprime": {Parameter("Kprime", P.r, E.mul(P.lam, E.from_int(s))) for P in params["K"]},
        }
    return out


def all_unit_characters(F: PadicField) -> list[tuple[int, ...]]:
    """One weight r for each character of the units (delta_0 = delta_{p-1}, so p-1 is skipped)."""
    top = top_weight(F)
    return sorted(r for r in all_weights(F) if r != top)


__all__ = [
    "AdditiveCharDescriptor", "GenuineTorusChar", "Parameter", "COMPACTS",
    "weil_index", "chi_psi", "chi_psi_exponent", "lambda_param", "ps_weights", "ps_parameters",
    "twist_parameters", "expected_twist", "dictionary_case", "sign_exponent", "default_gamma",
    "all_unit_characters", "delta_table", "half_weight", "zero_weight",
]
