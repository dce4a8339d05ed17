"""Spherical Hecke operators on compact inductions of genuine weights.

A section of ind_{K~}^{G~} sigma_r is a finitely supported genuine function;
it is stored as ``{rep: v}`` meaning ``sum [rep, v]`` over canonical coset
representatives.  Translating by K uses ``[g k, v] = [g, sigma(k) v]`` and
genuineness ``[g (1, zeta), v] = [g, zeta v]``.

Two independent implementations of T_1 are provided: the closed-form action
on basic sections (digit manipulation on labels only) and a convolution
oracle that multiplies representatives in the cover and re-decomposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct

import numpy as np

from .arith import PadicField
from .cosets import (
    CosetRep,
    cartan_factor,
    cartan_radius,
    closed_count,
    coset_reps,
    decompose,
    eta_digits,
    eta_from_data,
    identity_rep,
    rep0,
    rep1,
    rep_element,
    reps_upto,
    sphere_size,
)
from .metaplectic import MetaElem, h_pi_power, ubar_tilde
from .weights import (
    as_weight,
    is_admissible_pair,
    rho_matrix,
    top_weight,
    weight_module,
    zero_weight,
)


class HeckeError(ArithmeticError):
    pass


# -- sections ---------------------------------------------------------------------------

@dataclass
class Section:
    """Finitely supported genuine section, stored on canonical representatives."""

    F: PadicField
    r: tuple[int, ...]
    data: dict = field(default_factory=dict)

    @classmethod
    def basic(cls, F: PadicField, r, rep: CosetRep, v) -> "Section":
        s = cls(F, as_weight(F, r))
        s.add_term(rep, np.asarray(v, dtype=np.int64))
        return s.normalize()

    @property
    def dim(self) -> int:
        return weight_module(self.F, self.r).dim

    def add_term(self, rep: CosetRep, vec: np.ndarray, sign: int = 1) -> None:
        E = self.F.E
        if sign == -1:
            vec = E.vneg(vec)
        cur = self.data.get(rep)
        self.data[rep] = vec.copy() if cur is None else E.vadd(cur, vec)

    def normalize(self) -> "Section":
        self.data = {k: v for k, v in self.data.items() if v.any()}
        return self

    def copy(self) -> "Section":
        return Section(self.F, self.r, {k: v.copy() for k, v in self.data.items()})

    def __add__(self, other: "Section") -> "Section":
        out = self.copy()
        for k, v in other.data.items():
            out.add_term(k, v)
        return out.normalize()

    def __sub__(self, other: "Section") -> "Section":
        return self + other.scale(self.F.E.neg(1))

    def scale(self, c: int) -> "Section":
        E = self.F.E
        return Section(self.F, self.r, {k: E.smul(c, v) for k, v in self.data.items()}).normalize()

    def is_zero(self) -> bool:
        return not any(v.any() for v in self.data.values())

    def support(self) -> list[CosetRep]:
        return sorted(k for k, v in self.data.items() if v.any())

    def radius(self) -> int:
        supp = self.support()
        if not supp:
            raise ValueError("the zero section has no support radius")
        return max(k.n for k in supp)

    def coords(self) -> dict:
        """Sparse coordinates {(rep, i): value} in the basis of basic sections [rep, e_i]."""
        out = {}
        for rep, v in self.data.items():
            for i in np.nonzero(v)[0]:
                out[(rep, int(i))] = int(v[i])
        return out

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return self.r == other.r and (self - other).is_zero()

    def translate(self, g: MetaElem) -> "Section":
        """Left translation f |-> g.f, i.e. [h, v] |-> [g h, v], re-canonicalized."""
        V = weight_module(self.F, self.r)
        out = Section(self.F, self.r)
        for rep, v in self.data.items():
            new, zeta, k = decompose(g * rep_element(self.F, rep))
            out.add_term(new, V.act(k, v), zeta)
        return out.normalize()

    def to_json(self):
        return [{"rep": rep.to_json(), "vector": [int(x) for x in self.data[rep]]} for rep in self.support()]

    @classmethod
    def from_json(cls, F: PadicField, r, rows) -> "Section":
        s = cls(F, as_weight(F, r))
        for row in rows:
            s.add_term(CosetRep.from_json(row["rep"]), np.array(row["vector"], dtype=np.int64))
        return s.normalize()


def basic_sections(F: PadicField, r, N: int) -> list[Section]:
    """All basic sections [g, e_i] with g in S_{<= N}."""
    V = weight_module(F, r)
    return [Section.basic(F, r, rep, e) for rep in reps_upto(F, N) for e in V.basis()]


# -- the closed-form action of T_1 ----------------------------------------------------------

class _T1Data:
    """Matrices and signs used by the closed-form T_1 on weight r."""

    def __init__(self, F: PadicField, r):
        V = weight_module(F, r)
        E, kf = F.E, F.k
        self.F, self.V, self.E = F, V, E
        rho = rho_matrix(F, r, r)
        mm = E.matmul
        neg = kf.neg
        self.rho = rho
        self.ru = [mm(rho, V.u(neg(a))) for a in kf.elements()]                  # rho sigma(u(-a))
        self.rw = [None] + [mm(rho, V.w(neg(a))) for a in kf.units()]            # rho sigma(w(-a))
        self.wrw = mm(V.w(1), mm(rho, V.w(neg(1))))                               # sigma(w(1)) rho sigma(w(-1))
        self.uwrw = [mm(V.u(a), self.wrw) for a in kf.elements()]                # sigma(u(a) w(1)) rho sigma(w(-1))
        self.e = F.minus_one_pi()
        self.eta1 = [None] + [eta_from_data(F, 1, 0, a) for a in kf.units()]

    def unit_sign(self, res: int) -> int:
        """(x, p)_F for a unit x with residue ``res``."""
        return self.F.legendre(res)


@lru_cache(maxsize=None)
def _t1_data(F: PadicField, r) -> _T1Data:
    return _T1Data(F, r)


def _t1_basic(D: _T1Data, rep: CosetRep, v: np.ndarray, out: Section) -> None:
    """Accumulate (-1, p)_F * RHS of the closed-form action on [rep, v] into ``out``."""
    F, E = D.F, D.E
    kf = F.k
    q = F.q
    mm = E.matmul
    n, kappa = rep.n, rep.kappa
    terms = []  # (rep, matrix, sign)

    if n == 0:
        for l0, l1 in iproduct(range(q), repeat=2):
            terms.append((rep0(1, (l0, l1)), D.ru[l0], 1))
        for l0 in kf.units():
            terms.append((rep1(1, (l0,)), D.rw[l0], 1))
        terms.append((rep1(1, (0,)), D.wrw, 1))
    elif rep.kind == 0:
        for l0, l1 in iproduct(range(q), repeat=2):
            terms.append((rep0(n + 1, kappa + (l0, l1)), D.ru[l0], 1))
        for l0 in kf.units():
            shifted = kappa[:-1] + (kf.add(kappa[-1], l0),)
            terms.append((rep0(n, shifted), D.rw[l0], D.eta1[l0]))
        terms.append((rep0(n - 1, kappa[: 2 * n - 2]), D.uwrw[kappa[2 * n - 2]], D.e))
    else:
        v_k = rep.label_valuation()
        if v_k is None:
            # case kappa = 0: rep = h~(p)^{-n}
            zeros = (0,) * (2 * n - 1)
            for l0, l1 in iproduct(range(q), repeat=2):
                if l0:
                    terms.append((rep1(n + 1, zeros + (l0, l1)), D.ru[l0], 1))
            for l0 in kf.units():
                terms.append((rep1(n + 1, zeros + (0, l0)), D.rw[l0], 1))
            terms.append((rep1(n + 1, zeros + (0, 0)), D.wrw, 1))
            for l1 in kf.units():
                # sign ([l1], p)_F of the Teichmuller digit; the convolution oracle fixes this normalization
                sign = D.unit_sign(l1)
                terms.append((rep1(n, (0,) * (2 * n - 2) + (l1,)), D.rho, sign))
            lower = rep1(n - 1, (0,) * (2 * n - 3)) if n >= 2 else identity_rep()
            terms.append((lower, D.rho, D.e))
        elif v_k <= 2 * n - 3:
            for l0, l1 in iproduct(range(q), repeat=2):
                terms.append((rep1(n + 1, kappa + (l0, l1)), D.ru[l0], 1))
            for l0 in kf.units():
                shifted = kappa[:-1] + (kf.add(kappa[-1], l0),)
                terms.append((rep1(n, shifted), D.rw[l0], D.eta1[l0]))
            terms.append((rep1(n - 1, kappa[: 2 * n - 3]), D.uwrw[kappa[2 * n - 3]], D.e))
        else:
            c = kappa[-1]  # v(kappa) = 2n - 2
            for l0, l1 in iproduct(range(q), repeat=2):
                terms.append((rep1(n + 1, kappa + (l0, l1)), D.ru[l0], 1))
            for l0 in kf.units():
                if kf.add(l0, c) == 0:
                    continue
                res = kf.sub(kf.neg(kf.inv(l0)), kf.inv(c))
                shifted = kappa[:-1] + (kf.add(c, l0),)
                terms.append((rep1(n, shifted), D.rw[l0], D.unit_sign(res)))
            digit = kappa[2 * n - 3] if n >= 2 else 0
            terms.append((rep1(n, (0,) * (2 * n - 1)), D.uwrw[digit], eta_digits(F, n, kappa)))
            lower = rep1(n - 1, (0,) * (2 * n - 3)) if n >= 2 else identity_rep()
            terms.append((lower, D.rw[kf.neg(c)], D.e))

    for target, M, sign in terms:
        out.add_term(target, mm(M, v), sign * D.e)


def hecke_apply(F: PadicField, r, f: Section) -> Section:
    """T_1 on ind sigma_r, by the closed-form action on basic sections."""
    r = as_weight(F, r)
    if f.r != r:
        raise ValueError("section has the wrong weight")
    D = _t1_data(F, r)
    out = Section(F, r)
    for rep, v in f.data.items():
        _t1_basic(D, rep, v, out)
    return out.normalize()


def hecke_power(F: PadicField, r, f: Section, k: int) -> Section:
    for _ in range(k):
        f = hecke_apply(F, r, f)
    return f


# -- the bimodule functions phi_n^{r,s} and the convolution oracle ------------------------------

def _signed(E, M: np.ndarray, zeta: int) -> np.ndarray:
    return M if zeta == 1 else E.vneg(M)


def phi_fn(F: PadicField, n: int, r, s, g: MetaElem) -> np.ndarray:
    """phi_n^{r,s}(g) as a (dim V_s) x (dim V_r) matrix over E."""
    Vr, Vs = weight_module(F, r), weight_module(F, s)
    E = F.E
    k1, m, zeta, k2 = cartan_factor(g)
    if m != n or not is_admissible_pair(F, Vr.r, Vs.r) or (n == 0 and Vr.r != Vs.r):
        return np.zeros((Vs.dim, Vr.dim), dtype=np.int64)
    # at depth 0 the bimodule is spanned by the identity; above it by rho_{r,s}
    middle = np.eye(Vr.dim, dtype=np.int64) if n == 0 else rho_matrix(F, Vr.r, Vs.r)
    M = E.matmul(Vs.matrix(k1), E.matmul(middle, Vr.matrix(k2)))
    return _signed(E, M, zeta)


@lru_cache(maxsize=None)
def _phi_at_inverse_reps(F: PadicField, n: int, r, s):
    out = []
    for rep in coset_reps(F, n):
        g = rep_element(F, rep)
        out.append((rep, phi_fn(F, n, r, s, g.inverse())))
    return tuple(out)


@lru_cache(maxsize=1_000_000)
def _product_coset(F: PadicField, a: CosetRep, b: CosetRep):
    rep, zeta, k = decompose(rep_element(F, a) * rep_element(F, b))
    return rep, zeta, k.reduce()


def hecke_apply_oracle(F: PadicField, n: int, r, s, f: Section) -> Section:
    """T_n^{r,s}([g, v]) = sum_{g' in S_n} [g g', phi_n^{r,s}(g'^{-1}) v], re-canonicalized."""
    r, s = as_weight(F, r), as_weight(F, s)
    if f.r != r:
        raise ValueError("section has the wrong weight")
    E = F.E
    Vs = weight_module(F, s)
    out = Section(F, s)
    table = _phi_at_inverse_reps(F, n, r, s)
    for rep, v in f.data.items():
        for rep2, M in table:
            w = E.matmul(M, v)
            if not w.any():
                continue
            new, zeta, kred = _product_coset(F, rep, rep2)
            out.add_term(new, Vs.act(kred, w), zeta)
    return out.normalize()


# -- torus Hecke elements ----------------------------------------------------------------------

@dataclass
class TorusSection:
    """Section of the rank-one torus induction: {m: c} meaning sum [h~(p)^m, c p(v)]."""

    F: PadicField
    r: tuple[int, ...]
    data: dict = field(default_factory=dict)

    def normalize(self):
        self.data = {m: c for m, c in self.data.items() if c}
        return self

    def __eq__(self, other):
        return isinstance(other, TorusSection) and self.r == other.r and self.normalize().data == other.normalize().data


def torus_basic(F: PadicField, r, m: int = 0, c: int = 1) -> TorusSection:
    return TorusSection(F, as_weight(F, r), {m: c}).normalize()


def torus_hecke_apply(F: PadicField, n: int, r, s, f: TorusSection) -> TorusSection:
    """tau_n^{r,s}: [h~(p)^m, c] |-> [h~(p)^{m-n}, iota_{r,s} c]; zero for inadmissible pairs."""
    r, s = as_weight(F, r), as_weight(F, s)
    if f.r != r:
        raise ValueError("torus section has the wrong weight")
    if not is_admissible_pair(F, r, s):
        return TorusSection(F, s)
    return TorusSection(F, s, {m - n: c for m, c in f.data.items()}).normalize()


def specialize(F: PadicField, f: TorusSection, value_at_hpi: int) -> int:
    """Image of f under the T~-map to a genuine character with chi(h~(p)) = value_at_hpi."""
    E = F.E
    acc = 0
    for m, c in f.data.items():
        acc = E.add(acc, E.mul(c, E.pow(value_at_hpi, m)))
    return acc


# -- Satake transform ----------------------------------------------------------------------

@dataclass
class SatakeValue:
    """Value of S(T_n^{r,s}) at h~(p)^m on p(highest weight), with its sign-split partial sums."""

    n: int
    m: int
    value: int
    by_sign: dict  # zeta -> (number of terms, partial sum in E)


def satake_case_value(F: PadicField, n: int, r, s, m: int) -> int:
    """Coinvariant coordinate of phi_n^{r,s} at a representative of a (m, zeta) class, for zeta = +1."""
    r, s = as_weight(F, r), as_weight(F, s)
    E = F.E
    Vr, Vs = weight_module(F, r), weight_module(F, s)
    if not is_admissible_pair(F, r, s):
        return 0
    hw = Vr.highest_weight()
    rho = rho_matrix(F, r, s)
    if n == 0:
        return 1 if (m == 0 and r == s) else 0
    if s == zero_weight(F):
        if -n <= m < n:
            return Vs.coinv_project(E.matmul(rho, hw))
        if m == n:
            return Vs.coinv_project(E.matmul(rho, Vr.act((0, 1, F.k.neg(1), 0), hw)))
        return 0
    return Vs.coinv_project(E.matmul(rho, hw)) if m == -n else 0


@lru_cache(maxsize=None)
def _satake_factors(F: PadicField, n: int, m: int, depth: int) -> tuple:
    """Cartan factors (k1 mod p, zeta, k2 mod p) of ubar~(x) h~(p)^m for x in p^{-depth}O/O of radius n."""
    t = h_pi_power(F, m)
    scale = F.pi_power(-depth)
    out = []
    for digits in iproduct(range(F.q), repeat=depth):
        g = ubar_tilde(F.from_digits(digits[::-1]) * scale) * t
        if cartan_radius(g) != n:
            continue
        k1, _, zeta, k2 = cartan_factor(g)
        out.append((k1.reduce(), zeta, k2.reduce()))
    return tuple(out)


def satake_eval(F: PadicField, n: int, r, s, m: int, depth: int | None = None,
                method: str = "brute") -> SatakeValue:
    """S_{r,s}(T_n)(p v)(h~(p)^m) for v the highest-weight vector of V_r.

    ``brute`` sums p(phi_n(ubar~(x) h~(p)^m) v) over x in p^{-depth} O / O;
    ``counts`` combines the Cartan-Iwasawa counts with the per-class values.
    """
    E = F.E
    r, s = as_weight(F, r), as_weight(F, s)
    need = n + abs(m)
    if depth is None:
        depth = n + abs(m) + 1
    if method == "counts":
        by_sign = {}
        total = 0
        for zeta in (1, -1):
            cnt = closed_count(F, n, m, zeta)
            val = satake_case_value(F, n, r, s, m)
            part = E.mul(E.from_int(cnt), val)
            if zeta == -1:
                part = E.neg(part)
            by_sign[zeta] = (cnt, part)
            total = E.add(total, part)
        return SatakeValue(n, m, total, by_sign)
    if method != "brute":
        raise ValueError("method must be 'brute' or 'counts'")
    if depth < need:
        raise ValueError(f"depth {depth} too small: need at least n + |m| = {need}")
    Vr, Vs = weight_module(F, r), weight_module(F, s)
    hw = Vr.highest_weight()
    if not is_admissible_pair(F, r, s) or (n == 0 and r != s):
        middle = None
    else:
        middle = np.eye(Vr.dim, dtype=np.int64) if n == 0 else rho_matrix(F, r, s)
    counts = {1: 0, -1: 0}
    sums = {1: 0, -1: 0}
    for k1, zeta, k2 in _satake_factors(F, n, m, depth):
        counts[zeta] += 1
        if middle is None:
            continue
        # phi_n(g) hw = zeta sigma_s(k1) middle sigma_r(k2) hw; bucket the signed terms by zeta
        c = Vs.coinv_project(Vs.act(k1, E.matmul(middle, Vr.act(k2, hw))))
        sums[zeta] = E.add(sums[zeta], c if zeta == 1 else E.neg(c))
    total = E.add(sums[1], sums[-1])
    return SatakeValue(n, m, total, {z: (counts[z], sums[z]) for z in (1, -1)})


def satake_expected(F: PadicField, n: int, r, s, m: int) -> int:
    """Value of tau_{-n}^{r,s}: iota_{r,s} = 1 at m = -n, else 0 (for admissible pairs).

    At n = 0 only r = s carries a nonzero bimodule element (the identity).
    """
    r, s = as_weight(F, r), as_weight(F, s)
    if not is_admissible_pair(F, r, s) or (n == 0 and r != s):
        return 0
    return 1 if m == -n else 0


# -- sparse echelon forms over E ----------------------------------------------------------------

def _col_key(col):
    rep, i = col
    return (rep.n, rep, i)


class SparseEchelon:
    """Incremental row echelon form for sparse rows {column: value} over E.

    Columns are ordered by (Cartan depth, rep, index); the leading column of a
    row is its largest column.  ``add`` returns the new pivot column, or None
    if the row lies in the span of the rows added so far.
    """

    def __init__(self, E):
        self.E = E
        self.pivots: dict = {}

    def reduce(self, row: dict) -> dict:
        E = self.E
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = max(row, key=_col_key)
            prow = self.pivots.get(lead)
            if prow is None:
                return row
            coef = row[lead]
            for c, pv in prow.items():
                nv = E.sub(row.get(c, 0), E.mul(coef, pv))
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return row

    def add(self, row: dict):
        row = self.reduce(row)
        if not row:
            return None
        lead = max(row, key=_col_key)
        inv = self.E.inv(row[lead])
        self.pivots[lead] = {c: self.E.mul(inv, v) for c, v in row.items()}
        return lead

    @property
    def rank(self) -> int:
        return len(self.pivots)


# -- free basis and cokernel dimensions --------------------------------------------------------

def ball_dim(F: PadicField, r, N: int) -> int:
    """Dimension of the sections supported in the ball of radius N."""
    d = weight_module(F, r).dim
    return d * sum(sphere_size(F.q, i) for i in range(N + 1))


@dataclass
class FreeBasis:
    r: tuple[int, ...]
    N: int
    generators: dict  # i -> list of basic sections A_i
    elements: list  # list of (i, k, section) with section = T^k(a), a in A_i
    echelon: SparseEchelon

    def sections(self) -> list[Section]:
        return [s for _, _, s in self.elements]


def free_basis(F: PadicField, r, N: int) -> FreeBasis:
    """B_N = {T^k(a) : a in A_i, i + k <= N} built sphere by sphere.

    A_0 = {[1, e_j]}; A_{j} consists of basic sections on the sphere of radius
    j completing the T-images of B_{j-1} to a basis.  Raises HeckeError if a
    linear dependence is found.
    """
    r = as_weight(F, r)
    V = weight_module(F, r)
    ech = SparseEchelon(F.E)
    gens: dict = {}
    elements: list = []
    powers: dict = {}  # (i, idx) -> latest power section
    for j in range(N + 1):
        # T-images landing at radius j
        for (i, idx), sec in list(powers.items()):
            img = hecke_apply(F, r, sec)
            k = j - i
            if ech.add(img.coords()) is None:
                raise HeckeError(f"T^{k} of a generator from A_{i} is dependent: contradicts support growth")
            if img.radius() != j:
                raise HeckeError("support radius did not grow by exactly one")
            powers[(i, idx)] = img
            elements.append((i, k, img))
        # complete with basic sections on the sphere of radius j
        gens[j] = []
        for rep in coset_reps(F, j):
            for e in range(V.dim):
                col = (rep, e)
                if col in ech.pivots:
                    continue
                sec = Section.basic(F, r, rep, V.unit_vector(e))
                if ech.add({col: 1}) is None:
                    raise HeckeError("basic section unexpectedly dependent")
                powers[(j, len(gens[j]))] = sec
                gens[j].append(sec)
                elements.append((j, 0, sec))
    expected = ball_dim(F, r, N)
    if len(elements) != expected or ech.rank != expected:
        raise HeckeError(f"free basis has {len(elements)} elements, rank {ech.rank}; expected {expected}")
    return FreeBasis(r, N, gens, elements, ech)


def in_span(ech: SparseEchelon, f: Section) -> bool:
    return not ech.reduce(f.coords())


def cokernel_dim(F: PadicField, r, lam: int, N: int) -> int:
    """dim( ball_N / (T_1 - lam)(ball_{N-1}) ), computed by rank."""
    r = as_weight(F, r)
    if N < 1:
        return ball_dim(F, r, N)
    E = F.E
    ech = SparseEchelon(E)
    for b in basic_sections(F, r, N - 1):
        img = hecke_apply(F, r, b) - b.scale(lam)
        ech.add(img.coords())
    return ball_dim(F, r, N) - ech.rank


__all__ = [
    "Section", "TorusSection", "SatakeValue", "FreeBasis", "SparseEchelon", "HeckeError",
    "hecke_apply", "hecke_apply_oracle", "hecke_power", "phi_fn", "basic_sections",
    "torus_basic", "torus_hecke_apply", "specialize", "satake_eval", "satake_expected",
    "satake_case_value", "free_basis", "cokernel_dim", "ball_dim", "in_span",
    "top_weight", "zero_weight",
]
