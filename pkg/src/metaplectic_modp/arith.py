"""Finite-precision arithmetic in an unramified p-adic field.

``F = Q_{p^f}`` is realized as ``Q_p[t]/(P)`` where ``P`` is the integer lift of
the polynomial defining the residue field ``k = F_{p^f}``.  The uniformizer is
``p``.  A nonzero element is stored as ``p^val * unit`` where the unit is a
polynomial with coefficients modulo ``p^N`` and ``prec <= N`` of its p-adic
digits are known (capped relative precision).

Also here: the coefficient field ``E``, the tame Hilbert symbol, and the
digit sets ``I_m`` with truncation and the shift ``kappa_{+lambda}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .gf import GF, embedding, gf


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be determined at the working precision."""


@dataclass(frozen=True)
class FieldParams:
    """Parameters of the base field F = Q_{p^f} and the coefficient field E = F_{p^d}.

    ``d`` defaults to the smallest multiple of ``f`` with ``4 | p^d - 1``.
    """

    p: int = 3
    f: int = 1
    N: int = 24
    d: int | None = dc_field(default=None)

    def __post_init__(self):
        if self.p < 3 or any(self.p % k == 0 for k in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.f < 1:
            raise ValueError("residue degree f must be >= 1")
        if self.N < 4:
            raise ValueError("precision N must be >= 4")
        if self.d is None:
            object.__setattr__(self, "d", self.f if self.p % 4 == 1 else 2 * self.f)
        if self.d % self.f or (self.p ** self.d - 1) % 4:
            raise ValueError(f"d={self.d} must be a multiple of f with 4 | p^d - 1")

    @property
    def q(self) -> int:
        return self.p ** self.f


class PadicField:
    """The field F together with its residue field k and coefficient field E."""

    def __init__(self, params: FieldParams):
        self.params = params
        self.p = params.p
        self.f = params.f
        self.N = params.N
        self.q = params.q
        self.M = self.p ** self.N
        self.k: GF = gf(self.p, self.f)
        self.E: GF = gf(self.p, params.d)
        self.modulus = tuple(self.k.modulus)  # lifted to Z with coefficients in [0, p)
        self.embed_table = embedding(self.k, self.E)
        self._teich: dict[int, tuple[int, ...]] = {}
        self._pow_p = [pow(self.p, i) for i in range(self.N + 1)]

    # -- unit ring Z_q / p^N ---------------------------------------------------------
    def _rmul(self, a, b):
        M = self.M
        if self.f == 1:
            return ((a[0] * b[0]) % M,)
        f = self.f
        out = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        mod = self.modulus
        for k in range(2 * f - 2, f - 1, -1):
            c = out[k]
            if c:
                for j in range(f):
                    out[k - f + j] -= c * mod[j]
        return tuple(x % M for x in out[:f])

    def _radd(self, a, b):
        M = self.M
        return tuple((x + y) % M for x, y in zip(a, b))

    def _rscale(self, a, s):
        M = self.M
        return tuple((x * s) % M for x in a)

    def _rval(self, a) -> int:
        """p-adic valuation of a ring element (N if it vanishes mod p^N)."""
        best = self.N
        p = self.p
        for x in a:
            if x:
                v = 0
                while x % p == 0:
                    x //= p
                    v += 1
                best = min(best, v)
        return best

    def _rdivp(self, a, k):
        s = self._pow_p[k]
        return tuple(x // s for x in a)

    def _residue(self, a) -> int:
        return self.k.from_coeffs([x % self.p for x in a])

    def _rinv(self, a):
        r = self._residue(a)
        if r == 0:
            raise ZeroDivisionError("not a unit")
        x = self._lift(self.k.inv(r))
        two = (2,) + (0,) * (self.f - 1)
        prec = 1
        while prec < self.N:
            ax = self._rmul(a, x)
            x = self._rmul(x, self._radd(two, tuple(-c for c in ax)))
            prec *= 2
        return x

    def _rpow(self, a, e):
        result = (1,) + (0,) * (self.f - 1)
        base = a
        while e:
            if e & 1:
                result = self._rmul(result, base)
            base = self._rmul(base, base)
            e >>= 1
        return result

    def _lift(self, code: int):
        return tuple(self.k.coeffs(code))

    def teich_unit(self, code: int):
        """Ring element of the Teichmuller lift of a residue code."""
        t = self._teich.get(code)
        if t is None:
            if code == 0:
                t = (0,) * self.f
            else:
                t = self._lift(code)
                for _ in range(self.N):
                    t = self._rpow(t, self.q)
            self._teich[code] = t
        return t

    # -- constructors ----------------------------------------------------------------
    def zero(self) -> "FieldElement":
        return FieldElement(self, None, (0,) * self.f, self.N)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def uniformizer(self) -> "FieldElement":
        return FieldElement(self, 1, (1,) + (0,) * (self.f - 1), self.N)

    def pi_power(self, n: int) -> "FieldElement":
        return FieldElement(self, n, (1,) + (0,) * (self.f - 1), self.N)

    def from_int(self, n: int) -> "FieldElement":
        if n == 0:
            return self.zero()
        v = 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return FieldElement(self, v, ((n % self.M),) + (0,) * (self.f - 1), self.N)

    def teichmuller(self, code: int) -> "FieldElement":
        if code == 0:
            return self.zero()
        return FieldElement(self, 0, self.teich_unit(code), self.N)

    def from_digits(self, digits: Sequence[int], val: int = 0) -> "FieldElement":
        """The element sum_i [digits[i]] p^(val + i) (Teichmuller digits)."""
        acc = (0,) * self.f
        for i, c in enumerate(digits):
            if i >= self.N:
                break
            if c:
                acc = self._radd(acc, self._rscale(self.teich_unit(c), self._pow_p[i]))
        v = self._rval(acc)
        if v >= self.N:
            return self.zero()
        return FieldElement(self, val + v, self._rdivp(acc, v), self.N - v if v else self.N)

    def from_json(self, obj) -> "FieldElement":
        if obj.get("val") is None:
            return self.zero()
        digits = list(obj["digits"])
        return self.from_digits(digits, int(obj["val"]))

    # -- residue field / coefficient field helpers -------------------------------
    def embed(self, code: int) -> int:
        """Image in E of a residue-field element under the fixed embedding."""
        return self.embed_table[code]

    def legendre(self, code: int) -> int:
        return self.k.legendre(code)

    def minus_one_pi(self) -> int:
        """The symbol (-1, p)_F, i.e. the quadratic character of -1 in k."""
        return 1 if self.q % 4 == 1 else -1

    def mu4_in_E(self, exponent: int) -> int:
        """Image of i^exponent under the fixed embedding mu_4 -> E^x."""
        E = self.E
        return int(E.exp[((E.size - 1) // 4 * (exponent % 4)) % (E.size - 1)])

    def __repr__(self):
        return f"PadicField(p={self.p}, f={self.f}, N={self.N})"


@lru_cache(maxsize=None)
def padic_field(p: int = 3, f: int = 1, N: int = 24, d: int | None = None) -> PadicField:
    return PadicField(FieldParams(p, f, N, d))


class FieldElement:
    """Element p^val * unit of F, or exact zero (val is None)."""

    __slots__ = ("F", "val", "unit", "prec")

    def __init__(self, F: PadicField, val, unit, prec: int):
        self.F = F
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- predicates ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.val is None

    def is_unit(self) -> bool:
        return self.val == 0

    def is_integral(self) -> bool:
        return self.val is None or self.val >= 0

    @property
    def valuation(self):
        """v_F of the element; ``float('inf')`` for zero."""
        return float("inf") if self.val is None else self.val

    # -- arithmetic -----------------------------------------------------------------
    def __neg__(self):
        if self.val is None:
            return self
        return FieldElement(self.F, self.val, tuple((-x) % self.F.M for x in self.unit), self.prec)

    def __add__(self, other):
        other = _coerce(self.F, other)
        if self.val is None:
            return other
        if other.val is None:
            return self
        a, b = (self, other) if self.val <= other.val else (other, self)
        F = a.F
        gap = b.val - a.val
        rel = min(a.prec, gap + b.prec)
        if gap >= F.N:
            s = a.unit
        else:
            s = F._radd(a.unit, F._rscale(b.unit, F._pow_p[gap]))
        v = F._rval(s)
        if v >= rel:
            return F.zero()
        if v:
            s = F._rdivp(s, v)
        return FieldElement(F, a.val + v, s, rel - v)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(self.F, other))

    def __rsub__(self, other):
        return _coerce(self.F, other) + (-self)

    def __mul__(self, other):
        other = _coerce(self.F, other)
        if self.val is None or other.val is None:
            return self.F.zero()
        return FieldElement(self.F, self.val + other.val, self.F._rmul(self.unit, other.unit),
                            min(self.prec, other.prec))

    __rmul__ = __mul__

    def inverse(self):
        if self.val is None:
            raise ZeroDivisionError("inverse of 0 in F")
        return FieldElement(self.F, -self.val, self.F._rinv(self.unit), self.prec)

    def __truediv__(self, other):
        return self * _coerce(self.F, other).inverse()

    def __rtruediv__(self, other):
        return _coerce(self.F, other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.val is None:
            return self.F.one() if e == 0 else self
        return FieldElement(self.F, self.val * e, self.F._rpow(self.unit, e), self.prec)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.F.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.val, self.unit_digits(4)))

    # -- digits -----------------------------------------------------------------
    def unit_part(self) -> "FieldElement":
        if self.val is None:
            raise ValueError("zero has no unit part")
        return FieldElement(self.F, 0, self.unit, self.prec)

    def leading(self) -> int:
        """Residue code of the unit part (the leading Teichmuller digit)."""
        if self.val is None:
            raise ValueError("zero has no leading digit")
        return self.F._residue(self.unit)

    def unit_digits(self, count: int | None = None) -> list[int]:
        """First ``count`` Teichmuller digits of the unit part."""
        if self.val is None:
            return [0] * (count or 0)
        F = self.F
        n = self.prec if count is None else min(count, self.prec)
        out = []
        u = self.unit
        for _ in range(n):
            c = F._residue(u)
            out.append(c)
            t = F.teich_unit(c)
            u = F._rdivp(tuple((x - y) % F.M for x, y in zip(u, t)), 1)
        if count is not None and count > n:
            raise PrecisionError(f"only {n} digits known, {count} requested")
        return out

    def digits(self, m: int) -> list[int]:
        """Digits lambda_0..lambda_{m-1} of an integral element: x = sum [lambda_i] p^i + O(p^m)."""
        if self.val is None:
            return [0] * m
        if self.val < 0:
            raise ValueError("digits requested for a non-integral element")
        if self.val >= m:
            return [0] * m
        return [0] * self.val + self.unit_digits(m - self.val)

    def reduce(self) -> int:
        """Residue code of an integral element modulo p."""
        if self.val is None or self.val > 0:
            return 0
        if self.val < 0:
            raise ValueError("element is not integral")
        return self.leading()

    def to_json(self):
        """Lossless encoding: valuation and all known Teichmuller digits, trailing zeros dropped."""
        if self.val is None:
            return {"val": None, "digits": []}
        digits = self.unit_digits(self.prec)
        while digits and digits[-1] == 0:
            digits.pop()
        return {"val": self.val, "digits": digits}

    def __repr__(self):
        if self.val is None:
            return "0"
        return f"p^{self.val}*[{','.join(map(str, self.unit_digits(min(self.prec, 6))))},...]"


def _coerce(F: PadicField, x) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, int):
        return F.from_int(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a field element")


# -- Teichmuller lifts and the tame symbol -------------------------------------------

def teichmuller(F: PadicField, x: int) -> FieldElement:
    """Teichmuller lift of the residue-field element with code ``x``."""
    return F.teichmuller(x)


def hilbert_from_data(F: PadicField, va: int, ua: int, vb: int, ub: int) -> int:
    """Tame symbol from valuations and leading residue digits of a and b.

    (a, b) = omega((-1)^{v(a)v(b)} b^{v(a)} / a^{v(b)})^{(q-1)/2}.
    """
    k = F.k
    sign = 1
    if (va * vb) % 2 and F.minus_one_pi() == -1:
        sign = -sign
    if va % 2 and not k.is_square(ub):
        sign = -sign
    if vb % 2 and not k.is_square(ua):
        sign = -sign
    return sign


def hilbert_symbol(a: FieldElement, b: FieldElement) -> int:
    """The quadratic Hilbert symbol (a, b)_F, tame since p is odd."""
    if a.is_zero() or b.is_zero():
        raise ValueError("symbol undefined at 0")
    return hilbert_from_data(a.F, a.val, a.leading(), b.val, b.leading())


# -- digit sets I_m ---------------------------------------------------------------

def sets_I(F: PadicField, m: int) -> Iterator[FieldElement]:
    """Enumerate I_m = { sum_{i<m} [lambda_i] p^i }; yields q^m elements."""
    if m < 1:
        raise ValueError("I_m requires m >= 1")
    for digits in product(range(F.q), repeat=m):
        yield F.from_digits(digits[::-1])


def digit_tuples(F: PadicField, m: int) -> Iterator[tuple[int, ...]]:
    """Digit tuples (lambda_0, ..., lambda_{m-1}) of the elements of I_m."""
    if m < 0:
        raise ValueError("negative length")
    for digits in product(range(F.q), repeat=m):
        yield digits[::-1]


def truncate(kappa: FieldElement, m: int) -> FieldElement:
    """[kappa]_m: keep the first m Teichmuller digits of an integral element."""
    if m <= 0:
        return kappa.F.zero()
    return kappa.F.from_digits(kappa.digits(m))


def shift_plus(kappa: FieldElement, lam: FieldElement, m: int) -> FieldElement:
    """kappa_{+lambda} = [kappa]_{m-1} + [kappa_{m-1} + lambda_0] p^{m-1} for kappa in I_m."""
    if m < 1:
        raise ValueError("shift requires m >= 1")
    digits = kappa.digits(m)
    digits[m - 1] = kappa.F.k.add(digits[m - 1], lam.reduce())
    return kappa.F.from_digits(digits)
