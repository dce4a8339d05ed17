"""Small finite fields F_{p^d} with table-driven arithmetic.

Elements are plain ints in ``range(p**d)``: the integer ``sum c_i p^i`` stands
for the polynomial ``sum c_i t^i`` modulo a fixed primitive polynomial, so
``t`` generates the multiplicative group.  Vectors and matrices over the
field are numpy integer arrays holding these codes.

The fields used here are tiny (at most a few thousand elements), so full
addition and multiplication tables are the simplest fast representation.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

MAX_FIELD_SIZE = 6561


def _poly_mulmod(a, b, modulus, p):
    """Multiply coefficient lists ``a``, ``b`` modulo a monic ``modulus`` over F_p."""
    d = len(modulus) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k]
        if c:
            for j in range(d + 1):
                out[k - d + j] = (out[k - d + j] - c * modulus[j]) % p
    out = out[:d] + [0] * max(0, d - len(out))
    return out


def _is_primitive(modulus, p):
    """True when ``t`` has multiplicative order p^d - 1 modulo ``modulus``."""
    d = len(modulus) - 1
    if modulus[0] % p == 0:
        return False
    order = p ** d - 1
    one = [1] + [0] * (d - 1)
    t = [0, 1] + [0] * (d - 2) if d > 1 else [(-modulus[0]) % p]
    x = list(one)
    for k in range(1, order + 1):
        x = _poly_mulmod(x, t, modulus, p)
        if x == one:
            return k == order
    return False


def first_primitive_polynomial(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically first monic primitive polynomial of degree ``d`` over F_p.

    Coefficients are returned low degree first, ending with the leading 1.
    """
    for tail in product(range(p), repeat=d):
        modulus = list(reversed(tail)) + [1]
        if _is_primitive(modulus, p):
            return tuple(modulus)
    raise ValueError(f"no primitive polynomial of degree {d} over F_{p}")


class GF:
    """The finite field F_{p^d}."""

    def __init__(self, p: int, d: int):
        size = p ** d
        if size > MAX_FIELD_SIZE:
            raise ValueError(f"field of size {size} too large (max {MAX_FIELD_SIZE})")
        self.p = p
        self.d = d
        self.size = size
        self.modulus = first_primitive_polynomial(p, d)

        exp = np.zeros(2 * (size - 1), dtype=np.int64)
        log = np.full(size, -1, dtype=np.int64)
        if d == 1:
            gen = (-self.modulus[0]) % p
            x = 1
            for k in range(size - 1):
                exp[k] = x
                log[x] = k
                x = (x * gen) % p
        else:
            x = [1] + [0] * (d - 1)
            t = [0, 1] + [0] * (d - 2)
            for k in range(size - 1):
                code = self.from_coeffs(x)
                exp[k] = code
                log[code] = k
                x = _poly_mulmod(x, t, self.modulus, p)
        exp[size - 1:] = exp[: size - 1]
        self.exp = exp
        self.log = log

        digits = np.array([[(c // p ** i) % p for i in range(d)] for c in range(size)], dtype=np.int64)
        self.digit_table = digits
        weights = p ** np.arange(d, dtype=np.int64)
        self.add_table = (((digits[:, None, :] + digits[None, :, :]) % p) * weights).sum(axis=2)
        self.neg_table = (((-digits) % p) * weights).sum(axis=1)
        la = log[:, None]
        lb = log[None, :]
        mul = exp[(la + lb) % (size - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul_table = mul
        inv = np.zeros(size, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (size - 1)]
        self.inv_table = inv
        self.sub_table = self.add_table[:, self.neg_table]

    # -- codes and coefficients -------------------------------------------------
    def from_coeffs(self, coeffs) -> int:
        return int(sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs)))

    def coeffs(self, x: int) -> list[int]:
        return [int(c) for c in self.digit_table[x]]

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- scalar arithmetic --------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        return int(self.exp[(int(self.log[a]) * k) % (self.size - 1)])

    def generator(self) -> int:
        return int(self.exp[1])

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p ** times)

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return int(self.log[a]) % 2 == 0

    def legendre(self, a: int) -> int:
        """Quadratic character of a nonzero element, as +1 / -1."""
        if a == 0:
            raise ValueError("quadratic character undefined at 0")
        return 1 if self.is_square(a) else -1

    def elements(self):
        return range(self.size)

    def units(self):
        return range(1, self.size)

    # -- vectors and matrices -----------------------------------------------------
    def vadd(self, u, v):
        return self.add_table[u, v]

    def vsub(self, u, v):
        return self.sub_table[u, v]

    def vneg(self, u):
        return self.neg_table[u]

    def smul(self, s: int, v):
        return self.mul_table[s, v]

    def vsum(self, rows):
        """Sum a sequence of equal-shape arrays."""
        acc = None
        for r in rows:
            acc = r.copy() if acc is None else self.add_table[acc, r]
        return acc

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        if self.d == 1:
            C = (A @ B) % self.p
        else:
            C = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
            for j in range(A.shape[1]):
                C = self.add_table[C, self.mul_table[A[:, j][:, None], B[j][None, :]]]
        return C[:, 0] if vec else C

    def identity(self, n: int):
        return np.eye(n, dtype=np.int64)

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def row_echelon(self, M):
        """Return (echelon form, pivot columns) of a matrix over the field."""
        M = np.array(M, dtype=np.int64, copy=True)
        rows, cols = M.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            nz = np.nonzero(M[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                M[[r, i]] = M[[i, r]]
            M[r] = self.mul_table[self.inv(int(M[r, c])), M[r]]
            below = np.nonzero(M[r + 1:, c])[0] + r + 1
            if below.size:
                factors = M[below, c]
                M[below] = self.sub_table[M[below], self.mul_table[factors[:, None], M[r][None, :]]]
            pivots.append(c)
            r += 1
        return M, pivots

    def nullspace(self, M):
        """Basis (as rows) of {x : M x = 0}."""
        M = np.asarray(M, dtype=np.int64)
        cols = M.shape[1]
        R, pivots = self.row_echelon(M)
        # back-substitute to reduced echelon form
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            above = np.nonzero(R[:i, c])[0]
            if above.size:
                R[above] = self.sub_table[R[above], self.mul_table[R[above, c][:, None], R[i][None, :]]]
        free = [c for c in range(cols) if c not in pivots]
        basis = []
        for fcol in free:
            x = np.zeros(cols, dtype=np.int64)
            x[fcol] = 1
            for i, c in enumerate(pivots):
                x[c] = self.neg(int(R[i, fcol]))
            basis.append(x)
        return np.array(basis, dtype=np.int64).reshape(len(basis), cols)

    def rank(self, M) -> int:
        M = np.asarray(M)
        if M.size == 0:
            return 0
        return len(self.row_echelon(M)[1])

    def __repr__(self):
        return f"GF({self.p}^{self.d})"


@lru_cache(maxsize=None)
def gf(p: int, d: int) -> GF:
    return GF(p, d)


def embedding(k: GF, E: GF) -> tuple[int, ...]:
    """Table of a fixed field embedding k -> E.

    The generator ``t`` of ``k`` is sent to the smallest code in ``E`` that is a
    root of the defining polynomial of ``k``.
    """
    if k.p != E.p or E.d % k.d:
        raise ValueError(f"{k} does not embed in {E}")
    root = None
    for z in E.elements():
        acc = 0
        for c in reversed(k.modulus):
            acc = E.add(E.mul(acc, z), E.from_int(c))
        if acc == 0:
            root = z
            break
    assert root is not None
    table = []
    for x in k.elements():
        acc = 0
        for c in reversed(k.coeffs(x)):
            acc = E.add(E.mul(acc, root), E.from_int(c))
        table.append(acc)
    return tuple(table)
