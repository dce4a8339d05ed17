import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metaplectic_modp.gf import MAX_FIELD_SIZE, GF, embedding, first_primitive_polynomial, gf

FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (3, 4), (5, 2)]


def naive_mul(K: GF, a: int, b: int) -> int:
    """Schoolbook polynomial product reduced by the modulus, independent of the log tables."""
    p, d = K.p, K.d
    x, y = K.coeffs(a), K.coeffs(b)
    prod = [0] * (2 * d - 1)
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            prod[i + j] = (prod[i + j] + xi * yj) % p
    mod = K.modulus
    for top in range(2 * d - 2, d - 1, -1):
        c = prod[top]
        if c:
            for i, mi in enumerate(mod):
                prod[top - d + i] = (prod[top - d + i] - c * mi) % p
    return K.from_coeffs(prod[:d])


@pytest.mark.parametrize("p,d", FIELDS)
def test_multiplication_matches_schoolbook(p, d):
    K = gf(p, d)
    for a in K.elements():
        for b in range(0, K.size, max(1, K.size // 9)):
            assert K.mul(a, b) == naive_mul(K, a, b)


@pytest.mark.parametrize("p,d", FIELDS)
def test_generator_has_full_order(p, d):
    K = gf(p, d)
    g = K.generator()
    seen = {K.pow(g, k) for k in range(K.size - 1)}
    assert seen == set(K.units())


def test_primitive_polynomials_small_cases():
    # x - 2 over F_3 (2 generates F_3^x); x^2 + 2x + 2 over F_3
    assert first_primitive_polynomial(3, 1) == (1, 1)
    assert first_primitive_polynomial(3, 2) == (2, 1, 1)


@pytest.mark.parametrize("p,d", FIELDS)
@given(data=st.data())
def test_field_axioms(p, d, data):
    K = gf(p, d)
    el = st.integers(0, K.size - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert K.add(a, K.add(b, c)) == K.add(K.add(a, b), c)
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.add(a, K.neg(a)) == 0
    assert K.sub(a, b) == K.add(a, K.neg(b))
    if a:
        assert K.mul(a, K.inv(a)) == 1
        assert K.div(K.mul(a, b), a) == b


@pytest.mark.parametrize("p,d", FIELDS)
def test_frobenius_is_additive_and_multiplicative(p, d):
    K = gf(p, d)
    for a in range(0, K.size, 3):
        for b in range(1, K.size, 5):
            assert K.frobenius(K.add(a, b)) == K.add(K.frobenius(a), K.frobenius(b))
            assert K.frobenius(K.mul(a, b)) == K.mul(K.frobenius(a), K.frobenius(b))
        assert K.frobenius(a, d) == a


@pytest.mark.parametrize("p,d", FIELDS)
def test_legendre_is_a_character(p, d):
    K = gf(p, d)
    units = list(K.units())
    assert sum(K.legendre(a) for a in units) == 0
    for a in units[:10]:
        for b in units[:10]:
            assert K.legendre(K.mul(a, b)) == K.legendre(a) * K.legendre(b)
        assert K.legendre(a) == (1 if K.pow(a, (K.size - 1) // 2) == 1 else -1)


@pytest.mark.parametrize("p,d,e", [(3, 1, 2), (3, 2, 4), (5, 1, 2), (3, 1, 4)])
def test_embedding_is_a_ring_homomorphism(p, d, e):
    k, E = gf(p, d), gf(p, e)
    emb = embedding(k, E)
    assert len(set(emb)) == k.size
    for a in k.elements():
        for b in k.elements():
            assert emb[k.add(a, b)] == E.add(emb[a], emb[b])
            assert emb[k.mul(a, b)] == E.mul(emb[a], emb[b])


def test_embedding_rejects_incompatible_fields():
    with pytest.raises(ValueError):
        embedding(gf(3, 2), gf(3, 3))
    with pytest.raises(ValueError):
        embedding(gf(3, 1), gf(5, 1))


def test_too_large_field_rejected():
    with pytest.raises(ValueError, match="too large"):
        GF(3, 9)
    assert 3 ** 8 == MAX_FIELD_SIZE


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        gf(5, 1).inv(0)


@pytest.mark.parametrize("p,d", [(3, 1), (3, 2), (5, 1)])
@given(data=st.data())
def test_nullspace_and_rank(p, d, data):
    K = gf(p, d)
    rows = data.draw(st.integers(1, 5))
    cols = data.draw(st.integers(1, 6))
    entries = data.draw(st.lists(st.integers(0, K.size - 1), min_size=rows * cols, max_size=rows * cols))
    M = np.array(entries, dtype=np.int64).reshape(rows, cols)
    N = K.nullspace(M)
    assert N.shape[0] + K.rank(M) == cols
    for x in N:
        assert not K.matmul(M, x).any()
    if N.shape[0]:
        assert K.rank(N) == N.shape[0]


def test_matmul_extension_field_matches_scalar_loop():
    K = gf(3, 2)
    rng = np.random.default_rng(1)
    A = rng.integers(0, K.size, (3, 4))
    B = rng.integers(0, K.size, (4, 2))
    C = K.matmul(A, B)
    for i in range(3):
        for j in range(2):
            acc = 0
            for t in range(4):
                acc = K.add(acc, K.mul(int(A[i, t]), int(B[t, j])))
            assert C[i, j] == acc
