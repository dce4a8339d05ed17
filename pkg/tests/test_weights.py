import random

import numpy as np
import pytest

from metaplectic_modp.arith import padic_field
from metaplectic_modp.verify import random_k
from metaplectic_modp.weights import (
    all_weights,
    as_weight,
    coinv_project,
    delta_char,
    delta_table,
    half_weight,
    is_admissible_pair,
    rho,
    rho_matrix,
    sigma_act,
    top_weight,
    u_invariants,
    weight_dict,
    weight_exponent,
    weight_module,
    weights_with_character,
    zero_weight,
)


def random_sl2_residue(kf, rng):
    while True:
        a, b, c = (rng.randrange(kf.size) for _ in range(3))
        if a:
            d = kf.div(kf.add(1, kf.mul(b, c)), a)
            return (a, b, c, d)


def test_as_weight(F3, F9):
    assert as_weight(F3, 2) == (2,)
    assert as_weight(F9, 1) == (1, 0)
    assert as_weight(F9, [1, 2]) == (1, 2)
    with pytest.raises(ValueError):
        as_weight(F3, 3)
    with pytest.raises(ValueError):
        as_weight(F9, (1,))


def test_dimensions(field):
    for r in all_weights(field):
        assert weight_module(field, r).dim == int(np.prod([x + 1 for x in r]))
    assert len(all_weights(field)) == field.p ** field.f


@pytest.mark.parametrize("pf", [(3, 1), (5, 1), (7, 1)])
def test_sym_matrices_by_evaluation(pf):
    """sigma_r(g) x^a y^(r-a) must be the polynomial (A x + C y)^a (B x + D y)^(r-a)."""
    F = padic_field(*pf)
    E = F.E
    rng = random.Random(0)
    for r in all_weights(F):
        V = weight_module(F, r)
        for _ in range(5):
            key = random_sl2_residue(F.k, rng)
            A, B, C, D = (F.embed(x) for x in key)
            M = V.matrix(key)
            for x0 in range(0, E.size, 2):
                for y0 in range(1, E.size, 3):
                    for a in range(r[0] + 1):
                        lhs = 0
                        for b in range(r[0] + 1):
                            mono = E.mul(E.pow(x0, b), E.pow(y0, r[0] - b))
                            lhs = E.add(lhs, E.mul(int(M[b, a]), mono))
                        X = E.add(E.mul(A, x0), E.mul(C, y0))
                        Y = E.add(E.mul(B, x0), E.mul(D, y0))
                        assert lhs == E.mul(E.pow(X, a), E.pow(Y, r[0] - a))


def test_action_is_a_homomorphism(field):
    rng = random.Random(1)
    kf, E = field.k, field.E
    for r in all_weights(field)[:: max(1, len(all_weights(field)) // 4)]:
        V = weight_module(field, r)
        for _ in range(10):
            g1, g2 = random_sl2_residue(kf, rng), random_sl2_residue(kf, rng)
            a1, b1, c1, d1 = g1
            a2, b2, c2, d2 = g2
            prod = (kf.add(kf.mul(a1, a2), kf.mul(b1, c2)), kf.add(kf.mul(a1, b2), kf.mul(b1, d2)),
                    kf.add(kf.mul(c1, a2), kf.mul(d1, c2)), kf.add(kf.mul(c1, b2), kf.mul(d1, d2)))
            assert np.array_equal(V.matrix(prod), E.matmul(V.matrix(g1), V.matrix(g2)))


def test_action_factors_through_reduction(F3):
    rng = random.Random(2)
    V = weight_module(F3, 2)
    for _ in range(20):
        k1, k2 = random_k(F3, rng), random_k(F3, rng)
        v = np.array([1, 2, 0])
        assert np.array_equal(sigma_act(F3, 2, k1 @ k2, v), V.act(k1, V.act(k2, v)))


def test_trivial_weight_and_nonintegral_rejected(F3):
    V = weight_module(F3, 0)
    assert V.dim == 1
    assert V.matrix((1, 2, 0, 1)).tolist() == [[1]]
    with pytest.raises(ValueError):
        V.matrix((1, 1, 1, 1))


def test_torus_on_highest_weight(field):
    for r in all_weights(field):
        V = weight_module(field, r)
        for a in field.k.units():
            assert np.array_equal(V.act((a, 0, 0, field.k.inv(a)), V.highest_weight()),
                                  field.E.smul(delta_char(field, r, a), V.highest_weight()))


def test_w_on_x_squared(F3):
    V = weight_module(F3, 2)  # basis y^2, xy, x^2
    assert V.w(1).dot(V.highest_weight()).tolist() == [1, 0, 0]


def test_u_invariants_are_highest_weight_line(field):
    for r in all_weights(field):
        V = weight_module(field, r)
        inv = u_invariants(field, r)
        assert inv.shape[0] == 1
        nz = np.nonzero(inv[0])[0]
        assert nz.tolist() == [V.top]


def test_coinvariants(field):
    rng = random.Random(3)
    E = field.E
    for r in all_weights(field):
        V = weight_module(field, r)
        ker = V.coinvariant_kernel()
        assert V.dim - len(ker) == 1
        for row in ker:
            assert V.coinv_project(row) == 0
        for _ in range(5):
            v = np.array([rng.randrange(E.size) for _ in range(V.dim)])
            z = rng.randrange(field.q)
            assert coinv_project(field, r, E.matmul(V.ubar(z), v)) == coinv_project(field, r, v)


def test_r1_invariants_and_coinvariants_p3(F3):
    V = weight_module(F3, 1)  # basis y, x
    assert u_invariants(F3, 1).tolist() == [[0, 1]]
    assert V.coinv_project(np.array([1, 0])) == 0
    assert V.coinv_project(np.array([0, 1])) == 1


def test_rho(field):
    E = field.E
    z, top = zero_weight(field), top_weight(field)
    for r in all_weights(field):
        V = weight_module(field, r)
        hw = V.highest_weight()
        assert np.array_equal(rho(field, r, r, hw), hw)
        for s in all_weights(field):
            if not is_admissible_pair(field, r, s):
                assert not rho_matrix(field, r, s).any()
        R = rho_matrix(field, r, r)
        for x in range(field.q):
            assert np.array_equal(E.matmul(R, V.ubar(x)), R)
    assert is_admissible_pair(field, z, top) and is_admissible_pair(field, top, z)


def test_delta_characters(field):
    F = field
    trivial = tuple(1 for _ in F.k.units())
    assert delta_table(F, zero_weight(F)) == delta_table(F, top_weight(F)) == trivial
    for a in F.k.units():
        sign = F.legendre(a)
        assert delta_char(F, half_weight(F), a) == F.E.from_int(sign)
    assert sorted(weights_with_character(F, trivial)) == sorted({zero_weight(F), top_weight(F)})
    with pytest.raises(ValueError):
        delta_char(F, 0, F.uniformizer())


def test_weight_dict(F3, field):
    assert weight_dict(F3, 0) == {(1,)}
    assert weight_dict(F3, 1) == {(0,), (2,)}
    F = field
    half = weight_exponent(F, half_weight(F))
    for r in all_weights(F):
        for s in weight_dict(F, r):
            assert (weight_exponent(F, s) - weight_exponent(F, r) - half) % (F.q - 1) == 0
            assert r in weight_dict(F, s)
