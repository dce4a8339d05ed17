import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metaplectic_modp.arith import padic_field
from metaplectic_modp.cosets import coset_reps, identity_rep, rep0, rep1, rep_element
from metaplectic_modp.hecke import (
    HeckeError,
    Section,
    SparseEchelon,
    TorusSection,
    ball_dim,
    basic_sections,
    cokernel_dim,
    free_basis,
    hecke_apply,
    hecke_apply_oracle,
    hecke_power,
    in_span,
    phi_fn,
    satake_eval,
    satake_expected,
    specialize,
    torus_basic,
    torus_hecke_apply,
)
from metaplectic_modp.metaplectic import MetaElem, central, h_pi_power, k_star, w_mat
from metaplectic_modp.verify import random_k, random_section, random_sl2
from metaplectic_modp.weights import (
    all_weights,
    is_admissible_pair,
    rho_matrix,
    top_weight,
    weight_module,
    zero_weight,
)


# -- sections -------------------------------------------------------------------------------

def test_section_arithmetic_and_json(F3):
    rng = random.Random(0)
    f = random_section(F3, (2,), rng)
    g = random_section(F3, (2,), rng)
    assert (f + g) - g == f
    assert (f - f).is_zero()
    assert f.scale(2).scale(2) == f
    assert Section.from_json(F3, 2, f.to_json()) == f
    assert f.copy() == f and f.copy() is not f
    with pytest.raises(ValueError):
        Section(F3, (2,)).radius()


def test_translation_is_a_genuine_left_action(F3):
    rng = random.Random(1)
    for _ in range(10):
        f = random_section(F3, (1,), rng, max_n=1)
        g1 = MetaElem(random_sl2(F3, rng), 1)
        g2 = MetaElem(random_sl2(F3, rng), -1)
        assert f.translate(g1).translate(g2) == f.translate(g2 * g1)
        assert f.translate(central(F3, -1)) == f.scale(F3.E.neg(1))


def test_basic_sections_count(F3):
    assert len(basic_sections(F3, 2, 1)) == 3 * 13


# -- bimodule functions -------------------------------------------------------------------------

def test_phi_examples(field):
    F = field
    E = F.E
    for r in all_weights(F)[:4]:
        V = weight_module(F, r)
        assert np.array_equal(phi_fn(F, 0, r, r, rep_element(F, identity_rep())), np.eye(V.dim, dtype=np.int64))
        for n in (1, 2):
            assert np.array_equal(phi_fn(F, n, r, r, h_pi_power(F, -n)), rho_matrix(F, r, r))
        # at the inverse of h1(1, 0) = h~(p)^{-1}
        e = F.minus_one_pi()
        expected = E.matmul(V.w(1), E.matmul(rho_matrix(F, r, r), V.w(F.k.neg(1))))
        if e == -1:
            expected = E.vneg(expected)
        assert np.array_equal(phi_fn(F, 1, r, r, rep_element(F, rep1(1, (0,))).inverse()), expected)
    z, top = zero_weight(F), top_weight(F)
    assert not phi_fn(F, 0, z, top, rep_element(F, identity_rep())).any()
    assert np.array_equal(phi_fn(F, 1, z, top, h_pi_power(F, -1)), rho_matrix(F, z, top))


@pytest.mark.parametrize("seed", range(3))
def test_phi_is_bi_equivariant_and_genuine(F3, seed):
    rng = random.Random(seed)
    E = F3.E
    for r in all_weights(F3):
        V = weight_module(F3, r)
        g = MetaElem(random_sl2(F3, rng), 1)
        k1, k2 = random_k(F3, rng), random_k(F3, rng)
        for n in range(3):
            lhs = phi_fn(F3, n, r, r, k_star(k1) * g * k_star(k2))
            rhs = E.matmul(V.matrix(k1), E.matmul(phi_fn(F3, n, r, r, g), V.matrix(k2)))
            assert np.array_equal(lhs, rhs)
            assert np.array_equal(phi_fn(F3, n, r, r, central(F3, -1) * g), E.vneg(phi_fn(F3, n, r, r, g)))


# -- Hecke operators --------------------------------------------------------------------------

# T_1 [1, highest weight] at p = 3: the coefficient (-1, p)_F = -1 = 2 on every neighbour (frozen)
T1_AT_IDENTITY_P3 = {
    0: ({f"h0[2;{a}{b}]" for a in "012" for b in "012"} | {"h1[1;0]", "h1[1;1]", "h1[1;2]"}, [2]),
    1: ({f"h0[2;{a}{b}]" for a in "012" for b in "012"}, [0, 2]),
    2: ({f"h0[2;{a}{b}]" for a in "012" for b in "012"}, [0, 0, 2]),
}


@pytest.mark.parametrize("r", [0, 1, 2])
def test_t1_at_identity_frozen(F3, r):
    V = weight_module(F3, r)
    out = hecke_apply(F3, r, Section.basic(F3, r, identity_rep(), V.highest_weight()))
    labels, vec = T1_AT_IDENTITY_P3[r]
    assert {str(k) for k in out.support()} == labels
    assert all(out.data[k].tolist() == vec for k in out.support())


@pytest.mark.parametrize("r", [0, 1, 2])
def test_t1_at_negative_torus_power_frozen(F3, r):
    V = weight_module(F3, r)
    out = hecke_apply(F3, r, Section.basic(F3, r, rep1(1, (0,)), V.highest_weight()))
    top = V.top
    inner = {str(k): int(out.data[k][top]) for k in out.support() if k.n < 2}
    assert inner == {"1": 1, "h1[1;1]": 2, "h1[1;2]": 1}
    assert len(out.support()) == (12 if r == 0 else 9)


@pytest.mark.parametrize("r", [0, 1, 2])
def test_closed_form_matches_oracle_p3(F3, r):
    for b in basic_sections(F3, r, 1):
        assert hecke_apply(F3, r, b) == hecke_apply_oracle(F3, 1, r, r, b)


@pytest.mark.parametrize("pf", [(5, 1), (7, 1), (3, 2)])
def test_closed_form_matches_oracle_other_fields(pf):
    F = padic_field(*pf)
    weights = all_weights(F)
    for r in {weights[0], weights[-1], weights[len(weights) // 2]}:
        for b in basic_sections(F, r, 0) + basic_sections(F, r, 1)[:: max(1, F.q)]:
            assert hecke_apply(F, r, b) == hecke_apply_oracle(F, 1, r, r, b)


@given(seed=st.integers(0, 10 ** 6), r=st.sampled_from([0, 1, 2]))
def test_support_radius_grows_by_one(F3, seed, r):
    f = random_section(F3, (r,), random.Random(seed), max_n=2)
    assert hecke_apply(F3, r, f).radius() == f.radius() + 1


@given(seed=st.integers(0, 10 ** 6), r=st.sampled_from([0, 1, 2]))
def test_hecke_is_linear(F3, seed, r):
    rng = random.Random(seed)
    f, g = random_section(F3, (r,), rng, 1), random_section(F3, (r,), rng, 1)
    c = rng.randrange(1, F3.E.size)
    assert hecke_apply(F3, r, f + g.scale(c)) == hecke_apply(F3, r, f) + hecke_apply(F3, r, g).scale(c)


@pytest.mark.parametrize("r", [0, 1, 2])
def test_semigroup_law(F3, r):
    for b in basic_sections(F3, r, 1)[::3]:
        assert hecke_power(F3, r, b, 2) == hecke_apply_oracle(F3, 2, r, r, b)
        assert hecke_apply_oracle(F3, 0, r, r, b) == b
        assert hecke_power(F3, r, b, 0) == b


def test_change_of_weight_composition(F3):
    z, top = zero_weight(F3), top_weight(F3)
    for r, s in ((z, top), (top, z)):
        for b in basic_sections(F3, r, 1)[::2]:
            there = hecke_apply_oracle(F3, 1, r, s, b)
            back = hecke_apply_oracle(F3, 1, s, r, there)
            assert back == hecke_power(F3, r, b, 2)


def test_inadmissible_pair_gives_zero(F3):
    b = basic_sections(F3, 1, 1)[5]
    assert hecke_apply_oracle(F3, 1, 1, 2, b).is_zero()
    assert not is_admissible_pair(F3, 1, 2)
    with pytest.raises(ValueError):
        hecke_apply_oracle(F3, 1, 2, 2, b)


# -- torus side ------------------------------------------------------------------------------

def test_torus_operators(field):
    F = field
    r = top_weight(F)
    z = zero_weight(F)
    f = torus_basic(F, r)
    assert torus_hecke_apply(F, 0, r, r, f) == f
    g = f
    for n in range(1, 4):
        g = torus_hecke_apply(F, -1, r, r, g)
        assert g == torus_basic(F, r, n)
    for n, m in ((1, 2), (0, 3), (2, 0)):
        lhs = torus_hecke_apply(F, n, z, r, torus_hecke_apply(F, m, r, z, f))
        assert lhs == torus_hecke_apply(F, n + m, r, r, f)
    inadm = [(a, b) for a in all_weights(F) for b in all_weights(F) if not is_admissible_pair(F, a, b)]
    if inadm:
        a, b = inadm[0]
        assert torus_hecke_apply(F, 1, a, b, torus_basic(F, a)).data == {}
    with pytest.raises(ValueError):  # f has weight (p-1, ..., p-1), not 0
        torus_hecke_apply(F, 1, z, z, f)


def test_specialize(F5):
    E = F5.E
    f = TorusSection(F5, (0,), {2: 1, -1: 3})
    lam = 2
    assert specialize(F5, f, lam) == E.add(E.pow(lam, 2), E.mul(3, E.inv(lam)))


# -- Satake transform ----------------------------------------------------------------------------

@pytest.mark.parametrize("pf", [(3, 1), (5, 1)])
def test_satake_transform(pf):
    F = padic_field(*pf)
    for r in all_weights(F):
        assert satake_eval(F, 0, r, r, 0, depth=0).value == 1
    z, top = zero_weight(F), top_weight(F)
    pairs = [(r, r) for r in all_weights(F)] + [(z, top), (top, z)]
    for n in (1, 2):
        for r, s in pairs:
            for m in range(-n - 1, n + 2):
                exp = satake_expected(F, n, r, s, m)
                assert exp == (1 if m == -n else 0)
                assert satake_eval(F, n, r, s, m, method="counts").value == exp
                assert satake_eval(F, n, r, s, m, depth=n + abs(m)).value == exp


def test_satake_cancellation(F3):
    half = (F3.q - 1) // 2
    for n in (1, 2):
        val = satake_eval(F3, n, 2, 0, -n + 1)
        (cp, sp), (cm, sm) = val.by_sign[1], val.by_sign[-1]
        assert cp == cm == half
        assert sp == 1 and sm == F3.E.neg(1)
        assert val.value == 0


def test_satake_depth_precondition(F3):
    with pytest.raises(ValueError, match="depth"):
        satake_eval(F3, 2, 0, 0, 1, depth=2)
    with pytest.raises(ValueError):
        satake_eval(F3, 1, 0, 0, 0, method="magic")


# -- freeness ----------------------------------------------------------------------------------

def test_sparse_echelon():
    from metaplectic_modp.gf import gf

    E = gf(5, 1)
    ech = SparseEchelon(E)
    a, b = rep0(1, (0, 0)), rep0(1, (1, 0))
    assert ech.add({(a, 0): 1, (b, 0): 2}) is not None
    assert ech.add({(a, 0): 2, (b, 0): 4}) is None
    assert ech.add({(a, 0): 1}) is not None
    assert ech.rank == 2
    assert not ech.reduce({(b, 0): 3})


@pytest.mark.parametrize("r", [0, 1, 2])
def test_free_basis_sizes(F3, r):
    dim = r + 1
    assert len(free_basis(F3, r, 0).elements) == dim
    B1 = free_basis(F3, r, 1)
    assert len(B1.elements) == dim * 13 == ball_dim(F3, r, 1)
    B2 = free_basis(F3, r, 2)
    assert len(B2.elements) == dim * 121 == B2.echelon.rank
    # generator counts: T-images account for everything except the new directions on each sphere
    assert [len(B2.generators[j]) for j in range(3)] == [dim, dim * 11, dim * 96]
    for sec in B1.sections():
        assert in_span(B2.echelon, hecke_apply(F3, r, sec))


def test_free_basis_large_frozen(F3):
    assert len(free_basis(F3, 0, 3).elements) == 1093
    assert len(free_basis(F3, 2, 3).elements) == 3279


def test_cokernel_dims(F3):
    assert cokernel_dim(F3, 0, 0, 1) == 12
    assert cokernel_dim(F3, 0, 1, 1) == 12
    assert cokernel_dim(F3, 0, 1, 0) == 1
    for r in (0, 1):
        dims = [cokernel_dim(F3, r, lam, N) for lam in (0, 1) for N in (1, 2, 3)]
        assert dims[:3] == dims[3:]  # independent of lambda
        assert dims[0] < dims[1] < dims[2]
    assert [cokernel_dim(F3, 1, 1, N) for N in (1, 2, 3)] == [24, 216, 1944]


def test_free_basis_error_type():
    assert issubclass(HeckeError, ArithmeticError)
