from itertools import product

import pytest
from hypothesis import given

from metaplectic_modp.arith import (
    FieldParams,
    PrecisionError,
    digit_tuples,
    hilbert_symbol,
    padic_field,
    sets_I,
    shift_plus,
    truncate,
)

from conftest import elements, units


def norm_form_oracle(p: int, a: int, b: int) -> int:
    """(a, b) for integers with v_p <= 1, decided by a primitive solution of a x^2 + b y^2 = z^2 mod p^3."""
    mod = p ** 3
    for x, y, z in product(range(mod), repeat=3):
        if x % p == 0 and y % p == 0 and z % p == 0:
            continue
        if (a * x * x + b * y * y - z * z) % mod == 0:
            return 1
    return -1


@pytest.mark.parametrize("p", [3, 5])
def test_hilbert_symbol_against_norm_form(p):
    F = padic_field(p)
    eps = next(c for c in range(2, p) if pow(c, (p - 1) // 2, p) == p - 1)
    reps = [1, eps, p, eps * p]
    for a in reps:
        for b in reps:
            assert hilbert_symbol(F.from_int(a), F.from_int(b)) == norm_form_oracle(p, a, b), (a, b)


def test_hilbert_examples(F3, F5):
    assert hilbert_symbol(F3.from_int(2), F3.from_int(3)) == -1
    assert hilbert_symbol(F5.from_int(-1), F5.uniformizer()) == 1
    assert hilbert_symbol(F3.from_int(-1), F3.uniformizer()) == -1
    with pytest.raises(ValueError, match="undefined at 0"):
        hilbert_symbol(F3.zero(), F3.one())


@given(data=__import__("hypothesis").strategies.data())
def test_hilbert_symbol_properties(field, data):
    F = field
    a, b, c = (data.draw(elements(F)) for _ in range(3))
    u, w = data.draw(units(F)), data.draw(units(F))
    assert hilbert_symbol(a, b) == hilbert_symbol(b, a)
    assert hilbert_symbol(a * b, c) == hilbert_symbol(a, c) * hilbert_symbol(b, c)
    assert hilbert_symbol(-a, a) == 1
    assert hilbert_symbol(u, w) == 1
    assert hilbert_symbol(a, c * c) == 1


def test_minus_one_symbol_matches_q_mod_4(field):
    F = field
    expected = 1 if F.q % 4 == 1 else -1
    assert hilbert_symbol(-F.one(), F.uniformizer()) == expected == F.minus_one_pi()


@given(data=__import__("hypothesis").strategies.data())
def test_field_operations(field, data):
    F = field
    a, b = data.draw(elements(F)), data.draw(elements(F))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * a.inverse() == F.one()
    assert (a * b).val == a.val + b.val
    assert -(-a) == a
    assert a ** 3 == a * a * a
    assert a ** -2 == (a * a).inverse()


def test_teichmuller_lifts(field):
    F = field
    assert F.teichmuller(0).is_zero()
    assert F.teichmuller(1) == F.one()
    for c in F.k.units():
        t = F.teichmuller(c)
        assert t ** (F.q - 1) == F.one()
        assert t.reduce() == c
        assert t ** F.q == t


def test_teichmuller_of_two_mod_three_is_minus_one(F3):
    t = F3.teichmuller(2)
    assert t == F3.from_int(-1)
    # ordinary base-3 digits of the unit part are all 2, i.e. it is 3^N - 1
    residue = t.unit[0]
    base3 = [(residue // 3 ** i) % 3 for i in range(F3.N)]
    assert set(base3) == {2}
    # in Teichmuller digits it is the single digit [2]
    assert t.unit_digits(4) == [2, 0, 0, 0]


def test_from_digits_round_trip(field):
    F = field
    digits = [1, 0, F.q - 1, 2 % F.q, 0]
    x = F.from_digits(digits, -2)
    assert x.val == -2
    assert x.unit_digits(len(digits)) == digits
    assert F.from_json(x.to_json()) == x


def test_digits_of_integral_element(F3):
    # digits are Teichmuller digits: 34 = [1] + [2] 3 + [1] 9 + ... since [2] = -1
    x = F3.from_int(34)
    assert x.digits(3) == [1, 2, 1]
    assert F3.from_digits(x.digits(F3.N)) == x
    assert F3.from_int(9).digits(3) == [0, 0, 1]


def test_sets_I_enumeration(field):
    F = field
    I2 = list(sets_I(F, 2))
    assert len(I2) == F.q ** 2
    assert len(set(tuple(x.digits(2)) for x in I2)) == F.q ** 2
    assert len(list(digit_tuples(F, 3))) == F.q ** 3
    with pytest.raises(ValueError):
        list(sets_I(F, 0))


def test_truncate_and_shift(F3):
    kappa = F3.from_digits([1, 2])
    lam = F3.one()
    assert truncate(kappa, 2) == kappa
    assert truncate(kappa, 1) == F3.one()
    assert shift_plus(kappa, lam, 2) == F3.one()
    with pytest.raises(ValueError):
        shift_plus(kappa, lam, 0)


def test_truncate_is_idempotent(field):
    F = field
    for kappa in list(sets_I(F, 2))[:: max(1, F.q // 2)]:
        assert truncate(kappa, 2) == kappa
        assert truncate(truncate(kappa, 3), 1) == truncate(kappa, 1)


def test_field_params_validation():
    with pytest.raises(ValueError):
        FieldParams(4)
    with pytest.raises(ValueError):
        FieldParams(2)
    with pytest.raises(ValueError):
        FieldParams(3, 0)
    with pytest.raises(ValueError):
        FieldParams(3, 1, 2)
    with pytest.raises(ValueError):
        FieldParams(3, 1, 24, 1)  # mu_4 not in F_3
    assert FieldParams(3, 1).d == 2
    assert FieldParams(5, 1).d == 1
    assert FieldParams(7, 2).d == 4


def test_cancellation_below_precision_is_zero(F3):
    x = F3.one()
    y = x + F3.pi_power(F3.N + 2)
    assert (y - x).is_zero()
    with pytest.raises((PrecisionError, ZeroDivisionError)):
        (y - x).inverse()
