"""Exact scalar arithmetic and certified square-root brackets."""

import math
import random

import pytest

from nondegen.scalars import (
    RAT,
    Qi,
    abs2,
    abs_lower,
    abs_upper,
    is_exact,
    rational,
    scalar_mode,
    sqrt_lower,
    sqrt_upper,
)


def random_qi(rng, span=50):
    return Qi(
        RAT(rng.randint(-span, span), rng.randint(1, span)),
        RAT(rng.randint(-span, span), rng.randint(1, span)),
    )


def test_canonical_form():
    q = rational("6/4")
    assert q.numerator == 3 and q.denominator == 2
    assert rational(0.5) == RAT(1, 2)
    assert rational(-2) == -2


def test_mode_classification():
    assert scalar_mode(Qi(1, 2)) == "exact"
    assert scalar_mode(RAT(1, 3)) == "exact"
    assert scalar_mode(7) == "exact"
    assert scalar_mode(0.5) == "float"
    assert scalar_mode(1 + 2j) == "float"
    with pytest.raises(TypeError):
        scalar_mode("nope")


def test_mixing_coerces_to_float_never_back():
    z = Qi(1, 2)
    assert isinstance(z + 0.5, complex)
    assert isinstance(z * (1 + 1j), complex)
    assert isinstance(0.5 - z, complex)
    # exact op exact stays exact
    assert isinstance(z + RAT(1, 3), Qi)
    assert isinstance(z * 3, Qi)
    assert is_exact(z / Qi(1, 1))


def test_gaussian_field_identities():
    a = Qi(RAT(3, 4), RAT(-1, 2))
    b = Qi(RAT(-2, 5), RAT(7, 3))
    assert (a * b) / b == a
    assert a * a.conjugate() == a.abs2()
    assert complex(a) == 0.75 - 0.5j
    assert Qi(2, 0) == 2 and hash(Qi(2, 0)) == hash(2)


def test_exact_algebra_on_random_triples():
    # associativity/distributivity hold as canonical-form equalities
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (random_qi(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Qi(1) / Qi(0)
    with pytest.raises(ZeroDivisionError):
        Qi(1) / RAT(0)


def test_power():
    assert Qi(0, 1) ** 2 == Qi(-1, 0)
    assert Qi(1, 1) ** 0 == Qi(1, 0)
    z = Qi(RAT(1, 2), RAT(1, 3))
    assert z**5 == z * z * z * z * z


def test_sqrt_brackets_sandwich_truth():
    rng = random.Random(11)
    for _ in range(200):
        x = RAT(rng.randint(0, 10**6), rng.randint(1, 10**6))
        lo, hi = sqrt_lower(x), sqrt_upper(x)
        assert lo * lo <= x <= hi * hi
        assert hi - lo <= RAT(2, 10**30)


def test_sqrt_brackets_exact_on_perfect_squares():
    assert sqrt_lower(RAT(25)) == 5
    assert sqrt_upper(RAT(25)) == 5
    assert sqrt_upper(RAT(9, 4)) == RAT(3, 2)


def test_abs_brackets():
    z = Qi(3, 4)
    assert abs_lower(z) == 5 and abs_upper(z) == 5
    w = Qi(1, 1)
    lo, hi = abs_lower(w), abs_upper(w)
    assert float(lo) <= math.sqrt(2) <= float(hi)
    assert abs2(w) == 2
