"""Polynomial arithmetic, certified disk bounds, Hermite interpolation."""

import math
import random

import pytest
import sympy

from nondegen.errors import DegreeCapExceeded, PreconditionError
from nondegen.polynomials import (
    MultiPoly,
    UniPoly,
    hermite_interpolate,
    poly_derivative,
    poly_eval,
    sampled_sup,
    sup_norm_bound,
)
from nondegen.scalars import RAT, Qi


def sympy_poly(P: UniPoly):
    z = sympy.Symbol("z")
    return sum(
        sympy.Rational(int(c.numerator), int(c.denominator)) * z**k
        for k, c in enumerate(P.coeffs)
    )


def random_poly(rng, deg, float_mode=False):
    if float_mode:
        coeffs = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(deg + 1)]
    else:
        coeffs = [
            Qi(RAT(rng.randint(-8, 8), rng.randint(1, 8)),
               RAT(rng.randint(-8, 8), rng.randint(1, 8)))
            for _ in range(deg + 1)
        ]
    return UniPoly(coeffs)


# -- structure ---------------------------------------------------------

def test_trailing_zeros_trimmed():
    assert UniPoly((1, 2, 0, 0)).coeffs == (1, 2)
    assert UniPoly((0, 0)).is_zero
    assert UniPoly(()).degree == -1


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        UniPoly.monomial(10_001)
    with pytest.raises(DegreeCapExceeded):
        UniPoly.monomial(6000) * UniPoly.monomial(6000)


# -- evaluation / derivative ------------------------------------------

def test_eval_monomial():
    P = UniPoly.monomial(2)  # z^2
    assert poly_eval(P, 3) == 9


def test_eval_zero_poly():
    assert poly_eval(UniPoly(), 17) == 0
    assert poly_eval(UniPoly(), 0.3 + 1j) == 0


def test_eval_expanded_product_against_sympy():
    # (z-2)(z/2)^4 at z=2 vanishes; oracle: expand symbolically, then evaluate
    P = UniPoly((RAT(-2), RAT(1))) * UniPoly.monomial(4, RAT(1, 16))
    z = sympy.Symbol("z")
    oracle = sympy.expand((z - 2) * (z / 2) ** 4)
    assert sympy_poly(P) - oracle == 0
    assert poly_eval(P, 2) == 0
    assert poly_eval(P, RAT(3)) == sympy.Rational(81, 16)


def test_derivative_basics():
    P = UniPoly.monomial(3)  # z^3
    assert poly_derivative(P, 1) == UniPoly((0, 0, 3))
    assert poly_derivative(P, 4).is_zero


def test_derivative_of_product_at_two():
    # oracle: symbolic differentiation of (z-2)(z/2)^4
    P = UniPoly((RAT(-2), RAT(1))) * UniPoly.monomial(4, RAT(1, 16))
    z = sympy.Symbol("z")
    oracle = sympy.diff((z - 2) * (z / 2) ** 4, z)
    assert sympy_poly(poly_derivative(P, 1)) - sympy.expand(oracle) == 0
    assert poly_derivative(P, 1)(RAT(2)) == 1


def test_derivative_matches_finite_differences():
    # spec invariant: central differences at h in {1e-4, 1e-5}, rel err 1e-6
    rng = random.Random(3)
    for _ in range(20):
        P = random_poly(rng, rng.randint(1, 8), float_mode=True)
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        z /= max(1.0, abs(z) / 10)
        dP = poly_derivative(P, 1)
        for h in (1e-4, 1e-5):
            fd = (P(z + h) - P(z - h)) / (2 * h)
            exact = dP(z)
            assert abs(fd - exact) <= 1e-6 * (1 + abs(exact))


# -- certified sup bound ----------------------------------------------

def test_sup_norm_bound_monomials():
    assert sup_norm_bound(UniPoly.monomial(2, RAT(1)), RAT(2)) == 4
    assert sup_norm_bound(UniPoly((RAT(1), RAT(1))), RAT(1)) == 2


def test_sup_norm_bound_dominates_sampling():
    rng = random.Random(5)
    for _ in range(40):
        P = random_poly(rng, rng.randint(0, 40))
        r = RAT(rng.randint(1, 40), rng.randint(1, 20))
        bound = sup_norm_bound(P, r)
        sampled = sampled_sup(P, float(r), 512)
        # float sampling noise is ~1e-15 relative
        assert float(bound) * (1 + 1e-9) >= sampled


def test_sup_norm_bound_float_mode():
    P = UniPoly((1.0, -2.0))
    assert sup_norm_bound(P, 2.0) == pytest.approx(5.0)


def test_sampled_sup_examples():
    assert sampled_sup(UniPoly.variable(), 1.0, 8) == pytest.approx(1.0)
    assert sampled_sup(UniPoly(), 3.0, 5) == 0.0
    # (z^5 - 2 z^4)/16 on the unit circle: below the 3/16 triangle bound
    P = UniPoly((0, 0, 0, 0, RAT(-2, 16), RAT(1, 16)))
    val = sampled_sup(P, 1.0, 4096)
    assert 0 < val <= 3 / 16


def test_sampled_sup_preconditions():
    with pytest.raises(PreconditionError):
        sampled_sup(UniPoly.variable(), 1.0, 0)


# -- Hermite interpolation --------------------------------------------

def test_hermite_constant():
    P = hermite_interpolate([(0, (5,))])
    assert P == UniPoly((5,))


def test_hermite_spec_example():
    # Q(0)=0, Q'(0)=1, Q(1)=0; 3 conditions -> unique quadratic z - z^2
    # (oracle: solved the 3x3 confluent Vandermonde system by hand)
    P = hermite_interpolate([(RAT(0), (RAT(0), RAT(1))), (RAT(1), (RAT(0),))])
    assert P == UniPoly((RAT(0), RAT(1), RAT(-1)))


def test_hermite_all_zero_jets():
    P = hermite_interpolate([(1, (0, 0)), (2, (0,))])
    assert P.is_zero


def test_hermite_duplicate_sites():
    with pytest.raises(PreconditionError):
        hermite_interpolate([(1, (0,)), (1, (2,))])


def test_hermite_random_jets_exact():
    # every jet condition holds exactly in exact mode
    rng = random.Random(9)
    for _ in range(25):
        npts = rng.randint(1, 4)
        pts = rng.sample(range(-6, 7), npts)
        sites = []
        for p in pts:
            jet = tuple(
                Qi(RAT(rng.randint(-5, 5), rng.randint(1, 4)),
                   RAT(rng.randint(-5, 5), rng.randint(1, 4)))
                for _ in range(rng.randint(1, 3))
            )
            sites.append((Qi(p), jet))
        P = hermite_interpolate(sites)
        total = sum(len(j) for _, j in sites)
        assert P.degree < total
        for p, jet in sites:
            for k, want in enumerate(jet):
                assert poly_eval(poly_derivative(P, k), p) == want


def test_hermite_matches_sympy_interpolating_poly():
    # value-only case cross-checked against sympy's Lagrange interpolation
    pts = [RAT(0), RAT(1), RAT(3)]
    vals = [RAT(2), RAT(-1), RAT(5)]
    P = hermite_interpolate([(p, (v,)) for p, v in zip(pts, vals)])
    z = sympy.Symbol("z")
    oracle = sympy.interpolate(
        [(int(p), sympy.Rational(int(v.numerator), int(v.denominator)))
         for p, v in zip(pts, vals)], z)
    assert sympy_poly(P) - sympy.expand(oracle) == 0


# -- multivariate ------------------------------------------------------

def test_multipoly_basics():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    p = (1 - x) * (1 - y * RAT(1, 2))
    assert p((0, 0)) == 1
    assert p((1, 7)) == 0
    assert p((3, 2)) == 0
    assert p.degree == 2


def test_multipoly_zero_coeffs_dropped():
    x = MultiPoly.variable(2, 0)
    assert (x - x).is_zero
    assert not (x - x).terms


def test_multipoly_partial():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    p = x * x * y + y * 3
    assert p.partial(0) == 2 * x * y
    assert p.partial(1) == x * x + MultiPoly.constant(2, 3)


def test_multipoly_compose_matches_sympy():
    rng = random.Random(13)
    xs = sympy.symbols("x0 x1")
    ts = sympy.symbols("t0 t1")
    for _ in range(10):
        def rand_mp(nv):
            terms = {}
            for _ in range(rng.randint(1, 5)):
                e = tuple(rng.randint(0, 2) for _ in range(nv))
                terms[e] = terms.get(e, 0) + RAT(rng.randint(-4, 4))
            return MultiPoly(nv, terms)

        p = rand_mp(2)
        a0, a1 = rand_mp(2), rand_mp(2)
        comp = p.compose([a0, a1])

        def to_sympy(mp, symbols):
            return sum(
                sympy.Rational(int(c.numerator), int(c.denominator))
                * sympy.prod([s**e for s, e in zip(symbols, exps)])
                for exps, c in mp.terms.items()
            )

        lhs = to_sympy(comp, ts)
        rhs = to_sympy(p, xs).subs(
            [(xs[0], to_sympy(a0, ts)), (xs[1], to_sympy(a1, ts))], simultaneous=True
        )
        assert sympy.expand(lhs - rhs) == 0


def test_multipoly_subs_unipoly():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    p = x * y + 1
    u = p.subs_unipoly([UniPoly.variable(), UniPoly.monomial(2)])
    assert u == UniPoly((1, 0, 0, 1))  # 1 + z^3
