import cmath
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from blocktf import generators as gen
from blocktf.errors import InputError, PoleError, ZeroDenominatorError
from blocktf.ratfunc import (Poly, RatFunc, arith, eval_complex, normalize,
                             partial_fractions, poly_gcd, root_multiplicities,
                             roots, squarefree_decomposition, to_rational)

from conftest import tf


def test_poly_canonical_form():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly([0, 0]).coeffs == ()
    assert Poly([]).degree == -1
    assert Poly([3, 0, 5]).degree == 2


def test_decimal_inputs_are_exact():
    assert to_rational(0.1) == F(1, 10)
    assert to_rational("0.05") == F(1, 20)


def test_add_like_terms():
    inv_s = tf([1], [0, 1])
    assert inv_s + inv_s == tf([2], [0, 1])
    assert arith(inv_s, inv_s, "add") == tf([2], [0, 1])


def test_mul_cancels():
    r = tf([1], [1, 1]) * tf([1, 1], [2, 1])
    assert r == tf([1], [2, 1])
    assert r.den.coeffs == (2, 1)


def test_div_by_zero():
    with pytest.raises(ZeroDivisionError):
        tf([1], [2, 1]) / RatFunc(0)
    with pytest.raises(ZeroDenominatorError):
        RatFunc(Poly([1]), Poly([]))


def test_eval():
    assert eval_complex(tf([1], [2, 1]), 0) == pytest.approx(0.5)
    with pytest.raises(PoleError):
        eval_complex(tf([1], [2, 1]), -2)
    assert abs(eval_complex(tf([1, 0, 1], [1, 1]), 1j)) < 1e-15


def test_normalize_examples():
    r = normalize((Poly([2, 2]), Poly([4, 2])))
    assert (r.num.coeffs, r.den.coeffs) == ((1, 1), (2, 1))
    r = normalize((Poly([-1, 0, 1]), Poly([-1, 1])))
    assert (r.num.coeffs, r.den.coeffs) == ((1, 1), (1,))
    r = normalize((Poly([]), Poly([3, 1])))
    assert (r.num.coeffs, r.den.coeffs) == ((), (1,))
    assert r.is_normalized()


def test_unreduced_construction_keeps_factors():
    r = RatFunc(Poly([1, 1]), Poly([1, 1]), reduce=False)
    assert r.den.degree == 1
    assert r.normalize() == RatFunc(1)


def test_roots_examples():
    assert roots(Poly([2, 3, 1])) == pytest.approx([-2, -1])
    zs = roots(Poly([1, 0, 1]))
    assert sorted(zs, key=lambda z: z.imag) == pytest.approx([-1j, 1j])
    assert root_multiplicities(Poly([1, 2, 1])) == [(pytest.approx(-1), 2)]


def test_double_root_recombines_exactly():
    [(z, m)] = root_multiplicities(Poly([1, 2, 1]))
    z = to_rational(round(z.real, 9))
    assert Poly([-z, 1]) ** m == Poly([1, 2, 1])


def test_squarefree():
    p = Poly([-1, 1]) ** 3 * Poly([2, 1])  # (s-1)^3 (s+2)
    parts = squarefree_decomposition(p)
    prod = Poly([1])
    for f, m in parts:
        prod = prod * f ** m
    assert prod == p.monic()
    assert {m for _, m in parts} == {1, 3}
    assert poly_gcd(p, p.derivative()) == (Poly([-1, 1]) ** 2).monic()


def test_partial_fractions_examples():
    pf = partial_fractions(tf([1], [0, 1, 1]))
    got = sorted((t.pole.real, t.residues[0].real) for t in pf.terms)
    assert got == pytest.approx([(-1, -1), (0, 1)])

    pf = partial_fractions(tf([1], [2, 1]))
    assert len(pf.terms) == 1
    assert pf.terms[0].pole == pytest.approx(-2)
    assert pf.terms[0].residues == pytest.approx((1,))

    pf = partial_fractions(tf([3, 3, 1], [1, 1]))
    assert pf.poly_part == Poly([2, 1])
    assert pf.terms[0].pole == pytest.approx(-1)
    assert pf.terms[0].residues == pytest.approx((1,))


def test_partial_fractions_repeated_pole():
    pf = partial_fractions(tf([0, 1], [1, 2, 1]))  # s/(s+1)^2 = 1/(s+1) - 1/(s+1)^2
    [term] = pf.terms
    assert term.multiplicity == 2
    assert term.residues == pytest.approx((1, -1))


def test_partial_fraction_recombination_random():
    rng = random.Random(7)
    for _ in range(200):
        r = gen.ratfunc(rng, max_degree=4)
        if r.den.degree < 1:
            with pytest.raises(InputError):
                partial_fractions(r)
            continue
        pf = partial_fractions(r)
        for s0 in (0.3 + 2.1j, -1.7 + 0.4j, 2.5 - 3j):
            try:
                exact = r(s0)
            except PoleError:
                continue
            assert abs(pf(s0) - exact) <= 1e-7 * max(1.0, abs(exact))


def test_roots_product_duality():
    rng = random.Random(11)
    for _ in range(100):
        p = gen.poly(rng, rng.randint(1, 6))
        zs = roots(p)
        assert len(zs) == p.degree
        for s0 in (0.5 + 1j, -2 + 0.25j):
            prod = complex(p.leading)
            for z in zs:
                prod *= s0 - z
            exact = complex(p(s0))
            assert abs(prod - exact) <= 1e-6 * max(1.0, abs(exact))


def test_str_format():
    assert str(tf([F(1, 20)], [F(1, 10), 1])) == "tf(1/20; 1/10, 1)"


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.lists(small, min_size=1, max_size=4).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
ratfuncs = st.builds(RatFunc, polys, nonzero_polys)


@settings(max_examples=60, deadline=None)
@given(ratfuncs, ratfuncs, ratfuncs)
def test_field_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == RatFunc(0)
    if not a.is_zero():
        assert a / a == RatFunc(1)


@settings(max_examples=60, deadline=None)
@given(polys, nonzero_polys, st.integers(min_value=1, max_value=3))
def test_normalization_invariant(num, den, k):
    common = Poly([1, k])
    r = RatFunc(num * common, den * common)
    assert r.is_normalized()
    assert r.den.leading == 1
    assert poly_gcd(r.num, r.den).degree <= 0
    assert r == RatFunc(num, den)


@settings(max_examples=40, deadline=None)
@given(nonzero_polys)
def test_eval_matches_horner(p):
    s0 = 0.7 - 1.3j
    assert cmath.isclose(complex(p(s0)), sum(complex(c) * s0 ** i for i, c in enumerate(p.coeffs)),
                         rel_tol=1e-12, abs_tol=1e-12)
