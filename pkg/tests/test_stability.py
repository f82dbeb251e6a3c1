import random
from fractions import Fraction as F

import pytest

from blocktf.errors import DegenerateRouthError, InputError
from blocktf.ratfunc import Poly, RatFunc
from blocktf.stability import classify, cross_check, routh_hurwitz

from conftest import tf


def test_routh_examples():
    assert routh_hurwitz(Poly([F(1, 10), 1])).sign_changes == 0
    r = routh_hurwitz(Poly([-1, 0, 1]))
    assert r.degenerate or r.sign_changes == 1
    assert routh_hurwitz(Poly([1, 1, 1, 1])).degenerate
    assert classify(RatFunc(1, Poly([1, 1, 1, 1]))).classification == "marginal"


def test_routh_counts_rhp():
    # (s-1)(s-2)(s+3) = s^3 - 7s + 6
    r = routh_hurwitz(Poly([6, -7, 0, 1]))
    assert r.degenerate  # missing s^2 term puts a zero in the first column
    # (s-1)(s-2)(s+3)(s+4): no missing terms
    p = Poly([-1, 1]) * Poly([-2, 1]) * Poly([3, 1]) * Poly([4, 1])
    assert routh_hurwitz(p).sign_changes == 2


def test_routh_rejects_constants():
    with pytest.raises(InputError):
        routh_hurwitz(Poly([3]))


def test_classify_examples():
    v = classify(tf([1], [F(1, 10), 1]))
    assert v.classification == "stable"
    assert v.poles == pytest.approx([-0.1])
    assert v.method == "both"
    assert classify(tf([1], [-1, 1])).classification == "unstable"
    assert classify(tf([1], [4, 0, 1])).classification == "marginal"


def test_repeated_axis_poles_unstable():
    assert classify(tf([1], [0, 0, 1])).classification == "unstable"
    assert classify(tf([1], [1, 0, 2, 0, 1])).classification == "unstable"  # (s^2+1)^2


def test_cancelled_pole_is_ignored():
    r = RatFunc(Poly([-1, 1]), Poly([-1, 1]) * Poly([2, 1]))
    assert classify(r).classification == "stable"


def test_constant_is_stable():
    assert classify(RatFunc(3)).classification == "stable"


def test_json_shape():
    assert list(classify(tf([1], [2, 1])).to_json()) == ["classification", "poles", "method"]


def test_cross_check_examples():
    assert cross_check(Poly([2, 3, 1]))
    assert cross_check(Poly([2, -3, 1]))
    with pytest.raises(DegenerateRouthError):
        cross_check(Poly([1, 1, 1, 1]))


def test_cross_check_random():
    rng = random.Random(23)
    done = 0
    while done < 200:
        p = Poly([F(rng.randint(-50, 50), 10) for _ in range(rng.randint(2, 7))])
        if p.degree < 1 or routh_hurwitz(p).degenerate:
            continue
        assert cross_check(p)
        done += 1
