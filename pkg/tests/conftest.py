from fractions import Fraction

import pytest

from blocktf.ratfunc import Poly, RatFunc


def tf(num, den):
    return RatFunc(Poly(num), Poly(den))


@pytest.fixture
def s():
    return RatFunc.s()


F = Fraction
