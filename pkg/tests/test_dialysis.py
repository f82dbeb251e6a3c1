import random
from fractions import Fraction as F

import pytest

from blocktf.blockdiag import reduce
from blocktf.dialysis import (ArmsTrunkParams, blk_diag_rep_at,
                              build_arms_trunk_ode, theorem_checks)
from blocktf.errors import InputError
from blocktf.odetf import transfer_function

from conftest import tf

P = ArmsTrunkParams(F(1, 10), F(1, 20))


def test_ode_construction():
    ode = build_arms_trunk_ode(P)
    assert ode.out_coeffs == (F(1, 10), 1) and ode.in_coeffs == (F(1, 20),)
    assert transfer_function(ode) == tf([F(1, 20)], [F(1, 10), 1])


def test_decimal_parameters_are_exact():
    assert ArmsTrunkParams(0.1, 0.05) == P


def test_positivity():
    for bad in ((0, 1), (1, 0), (-1, 1)):
        with pytest.raises(InputError):
            ArmsTrunkParams(*bad)


def test_block_diagram():
    assert reduce(blk_diag_rep_at(P)) == tf([F(1, 20)], [F(1, 10), 1])
    assert reduce(blk_diag_rep_at(ArmsTrunkParams(F(1, 10), 1))) == tf([1], [F(1, 10), 1])
    assert reduce(blk_diag_rep_at(P))(0) == pytest.approx(0.5)
    assert reduce(blk_diag_rep_at(P)).num(0) / reduce(blk_diag_rep_at(P)).den(0) == F(1, 2)


def test_theorem_checks():
    report = theorem_checks(P)
    assert report.routes_agree and report.unit_gain_conclusion and report.stable
    assert report.notes  # kTA != 1 discrepancy is flagged
    assert not theorem_checks(ArmsTrunkParams(F(3, 7), 1)).notes


def test_random_parameters():
    rng = random.Random(29)
    for _ in range(100):
        p = ArmsTrunkParams(F(rng.randint(1, 99), rng.randint(1, 99)),
                            F(rng.randint(1, 99), rng.randint(1, 99)))
        report = theorem_checks(p)
        assert report.all_passed
        r = report.transfer_function
        assert r.num(0) / r.den(0) == p.kTA / p.kA
