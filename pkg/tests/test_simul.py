import math
from fractions import Fraction as F

import numpy as np
import pytest

from blocktf.errors import (DivergenceError, ImproperTransferFunctionError,
                            InputError, UnsupportedInputError)
from blocktf.laplace import delay, exp, sin, step
from blocktf.odetf import LinODE
from blocktf.simul import (CompartmentModel, cross_validate, realize, rk4,
                           simulate_dialysis, simulate_ode, time_response)

from conftest import tf


def test_rk4_decay():
    traj = rk4(lambda t, x: -x, [1.0], 1.0, 1e-3)
    assert abs(traj.states[-1, 0] - math.exp(-1)) < 1e-8
    assert len(traj.times) == 1001


def test_rk4_constant():
    traj = rk4(lambda t, x: np.zeros_like(x), [2.0, -1.0], 1.0, 0.1)
    assert np.all(traj.states == [2.0, -1.0])


def test_rk4_order():
    # y' = -y + sin t, y(0)=1; halving dt cuts the error by ~16
    exact = 1.5 * math.exp(-1) + (math.sin(1) - math.cos(1)) / 2

    def err(dt):
        return abs(rk4(lambda t, x: -x + np.sin(t), [1.0], 1.0, dt).states[-1, 0] - exact)
    assert err(0.1) / err(0.05) >= 12
    assert err(0.05) / err(0.025) >= 12


def test_rk4_divergence():
    with pytest.raises(DivergenceError) as info:
        rk4(lambda t, x: x * x, [1.0], 5.0, 0.01)
    assert 0.9 < info.value.time < 1.2


def test_rk4_bad_step():
    with pytest.raises(InputError):
        rk4(lambda t, x: x, [1.0], 1.0, 0.0)


def test_arms_with_trunk_held_at_zero():
    kA = 0.1
    traj = rk4(lambda t, x: np.array([-kA * x[0]]), [1.0], 10.0, 1e-3)
    assert np.max(np.abs(traj.states[:, 0] - np.exp(-kA * traj.times))) < 1e-8


def test_time_response_examples():
    t = np.linspace(0, 5, 501)
    assert time_response(tf([1], [2, 1]), "step", t) == pytest.approx((1 - np.exp(-2 * t)) / 2, abs=1e-8)
    assert time_response(tf([1], [0, 1]), "impulse", t) == pytest.approx(np.ones_like(t), abs=1e-12)
    y = time_response(tf([F(1, 20)], [F(1, 10), 1]), "step", t)
    assert y == pytest.approx(0.5 * (1 - np.exp(-0.1 * t)), abs=1e-12)


def test_time_response_oscillatory_and_repeated():
    t = np.linspace(0, 5, 51)
    assert time_response(tf([1], [1, 0, 1]), "impulse", t) == pytest.approx(np.sin(t), abs=1e-10)
    assert time_response(tf([1], [1, 2, 1]), "impulse", t) == pytest.approx(t * np.exp(-t), abs=1e-10)


def test_time_response_errors():
    with pytest.raises(ImproperTransferFunctionError):
        time_response(tf([1, 1], [1]), "impulse", [0.0])
    with pytest.raises(InputError):
        time_response(tf([1], [1, 1]), "ramp", [0.0])


def test_realization_matches_tf():
    ode = LinODE((2, 3, 1), (1, 1))
    A, B, C, D = realize(ode)
    s0 = 0.5 + 1j
    H = C @ np.linalg.solve(s0 * np.eye(2) - A, B) + D
    assert H == pytest.approx(tf([1], [2, 1])(s0))


def test_cross_validate_examples():
    arms = LinODE((F(1, 10), 1), (F(1, 20),))
    assert cross_validate(arms, step()).passed
    assert cross_validate(LinODE((2, 3, 1), (1,)), step()).passed
    with pytest.raises(UnsupportedInputError):
        cross_validate(LinODE((1, 1), (1,)), "impulse")


def test_cross_validate_delayed_and_oscillating_inputs():
    ode = LinODE((2, 3, 1), (1, 1))
    u = delay(F(1, 2), step()) + sin(2) * exp(F(-1, 2))
    res = cross_validate(ode, u, t_end=5.0)
    assert res.passed, res.max_abs_err


def test_simulate_ode_direct_feedthrough():
    # y' + y = u' + 2u -> 1 + 1/(s+1)
    traj = simulate_ode(LinODE((1, 1), (2, 1)), step(), 2.0, 1e-3)
    t = traj.times
    assert traj.states[:, 0] == pytest.approx(1 + (1 - np.exp(-t)), abs=1e-8)


def _model(**kw):
    return CompartmentModel(kA=0.1, kL=0.15, kTA=0.05, kTL=0.08, **kw)


def test_mass_conservation():
    traj = simulate_dialysis(_model(), (1.2, 3.0, 1.5), 10.0, 1e-3)
    total = traj.states.sum(axis=1)
    assert np.max(np.abs(total - total[0])) <= 1e-8


def test_constant_withdrawal():
    traj = simulate_dialysis(_model(ufr=0.02), (1.2, 3.0, 1.5), 10.0, 1e-3)
    slope = np.diff(traj.states.sum(axis=1)) / 1e-3
    assert np.max(np.abs(slope + 0.02)) <= 1e-6


def test_symmetry():
    m = CompartmentModel(kA=0.1, kL=0.1, kTA=0.05, kTL=0.05)
    traj = simulate_dialysis(m, (1.0, 2.0, 1.0), 5.0, 1e-2)
    assert np.array_equal(traj.column("VA"), traj.column("VL"))


def test_negative_volume_flag():
    traj = simulate_dialysis(_model(ufr=1.0), (0.1, 0.1, 0.1), 2.0, 1e-2)
    assert traj.negative_volume
    assert not simulate_dialysis(_model(), (1, 1, 1), 1.0, 0.1).negative_volume


def test_model_validation():
    with pytest.raises(InputError):
        CompartmentModel(kA=0, kL=1, kTA=1, kTL=1)
    with pytest.raises(InputError):
        simulate_dialysis(_model(), (1, 1), 1.0, 0.1)


def test_csv(tmp_path):
    traj = simulate_dialysis(_model(), (1, 1, 1), 0.2, 0.1)
    text = traj.to_csv(tmp_path / "out.csv")
    assert text.splitlines()[0] == "t,VA,VT,VL"
    assert len(text.splitlines()) == 4
    assert (tmp_path / "out.csv").read_text() == text
