"""Time-domain oracle: fixed-step RK4, residue-based responses and the
ODE-vs-transfer-function comparator.

The three-compartment dialysis simulator extends the arms/trunk exchange
equation with the mirrored legs/trunk exchange and closes the trunk
balance with the ultrafiltration withdrawal ``ufr(t)``:

    VA' = -kA VA + kTA VT
    VL' = -kL VL + kTL VT
    VT' =  kA VA + kL VL - (kTA + kTL) VT - ufr(t)

so that ``(VA + VT + VL)' = -ufr(t)``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import (DivergenceError, ImproperTransferFunctionError, InputError,
                     MathError, UnsupportedInputError)
from .laplace import Signal, laplace
from .odetf import LinODE, transfer_function
from .ratfunc import RatFunc, partial_fractions

__all__ = [
    "Trajectory",
    "CompartmentModel",
    "CrossValidation",
    "rk4",
    "time_response",
    "realize",
    "simulate_ode",
    "cross_validate",
    "simulate_dialysis",
]

IMAG_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), dim)
    labels: tuple = ()
    negative_volume: bool = False

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise InputError("times and states differ in length")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def column(self, name_or_index):
        if isinstance(name_or_index, str):
            name_or_index = self.labels.index(name_or_index)
        return self.states[:, name_or_index]

    def to_csv(self, path=None) -> str:
        """CSV with a ``t,<labels>`` header and 17 significant digits."""
        labels = self.labels or tuple(f"x{i}" for i in range(self.states.shape[1]))
        buf = io.StringIO()
        buf.write(",".join(("t",) + tuple(labels)) + "\n")
        for t, row in zip(self.times, self.states):
            buf.write(",".join(format(float(v), ".17g") for v in (t, *row)) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text


def rk4(f: Callable, x0, t_end: float, dt: float, t0: float = 0.0) -> Trajectory:
    """Classical fixed-step Runge-Kutta on ``x' = f(t, x)``.

    Takes ``round((t_end - t0)/dt)`` steps; raises DivergenceError as soon
    as the state stops being finite.
    """
    if not dt > 0:
        raise InputError("dt must be positive")
    if t_end - t0 < dt * (1 - 1e-12):
        raise InputError("t_end must be at least one step past t0")
    n = int(round((t_end - t0) / dt))
    x = np.array(x0, dtype=float).reshape(-1)
    times = t0 + dt * np.arange(n + 1)
    out = np.empty((n + 1, x.size))
    out[0] = x
    half = dt / 2
    # overflow is reported as DivergenceError below, not as a warning
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n):
            t = times[i]
            k1 = f(t, x)
            k2 = f(t + half, x + half * k1)
            k3 = f(t + half, x + half * k2)
            k4 = f(t + dt, x + dt * k3)
            x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise DivergenceError(f"state became non-finite at t = {times[i + 1]:g}",
                                      time=float(times[i + 1]))
            out[i + 1] = x
    return Trajectory(times, out)


def _impulse(r: RatFunc, t: np.ndarray) -> np.ndarray:
    if r.is_zero():
        return np.zeros_like(t)
    if not r.is_strictly_proper():
        raise ImproperTransferFunctionError(
            f"impulse response of {r} contains an impulse (not strictly proper)")
    pf = partial_fractions(r)
    h = np.zeros(t.shape, dtype=complex)
    for term in pf.terms:
        e = np.exp(term.pole * t)
        for j, res in enumerate(term.residues, start=1):
            h += res * t ** (j - 1) * e / math.factorial(j - 1)
    peak = max(1.0, float(np.max(np.abs(h.real), initial=0.0)))
    if np.max(np.abs(h.imag), initial=0.0) > IMAG_TOL * peak:
        raise MathError("time response has a non-negligible imaginary part")
    return h.real


def time_response(r: RatFunc, kind: str, t_grid) -> np.ndarray:
    """Impulse or step response by residues of the partial fractions."""
    t = np.asarray(t_grid, dtype=float)
    if kind == "impulse":
        return _impulse(r, t)
    if kind == "step":
        if not r.is_proper():
            raise ImproperTransferFunctionError(f"step response of improper {r}")
        return _impulse(r * RatFunc(1, (0, 1)), t)
    raise InputError(f"unknown response kind {kind!r}")


def realize(ode: LinODE):
    """Controllable canonical form ``(A, B, C, D)`` of the raw ODE."""
    a = [Fraction(c) / ode.out_coeffs[-1] for c in ode.out_coeffs]
    b = [Fraction(c) / ode.out_coeffs[-1] for c in ode.in_coeffs]
    n = ode.order
    if len(b) > n + 1:
        raise ImproperTransferFunctionError("input order exceeds output order")
    b = b + [Fraction(0)] * (n + 1 - len(b))
    D = b[n]
    A = np.zeros((n, n))
    if n:
        A[:-1, 1:] = np.eye(n - 1)
        A[-1, :] = [-float(c) for c in a[:n]]
    B = np.zeros(n)
    if n:
        B[-1] = 1.0
    C = np.array([float(b[i] - D * a[i]) for i in range(n)])
    return A, B, C, float(D)


def simulate_ode(ode: LinODE, u: Signal, t_end: float, dt: float) -> Trajectory:
    """Zero-state RK4 response of the ODE to the catalog input ``u``.

    Integration restarts at each input delay point so every step sees a
    smooth input; delays should be multiples of ``dt``.
    """
    A, B, C, D = realize(ode)
    n = A.shape[0]
    breaks = sorted({0.0, float(t_end)} | {float(T) for T in u.delays if 0 < T < t_end})
    times, ys = [], []
    x = np.zeros(n)
    for lo, hi in zip(breaks, breaks[1:]):
        piece = Signal(tuple(a for a in u.atoms if float(a.delay) <= lo))
        steps = int(round((hi - lo) / dt))
        if steps < 1:
            continue

        # RK4 only samples the input on the half-step grid
        u_half = piece(lo + (dt / 2) * np.arange(2 * steps + 1)).tolist()

        def f(t, state, lo=lo, u_half=u_half):
            return A @ state + B * u_half[int(round((t - lo) * 2 / dt))]

        if n:
            traj = rk4(f, x, lo + steps * dt, dt, t0=lo)
            seg_t, seg_x = traj.times, traj.states
            x = seg_x[-1]
        else:
            seg_t = lo + dt * np.arange(steps + 1)
            seg_x = np.zeros((steps + 1, 0))
        seg_y = seg_x @ C + D * piece(seg_t)
        if times:
            seg_t, seg_y = seg_t[1:], seg_y[1:]
        times.append(seg_t)
        ys.append(seg_y)
    t = np.concatenate(times)
    return Trajectory(t, np.concatenate(ys).reshape(-1, 1), ("y",))


@dataclass(frozen=True)
class CrossValidation:
    max_abs_err: float
    passed: bool


def _tf_route(h: RatFunc, u: Signal, t: np.ndarray) -> np.ndarray:
    y = np.zeros_like(t)
    for T, r in (laplace(u) * h).terms:
        shifted = t - float(T)
        live = shifted >= 0
        y[live] += _impulse(r, shifted[live])
    return y


def cross_validate(ode: LinODE, input, t_end: float = 10.0, dt: float = 1e-3,
                   tol: float = 1e-4) -> CrossValidation:
    """Compare the RK4 solution of ``ode`` with the residue inversion of
    ``H(s) * U(s)`` on the RK4 grid."""
    if isinstance(input, str):
        raise UnsupportedInputError(
            f"input {input!r} has no time-domain form for the RK4 route")
    if not isinstance(input, Signal):
        raise UnsupportedInputError(f"unsupported input {input!r}")
    traj = simulate_ode(ode, input, t_end, dt)
    y_tf = _tf_route(transfer_function(ode), input, traj.times)
    err = float(np.max(np.abs(traj.states[:, 0] - y_tf)))
    return CrossValidation(err, err <= tol)


def _positive(name, value) -> float:
    value = float(value)
    if not value > 0:
        raise InputError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class CompartmentModel:
    kA: float
    kL: float
    kTA: float
    kTL: float
    ufr: Callable | float = 0.0

    def __post_init__(self):
        for name in ("kA", "kL", "kTA", "kTL"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    def withdrawal(self, t: float) -> float:
        return float(self.ufr(t)) if callable(self.ufr) else float(self.ufr)

    def rhs(self, t, v):
        va, vt, vl = v
        return np.array([
            -self.kA * va + self.kTA * vt,
            self.kA * va + self.kL * vl - (self.kTA + self.kTL) * vt - self.withdrawal(t),
            -self.kL * vl + self.kTL * vt,
        ])


def simulate_dialysis(m: CompartmentModel, v0, t_end: float, dt: float) -> Trajectory:
    """Integrate the arms/trunk/legs volumes; states are ``(VA, VT, VL)``."""
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (3,) or np.any(v0 < 0):
        raise InputError("v0 must be three non-negative volumes (VA, VT, VL)")
    traj = rk4(m.rhs, v0, t_end, dt)
    return Trajectory(traj.times, traj.states, ("VA", "VT", "VL"),
                      negative_volume=bool(np.any(traj.states < 0)))
