"""Acceptance checks, shared by ``blocktf verify`` and the test suite.

Every check is deterministic for a given seed and returns a
:class:`CheckResult` whose ``detail`` holds only reproducible values (no
timings), so repeated ``verify --json`` runs are byte-identical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from . import generators as gen
from .blockdiag import (Feedback, Leaf, Series, Summation, feedback_truncated,
                        reduce)
from .dialysis import ArmsTrunkParams, build_arms_trunk_ode, theorem_checks
from .dsl import parse, print_expr
from .errors import AlgebraicLoopError, DegenerateRouthError, PoleError
from .laplace import exp_order_witness, laplace, numeric_lt, step
from .ratfunc import Poly, RatFunc
from .simul import CompartmentModel, cross_validate, simulate_dialysis
from .stability import cross_check, routh_hurwitz

__all__ = ["CheckResult", "CHECKS", "run_all", "model_names", "read_model",
           "golden_text"]

SEED = 20240601
# float round-off allowance on top of exact truncation bounds
ROUNDOFF = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "detail", {k: _plain(v) for k, v in self.detail.items()})

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def check_theorem_reproduction(seed=SEED, count=100) -> CheckResult:
    rng = random.Random(seed)
    agree = unit = 0
    for _ in range(count):
        p = ArmsTrunkParams(Fraction(rng.randint(1, 200), rng.randint(1, 100)),
                            Fraction(rng.randint(1, 200), rng.randint(1, 100)))
        report = theorem_checks(p)
        agree += report.routes_agree
        unit += report.unit_gain_conclusion
    return CheckResult("theorem_reproduction", agree == count and unit == count,
                       {"pairs": count, "routes_agree": agree,
                        "unit_gain_conclusion": unit})


def _shuffled(e, rng):
    if isinstance(e, Series):
        kids = [_shuffled(c, rng) for c in e.children]
        rng.shuffle(kids)
        return Series(tuple(kids))
    if isinstance(e, Summation):
        kids = [_shuffled(c, rng) for c in e.children]
        rng.shuffle(kids)
        return Summation(tuple(kids))
    if isinstance(e, Feedback):
        return Feedback(_shuffled(e.forward, rng), _shuffled(e.back, rng))
    return e


def _flattened(e):
    if isinstance(e, Series):
        kids = []
        for c in map(_flattened, e.children):
            kids.extend(c.children if isinstance(c, Series) else (c,))
        return Series(tuple(kids))
    if isinstance(e, Summation):
        return Summation(tuple(map(_flattened, e.children)))
    if isinstance(e, Feedback):
        return Feedback(_flattened(e.forward), _flattened(e.back))
    return e


def _regrouped(e):
    """Nest the first two children of every series: [a,b,c] -> [[a,b],c]."""
    if isinstance(e, Series):
        kids = tuple(map(_regrouped, e.children))
        if len(kids) >= 2:
            kids = (Series(kids[:2]),) + kids[2:]
        return Series(kids)
    if isinstance(e, Summation):
        return Summation(tuple(map(_regrouped, e.children)))
    if isinstance(e, Feedback):
        return Feedback(_regrouped(e.forward), _regrouped(e.back))
    return e


def check_block_identities(seed=SEED, count=500) -> CheckResult:
    rng = random.Random(seed)
    failures = loops = done = 0
    while done < count:
        tree = gen.block_tree(rng, depth=4, max_degree=3)
        try:
            ref = reduce(tree)
        except AlgebraicLoopError:
            loops += 1
            continue
        done += 1
        variants = (_shuffled(tree, rng), _flattened(tree), _regrouped(tree))
        failures += any(reduce(v) != ref for v in variants)
    return CheckResult("block_identities", failures == 0,
                       {"trees": count, "failures": failures,
                        "resampled_algebraic_loops": loops})


def _scaled_to(r: RatFunc, value: complex, target: float) -> RatFunc:
    return r * Fraction(target / abs(value)).limit_denominator(10 ** 9)


def check_feedback_convergence(seed=SEED, count=100, N=20) -> CheckResult:
    """Truncated branch sums vs the closed loop.

    ``alpha`` is scaled so ``|alpha(s0)|`` lies in [0.1, 1] and ``beta`` so
    the loop gain lies in [0.05, 0.9].
    """
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    worst_ratio = 0.0
    worst_half = 0.0
    failures = 0
    done = 0
    while done < count:
        alpha, beta = gen.ratfunc(rng), gen.ratfunc(rng)
        s0 = complex(nrng.uniform(-2, 2), nrng.uniform(-3, 3))
        try:
            alpha = _scaled_to(alpha, alpha(s0), nrng.uniform(0.1, 1.0))
            a = alpha(s0)
            beta = _scaled_to(beta, a * beta(s0), nrng.uniform(0.05, 0.9))
            closed = reduce(Feedback(Leaf(alpha), Leaf(beta)))(s0)
        except (PoleError, AlgebraicLoopError, ZeroDivisionError):
            continue
        loop = abs(a * beta(s0))
        if loop > 0.9:
            continue
        done += 1
        diff = abs(feedback_truncated(alpha, beta, N, s0) - closed)
        bound = loop ** (N + 1) * abs(a) / (1 - loop)
        allowance = ROUNDOFF * (abs(closed) + abs(a) / (1 - loop))
        if diff > bound + allowance:
            failures += 1
        worst_ratio = max(worst_ratio, diff / (bound + allowance))
        if loop <= 0.5:
            worst_half = max(worst_half, diff)
            failures += diff >= 1e-6
    return CheckResult("feedback_convergence", failures == 0,
                       {"pairs": count, "N": N, "failures": failures,
                        "max_err_over_bound": worst_ratio,
                        "max_abs_err_loop_le_half": worst_half})


def check_laplace_oracle(seed=SEED, count=100, points=5, steps=20000,
                         rtol=1e-5) -> CheckResult:
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    worst = 0.0
    failures = 0
    for _ in range(count):
        g = gen.signal(rng)
        w = exp_order_witness(g)
        G = laplace(g)
        for _ in range(points):
            s0 = complex(w.a + nrng.uniform(0.5, 3.0), nrng.uniform(-5, 5))
            exact = G(s0)
            approx = numeric_lt(g, s0, steps=steps)
            rel = abs(exact - approx) / abs(exact)
            worst = max(worst, rel)
            failures += rel > rtol
    return CheckResult("laplace_oracle", failures == 0,
                       {"signals": count, "points": points, "rtol": rtol,
                        "failures": failures, "max_rel_err": worst})


def check_differentiation_rule(seed=SEED, count=50, rtol=1e-8) -> CheckResult:
    """L[g'](s0) == s0 L[g](s0) - g(0+), error relative to the magnitudes
    of the compared terms."""
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    worst = 0.0
    failures = 0
    for _ in range(count):
        g = gen.signal(rng, delays=False)
        s0 = complex(exp_order_witness(g).a + nrng.uniform(0.5, 3.0),
                     nrng.uniform(-5, 5))
        lhs = laplace(g.derivative())(s0)
        sG = s0 * laplace(g)(s0)
        g0 = float(g.initial_value())
        rhs = sG - g0
        scale = max(abs(lhs), abs(sG), abs(g0))
        rel = abs(lhs - rhs) / scale if scale else 0.0
        worst = max(worst, rel)
        failures += rel > rtol
    return CheckResult("differentiation_rule", failures == 0,
                       {"signals": count, "rtol": rtol, "failures": failures,
                        "max_rel_err": worst})


def check_routh_cross(seed=SEED, count=200) -> CheckResult:
    rng = random.Random(seed)
    agree = degenerate = done = 0
    while done < count:
        p = Poly([Fraction(rng.randint(-50, 50), 10)
                  for _ in range(rng.randint(2, 7))])
        if p.degree < 1:
            continue
        if routh_hurwitz(p).degenerate:
            degenerate += 1
            continue
        try:
            agree += cross_check(p)
        except DegenerateRouthError:  # pragma: no cover - filtered above
            continue
        done += 1
    return CheckResult("routh_cross_check", agree == count,
                       {"polynomials": count, "agree": agree,
                        "skipped_degenerate": degenerate})


def check_time_frequency(seed=SEED, count=20, t_end=10.0, dt=1e-3,
                         tol=1e-4) -> CheckResult:
    rng = random.Random(seed)
    dialysis_ode = build_arms_trunk_ode(ArmsTrunkParams(Fraction(1, 10), Fraction(1, 20)))
    cases = [dialysis_ode] + [gen.stable_ode(rng) for _ in range(count)]
    errors = [cross_validate(ode, step(), t_end, dt, tol).max_abs_err for ode in cases]
    failures = sum(e > tol for e in errors)
    return CheckResult("time_frequency_consistency", failures == 0,
                       {"systems": len(cases), "tol": tol, "failures": failures,
                        "dialysis_max_abs_err": errors[0],
                        "max_abs_err": max(errors)})


def check_mass_conservation(t_end=10.0, dt=1e-3, u0=0.02) -> CheckResult:
    v0 = (1.2, 3.0, 1.5)
    params = dict(kA=0.1, kL=0.15, kTA=0.05, kTL=0.08)
    closed = simulate_dialysis(CompartmentModel(**params), v0, t_end, dt)
    total = closed.states.sum(axis=1)
    drift = float(np.max(np.abs(total - total[0])))
    drained = simulate_dialysis(CompartmentModel(**params, ufr=u0), v0, t_end, dt)
    slope = np.diff(drained.states.sum(axis=1)) / dt
    slope_err = float(np.max(np.abs(slope + u0)))
    return CheckResult("mass_conservation", drift <= 1e-8 and slope_err <= 1e-6,
                       {"conservation_drift": drift, "ufr": u0,
                        "slope_max_abs_err": slope_err})


def model_names() -> list:
    pkg = resources.files("blocktf") / "models"
    return sorted(p.name[:-4] for p in pkg.iterdir() if p.name.endswith(".bdg"))


def read_model(name: str) -> str:
    return (resources.files("blocktf") / "models" / f"{name}.bdg").read_text("utf-8")


def golden_text(source: str) -> str:
    """Canonical text of a model file: its printed expression and reduction."""
    e = parse(source)
    try:
        tf = str(reduce(e))
    except Exception as exc:  # golden files record the failure kind as well
        tf = f"error: {type(exc).__name__}"
    return f"{print_expr(e)}\n{tf}\n"


def check_dsl_roundtrip(seed=SEED, count=500) -> CheckResult:
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        tree = gen.block_tree(rng, depth=5, max_degree=3, max_leaves=12, pickoff=True)
        failures += parse(print_expr(tree)) != tree
    golden_failures = []
    models = model_names()
    for name in models:
        golden = (resources.files("blocktf") / "models" / f"{name}.golden").read_bytes()
        if golden_text(read_model(name)).encode("utf-8") != golden:
            golden_failures.append(name)
    return CheckResult("dsl_roundtrip", failures == 0 and not golden_failures,
                       {"trees": count, "failures": failures,
                        "golden_models": models, "golden_failures": golden_failures})


CHECKS = [
    ("theorem_reproduction", check_theorem_reproduction),
    ("block_identities", check_block_identities),
    ("feedback_convergence", check_feedback_convergence),
    ("laplace_oracle", check_laplace_oracle),
    ("differentiation_rule", check_differentiation_rule),
    ("routh_cross_check", check_routh_cross),
    ("time_frequency_consistency", check_time_frequency),
    ("mass_conservation", check_mass_conservation),
    ("dsl_roundtrip", check_dsl_roundtrip),
]


def run_all() -> list:
    return [fn() for _, fn in CHECKS]
