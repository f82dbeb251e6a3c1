"""Acceptance criteria, one test each, with their runtime budgets.

Each test prints a single ``PASS``/``FAIL`` line.  Run standalone with
``python3 tests/test_acceptance.py`` for just those lines.
"""

import io
import json
import sys
import time
from importlib import resources

import pytest

from blocktf import cli, verification as v
from blocktf.verification import CheckResult

_LINES = []


def _report(number, name, passed, elapsed, budget, detail):
    within = budget is None or elapsed < budget
    status = "PASS" if passed and within else "FAIL"
    limit = f" (budget {budget:g} s)" if budget is not None else ""
    line = f"[{status}] {number:>2}. {name}: {elapsed:.2f} s{limit} {json.dumps(detail, sort_keys=True)}"
    _LINES.append(line)
    return line, passed and within


def _run(number, name, fn, budget):
    start = time.perf_counter()
    result = fn()
    elapsed = time.perf_counter() - start
    return _report(number, name, result.passed, elapsed, budget, result.detail)


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return cli.run(list(argv), out=out, err=err), out.getvalue()


def _cli_determinism():
    _, first = _cli("verify", "--json")
    _, second = _cli("verify", "--json")
    models = resources.files("blocktf") / "models"
    codes = {
        "ok": _cli("reduce", str(models / "arms_trunk.bdg"))[0].exit_code,
        "usage": _cli("reduce", "missing.bdg")[0].exit_code,
        "math": _cli("reduce", str(models / "bare_pickoff.bdg"))[0].exit_code,
    }
    saved = v.run_all
    v.run_all = lambda: [CheckResult("forced_failure", False)]
    try:
        codes["verification"] = _cli("verify")[0].exit_code
    finally:
        v.run_all = saved
    expected = {"ok": 0, "usage": 1, "math": 2, "verification": 3}
    identical = first == second and json.loads(first)["exit_code"] == 0
    return CheckResult("cli_determinism", identical and codes == expected,
                       {"byte_identical": first == second, "exit_codes": codes})


CRITERIA = [
    (1, "theorem reproduction", v.check_theorem_reproduction, 1.0),
    (2, "block-calculus identities", v.check_block_identities, 5.0),
    (3, "feedback convergence", v.check_feedback_convergence, 5.0),
    (4, "Laplace oracle agreement", v.check_laplace_oracle, 30.0),
    (5, "differentiation rule", v.check_differentiation_rule, 5.0),
    (6, "stability cross-check", v.check_routh_cross, 5.0),
    (7, "time/frequency consistency", v.check_time_frequency, 60.0),
    (8, "mass conservation", v.check_mass_conservation, None),
    (9, "DSL round-trip and golden files", v.check_dsl_roundtrip, None),
    (10, "CLI determinism and exit codes", _cli_determinism, None),
]


@pytest.mark.parametrize("number,name,fn,budget", CRITERIA,
                         ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, name, fn, budget, capsys):
    line, ok = _run(number, name, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for number, name, fn, budget in CRITERIA:
        line, ok = _run(number, name, fn, budget)
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
