"""Acceptance criteria 1-10, one pass/fail line per criterion.

The lines are printed as each criterion finishes and again in the
terminal summary.  Every failing check is listed in the assertion message.
"""
import pytest

from coxcohom.acceptance import CRITERIA

ACCEPTANCE_LINES = {}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    checks = CRITERIA[k]()
    failed = [c for c in checks if not c.passed]
    status = "FAIL" if failed or not checks else "PASS"
    first = checks[0].name if checks else "no checks produced"
    line = f"criterion {k}: {status} ({len(checks) - len(failed)}/{len(checks)} checks; {first})"
    ACCEPTANCE_LINES[k] = line
    with capsys.disabled():
        print(f"\n{line}")
    assert checks and not failed, "\n".join(c.line() for c in failed)
