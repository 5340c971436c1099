"""Acceptance suite: one PASS/FAIL line per criterion, printed live.

Failures stay failures; see the check lines above each verdict for the
measured numbers.
"""
import pytest

from dimred.acceptance import CRITERIA, run_criterion


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print()
        for line in result.lines():
            print(line)
    failed = [f"{c.name}: {c.detail}" for c in result.checks if c.counts and not c.passed]
    assert result.passed, "; ".join(failed)
