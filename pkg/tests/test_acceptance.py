"""Acceptance suite: one test per criterion, at the pinned tolerances.

Each test prints its pass/fail line (run pytest with -s or check the captured
output) and then asserts.  The same checks back the ``excl verify``
subcommand.
"""

import pytest

from excl import verify


@pytest.mark.parametrize("criterion", sorted(verify.ALL_CRITERIA))
def test_acceptance_criterion(criterion):
    result = verify.ALL_CRITERIA[criterion]()
    print(result.line())
    for detail in result.details:
        print("   ", detail)
    assert result.passed, result.summary
