"""The fourteen acceptance criteria, one test each.

Run ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion.
"""

import pytest

from hyperfour.verify import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=lambda c: "criterion_%02d" % c.number)
def test_criterion(check):
    result = check()
    print("\n" + result.line())
    failed = [p for p in result.parts if not p[1] < p[2]]
    assert result.passed, "residuals over tolerance: %r" % (failed,)
