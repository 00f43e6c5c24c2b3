"""Acceptance gate: every criterion runs at its pinned tolerance.

One pass/fail line per criterion is printed (visible with ``pytest -s`` or on
failure); the same registry backs ``nleig verify``.
"""

import pytest

from nleig import verify


@pytest.mark.parametrize("cid", [num for num, _, _ in verify.CRITERIA])
def test_criterion(cid):
    result = verify.run_criterion(cid)
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {result.cid:2d} [{result.name}]: {status} - {result.detail}")
    assert result.passed, f"criterion {result.cid} [{result.name}]: {result.detail}"
