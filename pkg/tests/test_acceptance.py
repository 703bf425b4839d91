"""The ten acceptance criteria, each printed as one PASS/FAIL line.

The checks themselves live in :mod:`bendmirror.acceptance` so the CLI can
run the same code; tolerances and time limits are enforced there.
"""

import pytest

from bendmirror.acceptance import CHECKS, run_check


@pytest.mark.parametrize("number", [k for k, _, _ in CHECKS], ids=[f"criterion_{k:02d}" for k, _, _ in CHECKS])
def test_criterion(number, capsys):
    result = run_check(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
