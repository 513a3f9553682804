"""The eleven acceptance criteria at full size and stated tolerances.

Each test prints one line ``criterion N [PASS|FAIL] ...``; run with ``-s`` to
see them inline (they also appear in the summary of failing tests).
"""

import os

import pytest

from sympfactor.acceptance import CRITERIA, SEEDED, run_criterion

SEED = int(os.environ.get("SYMPFACTOR_SEED", "0"))


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_criterion(number, SEED if number in SEEDED else 0)
    with capsys.disabled():
        print("\n" + result.line(), flush=True)
    assert result.ok, result.line()
    if result.budget is not None:
        assert result.seconds < result.budget, result.line()
