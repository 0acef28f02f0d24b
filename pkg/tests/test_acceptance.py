"""The acceptance gate: every criterion runs at its stated tolerance (exact)
and prints one pass/fail line.  Run with -s to see the lines as they finish."""

import pytest

from stratakit.acceptance import ALL_CRITERIA, DEFAULT_SEED


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, capsys):
    name, ok, detail = ALL_CRITERIA[number - 1](DEFAULT_SEED)
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} -- {detail}"
    with capsys.disabled():
        print(line)
    assert ok, line
