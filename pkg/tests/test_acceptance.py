from __future__ import annotations

import pytest

from ndep.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion-{c[0]:02d}" for c in CRITERIA])
def test_acceptance_criterion(number, capsys):
    res = run_criterion(number, seed=0)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.checks_ok, res.details
    assert res.seconds < res.limit, f"{res.seconds:.2f}s exceeds the {res.limit:.0f}s limit"
