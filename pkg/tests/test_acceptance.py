"""Release gate: every criterion must pass, one line of output each."""

from fractions import Fraction as F

import pytest

from snackjack import acceptance

NAMES = [name for name, _ in acceptance.CRITERIA]


@pytest.mark.parametrize("name", NAMES)
def test_criterion(name, capsys):
    result = acceptance.run_criterion(name)
    with capsys.disabled():
        print(f"\n{result.line()}")
    assert result.passed, result.line()


def test_gate_catches_a_mutated_constant(monkeypatch):
    monkeypatch.setattr(acceptance, "CLASSICAL_EXPECTATION", F(1, 2))
    result = acceptance.run_criterion("overall_expectations_exact")
    assert not result.passed
    assert result.name == "overall_expectations_exact"
    assert result.line().startswith("FAIL overall_expectations_exact")
